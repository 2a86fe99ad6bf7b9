from app.commands.bound import compute_results
from app.models.keyrate import DistillationInput
from app.models.report import KeyRateRow
from app.models.run_config import RunConfig
from app.services.keyrate_service import KeyRateService

FIELDS = list(KeyRateRow.model_fields)


def _row(label: str, data: DistillationInput, key_fraction: float) -> KeyRateRow:
    costs = KeyRateService.distillation_costs(data)
    return KeyRateRow(
        source=label,
        t_b=data.t_b,
        t_p=data.t_p,
        delta=data.delta,
        n_r=data.n_r,
        ec_bits=costs.ec_bits,
        pa_bits=costs.pa_bits,
        key_fraction=key_fraction,
        key_bits=data.n_r * key_fraction,
    )


def run(config: RunConfig) -> tuple[list[str], list[KeyRateRow]]:
    """Key fraction for a given delta, or for both sources from the last requested bound."""
    section = config.keyrate
    if section.delta is not None:
        data = DistillationInput(t_b=section.t_b, t_p=section.t_p, delta=section.delta, n_r=section.n_r)
        return FIELDS, [_row("given", data, KeyRateService.key_fraction(data))]

    bound = compute_results(config)[-1]
    fractions = KeyRateService.source_key_fractions(section.t_b, section.t_p, bound)
    signal = DistillationInput(t_b=section.t_b, t_p=section.t_p, delta=bound.delta, n_r=section.n_r)
    rows = [_row("signal", signal, fractions.signal)]
    if fractions.decoy is not None:
        decoy = signal.model_copy(update={"delta": bound.delta_prime})
        rows.append(_row("decoy", decoy, fractions.decoy))
    return FIELDS, rows
