"""Upper bounds on the tagged fraction Delta from observed counting rates.

Source A (intensity mu) and source A_mu' are written over the same vacuum,
single-photon and rho_c states:

    P0 s0  + P1 s1  + c s_c            = S_mu
    P0' s0 + P1' s1 + c' s_c + d s_d   = S_mu'      (c' = c mu'^2 e^-mu' / mu^2 e^-mu)

Every method below bounds s_c from above using s1, s_d >= 0 and reports
Delta = c s_c / S_mu.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.optimize import brentq

from app.config import settings
from app.exceptions import InvalidPair, NegativeBound, NoSolution, ZeroRate
from app.models.bounds import (
    BoundMethod,
    BoundResult,
    EpsilonCaps,
    EpsilonCorner,
    FluctuationParams,
)
from app.models.channel import ObservedRates
from app.services.photon_source import PhotonSourceService

logger = logging.getLogger(__name__)


@dataclass
class _Solution:
    delta: float
    s1: float
    sc: float
    r1: float = 0.0
    rc: float = 0.0
    iterations: int = 0
    failed_closed: bool = False


class _FailClosed(Exception):
    pass


@dataclass
class _ConstraintSystem:
    """The two source equations with rate gaps r and class-weight errors eps.

    Decoy-side rates are the signal-side ones shrunk by (1 - r): s1' = (1 - r1) s1,
    s_c' = (1 - rc) s_c, s0' = (1 - r0) s0, the direction that can only loosen
    the bound on s_c.
    """
    mu: float
    mup: float
    rates: ObservedRates
    params: Optional[FluctuationParams] = None
    corner: EpsilonCorner = field(default_factory=EpsilonCorner)

    def __post_init__(self):
        p0, p1, c = PhotonSourceService.class_weights(self.mu)
        scale = PhotonSourceService.rho_c_scale(self.mu, self.mup)
        e = self.corner
        self.p0 = p0 * (1 + e.eps0)
        self.p1 = p1 * (1 + e.eps1)
        self.c = c * (1 + e.epsc)
        self.p0p = math.exp(-self.mup) * (1 + e.eps0p)
        self.p1p = self.mup * math.exp(-self.mup) * (1 + e.eps1p)
        self.cp = c * scale * (1 + e.epscp)
        self.s0 = self.rates.S0
        self.r0 = self.params.r0 if self.params else 0.0

    def _sub_source(self, weight: float, weight_p: float) -> float:
        """Expected pulses of one state in whichever source holds fewer of them."""
        return max(1.0, min(weight * self.params.N_mu, weight_p * self.params.N_mup))

    def gaps(self, s1: float, sc: float) -> tuple[float, float]:
        if self.params is None:
            return 0.0, 0.0
        k = self.params.coefficient
        # a zero rate carries no statistical information; its gap is unbounded
        r1 = BoundService.relative_fluctuation(s1, self._sub_source(self.p1, self.p1p), k) if s1 > 0 else math.inf
        rc = BoundService.relative_fluctuation(sc, self._sub_source(self.c, self.cp), k) if sc > 0 else math.inf
        return r1, rc

    def solve(self, r1: float, rc: float) -> _Solution:
        S, Sp = self.rates.S_mu, self.rates.S_mup
        a = self.p1p * max(0.0, 1 - r1) / self.p1
        slope = self.cp * max(0.0, 1 - rc) - a * self.c
        if slope <= 0:
            raise _FailClosed("decoy constraint no longer limits s_c")

        numerator = Sp - self.p0p * (1 - self.r0) * self.s0 - a * (S - self.p0 * self.s0)
        if numerator < 0:
            raise _FailClosed(
                f"S_mu'={Sp:.6g} sits below the vacuum + single-photon floor implied by S_mu={S:.6g} at r1={r1:.3g}"
            )
        sc = numerator / slope
        s1 = (S - self.p0 * self.s0 - self.c * sc) / self.p1
        if s1 <= 0:
            raise _FailClosed("no single-photon rate is left for source A")
        return _Solution(delta=self.c * sc / S, s1=s1, sc=sc, r1=r1, rc=rc)

    def at_delta(self, delta: float) -> float:
        """Delta the constraints allow when the rate gaps are evaluated at delta."""
        S = self.rates.S_mu
        sc = delta * S / self.c
        s1 = (S - self.p0 * self.s0 - self.c * sc) / self.p1
        if s1 <= 0:
            return -1.0
        try:
            return self.solve(*self.gaps(s1, sc)).delta
        except _FailClosed:
            return 2.0

    def physical_ceiling(self) -> float:
        """Delta at which s1 reaches zero."""
        S = self.rates.S_mu
        return (S - self.p0 * self.s0) / S

    def starting_gaps(self) -> tuple[float, float]:
        """Smallest gaps any consistent point can have: r1 at the largest s1, rc = 0."""
        if self.params is None:
            return 0.0, 0.0
        s1_max = (self.rates.S_mu - self.p0 * self.s0) / self.p1
        if s1_max <= 0:
            raise _FailClosed("vacuum counts alone exceed S_mu")
        r1, _ = self.gaps(s1_max, 0.0)
        return r1, 0.0

    def _closed(self) -> _Solution:
        return _Solution(delta=1.0, s1=0.0, sc=self.rates.S_mu / self.c, failed_closed=True)

    def fixed_point(self) -> _Solution:
        try:
            current = self.solve(*self.starting_gaps())
            if self.params is None:
                return current
            for iteration in range(1, settings.max_iterations + 1):
                following = self.solve(*self.gaps(current.s1, current.sc))
                following.iterations = iteration
                logger.debug(
                    "iteration %d: delta=%.9f r1=%.6g rc=%.6g",
                    iteration, following.delta, following.r1, following.rc,
                )
                if abs(following.delta - current.delta) < settings.fixed_point_tolerance:
                    return following
                current = following
        except _FailClosed as reason:
            logger.warning("mu=%s mu'=%s: failing closed (%s)", self.mu, self.mup, reason)
            return self._closed()

        logger.info("fixed point did not settle after %d iterations; bisecting", settings.max_iterations)
        return self._bisect()

    def _bisect(self) -> _Solution:
        hi = self.physical_ceiling() * (1 - 1e-12)

        def excess(delta: float) -> float:
            return self.at_delta(delta) - delta

        # at delta = 0 the rc gap is unbounded, so the excess there is always positive
        if excess(hi) >= 0:
            return self._closed()
        try:
            delta = brentq(excess, 0.0, hi, xtol=settings.fixed_point_tolerance / 10)
        except ValueError as exc:
            raise NoSolution(f"feasibility bracket collapsed: {exc}") from exc

        S = self.rates.S_mu
        sc = delta * S / self.c
        s1 = (S - self.p0 * self.s0 - self.c * sc) / self.p1
        r1, rc = self.gaps(s1, sc)
        return _Solution(delta=delta, s1=s1, sc=sc, r1=r1, rc=rc, iterations=settings.max_iterations)


class BoundService:
    @staticmethod
    def _require(mu: float, mup: float, rates: ObservedRates) -> None:
        if not PhotonSourceService.validate_pair(mu, mup):
            raise InvalidPair(f"need mu' > mu > 0 and mu' e^-mu' > mu e^-mu, got mu={mu}, mu'={mup}")
        if rates.S_mu <= 0:
            raise ZeroRate("S_mu is zero; no counts from source A to bound")

    @staticmethod
    def _report(
        method: BoundMethod,
        mu: float,
        mup: float,
        rates: ObservedRates,
        raw_delta: float,
        weights: tuple[float, float, float] | None = None,
        **extra,
    ) -> BoundResult:
        """Clamp to [0, 1] and derive s_c, s1 and Delta' from the reported Delta."""
        p0, p1, c = weights or PhotonSourceService.class_weights(mu)
        delta = min(max(raw_delta, 0.0), 1.0)
        sc_upper = delta * rates.S_mu / c
        s1_lower = max(0.0, (rates.S_mu - p0 * rates.S0 - c * sc_upper) / p1)

        delta_prime = None
        if rates.S_mup > 0:
            delta_prime = BoundService.delta_prime(mu, mup, delta, rates)
        return BoundResult(
            method=method, mu=mu, mu_prime=mup, delta=delta, delta_prime=delta_prime,
            s1_lower=s1_lower, sc_upper=sc_upper, **extra,
        )

    @staticmethod
    def hwang_normal_limit(mu: float, mup: float) -> float:
        """Hwang's bound when S_mu'/S_mu = mu'/mu."""
        return mu * math.exp(-mu) / (mup * math.exp(-mup))

    @staticmethod
    def asymptotic_normal_limit(mu: float, mup: float) -> float:
        """Three-intensity bound when S_mu'/S_mu = mu'/mu and s0 = 0; tends to mu as mu' -> mu."""
        return mu * math.expm1(mup - mu) / (mup - mu)

    @staticmethod
    def hwang_delta(mu: float, mup: float, rates: ObservedRates) -> BoundResult:
        BoundService._require(mu, mup, rates)
        scale = PhotonSourceService.rho_c_scale(mu, mup)
        raw = rates.S_mup / (scale * rates.S_mu)
        return BoundService._report(BoundMethod.HWANG, mu, mup, rates, raw)

    @staticmethod
    def crude_sc_upper(mu: float, mup: float, rates: ObservedRates) -> float:
        """s_c from the decoy equation alone with s1 = s_d = 0."""
        BoundService._require(mu, mup, rates)
        c = PhotonSourceService.multi_photon_weight(mu)
        scale = PhotonSourceService.rho_c_scale(mu, mup)
        return (rates.S_mup - math.exp(-mup) * rates.S0) / (scale * c)

    @staticmethod
    def crude_delta(mu: float, mup: float, rates: ObservedRates) -> BoundResult:
        sc = BoundService.crude_sc_upper(mu, mup, rates)
        if sc < 0:
            raise NegativeBound(f"S_mu'={rates.S_mup:.6g} is below its own vacuum contribution")
        raw = PhotonSourceService.multi_photon_weight(mu) * sc / rates.S_mu
        return BoundService._report(BoundMethod.CRUDE, mu, mup, rates, raw)

    @staticmethod
    def asymptotic_delta(mu: float, mup: float, rates: ObservedRates) -> BoundResult:
        BoundService._require(mu, mup, rates)
        S, Sp, s0 = rates.S_mu, rates.S_mup, rates.S0
        ratio = mu * math.exp(-mu) * Sp / (mup * math.exp(-mup) * S)
        raw = mu / (mup - mu) * (ratio - 1) + mu * math.exp(-mu) * s0 / (mup * S)
        if raw < 0:
            raise NegativeBound(
                f"delta={raw:.6g} < 0: S_mu'/S_mu={Sp / S:.6g} is below the vacuum + single-photon floor"
            )
        return BoundService._report(BoundMethod.ASYMPTOTIC_3, mu, mup, rates, raw)

    @staticmethod
    def delta_prime(mu: float, mup: float, delta: float, rates: ObservedRates) -> float:
        """Upper bound on the tagged fraction of source A_mu' given Delta for source A."""
        if not 0 <= delta <= 1:
            raise ValueError(f"delta must lie in [0, 1], got {delta}")
        if rates.S_mu <= 0 or rates.S_mup <= 0:
            raise ZeroRate("delta' needs nonzero S_mu and S_mu'")
        s0 = rates.S0
        untagged = (1 - delta - math.exp(-mu) * s0 / rates.S_mu) * math.exp(mu - mup)
        value = 1 - untagged - math.exp(-mup) * s0 / rates.S_mup
        return min(max(value, 0.0), 1.0)

    @staticmethod
    def relative_fluctuation(s: float, N0: float, coefficient: float | None = None) -> float:
        if coefficient is None:
            coefficient = settings.confidence_coefficient
        if s <= 0:
            raise ZeroRate("relative fluctuation of a zero counting rate")
        if N0 < 1:
            raise ValueError(f"sub-source size must be >= 1, got {N0}")
        return coefficient * math.sqrt(1.0 / (s * N0))

    @staticmethod
    def violation_probability(delta_abs: float, s: float, N0: float) -> float:
        """Chance that two random halves of N0 copies differ in rate by more than delta_abs."""
        if s <= 0:
            raise ZeroRate("violation probability of a zero counting rate")
        return math.exp(-(delta_abs ** 2) * N0 / (4 * s))

    @staticmethod
    def _confidence_note(params: FluctuationParams) -> str:
        # delta = r s with r = k / sqrt(s N0) gives delta^2 N0 / s = k^2 for every state
        k = params.coefficient
        p = BoundService.violation_probability(k, 1.0, 1.0)
        return f"each rate gap stays within {k:g}/sqrt(s N0) except with probability < {p:.3e} (k^2 = {k * k:g})"

    @staticmethod
    def solve_corner(
        mu: float,
        mup: float,
        rates: ObservedRates,
        params: FluctuationParams,
        corner: EpsilonCorner | None = None,
    ) -> BoundResult:
        BoundService._require(mu, mup, rates)
        corner = corner or EpsilonCorner()
        system = _ConstraintSystem(mu, mup, rates, params, corner)
        solution = system.fixed_point()
        method = BoundMethod.FLUCTUATION if corner.is_zero else BoundMethod.OPERATIONAL
        return BoundService._report(
            method, mu, mup, rates, solution.delta,
            weights=(system.p0, system.p1, system.c),
            confidence_note=BoundService._confidence_note(params),
            r1=solution.r1, rc=solution.rc, iterations=solution.iterations,
            failed_closed=solution.failed_closed,
            worst_corner=None if corner.is_zero else corner,
        )

    @staticmethod
    def fluctuation_delta(
        mu: float, mup: float, rates: ObservedRates, params: FluctuationParams
    ) -> BoundResult:
        return BoundService.solve_corner(mu, mup, rates, params)

    @staticmethod
    def corners(caps: EpsilonCaps) -> list[EpsilonCorner]:
        """Every sign assignment of the caps, duplicates from zero caps removed."""
        axes = [sorted({-cap, cap}) for cap in caps.as_tuple()]
        return [
            EpsilonCorner(eps0=e0, eps1=e1, epsc=ec, eps0p=e0p, eps1p=e1p, epscp=ecp)
            for e0, e1, ec, e0p, e1p, ecp in itertools.product(*axes)
        ]

    @staticmethod
    def operational_error_delta(
        mu: float,
        mup: float,
        rates: ObservedRates,
        params: FluctuationParams,
        eps_caps: EpsilonCaps,
    ) -> BoundResult:
        """Worst case over the corners of the eps box, each solved with rate gaps."""
        baseline = BoundService.fluctuation_delta(mu, mup, rates, params)

        worst: BoundResult | None = None
        min_s1 = math.inf
        for corner in BoundService.corners(eps_caps):
            result = BoundService.solve_corner(mu, mup, rates, params, corner)
            logger.debug("corner %s: delta=%.6f s1=%.6g", corner.model_dump(), result.delta, result.s1_lower)
            min_s1 = min(min_s1, result.s1_lower)
            if worst is None or result.delta > worst.delta:
                worst = result

        ratio = min_s1 / baseline.s1_lower if baseline.s1_lower > 0 else None
        return worst.model_copy(update={
            "method": BoundMethod.OPERATIONAL,
            "s1_lower": min_s1,
            "s1_ratio": ratio,
            "worst_corner": worst.worst_corner or EpsilonCorner(),
        })

    @staticmethod
    def compute(
        method: BoundMethod,
        mu: float,
        mup: float,
        rates: ObservedRates,
        params: FluctuationParams | None = None,
        eps_caps: EpsilonCaps | None = None,
    ) -> BoundResult:
        if method == BoundMethod.HWANG:
            return BoundService.hwang_delta(mu, mup, rates)
        if method == BoundMethod.CRUDE:
            return BoundService.crude_delta(mu, mup, rates)
        if method == BoundMethod.ASYMPTOTIC_3:
            return BoundService.asymptotic_delta(mu, mup, rates)
        if params is None:
            raise ValueError(f"{method.value} needs fluctuation parameters")
        if method == BoundMethod.FLUCTUATION:
            return BoundService.fluctuation_delta(mu, mup, rates, params)
        return BoundService.operational_error_delta(mu, mup, rates, params, eps_caps or EpsilonCaps())
