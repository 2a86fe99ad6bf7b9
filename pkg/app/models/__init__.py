from app.models.source import (
    Intensity, Probability, IntensityErrorDistribution,
    SourceDecomposition, ResidualDecomposition, ClassEpsilon,
)
from app.models.channel import ChannelModel, ObservedRates
from app.models.bounds import (
    BoundMethod, BoundResult, EpsilonCaps, EpsilonCorner, FluctuationParams,
)
from app.models.keyrate import DistillationInput, DistillationCosts, SourceKeyFractions
from app.models.simulation import (
    SourceSpec, IntensityError, SessionConfig, SourceOutcome, SimulationOutcome,
    TrialStatus, TrialOutcome, CampaignTrial, CampaignSummary, CampaignSpec,
)

__all__ = [
    "Intensity", "Probability", "IntensityErrorDistribution",
    "SourceDecomposition", "ResidualDecomposition", "ClassEpsilon",
    "ChannelModel", "ObservedRates",
    "BoundMethod", "BoundResult", "EpsilonCaps", "EpsilonCorner", "FluctuationParams",
    "DistillationInput", "DistillationCosts", "SourceKeyFractions",
    "SourceSpec", "IntensityError", "SessionConfig", "SourceOutcome", "SimulationOutcome",
    "TrialStatus", "TrialOutcome", "CampaignTrial", "CampaignSummary", "CampaignSpec",
]
