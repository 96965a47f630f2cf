"""Reported endpoints of competing protocols, kept for range comparisons only."""

from dataclasses import dataclass
from typing import Dict, Optional


def loss_budget_to_distance(loss_db: float, alpha: float) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    return loss_db / alpha


def distance_to_loss_budget(L: float, alpha: float) -> float:
    return L * alpha


@dataclass(frozen=True)
class CompetitorEndpoint:
    key: str
    label: str
    alpha: float
    distance_km: float
    loss_budget_db: Optional[float] = None

    @classmethod
    def from_loss_budget(cls, key: str, label: str, loss_db: float, alpha: float) -> "CompetitorEndpoint":
        return cls(key, label, alpha, loss_budget_to_distance(loss_db, alpha), loss_db)

    def margin_km(self, L: float) -> float:
        """How far ``L`` reaches past this endpoint (negative when short)."""
        return L - self.distance_km


SNS_TF = CompetitorEndpoint.from_loss_budget("sns_tf", "SNS-TF-QKD", 176.0, 0.2)
SNS_TF_POSTSELECTION = CompetitorEndpoint.from_loss_budget(
    "sns_tf_post", "SNS-TF-QKD with postselection", 181.0, 0.2
)
SNS_TF_EXPERIMENT = CompetitorEndpoint(
    "sns_tf_exp", "experimental SNS-TF-QKD", 0.157, 1002.0,
    distance_to_loss_budget(1002.0, 0.157),
)

COMPETITOR_ENDPOINTS: Dict[str, CompetitorEndpoint] = {
    e.key: e for e in (SNS_TF, SNS_TF_POSTSELECTION, SNS_TF_EXPERIMENT)
}
