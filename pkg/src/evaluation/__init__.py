from dataclasses import asdict, dataclass
from typing import Optional

from loguru import logger

from .metrics import knn_label_agreement, neighbor_order, trustworthiness


@dataclass(frozen=True)
class EvalReport:
    method: str
    knn_agreement: Optional[float] = None
    trustworthiness: Optional[float] = None
    k_neighbors: Optional[int] = None
    seed: Optional[int] = None
    error: Optional[str] = None

    def to_dict(self):
        return asdict(self)


def evaluate_embedding(method, embedding, high_distances, k_neighbors, seed):
    report = EvalReport(
        method=method,
        knn_agreement=knn_label_agreement(embedding, k_neighbors),
        trustworthiness=trustworthiness(high_distances, embedding, k_neighbors),
        k_neighbors=k_neighbors,
        seed=seed,
    )
    logger.info(
        f"{method}: kNN label agreement {report.knn_agreement:.4f}, trustworthiness {report.trustworthiness:.4f}"
    )
    return report
