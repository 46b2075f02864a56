from dataclasses import asdict, dataclass

import numpy as np
from loguru import logger
from tqdm import tqdm

from src.embedding.affinity import AffinityMatrix, floor_and_normalize, joint_affinities
from src.embedding.result import Embedding
from src.errors import DivergenceError, ValidationError

LOG_EVERY = 100


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    output_dim: int = 2
    iterations: int = 1000
    learning_rate: float = 100.0
    momentum_initial: float = 0.5
    momentum_final: float = 0.8
    momentum_switch_iter: int = 250
    exaggeration_factor: float = 4.0
    exaggeration_iters: int = 100
    seed: int = 0
    init_std: float = 1e-4
    use_gains: bool = False

    @staticmethod
    def default_perplexity(k):
        # min(30, floor((k - 1) / 3)), kept within [2, k - 1]
        return float(min(k - 1, max(2, min(30, (k - 1) // 3))))

    @classmethod
    def for_size(cls, k, **overrides):
        overrides = {key: value for key, value in overrides.items() if value is not None}
        overrides.setdefault("perplexity", cls.default_perplexity(k))
        return cls(**overrides)

    def validate(self, k):
        problems = []
        if not 0 < self.perplexity < k:
            problems.append(f"perplexity {self.perplexity} must be in (0, {k})")
        if self.output_dim not in (2, 3):
            problems.append(f"output_dim {self.output_dim} must be 2 or 3")
        if self.iterations < 1:
            problems.append("iterations must be positive")
        if self.learning_rate <= 0:
            problems.append("learning_rate must be positive")
        for name in ("momentum_initial", "momentum_final"):
            if not 0 <= getattr(self, name) < 1:
                problems.append(f"{name} must be in [0, 1)")
        if self.exaggeration_factor < 1:
            problems.append("exaggeration_factor must be >= 1")
        if not 0 <= self.exaggeration_iters <= self.iterations:
            problems.append("exaggeration_iters must be within [0, iterations]")
        if not 0 <= self.momentum_switch_iter <= self.iterations:
            problems.append("momentum_switch_iter must be within [0, iterations]")
        if self.seed < 0:
            problems.append("seed must be unsigned")
        if self.init_std <= 0:
            problems.append("init_std must be positive")
        if problems:
            raise ValidationError("Invalid t-SNE config: " + "; ".join(problems))

    def to_dict(self):
        return asdict(self)


def _pairwise(Y):
    diff = Y[:, None, :] - Y[None, :, :]
    return diff, (diff * diff).sum(axis=2)


def _student_kernel(sq_dist):
    num = 1.0 / (1.0 + sq_dist)
    np.fill_diagonal(num, 0.0)
    return num


def low_dim_affinities(Y):
    """Student-t kernel (1 + |y_i - y_j|^2)^-1; returns Q (floored, sums to 1) and the normalizer S."""
    Y = np.asarray(Y, dtype=np.float64)
    num = _student_kernel(_pairwise(Y)[1])
    S = num.sum()
    return floor_and_normalize(num / S), S


def kl_cost(P, Q):
    """KL(P || Q) over off-diagonal entries, natural log."""
    P = P.P if isinstance(P, AffinityMatrix) else np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    off = ~np.eye(P.shape[0], dtype=bool)
    p, q = P[off], Q[off]
    return float(np.sum(p * np.log(p / q)))


def tsne_gradient(P, Q, S, Y):
    """
    Row i: 4 * sum_j (p_ij - q_ij)(y_i - y_j)(1 + |y_i - y_j|^2)^-1. The
    kernel is recomputed from Y, so S only documents where Q came from.
    """
    P = P.P if isinstance(P, AffinityMatrix) else np.asarray(P, dtype=np.float64)
    diff, sq_dist = _pairwise(np.asarray(Y, dtype=np.float64))
    weights = (P - Q) * _student_kernel(sq_dist)
    return 4.0 * (weights[:, :, None] * diff).sum(axis=1)


def tsne_embed(distances, config, affinities=None, labels=None, method="tsne", progress=True):
    """
    Gradient descent with momentum on KL(P || Q), with early exaggeration
    of P. `cost_trace[t]` is the un-exaggerated KL at the start of
    iteration t.
    """
    if affinities is None:
        config.validate(distances.k)
        affinities = joint_affinities(distances, config.perplexity, progress=progress)
    k = affinities.k
    config.validate(k)
    P = affinities.P

    rng = np.random.default_rng(config.seed)
    Y = rng.normal(0.0, config.init_std, (k, config.output_dim))
    update = np.zeros_like(Y)
    gains = np.ones_like(Y)
    trace = []

    logger.info(
        f"Running t-SNE: k={k}, dim={config.output_dim}, perplexity={config.perplexity}, "
        f"iterations={config.iterations}, learning rate={config.learning_rate}"
    )
    bar = tqdm(range(config.iterations), desc="t-SNE", disable=not progress, leave=False)
    for it in bar:
        Q, S = low_dim_affinities(Y)
        cost = kl_cost(P, Q)
        if not np.isfinite(cost):
            raise DivergenceError(
                f"KL cost became non-finite at iteration {it} (learning rate {config.learning_rate})",
                iteration=it,
                learning_rate=config.learning_rate,
            )
        trace.append(cost)

        target = P * config.exaggeration_factor if it < config.exaggeration_iters else P
        grad = tsne_gradient(target, Q, S, Y)
        momentum = config.momentum_initial if it < config.momentum_switch_iter else config.momentum_final
        if config.use_gains:
            gains = np.where(np.sign(grad) != np.sign(update), gains + 0.2, gains * 0.8)
            gains = np.maximum(gains, 0.01)
            update = momentum * update - config.learning_rate * gains * grad
        else:
            update = momentum * update - config.learning_rate * grad
        Y = Y + update
        Y = Y - Y.mean(axis=0)

        if (it + 1) % LOG_EVERY == 0:
            bar.set_postfix(kl=f"{cost:.4f}")
            logger.info(f"Iteration {it + 1}: KL = {cost:.6f}")

    if not np.isfinite(Y).all():
        raise DivergenceError(
            f"Embedding became non-finite after iteration {config.iterations} (learning rate {config.learning_rate})",
            iteration=config.iterations,
            learning_rate=config.learning_rate,
        )
    logger.info(f"t-SNE finished: final KL = {trace[-1]:.6f}")
    labels = tuple(labels) if labels is not None else (None,) * k
    return Embedding(
        Y=Y,
        ids=affinities.ids or tuple(str(i) for i in range(k)),
        labels=labels,
        method=method,
        cost_trace=tuple(trace),
        config=config,
    )
