"""
Seeded Monte Carlo of loss-only signal rounds, used as an independent
check on the analytic conclusive-event probability.

Each round:
  1. Alice and Bob each send with probability eps.
  2. If exactly one of them sends, the destructive port clicks with
     probability 1 - exp(-2 mu sqrt(eta)); otherwise nothing clicks.
  3. On a click both keep the round. Alice's bit k is 0 when she sent,
     1 otherwise; Bob's raw bit y follows the same rule and he inverts it.

The rounds are split into shards, each driven by its own PCG64 generator
spawned from ``SeedSequence(seed)``. The summary depends on the seed and
the shard count only, never on how many workers ran the shards.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import numpy as np

from src.protocol.errors import ParameterDomainError

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64"
Z_LIMIT = 4.0
MAX_TRACE_ROUNDS = 10_000


@dataclass(frozen=True)
class RoundRecord:
    alice_sends: bool
    bob_sends: bool
    outcome: str
    key_a: Optional[int] = None
    key_b: Optional[int] = None

    def __post_init__(self):
        if self.outcome not in ("minus", "none"):
            raise ValueError(f"outcome must be 'minus' or 'none', got {self.outcome!r}")
        kept = self.outcome == "minus"
        if kept != (self.key_a is not None and self.key_b is not None):
            raise ValueError("key bits must be present exactly on kept rounds")

    def to_row(self) -> dict:
        return {
            "alice_sends": int(self.alice_sends),
            "bob_sends": int(self.bob_sends),
            "outcome": self.outcome,
            "key_a": "" if self.key_a is None else self.key_a,
            "key_b": "" if self.key_b is None else self.key_b,
        }


@dataclass
class McSummary:
    mu: float
    eps: float
    eta: float
    seed: int
    shards: int
    N: int
    sns: int = 0
    ss: int = 0
    nn: int = 0
    conclusive: int = 0
    agreeing: int = 0
    rng: str = RNG_ALGORITHM
    trace: List[RoundRecord] = field(default_factory=list, repr=False)

    @property
    def p_conclusive(self) -> float:
        return self.conclusive / self.N

    @property
    def correlation(self) -> float:
        """Fraction of kept rounds where k equals Bob's inverted bit."""
        if self.conclusive == 0:
            return math.nan
        return self.agreeing / self.conclusive

    def frequencies(self) -> Dict[str, float]:
        return {"sns": self.sns / self.N, "ss": self.ss / self.N, "nn": self.nn / self.N}

    def merge(self, other: "McSummary") -> "McSummary":
        if (self.mu, self.eps, self.eta) != (other.mu, other.eps, other.eta):
            raise ValueError("cannot merge summaries of different parameters")
        return McSummary(
            mu=self.mu,
            eps=self.eps,
            eta=self.eta,
            seed=self.seed,
            shards=self.shards + other.shards,
            N=self.N + other.N,
            sns=self.sns + other.sns,
            ss=self.ss + other.ss,
            nn=self.nn + other.nn,
            conclusive=self.conclusive + other.conclusive,
            agreeing=self.agreeing + other.agreeing,
            rng=self.rng,
            trace=(self.trace + other.trace)[:MAX_TRACE_ROUNDS],
        )

    def to_row(self) -> dict:
        return {
            "rng": self.rng,
            "seed": self.seed,
            "shards": self.shards,
            "N": self.N,
            "mu": self.mu,
            "eps": self.eps,
            "eta": self.eta,
            "sns": self.sns,
            "ss": self.ss,
            "nn": self.nn,
            "conclusive": self.conclusive,
            "p_conclusive": self.p_conclusive,
            "correlation": self.correlation,
        }


def _check_inputs(mu: float, eps: float, eta: float, N: int) -> None:
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    if not 0.0 <= eps <= 1.0:
        raise ParameterDomainError(f"epsilon must be in [0, 1], got {eps!r}", "epsilon")
    if not 0.0 < eta <= 1.0:
        raise ParameterDomainError(f"eta must be in (0, 1], got {eta!r}", "eta")
    if N < 1:
        raise ParameterDomainError(f"N must be >= 1, got {N!r}", "N")


def _run_shard(
    mu: float,
    eps: float,
    eta: float,
    n: int,
    seed: int,
    seed_seq: np.random.SeedSequence,
    trace_limit: int,
) -> McSummary:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    alice = rng.random(n) < eps
    bob = rng.random(n) < eps
    click_draw = rng.random(n)

    p_click = -math.expm1(-2.0 * mu * math.sqrt(eta))
    sns = alice != bob
    kept = sns & (click_draw < p_click)
    k = np.where(alice, 0, 1)
    y = np.where(bob, 0, 1)
    agreeing = kept & (k == 1 - y)

    trace = []
    for i in range(min(trace_limit, n)):
        if kept[i]:
            trace.append(RoundRecord(bool(alice[i]), bool(bob[i]), "minus", int(k[i]), int(y[i])))
        else:
            trace.append(RoundRecord(bool(alice[i]), bool(bob[i]), "none"))

    return McSummary(
        mu=mu, eps=eps, eta=eta, seed=seed, shards=1, N=n,
        sns=int(sns.sum()),
        ss=int((alice & bob).sum()),
        nn=int((~alice & ~bob).sum()),
        conclusive=int(kept.sum()),
        agreeing=int(agreeing.sum()),
        trace=trace,
    )


def simulate(
    mu: float,
    eps: float,
    eta: float,
    N: int,
    seed: int,
    *,
    shards: int = 1,
    workers: int = 1,
    trace_limit: int = 0,
) -> McSummary:
    _check_inputs(mu, eps, eta, N)
    if shards < 1 or shards > N:
        raise ParameterDomainError(f"shards must be in [1, N], got {shards!r}", "shards")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    trace_limit = max(0, min(trace_limit, MAX_TRACE_ROUNDS))

    sizes = [N // shards + (1 if i < N % shards else 0) for i in range(shards)]
    children = np.random.SeedSequence(seed).spawn(shards)
    # only the first shard records a trace
    jobs = [
        (mu, eps, eta, n, seed, child, trace_limit if i == 0 else 0)
        for i, (n, child) in enumerate(zip(sizes, children))
    ]

    if workers == 1:
        parts = [_run_shard(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_shard(*job), jobs))

    summary = parts[0]
    for part in parts[1:]:
        summary = summary.merge(part)
    logger.info(
        "simulated %d rounds (%d shards, seed %d): p_conclusive=%.6f",
        summary.N, summary.shards, seed, summary.p_conclusive,
    )
    return summary


def analytic_expectations(mu: float, eps: float, eta: float) -> Dict[str, float]:
    sns = 2.0 * eps * (1.0 - eps)
    return {
        "p_conclusive": sns * -math.expm1(-2.0 * mu * math.sqrt(eta)),
        "sns": sns,
        "ss": eps ** 2,
        "nn": (1.0 - eps) ** 2,
    }


@dataclass
class ZScore:
    statistic: str
    observed: float
    expected: float
    sigma: float
    z: float
    note: str = ""

    @property
    def skipped(self) -> bool:
        return math.isnan(self.z)

    def to_row(self) -> dict:
        return {
            "statistic": self.statistic,
            "observed": self.observed,
            "expected": self.expected,
            "sigma": self.sigma,
            "z": self.z,
            "note": self.note,
        }


def empirical_vs_analytic(summary: McSummary, analytic: Mapping[str, float]) -> List[ZScore]:
    """Binomial z-score of every observed frequency against its expectation."""
    if summary.N < 1:
        raise ParameterDomainError("summary has no rounds", "N")
    observed = {"p_conclusive": summary.p_conclusive, **summary.frequencies()}
    scores = []
    for name, expected in analytic.items():
        if name not in observed:
            raise ParameterDomainError(f"unknown statistic {name!r}", "statistic")
        sigma = math.sqrt(expected * (1.0 - expected) / summary.N)
        if sigma == 0.0:
            scores.append(ZScore(name, observed[name], expected, 0.0, math.nan, "zero variance, skipped"))
            continue
        scores.append(ZScore(name, observed[name], expected, sigma, (observed[name] - expected) / sigma))
    return scores


def all_within(scores: List[ZScore], limit: float = Z_LIMIT) -> bool:
    return all(abs(s.z) < limit for s in scores if not s.skipped)
