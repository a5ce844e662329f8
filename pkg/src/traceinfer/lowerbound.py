"""Clique versus clique-minus-edge: exact position-pair law and the guessing game.

G0 is the clique on ``n`` nodes, G1 removes the edge between the two special
nodes 0 and 1. With ``p = 1`` a trace's infection order on G0 is a uniform
permutation. On G1 the order is uniform given the positions ``a < b``
(1-indexed) of the two special nodes, whose joint law is computed here.

While ``j`` nodes are infected and exactly one of them is special, the cut
has ``j(n-j) - 1`` edges and the other special node is hit through ``j - 1``
of them. Chaining those step probabilities gives, for ``a < b``,

    Q(a, b) = prod_{j=a}^{b-2} j(n-j-1) / (j(n-j)-1) * (b-2) / ((b-1)(n-b+1)-1)

and ``p_{1,b} = (2/n) Q(1, b)``, ``p_{a,b} = ((n-2)/n) F(a) Q(a, b)`` with
``F(a) = 2(n-a) / ((n-1)(n-2))`` the chance that the first special node
sits at position ``a >= 2`` after a non-special source.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng as _rng
from .cascade import CascadeParams, TraceSet, simulate_many
from .errors import ParameterError
from .graph import clique, clique_minus_edge

SPECIAL = (0, 1)


@dataclass
class PositionPairDist:
    """``p[a, b]`` for ``1 <= a < b <= n``; every other entry is 0."""

    n: int
    p: np.ndarray  # (n + 1, n + 1)

    @property
    def d(self) -> np.ndarray:
        """``p * C(n, 2) - 1`` on valid pairs, ``nan`` elsewhere."""
        out = np.full_like(self.p, np.nan)
        a, b = self.pairs()
        out[a, b] = self.p[a, b] * math.comb(self.n, 2) - 1.0
        return out

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = np.triu_indices(self.n + 1, k=1)
        keep = a >= 1
        return a[keep], b[keep]

    def total(self) -> float:
        return float(self.p.sum())

    def flat(self) -> np.ndarray:
        a, b = self.pairs()
        return self.p[a, b]


def _check_n(n: int) -> None:
    if n < 4:
        raise ParameterError(f"n must be at least 4, got {n}")


def exact_pab(n: int, graph: str = "G1") -> PositionPairDist:
    """Closed-form position-pair law, computed in log space."""
    _check_n(n)
    p = np.zeros((n + 1, n + 1))
    if graph == "G0":
        dist = PositionPairDist(n, p)
        p[dist.pairs()] = 2.0 / (n * (n - 1))
        return dist
    if graph != "G1":
        raise ParameterError(f"graph must be 'G0' or 'G1', got {graph!r}")
    j = np.arange(1, n, dtype=float)
    with np.errstate(divide="ignore"):
        # log of the non-special step probability with j infected (index j - 1)
        step = np.log(j * (n - j - 1)) - np.log(j * (n - j) - 1)
        cum = np.concatenate([[0.0], np.cumsum(step)])  # cum[k] = sum_{j=1}^{k} step
        for b in range(2, n + 1):
            hit = math.log(b - 2) - math.log((b - 1) * (n - b + 1) - 1) if b > 2 else -math.inf
            a = np.arange(1, b)
            log_q = cum[b - 2] - cum[a - 1] + hit
            log_w = np.where(
                a == 1,
                math.log(2.0 / n),
                math.log((n - 2) / n) + np.log(2.0 * (n - a)) - math.log((n - 1) * (n - 2)),
            )
            p[a, b] = np.exp(log_q + log_w)
    return PositionPairDist(n, p)


def markov_pab(n: int) -> PositionPairDist:
    """Reference law by forward propagation of the infection Markov chain.

    State after ``j`` infections: number of special nodes infected and the
    position of the first one. Shares no algebra with :func:`exact_pab`.
    """
    _check_n(n)
    p = np.zeros((n + 1, n + 1))
    none = 1.0 - 2.0 / n  # no special infected yet, j = 1
    one = np.zeros(n + 1)  # one[a]: exactly one special, first at position a
    one[1] = 2.0 / n
    for j in range(1, n):
        cut = j * (n - j) - 1
        # exactly one special: the other is reached through j - 1 cut edges
        nxt = one * (cut - (j - 1)) / cut
        p[:, j + 1] += one * (j - 1) / cut
        # none infected: next node uniform among n - j
        nxt[j + 1] += none * 2.0 / (n - j)
        none *= 1.0 - 2.0 / (n - j)
        one = nxt
    return PositionPairDist(n, p)


def position_pairs(ts: TraceSet) -> tuple[np.ndarray, np.ndarray]:
    """1-indexed positions ``(a, b)``, ``a < b``, of the special nodes per trace."""
    ranks = ts.rank_matrix()
    r0, r1 = ranks[:, SPECIAL[0]] + 1, ranks[:, SPECIAL[1]] + 1
    return np.minimum(r0, r1), np.maximum(r0, r1)


def position_counts(ts: TraceSet) -> np.ndarray:
    a, b = position_pairs(ts)
    counts = np.zeros((ts.n + 1, ts.n + 1), dtype=np.int64)
    np.add.at(counts, (a, b), 1)
    return counts


def log_likelihood_ratio(ts: TraceSet, dist1: PositionPairDist, *, use_times: bool = False) -> float:
    """``log L0 / L1`` for G0 (clique) against G1 (clique minus edge)."""
    n = ts.n
    a, b = position_pairs(ts)
    with np.errstate(divide="ignore"):
        llr = float(np.sum(np.log(2.0 / (n * (n - 1))) - np.log(dist1.p[a, b])))
    if use_times and np.isfinite(llr):
        lam = ts.params.lam
        tm = ts.times.reshape(len(ts), n)
        hold = np.diff(tm, axis=1)  # hold[:, i-1]: wait after the i-th infection
        i = np.arange(1, n)
        gain = np.log(i * (n - i)) - np.log(i * (n - i) - 1.0)
        for k in range(len(ts)):
            sl = slice(a[k] - 1, b[k] - 1)  # i = a .. b-1
            llr += float(np.sum(gain[sl] - lam * hold[k, sl]))
    return llr


@dataclass(frozen=True)
class GuessReport:
    n: int
    ell: int
    trials: int
    success_rate: float
    stderr: float

    def as_row(self) -> dict:
        return {"n": self.n, "ell": self.ell, "trials": self.trials,
                "success_rate": self.success_rate, "stderr": self.stderr}


def guess_experiment(n: int, ell: int, trials: int, seed: int, *, lam: float = 1.0,
                     use_times: bool = False) -> GuessReport:
    """Fraction of trials in which the MAP rule names the graph correctly.

    Each trial picks G0 or G1 uniformly, draws ``ell`` traces and guesses by
    the sign of the log-likelihood ratio (a fair coin on exact ties).
    """
    if n < 8:
        raise ParameterError(f"n must be at least 8, got {n}")
    if ell < 0 or trials < 1:
        raise ParameterError("ell must be >= 0 and trials >= 1")
    graphs = (clique(n), clique_minus_edge(n))
    dist1 = exact_pab(n)
    params = CascadeParams(lam=lam, p=1.0)
    correct = 0
    for t in range(trials):
        gen = _rng.generator(seed, "guess", t)
        truth = int(gen.integers(2))
        sim_seed = int(gen.integers(2 ** 62))
        coin = int(gen.integers(2))
        ts = simulate_many(graphs[truth], params, ell, sim_seed)
        llr = log_likelihood_ratio(ts, dist1, use_times=use_times) if ell else 0.0
        guess = 0 if llr > 0 else 1 if llr < 0 else coin
        correct += guess == truth
    rate = correct / trials
    return GuessReport(n, ell, trials, rate, math.sqrt(rate * (1 - rate) / trials))


def write_report(rows: list[GuessReport], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["n", "ell", "trials", "success_rate", "stderr"],
                           lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r.as_row())
