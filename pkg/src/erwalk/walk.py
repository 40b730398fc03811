"""Path simulation and the exact law of the walk position.

The conditional law of the next step depends on the past only through
S_k / k: the probability of stepping up is (1 + (2p-1) S_k / k) / 2.
That single fact makes the position a (time-inhomogeneous) Markov chain,
so its exact distribution follows from a forward dynamic program over the
parity lattice {-k, -k+2, ..., k}, and simulation needs O(1) state.

A literal mode that draws the copy/flip sign and the uniformly chosen
memory index explicitly is kept for cross-validation, together with
exhaustive enumeration oracles for small horizons.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import _kernels
from .coefficients import CoefficientTable
from .errors import ResourceLimitError
from .params import WalkParams
from .streams import DEFAULT_SEED, map_replicate_chunks, replicate_stream

logger = logging.getLogger(__name__)

DP_CEILING = 16384

# Weights below this are flushed to zero and the law renormalized; the
# factor is logged if it moves total mass by more than 1e-12.
_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class DiscreteDistribution:
    """Sorted atoms with probability weights.

    Carrier for exact dynamic-program output, empirical samples, and
    Wasserstein-distance input.  Atoms are strictly increasing, weights
    nonnegative with no exact zeros, total mass 1 within 1e-12.
    """

    atoms: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)
        if atoms.ndim != 1 or atoms.shape != weights.shape or len(atoms) == 0:
            raise ValueError("atoms and weights must be equal-length nonempty 1-d arrays")
        if np.any(np.diff(atoms) <= 0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive after canonicalization")
        total = float(weights.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")

    @classmethod
    def from_raw(cls, atoms, weights) -> "DiscreteDistribution":
        """Canonicalize: sort, merge duplicate atoms, drop zero weights,
        rescale to total mass one."""
        atoms = np.asarray(atoms, dtype=np.float64)
        weights = np.asarray(weights, dtype=np.float64)
        if atoms.ndim != 1 or atoms.shape != weights.shape or len(atoms) == 0:
            raise ValueError("atoms and weights must be equal-length nonempty 1-d arrays")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        order = np.argsort(atoms, kind="stable")
        atoms, weights = atoms[order], weights[order]
        uniq, inverse = np.unique(atoms, return_inverse=True)
        merged = np.zeros(len(uniq))
        np.add.at(merged, inverse, weights)
        keep = merged > 0.0
        if not np.any(keep):
            raise ValueError("all weights are zero")
        merged = merged[keep]
        return cls(atoms=uniq[keep], weights=merged / merged.sum())

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.weights))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.dot((self.atoms - mu) ** 2, self.weights))


@dataclass(frozen=True)
class WalkPath:
    """One realized trajectory.

    `seed` and `replicate` identify the counter-based stream that produced
    the path, so any path can be regenerated exactly.
    """

    eta: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    seed: int
    replicate: int = 0

    @property
    def n(self) -> int:
        return len(self.eta)


def transition_prob_up(p: float, k: int, s: int) -> float:
    """Probability that step k+1 is +1 given position s at time k.

    Equals (1 + (2p-1) s/k) / 2: averaging the copy/flip sign over a
    uniformly chosen past step leaves only the empirical mean s/k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if abs(s) > k:
        raise ValueError(f"|s| = {abs(s)} exceeds k = {k}: unreachable state")
    return 0.5 * (1.0 + (2.0 * p - 1.0) * s / k)


def simulate_path(
    params: WalkParams,
    master_seed: int = DEFAULT_SEED,
    replicate: int = 0,
    *,
    literal: bool = False,
) -> WalkPath:
    """Draw one trajectory from the stream keyed (master_seed, replicate).

    Marginal mode draws each step directly from its conditional law (one
    uniform per step).  Literal mode draws the copy/flip sign and the
    memory index separately (two uniforms per step); both have the same
    law, which the tests verify.
    """
    rng = replicate_stream(master_seed, replicate)
    n = params.n
    if literal:
        u = rng.random(2 * n - 1)
        eta, s = _kernels.walk_path_literal(u, params.p, params.q)
    else:
        u = rng.random(n)
        eta, s = _kernels.walk_path_marginal(u, params.p, params.q)
    return WalkPath(eta=eta, s=s, seed=int(master_seed), replicate=int(replicate))


def sample_final_positions(
    params: WalkParams,
    reps: int,
    master_seed: int = DEFAULT_SEED,
    *,
    literal: bool = False,
    threads: int = 1,
) -> np.ndarray:
    """Terminal positions of `reps` independent replicates.

    Replicate r consumes exactly the stream that simulate_path(params,
    master_seed, r) would, so batch and single-path results agree.
    """
    p, q, n = params.p, params.q, params.n
    draw = 2 * n - 1 if literal else n

    def worker(lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo, dtype=np.int64)
        for i, r in enumerate(range(lo, hi)):
            u = replicate_stream(master_seed, r).random(draw)
            if literal:
                out[i] = _kernels.walk_final_literal(u, p, q)
            else:
                out[i] = _kernels.walk_final_marginal(u, p, q)
        return out

    return map_replicate_chunks(worker, reps, threads)


def exact_distribution(
    params: WalkParams,
    *,
    max_n: int = DP_CEILING,
    check_conservation: bool = False,
) -> DiscreteDistribution:
    """Exact law of the terminal position by forward dynamic programming.

    O(n^2) time, O(n) space over the parity lattice.  Weights that
    underflow below 1e-300 are flushed to zero and the law renormalized.
    With check_conservation the total mass is asserted to stay within
    1e-12 of one after every intermediate step.
    """
    p, q, n = params.p, params.q, params.n
    if n > max_n:
        raise ResourceLimitError(
            f"n = {n} exceeds the dynamic-program ceiling {max_n}; raise it via "
            "exact_distribution(..., max_n=...) or the --dp-ceiling flag"
        )
    w = np.array([1.0 - q, q])
    for k in range(1, n):
        s = np.arange(-k, k + 1, 2, dtype=np.float64)
        p_up = 0.5 * (1.0 + (2.0 * p - 1.0) * s / k)
        nxt = np.zeros(k + 2)
        nxt[1:] += w * p_up
        nxt[:-1] += w * (1.0 - p_up)
        tiny = (nxt > 0.0) & (nxt < _UNDERFLOW)
        if np.any(tiny):
            nxt[tiny] = 0.0
            total = nxt.sum()
            if abs(total - 1.0) > 1e-12:
                logger.info("renormalizing after underflow flush at k=%d by %.3e", k, 1.0 - total)
            nxt /= total
        if check_conservation:
            drift = abs(float(nxt.sum()) - 1.0)
            if drift > 1e-12:
                raise AssertionError(f"mass drifted by {drift:.3e} at step {k + 1}")
        w = nxt
    atoms = np.arange(-n, n + 1, 2, dtype=np.float64)
    return DiscreteDistribution.from_raw(atoms, w)


def normalize_distribution(
    dist: DiscreteDistribution,
    table: CoefficientTable,
    *,
    q: float = 0.5,
    center: bool = False,
) -> DiscreteDistribution:
    """Map each atom x to a_n x / sqrt(v_n), or to (a_n x - 2q + 1) /
    sqrt(v_n) when centering; weights are untouched.  At q = 1/2 the two
    agree."""
    scale = math.sqrt(table.v_n)
    atoms = table.a_n * dist.atoms
    if center:
        atoms = atoms - (2.0 * q - 1.0)
    return DiscreteDistribution(atoms=atoms / scale, weights=dist.weights)


Number = Union[float, Fraction]


def enumerate_distribution(p: Number, q: Number, n: int, *, mode: str = "eta"):
    """Exhaustive exact law of the terminal position for small horizons.

    mode "eta" walks the 2^n tree of step histories, weighting each branch
    by the literal mechanism summed over the driving pair: the next step
    is +1 with probability (p N_+ + (1-p) N_-) / k where N_+/- count past
    steps of each sign.  mode "alpha-beta" enumerates every driving pair
    (sign, index) individually - 2^n (n-1)! leaves, so it is capped at
    n <= 9 and exists purely as a cross-check of the eta reduction.

    With Fraction-valued p and q the arithmetic is exact; the result maps
    terminal position -> probability in the input arithmetic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    law: dict[int, Number] = {}

    if mode == "eta":
        if n > 22:
            raise ValueError("eta enumeration is exponential; use n <= 22")

        def recurse(k: int, n_plus: int, s: int, prob: Number) -> None:
            if k == n:
                law[s] = law.get(s, 0 * one) + prob
                return
            up = (p * n_plus + (1 - p) * (k - n_plus)) / k
            if up > 0:
                recurse(k + 1, n_plus + 1, s + 1, prob * up)
            if up < 1:
                recurse(k + 1, n_plus, s - 1, prob * (one - up))

        if q > 0:
            recurse(1, 1, 1, one * q)
        if q < 1:
            recurse(1, 0, -1, one * (1 - q))
    elif mode == "alpha-beta":
        if n > 9:
            raise ValueError("alpha-beta enumeration has 2^n (n-1)! leaves; use n <= 9")

        def recurse_ab(k: int, eta: tuple[int, ...], prob: Number) -> None:
            if k == n:
                s = sum(eta)
                law[s] = law.get(s, 0 * one) + prob
                return
            for alpha, alpha_prob in ((1, p), (-1, one - p)):
                if alpha_prob == 0:
                    continue
                for beta in range(k):
                    recurse_ab(k + 1, eta + (alpha * eta[beta],), prob * alpha_prob / k)

        if q > 0:
            recurse_ab(1, (1,), one * q)
        if q < 1:
            recurse_ab(1, (-1,), one * (1 - q))
    else:
        raise ValueError(f"unknown enumeration mode {mode!r}")
    return dict(sorted(law.items()))


def enumeration_as_distribution(law: dict) -> DiscreteDistribution:
    """Float view of an enumerate_distribution result."""
    atoms = np.array(sorted(law), dtype=np.float64)
    weights = np.array([float(law[int(a)]) for a in atoms])
    return DiscreteDistribution.from_raw(atoms, weights)
