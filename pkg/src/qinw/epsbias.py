"""Small-bias multisets over {0,1}^n built from GF(2^m) power maps.

A multiset C over {0,1}^n is delta-biased if every nonempty coordinate
subset has XOR bias at most delta/2, i.e. |Pr[parity = 1] - 1/2| <= delta/2.
The space here is indexed by field pairs (alpha, beta) and has rows

    row(alpha, beta) = ( <alpha^0, beta>, <alpha^1, beta>, ..., <alpha^(n-1), beta> )

with <.,.> the GF(2) inner product on coefficient vectors.  The parity of
a subset S is <p_S(alpha), beta> for the nonzero polynomial
p_S(y) = sum_{j in S} y^j of degree < n, which vanishes for at most n-1
values of alpha; averaging over beta kills every nonzero p_S(alpha)
exactly, so the bias of S is at most (n / 2^m) / 2.

The multiset (size 2^(2m)) is never materialized.  Rows are computed on
demand, and the auditor enumerates seeds into an outcome histogram whose
parity-correlation (Walsh) transform yields every subset bias at once:
cost 2^(2m) * n + n * 2^n instead of 2^(2m) * 2^n * n.

Bit vectors are ints with coordinate j stored at bit j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2m import CapacityError, FieldParams, GfElement

MAX_AUDIT_N = 24
MAX_AUDIT_SEED_BITS = 26


@dataclass(frozen=True)
class BiasedSpaceParams:
    """Output length n and the field GF(2^m) indexing the space."""

    n: int
    field: FieldParams

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class ExtSeed:
    """One index (alpha, beta) into the multiset."""

    alpha: GfElement
    beta: GfElement

    def __post_init__(self) -> None:
        if self.alpha.field != self.beta.field:
            raise ValueError("alpha and beta must come from the same field")


def biased_coord(params: BiasedSpaceParams, seed: ExtSeed, j: int) -> int:
    """Coordinate j of row(alpha, beta): <alpha^j, beta> with alpha^0 = 1."""
    if not 0 <= j < params.n:
        raise ValueError(f"coordinate {j} out of range [0, {params.n})")
    f = params.field
    return (f.pow(seed.alpha.value, j) & seed.beta.value).bit_count() & 1


def biased_vector(params: BiasedSpaceParams, seed: ExtSeed) -> int:
    """All n coordinates, with the running power alpha^j updated by one
    multiplication per coordinate."""
    f = params.field
    a, b = seed.alpha.value, seed.beta.value
    out = 0
    p = 1
    for j in range(params.n):
        out |= ((p & b).bit_count() & 1) << j
        p = f.mul(p, a)
    return out


@dataclass
class BiasAuditReport:
    n: int
    m: int
    delta: float
    max_bias: float
    worst_subset: int
    passed: bool
    seeds_enumerated: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "delta": self.delta,
            "max_bias": self.max_bias,
            "worst_subset": self.worst_subset,
            "pass": self.passed,
            "seeds_enumerated": self.seeds_enumerated,
        }


def _wht_int(hist: np.ndarray) -> np.ndarray:
    """Exact integer Walsh transform: out[s] = sum_v (-1)^popcount(s & v) hist[v]."""
    a = np.asarray(hist, dtype=np.int64).copy()
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        right = a[:, h:].copy()
        a[:, :h] = left + right
        a[:, h:] = left - right
        a = a.reshape(size)
        h *= 2
    return a


def audit_bias(params: BiasedSpaceParams, delta: float) -> BiasAuditReport:
    """Exhaustive bias audit over all 2^(2m) seeds.

    Builds the histogram of row outputs, Walsh-transforms it, and reads
    off every nonempty subset's XOR bias |Pr[parity=1] - 1/2|.  Passes
    iff the worst bias is at most delta/2.
    """
    n, f = params.n, params.field
    if n > MAX_AUDIT_N:
        raise CapacityError(f"exhaustive audit supports n <= {MAX_AUDIT_N}, got {n}")
    if 2 * f.m > MAX_AUDIT_SEED_BITS:
        raise CapacityError(f"exhaustive audit supports 2m <= {MAX_AUDIT_SEED_BITS}, got {2 * f.m}")

    size = 1 << f.m
    hist = np.zeros(1 << n, dtype=np.int64)
    for a in range(size):
        powers = []
        p = 1
        for _ in range(n):
            powers.append(p)
            p = f.mul(p, a)
        for b in range(size):
            v = 0
            for j, pw in enumerate(powers):
                v |= ((pw & b).bit_count() & 1) << j
            hist[v] += 1

    spectrum = _wht_int(hist)
    total = size * size
    biases = np.abs(spectrum[1:]).astype(np.float64) / (2.0 * total)
    worst = int(np.argmax(biases)) + 1
    max_bias = float(biases[worst - 1])
    return BiasAuditReport(
        n=n,
        m=f.m,
        delta=delta,
        max_bias=max_bias,
        worst_subset=worst,
        passed=max_bias <= delta / 2.0,
        seeds_enumerated=total,
    )
