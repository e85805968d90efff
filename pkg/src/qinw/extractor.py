"""Seeded XOR extractor: Ext(x, (alpha, beta)) = row(alpha, beta) XOR x.

For every fixed seed the map is an XOR with a constant row of the
small-bias space, hence a self-inverse bijection on {0,1}^n -- the
property that makes the generator's tree walk reversible.

Parameter selection: the space over {0,1}^n with field size 2^m is
(n/2^m)-biased, and a delta-biased XOR extractor extracts against t bits
of conditional collision entropy with error delta * 2^((n-t)/2).
Solving delta * 2^((n-t)/2) <= eps for the field size gives

    m >= (n - t)/2 + log2(n) + log2(1/eps),

rounded up to the next admissible tower size m = 2 * 3^j.  The error
formula is exact once delta = n/2^m is plugged in, so no slack constant
is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .epsbias import BiasedSpaceParams, ExtSeed, biased_vector
from .gf2m import MAX_TOWER_INDEX, CapacityError, FieldParams, GfElement, field_new


@dataclass(frozen=True)
class ExtParams:
    """Extractor shape: n-bit input/output, d = 2m seed bits, target (t, eps)."""

    n: int
    d: int
    field: FieldParams
    t: int
    eps: float | None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.d != 2 * self.field.m:
            raise ValueError(f"seed length d={self.d} must equal 2m={2 * self.field.m}")
        if not 0 <= self.t <= self.n:
            raise ValueError(f"entropy threshold t={self.t} out of range [0, {self.n}]")

    @property
    def space(self) -> BiasedSpaceParams:
        return BiasedSpaceParams(self.n, self.field)


@lru_cache(maxsize=1 << 16)
def _arow(field: FieldParams, n: int, alpha: int, beta: int) -> int:
    """Cached n-coordinate row of the small-bias space."""
    return biased_vector(BiasedSpaceParams(n, field), ExtSeed(GfElement(field, alpha), GfElement(field, beta)))


def ext_seed_unpack(params: ExtParams, bits: int) -> ExtSeed:
    """Split d packed seed bits into (alpha, beta): alpha is bits [0, m),
    beta is bits [m, 2m), both little-endian."""
    if not 0 <= bits < 1 << params.d:
        raise ValueError(f"seed {bits:#x} out of range for d={params.d}")
    f = params.field
    return ExtSeed(f.el(bits & f.mask), f.el(bits >> f.m))


def ext_seed_pack(params: ExtParams, seed: ExtSeed) -> int:
    """Inverse of ext_seed_unpack."""
    if seed.alpha.field != params.field:
        raise ValueError("seed from the wrong field")
    return seed.alpha.value | (seed.beta.value << params.field.m)


def ext_apply(params: ExtParams, x: int, seed: ExtSeed | int) -> int:
    """row(seed) XOR x.  Accepts a packed int seed or an ExtSeed."""
    if isinstance(seed, int):
        seed = ext_seed_unpack(params, seed)
    elif seed.alpha.field != params.field:
        raise ValueError("seed from the wrong field")
    if not 0 <= x < 1 << params.n:
        raise ValueError(f"input {x:#x} out of range for n={params.n}")
    return _arow(params.field, params.n, seed.alpha.value, seed.beta.value) ^ x


def ext_params_for(n: int, t: int, eps: float) -> ExtParams:
    """Smallest admissible field such that the extractor is a (t, eps)
    weak extractor against quantum side information."""
    if not 0 <= t <= n:
        raise ValueError(f"t={t} out of range [0, {n}]")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    # need 2^m >= n * 2^((n-t)/2) / eps
    need = n * 2.0 ** ((n - t) / 2.0) / eps
    for j in range(MAX_TOWER_INDEX + 1):
        m = 2 * 3**j
        if 2.0**m >= need:
            return ExtParams(n=n, d=2 * m, field=field_new(j), t=t, eps=eps)
    raise CapacityError(
        f"(n={n}, t={t}, eps={eps}) needs a field beyond m={2 * 3**MAX_TOWER_INDEX}"
    )
