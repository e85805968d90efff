"""The INW pseudorandom generator instantiated with XOR extractors.

Level i >= 1 uses an extractor Ext_i : {0,1}^(iN) x {0,1}^N -> {0,1}^(iN)
built on the small-bias space with field size m = N/2 (so the seed of
every level is one N-bit block).  The generator doubles its output per
level:

    G_0(x) = x_1
    G_i(x, s_1..s_i) = G_{i-1}(x, s_1..s_{i-1}) . G_{i-1}(Ext_i(x . s_1 .. s_{i-1}; s_i))

where "." is concatenation.  G_M stretches (M+1) * N seed bits to 2^M
output bits, truncated to the first T.

Three evaluation modes, all bit-exact equal:

  * inw_expand -- literal recursion, whole output at once;
  * inw_coord  -- one output bit via a root-to-leaf walk over the
                  recursion tree;
  * inw_stream -- left-to-right depth-first traversal of the tree that
                  keeps a single node label, amortizing extractor work
                  across adjacent leaves.

The recursion tree: the root (height M) carries the seed blocks
(x, s_1..s_M); a left child copies its parent's label; the right child
of a height-h node applies Ext_h with seed block s_h to the first h
blocks.  Every such move is an involution on the label (XOR with a row),
so the traversal needs no stack of labels and is fully reversible.

Bit vectors are ints with coordinate j stored at bit j; the "first bit"
of a block is its bit 0.  Coin/output index j is 0-based; its M-bit
big-endian expansion is the root-to-leaf path (leftmost leaf = j = 0).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .extractor import ExtParams, _arow
from .gf2m import MAX_TOWER_INDEX, CapacityError, FieldParams, field_new


class Move(enum.Enum):
    LEFT_CHILD = "left-child"
    RIGHT_CHILD = "right-child"
    PARENT_FROM_LEFT = "parent-from-left"
    PARENT_FROM_RIGHT = "parent-from-right"


_INVERSE_MOVE = {
    Move.LEFT_CHILD: Move.PARENT_FROM_LEFT,
    Move.PARENT_FROM_LEFT: Move.LEFT_CHILD,
    Move.RIGHT_CHILD: Move.PARENT_FROM_RIGHT,
    Move.PARENT_FROM_RIGHT: Move.RIGHT_CHILD,
}


def inverse_move(move: Move) -> Move:
    return _INVERSE_MOVE[move]


@dataclass(frozen=True)
class InwParams:
    """Generator configuration.

    S: space bound of the programs to fool; T: output length;
    eps: fooling error target (None for raw desk-scale parameters);
    N: block length; M: tree depth; one level extractor per i in [1, M]
    with n = i*N, d = N, t = i*N - S and per-level error eps / T^2.
    """

    S: int
    T: int
    eps: float | None
    N: int
    M: int
    field: FieldParams
    levels: tuple[ExtParams, ...]

    @property
    def seed_bits(self) -> int:
        return (self.M + 1) * self.N

    def split_seed(self, bits: int) -> tuple[int, ...]:
        if not 0 <= bits < 1 << self.seed_bits:
            raise ValueError(f"seed {bits:#x} out of range for {self.seed_bits} bits")
        bm = (1 << self.N) - 1
        return tuple((bits >> (k * self.N)) & bm for k in range(self.M + 1))

    def join_blocks(self, blocks) -> int:
        out = 0
        for k, blk in enumerate(blocks):
            out |= blk << (k * self.N)
        return out


@dataclass(frozen=True)
class InwSeed:
    """Structured seed view: blocks (x, s_1, ..., s_M), each N bits."""

    blocks: tuple[int, ...]

    @classmethod
    def from_int(cls, params: InwParams, bits: int) -> "InwSeed":
        return cls(params.split_seed(bits))

    def to_int(self, params: InwParams) -> int:
        return params.join_blocks(self.blocks)


@dataclass(frozen=True, slots=True)
class Label:
    """A tree node's label: the block vector plus the node height
    (root = M, leaves = 0)."""

    blocks: tuple[int, ...]
    height: int


def _levels_for(field: FieldParams, N: int, M: int, S: int, level_eps: float | None) -> tuple[ExtParams, ...]:
    return tuple(
        ExtParams(n=i * N, d=N, field=field, t=max(0, i * N - S), eps=level_eps)
        for i in range(1, M + 1)
    )


def inw_params(S: int, T: int, eps: float) -> InwParams:
    """Pick the smallest admissible block length N for (S, T, eps).

    Every level i must satisfy the extractor requirement at (n = iN,
    t = iN - S, per-level error eps/T^2), i.e. with m = N/2:

        m >= S/2 + log2(i*N) + 2*log2(T) + log2(1/eps)

    which is worst at i = M.  eps may exceed 1 (the guarantee is then
    vacuous but the machinery is still useful at desk scale).
    """
    if T < 1 or S < 1:
        raise ValueError("T and S must be at least 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    M = (T - 1).bit_length()  # ceil(log2 T)
    if S < math.log2(T):
        warnings.warn(
            f"S={S} is below log2(T)={math.log2(T):.2f}; the fooling guarantee "
            "assumes S >= log2(T)",
            RuntimeWarning,
            stacklevel=2,
        )
    for j in range(MAX_TOWER_INDEX + 1):
        m = 2 * 3**j
        N = 2 * m
        if M == 0 or m >= S / 2 + math.log2(M * N) + 2 * math.log2(T) + math.log2(1 / eps):
            field = field_new(j)
            return InwParams(S=S, T=T, eps=eps, N=N, M=M, field=field,
                             levels=_levels_for(field, N, M, S, eps / T**2))
    raise CapacityError(f"no admissible block length within field budget for (S={S}, T={T}, eps={eps})")


def inw_params_raw(N: int, M: int, S: int) -> InwParams:
    """Desk-scale override: build the level structure for given (N, M)
    without the admissibility inequality.  N must be 2 * (2 * 3^j)."""
    if M < 0 or S < 1:
        raise ValueError("M must be >= 0 and S >= 1")
    if N % 2:
        raise ValueError(f"N={N} is not of the form 2 * (2 * 3^j)")
    m = N // 2
    for j in range(MAX_TOWER_INDEX + 1):
        if m == 2 * 3**j:
            field = field_new(j)
            break
    else:
        raise ValueError(f"N={N} is not of the form 2 * (2 * 3^j)")
    return InwParams(S=S, T=1 << M, eps=None, N=N, M=M, field=field,
                     levels=_levels_for(field, N, M, S, None))


def _seed_blocks(params: InwParams, seed) -> tuple[int, ...]:
    if isinstance(seed, InwSeed):
        return seed.blocks
    return params.split_seed(seed)


def _ext_blocks(params: InwParams, blocks: tuple[int, ...], i: int) -> tuple[int, ...]:
    """Apply Ext_i with seed block s_i to blocks 0..i-1, in place of them."""
    N = params.N
    f = params.field
    z = 0
    for k in range(i):
        z |= blocks[k] << (k * N)
    s = blocks[i]
    z ^= _arow(f, i * N, s & f.mask, s >> f.m)
    bm = (1 << N) - 1
    return tuple((z >> (k * N)) & bm for k in range(i)) + blocks[i:]


def inw_eval_recursive(params: InwParams, seed, i: int) -> int:
    """Evaluate the level-i generator literally by its recursion; returns
    2^i output bits."""
    if not 0 <= i <= params.M:
        raise ValueError(f"level {i} out of range [0, {params.M}]")
    return _eval(params, _seed_blocks(params, seed), i)


def _eval(params: InwParams, blocks: tuple[int, ...], i: int) -> int:
    if i == 0:
        return blocks[0] & 1
    left = _eval(params, blocks, i - 1)
    right = _eval(params, _ext_blocks(params, blocks, i), i - 1)
    return left | (right << (1 << (i - 1)))


def inw_expand(params: InwParams, seed) -> int:
    """Full output: level-M evaluation truncated to the first T bits."""
    return _eval(params, _seed_blocks(params, seed), params.M) & ((1 << params.T) - 1)


def root_label(params: InwParams, seed) -> Label:
    return Label(_seed_blocks(params, seed), params.M)


def label_step(params: InwParams, label: Label, move: Move) -> Label:
    """One tree move.  Left edges copy the block vector; right edges
    apply Ext_h at the parent height h, which is its own inverse, so
    RIGHT_CHILD and PARENT_FROM_RIGHT are the same block map."""
    h = label.height
    if move is Move.LEFT_CHILD:
        if h < 1:
            raise ValueError("already at a leaf")
        return Label(label.blocks, h - 1)
    if move is Move.RIGHT_CHILD:
        if h < 1:
            raise ValueError("already at a leaf")
        return Label(_ext_blocks(params, label.blocks, h), h - 1)
    if move is Move.PARENT_FROM_LEFT:
        if h >= params.M:
            raise ValueError("already at the root")
        return Label(label.blocks, h + 1)
    if move is Move.PARENT_FROM_RIGHT:
        if h >= params.M:
            raise ValueError("already at the root")
        return Label(_ext_blocks(params, label.blocks, h + 1), h + 1)
    raise ValueError(f"unknown move {move!r}")


def inw_coord(params: InwParams, seed, j: int) -> int:
    """Output bit j via one root-to-leaf walk: the M-bit big-endian
    expansion of j picks left (0) or right (1) at each height."""
    if not 0 <= j < params.T:
        raise ValueError(f"coordinate {j} out of range [0, {params.T})")
    label = root_label(params, seed)
    for h in range(params.M - 1, -1, -1):
        move = Move.RIGHT_CHILD if (j >> h) & 1 else Move.LEFT_CHILD
        label = label_step(params, label, move)
    return label.blocks[0] & 1


def dfs_moves(M: int) -> list[Move]:
    """Move sequence of a full left-to-right depth-first traversal from
    the root to the rightmost leaf, visiting leaves in output order."""
    moves = [Move.LEFT_CHILD] * M
    for j in range(1, 1 << M):
        p = (j & -j).bit_length() - 1  # trailing zeros of j = trailing ones of j-1
        moves.extend([Move.PARENT_FROM_RIGHT] * p)
        moves.append(Move.PARENT_FROM_LEFT)
        moves.append(Move.RIGHT_CHILD)
        moves.extend([Move.LEFT_CHILD] * p)
    return moves


def inw_stream(params: InwParams, seed):
    """Yield the T output bits left to right, maintaining one label.

    Between leaves j-1 and j the walk climbs through the deepest common
    ancestor (p = number of trailing ones of j-1 right-edges undone, one
    left edge undone) and descends into the next subtree.  No label is
    ever stored besides the current one.
    """
    label = root_label(params, seed)
    for _ in range(params.M):
        label = label_step(params, label, Move.LEFT_CHILD)
    yield label.blocks[0] & 1
    emitted = 1
    j = 0
    while emitted < params.T:
        j += 1
        p = (j & -j).bit_length() - 1
        for _ in range(p):
            label = label_step(params, label, Move.PARENT_FROM_RIGHT)
        label = label_step(params, label, Move.PARENT_FROM_LEFT)
        label = label_step(params, label, Move.RIGHT_CHILD)
        for _ in range(p):
            label = label_step(params, label, Move.LEFT_CHILD)
        yield label.blocks[0] & 1
        emitted += 1


def collect_stream(params: InwParams, seed) -> int:
    """inw_stream packed into an int, coordinate j at bit j."""
    out = 0
    for j, bit in enumerate(inw_stream(params, seed)):
        out |= bit << j
    return out


@dataclass
class CostModel:
    """Symbolic operation-count estimate for the streaming traversal.

    Per visit of a height-i vertex the extractor work is N^2 * i * log2(N)^2
    (one row of i*N coordinates, each a field multiplication of ~N^2 bit
    operations, polylog taken as log2^2); the traversal makes at most
    min(4 * 2^(M-i), 4T / 2^i) visits at height i.  Space is one label
    plus the path word.
    """

    seed_bits: int
    space_bits: int
    step_costs: list
    total_ops: float
    coord_ops: float

    def to_dict(self) -> dict:
        return {
            "seed_bits": self.seed_bits,
            "space_bits": self.space_bits,
            "step_costs": self.step_costs,
            "total_ops": self.total_ops,
            "coord_ops": self.coord_ops,
        }


def cost_model(params: InwParams) -> CostModel:
    N, M, T = params.N, params.M, params.T
    logsq = math.log2(N) ** 2
    steps = []
    total = float(T)  # one emit per output bit
    for i in range(1, M + 1):
        visits = min(4 * (1 << (M - i)), max(1, (4 * T) >> i))
        per_visit = (N**2) * i * logsq
        steps.append({"height": i, "visits": visits, "per_visit_ops": per_visit})
        total += visits * per_visit
    coord = 1.0 + sum((N**2) * i * logsq for i in range(1, M + 1))
    return CostModel(
        seed_bits=params.seed_bits,
        space_bits=params.seed_bits + M,
        step_costs=steps,
        total_ops=total,
        coord_ops=coord,
    )
