"""Arithmetic in the binary fields GF(2^m) for m = 2 * 3^i.

The modulus for tower index i is the trinomial

    f_i(x) = x^(2*3^i) + x^(3^i) + 1,

irreducible over GF(2) for every i >= 0, so F_2[x]/<f_i(x)> is a field
with 2^m elements, m = 2 * 3^i.  Supported sizes are m in {2, 6, 18, 54};
the element width budget is a single 54-bit word and larger towers are
rejected rather than emulated with multi-word arithmetic.

Elements are m-bit ints in little-endian coefficient order: bit j holds
the coefficient of x^j, so the multiplicative identity is 1.  Reduction
exploits the sparse modulus: x^m = x^(m/2) + 1, hence one fold is two
shift-XORs and any product of two elements needs at most two folds.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_TOWER_INDEX = 3
MAX_ELEMENT_BITS = 2 * 3**MAX_TOWER_INDEX  # 54


class CapacityError(ValueError):
    """Parameters exceed the implementation's size budget."""


@dataclass(frozen=True)
class FieldParams:
    """The field GF(2^m) with m = 2 * 3^tower_index and modulus f_i."""

    tower_index: int
    m: int
    modulus: int

    def __post_init__(self) -> None:
        if self.tower_index < 0:
            raise ValueError("tower index must be non-negative")
        k = 3**self.tower_index
        if self.m != 2 * k:
            raise ValueError(f"m must equal 2 * 3^i; got m={self.m} for i={self.tower_index}")
        if self.modulus != (1 << self.m) | (1 << k) | 1:
            raise ValueError("modulus must be x^m + x^(m/2) + 1")

    @property
    def mask(self) -> int:
        return (1 << self.m) - 1

    def el(self, value: int) -> "GfElement":
        return GfElement(self, value)

    def reduce(self, v: int) -> int:
        """Reduce a polynomial of degree < 2m modulo x^m + x^(m/2) + 1."""
        half = self.m // 2
        while v >> self.m:
            hi = v >> self.m
            v = (v & self.mask) ^ hi ^ (hi << half)
        return v

    def mul(self, a: int, b: int) -> int:
        """Carry-less product of two reduced elements, then reduce."""
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            b >>= 1
        return self.reduce(acc)

    def pow(self, a: int, k: int) -> int:
        """a^k by repeated squaring; the empty product is 1 (so 0^0 = 1)."""
        if k < 0:
            raise ValueError("exponent must be non-negative")
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r


@dataclass(frozen=True)
class GfElement:
    """A field element; bit j of `value` is the coefficient of x^j."""

    field: FieldParams
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= self.field.mask:
            raise ValueError(f"value {self.value:#x} out of range for m={self.field.m}")


def field_new(i: int) -> FieldParams:
    """Construct GF(2^(2*3^i)).  Raises CapacityError beyond m = 54."""
    if i < 0:
        raise ValueError("tower index must be non-negative")
    if i > MAX_TOWER_INDEX:
        raise CapacityError(
            f"tower index {i} needs {2 * 3**i}-bit elements; budget is {MAX_ELEMENT_BITS}"
        )
    k = 3**i
    return FieldParams(tower_index=i, m=2 * k, modulus=(1 << (2 * k)) | (1 << k) | 1)


def _same_field(a: GfElement, b: GfElement) -> FieldParams:
    if a.field != b.field:
        raise ValueError(f"field mismatch: m={a.field.m} vs m={b.field.m}")
    return a.field


def gf_add(a: GfElement, b: GfElement) -> GfElement:
    """Characteristic-two addition: coefficient-wise XOR."""
    f = _same_field(a, b)
    return GfElement(f, a.value ^ b.value)


def gf_mul(a: GfElement, b: GfElement) -> GfElement:
    """Polynomial product reduced modulo the field trinomial; exact."""
    f = _same_field(a, b)
    return GfElement(f, f.mul(a.value, b.value))


def gf_pow(a: GfElement, k: int) -> GfElement:
    """a^k via square-and-multiply.  a^0 = 1 for every a, including 0."""
    return GfElement(a.field, a.field.pow(a.value, k))


def inner_prod_f2(a: GfElement, b: GfElement) -> int:
    """GF(2) inner product of two coefficient vectors: parity of a AND b."""
    _same_field(a, b)
    return (a.value & b.value).bit_count() & 1
