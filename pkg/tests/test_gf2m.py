import random

import pytest

from qinw.gf2m import (
    CapacityError,
    FieldParams,
    GfElement,
    field_new,
    gf_add,
    gf_mul,
    gf_pow,
    inner_prod_f2,
)


# --- independent schoolbook oracle: carry-less product, then long division ---

def poly_mul(a: int, b: int) -> int:
    out = 0
    shift = 0
    while b:
        if b & 1:
            out ^= a << shift
        b >>= 1
        shift += 1
    return out


def poly_mod(v: int, mod: int) -> int:
    dm = mod.bit_length() - 1
    while v and v.bit_length() - 1 >= dm:
        v ^= mod << (v.bit_length() - 1 - dm)
    return v


def oracle_mul(f: FieldParams, a: int, b: int) -> int:
    return poly_mod(poly_mul(a, b), f.modulus)


F4 = field_new(0)
F64 = field_new(1)
F18 = field_new(2)


def test_field_new_moduli():
    assert F4.m == 2 and F4.modulus == 0b111
    assert F64.m == 6 and F64.modulus == (1 << 6) | (1 << 3) | 1
    assert F18.m == 18 and F18.modulus == (1 << 18) | (1 << 9) | 1
    f54 = field_new(3)
    assert f54.m == 54 and f54.modulus == (1 << 54) | (1 << 27) | 1


def test_field_new_capacity_and_validation():
    with pytest.raises(CapacityError):
        field_new(4)
    with pytest.raises(ValueError):
        field_new(-1)
    with pytest.raises(ValueError):
        FieldParams(tower_index=1, m=4, modulus=0b10011)
    with pytest.raises(ValueError):
        FieldParams(tower_index=1, m=6, modulus=0b1000011)


@pytest.mark.parametrize("m", [2, 6, 18])
def test_modulus_is_irreducible(m):
    # brute-force factor search: no divisor of degree 1 .. m/2
    f = {2: F4, 6: F64, 18: F18}[m]
    for g in range(2, 1 << (m // 2 + 1)):
        if g.bit_length() >= 2:
            assert poly_mod(f.modulus, g) != 0, f"f_{f.tower_index} divisible by {g:#b}"


def test_add_examples():
    assert gf_add(F4.el(1), F4.el(1)).value == 0
    a = F64.el(0b101011)
    assert gf_add(a, F64.el(0)) == a
    assert gf_add(F4.el(2), F4.el(3)).value == 1


def test_mul_examples():
    assert gf_mul(F4.el(2), F4.el(2)).value == 3  # x * x = x + 1
    assert gf_mul(F4.el(2), F4.el(3)).value == 1  # x * (x + 1) = 1
    for v in range(4):
        assert gf_mul(F4.el(1), F4.el(v)).value == v


def test_mul_matches_schoolbook_oracle():
    for a in range(4):
        for b in range(4):
            assert gf_mul(F4.el(a), F4.el(b)).value == oracle_mul(F4, a, b)
    rng = random.Random(42)
    for _ in range(10_000):
        a, b = rng.randrange(64), rng.randrange(64)
        assert F64.mul(a, b) == oracle_mul(F64, a, b)


def test_pow_examples():
    assert gf_pow(F64.el(0b10110), 0).value == 1
    assert gf_pow(F4.el(0), 0).value == 1  # 0^0 = 1 by convention
    assert gf_pow(F4.el(2), 3).value == 1
    assert gf_pow(F4.el(3), 2).value == 2  # (x+1)^2 = x^2 + 1 = x


def test_pow_matches_iterated_mul():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.randrange(1 << 18)
        k = rng.randrange(40)
        acc = 1
        for _ in range(k):
            acc = F18.mul(acc, a)
        assert F18.pow(a, k) == acc
    with pytest.raises(ValueError):
        gf_pow(F4.el(2), -1)


@pytest.mark.parametrize("f,samples", [(F4, None), (F64, 2000), (F18, 2000)])
def test_field_axioms(f, samples):
    if samples is None:
        triples = [(a, b, c) for a in range(4) for b in range(4) for c in range(4)]
    else:
        rng = random.Random(f.m)
        triples = [tuple(rng.randrange(1 << f.m) for _ in range(3)) for _ in range(samples)]
    for a, b, c in triples:
        assert a ^ b == b ^ a
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


@pytest.mark.parametrize("f,samples", [(F4, None), (F64, 1000)])
def test_multiplicative_group_order_and_inverse(f, samples):
    if samples is None:
        elems = range(1, 1 << f.m)
    else:
        rng = random.Random(13)
        elems = [rng.randrange(1, 1 << f.m) for _ in range(samples)]
    order = (1 << f.m) - 1
    for a in elems:
        assert f.pow(a, order) == 1
        assert f.mul(a, f.pow(a, order - 1)) == 1


def test_inner_prod_examples():
    assert inner_prod_f2(F4.el(0b11), F4.el(0b11)) == 0
    assert inner_prod_f2(F4.el(0b10), F4.el(0b01)) == 0
    assert inner_prod_f2(F4.el(0b11), F4.el(0b01)) == 1


def test_field_mismatch_rejected():
    with pytest.raises(ValueError, match="mismatch"):
        gf_add(F4.el(1), F64.el(1))
    with pytest.raises(ValueError, match="mismatch"):
        gf_mul(F4.el(1), F64.el(1))
    with pytest.raises(ValueError, match="mismatch"):
        inner_prod_f2(F4.el(1), F64.el(1))


def test_element_range_checked():
    with pytest.raises(ValueError):
        GfElement(F4, 4)
    with pytest.raises(ValueError):
        GfElement(F4, -1)
