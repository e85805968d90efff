import pytest

from qinw.epsbias import (
    BiasedSpaceParams,
    ExtSeed,
    audit_bias,
    biased_coord,
    biased_vector,
)
from qinw.gf2m import CapacityError, field_new, gf_pow, inner_prod_f2

F4 = field_new(0)
F64 = field_new(1)


def all_seeds(field):
    size = 1 << field.m
    for a in range(size):
        for b in range(size):
            yield ExtSeed(field.el(a), field.el(b))


def test_coord_examples():
    p = BiasedSpaceParams(4, F4)
    # coordinate 0 is <1, beta> = bit 0 of beta
    assert biased_coord(p, ExtSeed(F4.el(2), F4.el(0b01)), 0) == 1
    # alpha = 0 kills every later coordinate
    for j in (1, 2, 3):
        assert biased_coord(p, ExtSeed(F4.el(0), F4.el(3)), j) == 0
    # alpha=x, beta=x+1, j=2: alpha^2 = x+1, parity((x+1) & (x+1)) = 0
    assert biased_coord(p, ExtSeed(F4.el(2), F4.el(3)), 2) == 0


def test_coord_matches_pow_inner_product_composition():
    p = BiasedSpaceParams(6, F64)
    seed = ExtSeed(F64.el(0b10110), F64.el(0b01101))
    for j in range(6):
        assert biased_coord(p, seed, j) == inner_prod_f2(gf_pow(seed.alpha, j), seed.beta)


def test_coord_range_checked():
    p = BiasedSpaceParams(4, F4)
    with pytest.raises(ValueError):
        biased_coord(p, ExtSeed(F4.el(1), F4.el(1)), 4)
    with pytest.raises(ValueError):
        biased_coord(p, ExtSeed(F4.el(1), F4.el(1)), -1)


def test_vector_examples():
    p = BiasedSpaceParams(4, F4)
    assert biased_vector(p, ExtSeed(F4.el(2), F4.el(0))) == 0
    # alpha = 0, beta = 1: only coordinate 0 survives
    assert biased_vector(p, ExtSeed(F4.el(0), F4.el(1))) == 0b0001
    # alpha = x, beta = x+1: coordinates (1, 1, 0, 1)
    assert biased_vector(p, ExtSeed(F4.el(2), F4.el(3))) == 0b1011


def test_vector_agrees_with_coord_exhaustively():
    p = BiasedSpaceParams(16, F4)
    for seed in all_seeds(F4):
        v = biased_vector(p, seed)
        for j in range(16):
            assert (v >> j) & 1 == biased_coord(p, seed, j)


def test_beta_linearity_exhaustive_f4():
    p = BiasedSpaceParams(6, F4)
    for a in range(4):
        for b1 in range(4):
            for b2 in range(4):
                v1 = biased_vector(p, ExtSeed(F4.el(a), F4.el(b1)))
                v2 = biased_vector(p, ExtSeed(F4.el(a), F4.el(b2)))
                v12 = biased_vector(p, ExtSeed(F4.el(a), F4.el(b1 ^ b2)))
                assert v12 == v1 ^ v2


def brute_force_bias(p: BiasedSpaceParams, subset: int) -> float:
    """Direct per-subset oracle: enumerate all seeds and count parities."""
    ones = 0
    total = 0
    for seed in all_seeds(p.field):
        v = biased_vector(p, seed)
        ones += (v & subset).bit_count() & 1
        total += 1
    return abs(ones / total - 0.5)


def test_audit_matches_brute_force_small():
    p = BiasedSpaceParams(4, F4)
    report = audit_bias(p, 1.0)
    worst = max(range(1, 16), key=lambda s: brute_force_bias(p, s))
    assert report.max_bias == pytest.approx(brute_force_bias(p, worst), abs=0)
    assert brute_force_bias(p, report.worst_subset) == report.max_bias


def test_audit_single_coordinate_is_exactly_balanced():
    report = audit_bias(BiasedSpaceParams(1, F4), 0.5)
    assert report.max_bias == 0.0
    assert report.passed
    assert report.seeds_enumerated == 16


@pytest.mark.parametrize("n,field", [(4, F4), (8, F64), (16, F64)])
def test_audit_passes_at_guaranteed_level(n, field):
    delta = n / 2.0**field.m
    report = audit_bias(BiasedSpaceParams(n, field), delta)
    assert report.passed, f"max bias {report.max_bias} above {delta / 2}"
    assert report.seeds_enumerated == 1 << (2 * field.m)


def test_audit_capacity_errors():
    with pytest.raises(CapacityError):
        audit_bias(BiasedSpaceParams(25, F4), 1.0)
    with pytest.raises(CapacityError):
        audit_bias(BiasedSpaceParams(4, field_new(2)), 1.0)


def test_report_dict_keys():
    d = audit_bias(BiasedSpaceParams(4, F4), 1.0).to_dict()
    assert set(d) == {"n", "m", "delta", "max_bias", "worst_subset", "pass", "seeds_enumerated"}


def test_seed_field_mismatch():
    with pytest.raises(ValueError):
        ExtSeed(F4.el(1), F64.el(1))
