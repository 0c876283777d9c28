import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import ring_matrices
from soficlab import entropy as ent
from soficlab.complexes import cayley_complex, ow_matrix
from soficlab.sofic import abelianization_chain, random_sofic_model
from soficlab.words import Presentation

F2 = Presentation.free(2)
Z2 = Presentation.parse("ab", ["abAB"])
GENUS2 = Presentation.parse("abcd", ["abABcdCD"])

LOG2 = math.log(2)


def test_log_count_exactness():
    lc = ent.LogCount(dim=7, p=3)
    assert lc.value == 7 * math.log(3)
    assert lc.normalized(14) == Fraction(1, 2)


def test_full_shift_entropy_is_components_logp():
    spec = ent.SubshiftSpec.full_shift(components=3, p=2)
    s = random_sofic_model(2, 10, seed=1)
    assert ent.fix_log_count(spec, s).dim == 30


def test_ow_kernel_entropy_dim_one():
    spec = ent.SubshiftSpec.kernel(ow_matrix(F2.alphabet), 2)
    for n in (8, 16):
        s = random_sofic_model(2, n, seed=n)
        assert ent.fix_log_count(spec, s).dim == 1


def test_top_coboundary_kernel_of_tree_is_everything():
    # the tree has no 2-cells, so ker d^2 = C^1 and entropy is 2 log 2 exactly
    c = cayley_complex(F2)
    spec = ent.SubshiftSpec.ker_coboundary(c, 2, 2)
    for n in (5, 9):
        s = random_sofic_model(2, n, seed=n)
        assert ent.fix_log_count(spec, s).dim == 2 * n


@settings(max_examples=30, deadline=None)
@given(ring_matrices())
def test_rank_nullity_conservation(m):
    # fix_log_count + image_log_count = (rows * N) log p for any matrix
    p = 3
    s = random_sofic_model(2, 6, seed=99)
    fix = ent.fix_log_count(ent.SubshiftSpec.kernel(m, p), s)
    image = ent.image_log_count(m, s, p)
    assert fix.dim + image.dim == m.rows * s.size


def test_entropy_sequence_tail():
    spec = ent.SubshiftSpec.full_shift(1, 2)
    chain = [random_sofic_model(2, n, seed=n) for n in (4, 8, 16, 32)]
    seq = ent.entropy_sequence(spec, chain, tail_window=2)
    assert all(r.normalized == 1 for r in seq.records)
    assert seq.tail_limsup == pytest.approx(LOG2)
    assert seq.tail_liminf == pytest.approx(LOG2)


def test_f2_defect_is_n_plus_one():
    c = cayley_complex(F2)
    for n in (8, 32):
        s = random_sofic_model(2, n, seed=n)
        rec = ent.yuzvinsky_defect(c, 1, s, 2)
        assert rec.dim == n + 1
        assert rec.value == pytest.approx((n + 1) / n * LOG2)
        assert rec.sofic_betti == pytest.approx((n + 1) / n)


def test_z2_defect_vanishes():
    c = cayley_complex(Z2)
    records = ent.defect_sequence(c, 1, abelianization_chain(Z2, 2, 3), 2)
    assert [r.dim for r in records] == [2, 2, 2]
    est = ent.sofic_betti(c, 1, abelianization_chain(Z2, 2, 3), 2, tail_window=1)
    assert est.estimate == pytest.approx(2 / 64)


def test_luck_sequence_matches_gf_for_torsion_free_cases():
    c = cayley_complex(F2)
    levels = [random_sofic_model(2, n, seed=n) for n in (8, 16)]
    lu = ent.luck_sequence(c, 1, levels)
    gf = ent.defect_sequence(c, 1, levels, 2)
    assert [r.q_dim for r in lu] == [r.dim for r in gf]
    assert all(r.certain for r in lu)


def test_cost_bounds_known_groups():
    fr = ent.cost_bounds_report("F3", 2)
    assert fr.beta1 == 2 and fr.lower == fr.upper == pytest.approx(3 * LOG2)
    zd = ent.cost_bounds_report("Z^2", 3)
    assert zd.beta1 == 0 and zd.lower == zd.upper == pytest.approx(math.log(3))
    sg = ent.cost_bounds_report("genus2", 2)
    assert sg.beta1 == 2 and sg.lower == pytest.approx(3 * LOG2)
    assert sg.upper == pytest.approx(3 * LOG2)


def test_cost_bounds_unknown_group():
    with pytest.raises(ent.UnknownGroup):
        ent.cost_bounds_report("mystery", 2)
    with pytest.raises(ent.UnknownGroup):
        ent.cost_bounds_report("genus1", 2)


def test_subshift_spec_validation():
    c = cayley_complex(F2)
    with pytest.raises(ValueError):
        ent.SubshiftSpec.ker_coboundary(c, 4, 2)  # beyond the complex entirely
    spec = ent.SubshiftSpec.ker_coboundary(c, 1, 2)
    assert spec.domain_components() == 1
