import numpy as np
import pytest
from hypothesis import given, settings

from conftest import ring_matrices
from soficlab.complexes import (
    cayley_complex,
    ow_matrix,
    quotient_betti,
    realize,
    sigma_matrix,
    sigma_matrix_int,
)
from soficlab.fflinalg import rank_gf
from soficlab.sofic import (
    NotHomomorphism,
    abelianization_chain,
    random_sofic_model,
)
from soficlab.words import (
    GroupRingElement,
    GroupRingMatrix,
    Presentation,
    generator,
)

F2 = Presentation.free(2)
Z2 = Presentation.parse("ab", ["abAB"])
GENUS2 = Presentation.parse("abcd", ["abABcdCD"])


def _convolve_brute(m, s, vec_blocks, p):
    """Direct evaluation of the right-convolution action on a block vector:
    out[j][delta] = sum_i sum_h vec[i][sigma(h)(delta)] * coeff mod p."""
    n = s.size
    out = [np.zeros(n, dtype=np.int64) for _ in range(m.cols)]
    for i in range(m.rows):
        for j in range(m.cols):
            for h, coeff in m.entries[i][j].support.items():
                perm = s.sigma_of_word(h)
                out[j] = (out[j] + coeff * vec_blocks[i][perm]) % p
    return out


@settings(max_examples=25, deadline=None)
@given(ring_matrices())
def test_sigma_matrix_matches_direct_convolution(m):
    s = random_sofic_model(2, 7, seed=42)
    p = 5
    realized = sigma_matrix(m, s, p).to_dense()
    rng = np.random.default_rng(0)
    vec_blocks = [rng.integers(0, p, size=7) for _ in range(m.rows)]
    flat = np.concatenate(vec_blocks)
    expected = np.concatenate(_convolve_brute(m, s, vec_blocks, p))
    assert np.array_equal((realized @ flat) % p, expected)


def test_ow_matrix_shape_and_entries():
    m = ow_matrix(F2.alphabet)
    assert (m.rows, m.cols) == (1, 2)
    for j in range(2):
        assert m.entries[0][j] == GroupRingElement.one() - GroupRingElement.of(
            generator(j, -1)
        )


def test_ow_kernel_is_constants():
    m = ow_matrix(F2.alphabet)
    for n in (4, 9, 16):
        s = random_sofic_model(2, n, seed=n)
        res = rank_gf(sigma_matrix(m, s, 2))
        assert res.kernel_dim == 1  # constants only: Schreier graph connected
        assert res.rank == n - 1


def test_cayley_complex_dimensions():
    assert cayley_complex(F2).orbit_counts == [1, 2, 0]
    assert cayley_complex(Z2).orbit_counts == [1, 2, 1]
    assert cayley_complex(GENUS2).orbit_counts == [1, 4, 1]


def test_composite_zero_all_builtin_complexes():
    cases = [
        (Z2, abelianization_chain(Z2, 2, 2)),
        (GENUS2, abelianization_chain(GENUS2, 2, 1)),
        (F2, [random_sofic_model(2, 12, seed=1)]),
    ]
    for pres, levels in cases:
        c = cayley_complex(pres)
        for s in levels:
            for p in (2, 3):
                realize(c, s, p, check_composite=True)  # raises on failure


def test_torus_cohomology_dimensions():
    c = cayley_complex(Z2)
    for s in abelianization_chain(Z2, 2, 2):
        realized = realize(c, s, 2)
        n = s.size
        h0 = realized.kernel_dim_of(0, c.orbit_counts)
        h1 = realized.kernel_dim_of(1, c.orbit_counts) - realized.rank_into(1)
        h2 = realized.kernel_dim_of(2, c.orbit_counts) - realized.rank_into(2)
        assert (h0, h1, h2) == (1, 2, 1)


def test_tree_cohomology_dimensions():
    c = cayley_complex(F2)
    for n in (6, 10):
        s = random_sofic_model(2, n, seed=n)
        realized = realize(c, s, 2)
        h0 = realized.kernel_dim_of(0, c.orbit_counts)
        h1 = realized.kernel_dim_of(1, c.orbit_counts) - realized.rank_into(1)
        assert (h0, h1) == (1, n + 1)


def test_genus2_first_betti():
    c = cayley_complex(GENUS2)
    s = abelianization_chain(GENUS2, 2, 1)[0]
    n = s.size
    qb = quotient_betti(c, s, 1, 2)
    assert qb.gf_dim == 2 * n + 2
    assert qb.q_dim == 2 * n + 2
    assert qb.q_certain


def test_quotient_betti_gf_equals_q_in_torsion_free_cases():
    for pres, s in [
        (Z2, abelianization_chain(Z2, 2, 2)[-1]),
        (F2, random_sofic_model(2, 20, seed=2)),
    ]:
        c = cayley_complex(pres)
        qb = quotient_betti(c, s, 1, 2)
        assert qb.gf_dim == qb.q_dim


def test_quotient_betti_requires_homomorphism():
    c = cayley_complex(Z2)
    s = random_sofic_model(2, 8, seed=3)
    s.is_homomorphism = False
    with pytest.raises(NotHomomorphism):
        quotient_betti(c, s, 1, 2)


def test_sigma_matrix_int_identity_word():
    one = GroupRingMatrix([[GroupRingElement.one()]])
    s = random_sofic_model(2, 5, seed=0)
    assert np.array_equal(sigma_matrix_int(one, s).to_dense(), np.eye(5, dtype=np.int64))
