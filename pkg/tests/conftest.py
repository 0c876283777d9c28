import numpy as np
import pytest
from hypothesis import strategies as st

from soficlab.words import (
    GroupRingElement,
    GroupRingMatrix,
    Word,
    free_reduce,
)


def raw_letters(rank: int = 2, max_len: int = 12):
    return st.lists(
        st.tuples(st.integers(0, rank - 1), st.sampled_from((1, -1))),
        max_size=max_len,
    )


def words(rank: int = 2, max_len: int = 12):
    return raw_letters(rank, max_len).map(free_reduce)


def ring_elements(rank: int = 2, max_support: int = 5, max_word_len: int = 4):
    return st.dictionaries(
        words(rank, max_word_len),
        st.integers(-3, 3),
        max_size=max_support,
    ).map(GroupRingElement)


def ring_matrices(rank: int = 2, max_dim: int = 2):
    def build(shape_and_flat):
        (r, c), flat = shape_and_flat
        return GroupRingMatrix([[flat[i * c + j] for j in range(c)] for i in range(r)])

    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(
        lambda rc: st.tuples(
            st.just(rc),
            st.lists(
                ring_elements(rank), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]
            ),
        ).map(build)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
