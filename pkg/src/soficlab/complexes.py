"""Free cocompact G-complexes as orbit data: group-ring coboundary matrices,
their realization at a sofic level, and quotient-complex Betti numbers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fflinalg
from .fflinalg import FFMatrix, RankResult, rank_gf, rank_q
from .sofic import NotHomomorphism, SoficApproximation, abelianization_chain
from .words import (
    GroupRingElement,
    GroupRingMatrix,
    Presentation,
    Word,
    fox_derivative,
    generator,
)


class SignConventionError(Exception):
    """Neither orientation convention for the relator coboundary gives
    composite zero at the validation level."""


@dataclass
class IntMatrix:
    """Integer matrix in coordinate form (the pre-reduction realization)."""

    rows: int
    cols: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        np.add.at(dense, (self.row_idx, self.col_idx), self.values)
        return dense

    def mod(self, p: int) -> FFMatrix:
        return FFMatrix(
            self.rows,
            self.cols,
            p,
            zip(self.row_idx.tolist(), self.col_idx.tolist(), self.values.tolist()),
        )


def sigma_matrix_int(m: GroupRingMatrix | None, s: SoficApproximation, cols_orbits: int = 0) -> IntMatrix:
    """Realize right-convolution by ``m`` at level ``s`` over the integers.

    The output coordinate (delta, j) reads input coordinate (sigma(h)(delta), i)
    with weight m[i][j]^h; coordinate (delta, j) is flattened as j*N + delta.
    ``m = None`` denotes a map into a zero space (no target orbits).
    """
    n = s.size
    if m is None:
        return IntMatrix(0, cols_orbits * n, _empty(), _empty(), _empty())
    rows_out: list[np.ndarray] = []
    cols_out: list[np.ndarray] = []
    vals_out: list[np.ndarray] = []
    delta = np.arange(n, dtype=np.int64)
    perm_cache: dict[Word, np.ndarray] = {}
    for i in range(m.rows):
        for j in range(m.cols):
            for h, coef in m.entries[i][j].support.items():
                perm = perm_cache.get(h)
                if perm is None:
                    perm = s.sigma_of_word(h)
                    perm_cache[h] = perm
                rows_out.append(j * n + delta)
                cols_out.append(i * n + perm)
                vals_out.append(np.full(n, coef, dtype=np.int64))
    if not rows_out:
        return IntMatrix(m.cols * n, m.rows * n, _empty(), _empty(), _empty())
    return IntMatrix(
        m.cols * n,
        m.rows * n,
        np.concatenate(rows_out),
        np.concatenate(cols_out),
        np.concatenate(vals_out),
    )


def _empty() -> np.ndarray:
    return np.array([], dtype=np.int64)


def sigma_matrix(m: GroupRingMatrix, s: SoficApproximation, p: int) -> FFMatrix:
    """Realize right-convolution by ``m`` at level ``s`` over GF(p)."""
    return sigma_matrix_int(m, s).mod(p)


def ow_matrix(alphabet) -> GroupRingMatrix:
    """The coboundary of the Cayley graph as a 1 x |S| convolution matrix:
    the entry for generator s is 1 - s^-1, so x -> (x(g) - x(gs))_s."""
    one = GroupRingElement.one()
    return GroupRingMatrix(
        [[one - GroupRingElement.of(generator(i, -1)) for i in range(alphabet.rank)]]
    )


@dataclass
class EquivariantComplex:
    """Orbit data of a free cocompact G-complex.

    ``orbit_counts[k]`` is the number of G-orbits of k-cells; ``coboundaries[k]``
    is the group-ring matrix realizing C^k -> C^{k+1} by right convolution
    (None when there are no (k+1)-cells).
    """

    presentation: Presentation
    orbit_counts: list[int]
    coboundaries: list[GroupRingMatrix | None]
    label: str = ""

    def __post_init__(self):
        if len(self.coboundaries) != len(self.orbit_counts) - 1:
            raise ValueError("need one coboundary per dimension step")
        for k, cb in enumerate(self.coboundaries):
            if cb is None:
                if self.orbit_counts[k + 1] != 0:
                    raise ValueError(f"missing coboundary into dimension {k + 1}")
            elif (cb.rows, cb.cols) != (self.orbit_counts[k], self.orbit_counts[k + 1]):
                raise ValueError(f"coboundary {k} shape mismatch")

    @property
    def top_dim(self) -> int:
        return len(self.orbit_counts) - 1

    def coboundary(self, k: int) -> GroupRingMatrix | None:
        """delta^{k+1}: C^k -> C^{k+1}; None beyond the top dimension."""
        if 0 <= k < len(self.coboundaries):
            return self.coboundaries[k]
        return None


@dataclass
class RealizedLevel:
    """Per-level realization of a complex: one FFMatrix per coboundary plus
    its rank data."""

    level: int
    size: int
    p: int
    matrices: list[FFMatrix]
    ranks: list[RankResult] = field(default_factory=list)

    def rank_into(self, k: int) -> int:
        """Rank of the realized delta^{k}: C^{k-1} -> C^k (0 if out of range)."""
        return self.ranks[k - 1].rank if 1 <= k <= len(self.ranks) else 0

    def kernel_dim_of(self, k: int, orbit_counts: list[int]) -> int:
        """Kernel dimension of the realized delta^{k+1}: C^k -> C^{k+1}."""
        if k < len(self.ranks):
            return self.ranks[k].kernel_dim
        return orbit_counts[k] * self.size if k < len(orbit_counts) else 0


def realize(
    c: EquivariantComplex,
    s: SoficApproximation,
    p: int,
    check_composite: bool = True,
) -> RealizedLevel:
    """Realize every coboundary of ``c`` at level ``s`` over GF(p) and compute ranks.

    For homomorphism levels the realized composite of adjacent coboundaries
    must vanish; this is asserted (it certifies the orientation convention).
    """
    mats = [
        sigma_matrix_int(cb, s, cols_orbits=c.orbit_counts[k]).mod(p)
        for k, cb in enumerate(c.coboundaries)
    ]
    if check_composite and s.is_homomorphism:
        for k in range(len(mats) - 1):
            if not _product_is_zero(mats[k + 1], mats[k]):
                raise SignConventionError(
                    f"composite of realized coboundaries {k + 1}∘{k} is nonzero"
                )
    ranks = [rank_gf(m) for m in mats]
    return RealizedLevel(s.level, s.size, p, mats, ranks)


def _product_is_zero(a: FFMatrix, b: FFMatrix) -> bool:
    """Whether the sparse product a @ b vanishes mod p."""
    if a.nnz == 0 or b.nnz == 0:
        return True
    p = a.p
    by_row: dict[int, list[tuple[int, int]]] = {}
    for r, c, v in zip(a.row_idx.tolist(), a.col_idx.tolist(), a.values.tolist()):
        by_row.setdefault(c, []).append((r, v))
    acc: dict[tuple[int, int], int] = {}
    for r, c, v in zip(b.row_idx.tolist(), b.col_idx.tolist(), b.values.tolist()):
        for r2, v2 in by_row.get(r, ()):
            key = (r2, c)
            acc[key] = (acc.get(key, 0) + v2 * v) % p
    return all(v == 0 for v in acc.values())


def cayley_complex(presentation: Presentation) -> EquivariantComplex:
    """The presentation 2-complex: one vertex orbit, one edge orbit per
    generator, one polygon orbit per relator.

    The edge coboundary is the Cayley-graph coboundary; the polygon coboundary
    entries come from free differentials of the relators, adapted to the
    right-convolution convention.  Both orientation candidates are tried and
    the one giving composite zero at a small validation quotient is kept.
    """
    alphabet = presentation.alphabet
    delta1 = ow_matrix(alphabet)
    if not presentation.relators:
        return EquivariantComplex(
            presentation, [1, alphabet.rank, 0], [delta1, None], "cayley"
        )

    candidates = []
    for use_involution in (True, False):
        entries = []
        for i in range(alphabet.rank):
            row = []
            for rel in presentation.relators:
                d = fox_derivative(rel, i)
                row.append(d.involution() if use_involution else d)
            entries.append(row)
        candidates.append(GroupRingMatrix(entries))

    level = _validation_level(presentation)
    for delta2 in candidates:
        complex_ = EquivariantComplex(
            presentation,
            [1, alphabet.rank, len(presentation.relators)],
            [delta1, delta2],
            "cayley",
        )
        try:
            realize(complex_, level, 2, check_composite=True)
            return complex_
        except SignConventionError:
            continue
    raise SignConventionError(
        "no orientation of the relator coboundary gives composite zero"
    )


def _validation_level(presentation: Presentation) -> SoficApproximation:
    from .sofic import RelatorViolated

    for modulus in (2, 3, 5, 7, 6, 30):
        try:
            return abelianization_chain(presentation, modulus, 1)[0]
        except RelatorViolated:
            continue
    raise SignConventionError(
        "no small abelian quotient satisfies the relators; "
        "cannot validate the coboundary orientation"
    )


@dataclass
class QuotientBetti:
    gf_dim: int
    q_dim: int
    q_certain: bool


def quotient_betti(
    c: EquivariantComplex,
    s: SoficApproximation,
    p_dim: int,
    p: int,
    realized: RealizedLevel | None = None,
) -> QuotientBetti:
    """dim H^{p_dim} of the quotient complex over GF(p) and over Q.

    The GF(p) value is kernel_dim(delta^{p_dim+1}) - rank(delta^{p_dim}); the
    rational value uses multi-modular rank of the integer realizations.
    """
    if not s.is_homomorphism:
        raise NotHomomorphism("quotient complexes exist only for genuine actions")
    if not (0 <= p_dim <= c.top_dim):
        raise ValueError(f"dimension {p_dim} outside complex")
    if realized is None or realized.p != p:
        realized = realize(c, s, p)
    gf_dim = realized.kernel_dim_of(p_dim, c.orbit_counts) - realized.rank_into(p_dim)

    n = s.size
    certain = True
    rank_up, rank_down = 0, 0
    up = c.coboundary(p_dim)
    if up is not None:
        r, ok = _rank_q_realized(up, s)
        rank_up, certain = r, certain and ok
    if p_dim >= 1:
        down = c.coboundary(p_dim - 1)
        if down is not None:
            r, ok = _rank_q_realized(down, s)
            rank_down, certain = r, certain and ok
    q_dim = c.orbit_counts[p_dim] * n - rank_up - rank_down
    return QuotientBetti(gf_dim, q_dim, certain)


def _rank_q_realized(m: GroupRingMatrix, s: SoficApproximation) -> tuple[int, bool]:
    im = sigma_matrix_int(m, s)
    best = 0
    for p in fflinalg.PRIMES_31:
        best = max(best, rank_gf(im.mod(p)).rank)
    if max(im.rows, im.cols) <= fflinalg.EXACT_RANK_Q_LIMIT:
        exact, _ = rank_q(im.to_dense())
        return exact, True
    return best, False
