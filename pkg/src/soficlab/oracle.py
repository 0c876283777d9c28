"""Brute-force counting of witnessed-pattern labelings.

The independent check for the linear-algebra pipeline: counts labelings of a
sofic level whose every local window pattern is allowed, by plain
backtracking.  Deliberately free of any elimination code.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fflinalg import rank_gf
from .complexes import sigma_matrix
from .sofic import SoficApproximation
from .words import IDENTITY, GroupRingMatrix, Word

DEFAULT_SEARCH_CAP = 1 << 24


class CapExceeded(Exception):
    pass


class Mismatch(Exception):
    def __init__(self, brute: int, linear: int):
        self.brute = brute
        self.linear = linear
        super().__init__(f"brute-force count {brute} != p^kernel_dim {linear}")


@dataclass
class PatternSystem:
    """A finite alphabet, a test window of words, and the allowed patterns.

    Symbols are integers 0..alphabet_size-1.  ``allowed`` is an explicit set of
    window patterns (tuples aligned with ``window``); alternatively a linear
    kernel condition is kept implicitly via ``linear_terms`` (per output
    component, a list of (window index, vector component, coefficient)).
    """

    alphabet_size: int
    window: list[Word]
    allowed: set[tuple[int, ...]] | None = None
    linear_terms: list[list[tuple[int, int, int]]] | None = None
    p: int = 0
    components: int = 1

    def __post_init__(self):
        if IDENTITY not in self.window:
            raise ValueError("window must contain the identity word")
        if (self.allowed is None) == (self.linear_terms is None):
            raise ValueError("exactly one of allowed/linear_terms must be given")

    @classmethod
    def full(cls, alphabet_size: int, window: list[Word]) -> "PatternSystem":
        symbols = range(alphabet_size)
        patterns = {()}
        for _ in window:
            patterns = {pat + (sym,) for pat in patterns for sym in symbols}
        return cls(alphabet_size, window, allowed=patterns)

    @classmethod
    def from_kernel(cls, matrix: GroupRingMatrix, p: int) -> "PatternSystem":
        """The window/pattern system cutting out the kernel of right-convolution
        by ``matrix`` over GF(p): one symbol is a vector in GF(p)^rows."""
        window = sorted(
            matrix.support_words() | {IDENTITY}, key=lambda w: (len(w), w.letters)
        )
        index = {w: t for t, w in enumerate(window)}
        terms = []
        for j in range(matrix.cols):
            comp = []
            for i in range(matrix.rows):
                for h, coef in matrix.entries[i][j].support.items():
                    if coef % p:
                        comp.append((index[h], i, coef % p))
            terms.append(comp)
        return cls(
            p**matrix.rows, window, linear_terms=terms, p=p, components=matrix.rows
        )

    def decode(self, symbol: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.components):
            out.append(symbol % self.p)
            symbol //= self.p
        return tuple(out)

    def pattern_ok(self, pattern: tuple[int, ...]) -> bool:
        if self.allowed is not None:
            return pattern in self.allowed
        vectors = [self.decode(sym) for sym in pattern]
        for comp in self.linear_terms:
            total = 0
            for w_idx, i, coef in comp:
                total += vectors[w_idx][i] * coef
            if total % self.p:
                return False
        return True


def brute_force_fix_count(
    ps: PatternSystem, s: SoficApproximation, config_cap: int = DEFAULT_SEARCH_CAP
) -> int:
    """Number of labelings a : D_n -> K whose window pattern at every point is
    allowed.  Backtracking in breadth-first order from point 0 so that
    connected constraint graphs prune early."""
    n = s.size
    if ps.alphabet_size**n > config_cap:
        raise CapExceeded(
            f"{ps.alphabet_size}^{n} labelings exceed the cap {config_cap}"
        )
    window_perms = [s.sigma_of_word(w) for w in ps.window]
    constraint_cells = [
        tuple(int(perm[delta]) for perm in window_perms) for delta in range(n)
    ]

    order = _bfs_order(s)
    pos = [0] * n
    for idx, cell in enumerate(order):
        pos[cell] = idx
    ready_at: list[list[int]] = [[] for _ in range(n)]
    for delta, cells in enumerate(constraint_cells):
        ready_at[max(pos[c] for c in cells)].append(delta)

    assign = [0] * n
    symbols = range(ps.alphabet_size)
    count = 0

    def backtrack(idx: int) -> None:
        nonlocal count
        if idx == n:
            count += 1
            return
        cell = order[idx]
        for sym in symbols:
            assign[cell] = sym
            ok = True
            for delta in ready_at[idx]:
                pattern = tuple(assign[c] for c in constraint_cells[delta])
                if not ps.pattern_ok(pattern):
                    ok = False
                    break
            if ok:
                backtrack(idx + 1)

    backtrack(0)
    return count


def _bfs_order(s: SoficApproximation) -> list[int]:
    n = s.size
    seen = [False] * n
    order: list[int] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for i in range(s.rank):
                for sign in (1, -1):
                    y = int(s.perm_of(i, sign)[x])
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
    return order


@dataclass
class CrossCheckResult:
    brute_count: int
    kernel_dim: int
    p: int

    @property
    def linear_count(self) -> int:
        return self.p**self.kernel_dim


def cross_check_kernel(
    matrix: GroupRingMatrix,
    s: SoficApproximation,
    p: int,
    cap: int = DEFAULT_SEARCH_CAP,
) -> CrossCheckResult:
    """Assert that the brute-force labeling count equals p^kernel_dim of the
    realized convolution matrix; Mismatch carries both counts."""
    ps = PatternSystem.from_kernel(matrix, p)
    brute = brute_force_fix_count(ps, s, cap)
    kdim = rank_gf(sigma_matrix(matrix, s, p)).kernel_dim
    result = CrossCheckResult(brute, kdim, p)
    if brute != result.linear_count:
        raise Mismatch(brute, result.linear_count)
    return result
