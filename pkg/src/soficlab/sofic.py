"""Finite permutation models of a group: coset enumeration, Schreier actions,
quotient-supplied chains, random permutation models, and Farber defects."""

from __future__ import annotations

import os

import numpy as np

from .words import Presentation, Word

DEFAULT_COSET_CAP = 10**6


def coset_cap_limit() -> int:
    """Active enumeration cap; SOFICLAB_COSET_CAP overrides the default."""
    raw = os.environ.get("SOFICLAB_COSET_CAP")
    return int(raw) if raw else DEFAULT_COSET_CAP


class CapExceeded(Exception):
    """Coset enumeration defined more cosets than allowed.

    A non-finite index is indistinguishable from a genuinely large one, so
    both are reported through this error.
    """


class RelatorViolated(Exception):
    def __init__(self, level: int, relator: Word):
        self.level = level
        self.relator = relator
        super().__init__(f"level {level}: images do not satisfy relator {relator!r}")


class NotHomomorphism(Exception):
    """Raised when an operation requires a genuine quotient action."""


def _column(gen: int, sign: int) -> int:
    return 2 * gen + (0 if sign > 0 else 1)


class CosetTable:
    """A closed coset table: N rows, one column per signed generator.

    ``table[c][2i]`` is the coset ``c * s_i``; ``table[c][2i+1]`` is
    ``c * s_i^-1``.  Coset 0 is the subgroup itself.
    """

    def __init__(self, table: list[list[int]], rank: int):
        self.table = table
        self.rank = rank
        self.size = len(table)

    def follow(self, coset: int, word: Word) -> int:
        for gen, sign in word:
            coset = self.table[coset][_column(gen, sign)]
        return coset

    def is_closed_and_consistent(self) -> bool:
        n = self.size
        for c in range(n):
            for i in range(self.rank):
                d = self.table[c][2 * i]
                if d is None or not (0 <= d < n) or self.table[d][2 * i + 1] != c:
                    return False
        return True


def todd_coxeter(
    presentation: Presentation,
    subgroup_generators: list[Word],
    coset_cap: int | None = None,
) -> CosetTable:
    """Enumerate cosets of the subgroup generated by ``subgroup_generators``.

    HLT-style relator tracing with coincidence handling via union-find.
    Raises CapExceeded once more than ``coset_cap`` cosets have been defined.
    """
    if coset_cap is None:
        coset_cap = coset_cap_limit()
    rank = presentation.alphabet.rank
    ncols = 2 * rank
    neighbors: list[list[int | None]] = []
    labels: list[int] = []
    defined = 0

    def new_coset() -> int:
        nonlocal defined
        defined += 1
        if defined > coset_cap:
            raise CapExceeded(f"more than {coset_cap} cosets defined")
        labels.append(len(labels))
        neighbors.append([None] * ncols)
        return len(labels) - 1

    def find(c: int) -> int:
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    pending: list[tuple[int, int]] = []

    def merge(a: int, b: int) -> None:
        # union-find merge; stale neighbor pointers are resolved by find() on read
        pending.append((a, b))
        while pending:
            x, y = pending.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            labels[y] = x
            for col in range(ncols):
                n_y = neighbors[y][col]
                if n_y is None:
                    continue
                n_x = neighbors[x][col]
                if n_x is None:
                    neighbors[x][col] = n_y
                else:
                    pending.append((n_x, n_y))

    def follow(c: int, col: int) -> int:
        c = find(c)
        nxt = neighbors[c][col]
        if nxt is None:
            nxt = new_coset()
            neighbors[c][col] = nxt
            neighbors[nxt][col ^ 1] = c
        return find(nxt)

    def scan(start: int, word: Word) -> None:
        c = find(start)
        for gen, sign in word:
            c = follow(c, _column(gen, sign))
        merge(c, start)

    def state() -> tuple[int, int, int]:
        live = [c for c in range(len(labels)) if find(c) == c]
        holes = sum(neighbors[c][col] is None for c in live for col in range(ncols))
        return defined, len(live), holes

    root = new_coset()
    for w in subgroup_generators:
        scan(root, w)

    while True:
        before = state()
        for c in range(len(labels)):
            if find(c) != c:
                continue
            for rel in presentation.relators:
                scan(c, rel)
        after = state()
        holes = after[2]
        if holes == 0 and after == before:
            break
        if after == before:
            # stable pass with holes: without relators nothing can ever close
            if not presentation.relators:
                raise CapExceeded("enumeration cannot close (infinite index)")
            # HLT hole filling: define a coset for one hole and iterate
            for c in range(len(labels)):
                if find(c) == c:
                    hole = next(
                        (col for col in range(ncols) if neighbors[c][col] is None),
                        None,
                    )
                    if hole is not None:
                        follow(c, hole)
                        break

    live = [c for c in range(len(labels)) if find(c) == c]
    index = {c: i for i, c in enumerate(live)}
    table = [
        [index[find(neighbors[c][col])] for col in range(ncols)] for c in live
    ]
    result = CosetTable(table, rank)
    if not result.is_closed_and_consistent():
        raise RuntimeError("coset table failed closure/consistency check")
    return result


class SoficApproximation:
    """One level of a sofic approximation: a finite set acted on per generator.

    ``perms[i]`` is the permutation of {0..N-1} attached to generator i.  For
    Schreier actions on right cosets the attached permutation is the action
    sigma(s): c -> c s^-1, so that sigma extends to a homomorphism over words.
    """

    def __init__(
        self,
        level: int,
        perms: list[np.ndarray],
        is_homomorphism: bool,
        provenance: str = "",
    ):
        self.level = level
        self.perms = [np.asarray(p, dtype=np.int64) for p in perms]
        self.size = len(self.perms[0])
        for p in self.perms:
            if len(p) != self.size or not _is_permutation(p):
                raise ValueError("each generator image must be a permutation")
        self.is_homomorphism = is_homomorphism
        self.provenance = provenance
        self._inverses = [np.argsort(p) for p in self.perms]

    @property
    def rank(self) -> int:
        return len(self.perms)

    def perm_of(self, gen: int, sign: int = 1) -> np.ndarray:
        return self.perms[gen] if sign > 0 else self._inverses[gen]

    def sigma_of_word(self, word: Word) -> np.ndarray:
        """Permutation of the word: sigma(uv) = sigma(u) o sigma(v)."""
        acc = np.arange(self.size, dtype=np.int64)
        for gen, sign in word:
            acc = acc[self.perm_of(gen, sign)]
        return acc

    def farber_defect(self, word: Word) -> float:
        """Fixed-point fraction of sigma(word); its decay along a chain is the
        Farber/soficity condition."""
        perm = self.sigma_of_word(word)
        return float(np.count_nonzero(perm == np.arange(self.size)) / self.size)

    def __repr__(self) -> str:
        return (
            f"SoficApproximation(level={self.level}, N={self.size}, "
            f"hom={self.is_homomorphism}, {self.provenance!r})"
        )


def _is_permutation(p: np.ndarray) -> bool:
    seen = np.zeros(len(p), dtype=bool)
    if np.any(p < 0) or np.any(p >= len(p)):
        return False
    seen[p] = True
    return bool(seen.all())


def from_coset_table(table: CosetTable, level: int = 0, provenance: str = "") -> SoficApproximation:
    """Schreier action on right cosets: sigma(s) is right multiplication by s^-1."""
    perms = [
        np.array([table.table[c][2 * i + 1] for c in range(table.size)], dtype=np.int64)
        for i in range(table.rank)
    ]
    return SoficApproximation(level, perms, True, provenance or "schreier coset action")


def check_homomorphism(
    presentation: Presentation, perms: list[np.ndarray]
) -> Word | None:
    """Return a violated relator, or None if all relators act as the identity."""
    n = len(perms[0])
    probe = SoficApproximation(0, perms, False, "probe")
    ident = np.arange(n)
    for rel in presentation.relators:
        if not np.array_equal(probe.sigma_of_word(rel), ident):
            return rel
    return None


def chain_from_quotients(
    presentation: Presentation,
    targets: list[dict[str, list[int]]],
) -> list[SoficApproximation]:
    """Build homomorphism levels from per-level generator -> permutation images.

    Each level acts on the orbit of point 0 under the image group; relators
    are checked against the images before the orbit is taken.
    """
    alphabet = presentation.alphabet
    levels = []
    for k, images in enumerate(targets, start=1):
        missing = [name for name in alphabet.names if name not in images]
        if missing:
            raise ValueError(f"level {k}: missing images for generators {missing}")
        perms = [np.asarray(images[name], dtype=np.int64) for name in alphabet.names]
        bad = check_homomorphism(presentation, perms)
        if bad is not None:
            raise RelatorViolated(k, bad)
        orbit = _orbit_of_zero(perms)
        reindex = {point: i for i, point in enumerate(orbit)}
        restricted = [
            np.array([reindex[int(p[point])] for point in orbit], dtype=np.int64)
            for p in perms
        ]
        levels.append(
            SoficApproximation(k, restricted, True, f"quotient level {k} (orbit of 0)")
        )
    return levels


def _orbit_of_zero(perms: list[np.ndarray]) -> list[int]:
    seen = {0}
    frontier = [0]
    inv = [np.argsort(p) for p in perms]
    while frontier:
        x = frontier.pop()
        for p in list(perms) + inv:
            y = int(p[x])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return sorted(seen)


def abelianization_chain(
    presentation: Presentation, modulus: int, levels: int
) -> list[SoficApproximation]:
    """Mod m^k abelianization levels: level k acts on (Z/m^k)^rank by
    coordinate translations, so N = m^(k*rank)."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    rank = presentation.alphabet.rank
    out = []
    for k in range(1, levels + 1):
        m = modulus**k
        n = m**rank
        coords = np.arange(n, dtype=np.int64)
        perms = []
        for i in range(rank):
            stride = m**i
            digit = (coords // stride) % m
            perms.append(coords + ((digit + 1) % m - digit) * stride)
        bad = check_homomorphism(presentation, perms)
        if bad is not None:
            raise RelatorViolated(k, bad)
        out.append(
            SoficApproximation(
                k, perms, True, f"abelianization mod {modulus}^{k}, N={n}"
            )
        )
    return out


def random_sofic_model(rank: int, n: int, seed: int, level: int = 0) -> SoficApproximation:
    """Independent uniform generator permutations; deterministic given seed.

    Any assignment of permutations extends the free group of the given rank,
    so the result is always a genuine homomorphism level for it.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(seed)
    perms = [rng.permutation(n).astype(np.int64) for _ in range(rank)]
    return SoficApproximation(level, perms, True, f"random model N={n} seed={seed}")
