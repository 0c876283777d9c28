"""Entropy quantities from per-level kernel/rank data: fixed-point growth
rates, Yuzvinsky defects, sofic-entropy Betti numbers, and rational Betti
approximation sequences.

Log-counts are carried exactly as an integer dimension together with the
field size; floats appear only when records are rendered.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    EquivariantComplex,
    QuotientBetti,
    RealizedLevel,
    quotient_betti,
    realize,
    sigma_matrix,
)
from .fflinalg import rank_gf
from .sofic import NotHomomorphism, SoficApproximation
from .words import GroupRingMatrix

DEFAULT_TAIL_WINDOW = 3


class UnknownGroup(Exception):
    pass


@dataclass(frozen=True)
class LogCount:
    """An exact log-count: dim * log(p)."""

    dim: int
    p: int

    @property
    def value(self) -> float:
        return self.dim * math.log(self.p)

    def normalized(self, n: int) -> Fraction:
        return Fraction(self.dim, n)


@dataclass
class SubshiftSpec:
    """An algebraic subshift of finite type, by construction.

    kind is one of:
      - "kernel": points annihilated by right-convolution with ``matrix``
      - "ker_coboundary": kernel of the complex coboundary into dimension ``dim``
      - "full_shift": no constraint, ``components`` symbols per site
    """

    kind: str
    p: int
    matrix: GroupRingMatrix | None = None
    complex: EquivariantComplex | None = None
    dim: int = 0
    components: int = 1

    @classmethod
    def kernel(cls, matrix: GroupRingMatrix, p: int) -> "SubshiftSpec":
        return cls("kernel", p, matrix=matrix)

    @classmethod
    def ker_coboundary(cls, complex_: EquivariantComplex, dim: int, p: int) -> "SubshiftSpec":
        if not (1 <= dim <= complex_.top_dim + 1):
            raise ValueError(f"no coboundary into dimension {dim}")
        return cls("ker_coboundary", p, complex=complex_, dim=dim)

    @classmethod
    def full_shift(cls, components: int, p: int) -> "SubshiftSpec":
        return cls("full_shift", p, components=components)

    def domain_components(self) -> int:
        """Number of field components per site of the ambient full shift."""
        if self.kind == "kernel":
            return self.matrix.rows
        if self.kind == "ker_coboundary":
            return self.complex.orbit_counts[self.dim - 1]
        return self.components


def fix_log_count(spec: SubshiftSpec, s: SoficApproximation) -> LogCount:
    """log of the number of good labelings at level s (|Fix| on chain levels).

    For a kernel subshift this is kernel_dim * log p of the realized
    convolution matrix; for the full shift it is components * N * log p.
    """
    n = s.size
    if spec.kind == "full_shift":
        return LogCount(spec.components * n, spec.p)
    if spec.kind == "kernel":
        m = sigma_matrix(spec.matrix, s, spec.p)
        return LogCount(rank_gf(m).kernel_dim, spec.p)
    cb = spec.complex.coboundary(spec.dim - 1)
    if cb is None:
        return LogCount(spec.complex.orbit_counts[spec.dim - 1] * n, spec.p)
    m = sigma_matrix(cb, s, spec.p)
    return LogCount(rank_gf(m).kernel_dim, spec.p)


def image_log_count(matrix: GroupRingMatrix, s: SoficApproximation, p: int) -> LogCount:
    """log of the size of the image of the realized convolution matrix."""
    return LogCount(rank_gf(sigma_matrix(matrix, s, p)).rank, p)


@dataclass
class LevelRecord:
    level: int
    size: int
    dim: int
    p: int

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.dim, self.size)

    @property
    def value(self) -> float:
        # normalized log-count in nats
        return self.dim / self.size * math.log(self.p)


@dataclass
class EntropySequence:
    records: list[LevelRecord]
    tail_window: int = DEFAULT_TAIL_WINDOW

    @property
    def tail(self) -> list[LevelRecord]:
        return self.records[-self.tail_window :]

    @property
    def tail_limsup(self) -> float:
        return max(r.value for r in self.tail)

    @property
    def tail_liminf(self) -> float:
        return min(r.value for r in self.tail)


def entropy_sequence(
    spec: SubshiftSpec,
    levels: list[SoficApproximation],
    tail_window: int = DEFAULT_TAIL_WINDOW,
) -> EntropySequence:
    if not levels:
        raise ValueError("need at least one level")
    records = [
        LevelRecord(s.level, s.size, fix_log_count(spec, s).dim, spec.p) for s in levels
    ]
    return EntropySequence(records, tail_window)


@dataclass
class DefectRecord:
    """Per-level Yuzvinsky defect; ``dim`` is the exact integer numerator,
    equal to dim H^p of the quotient complex."""

    level: int
    size: int
    dim: int
    p: int

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.dim, self.size)

    @property
    def value(self) -> float:
        return self.dim / self.size * math.log(self.p)

    @property
    def sofic_betti(self) -> float:
        # defect divided by log p
        return self.dim / self.size


def yuzvinsky_defect(
    c: EquivariantComplex,
    p_dim: int,
    s: SoficApproximation,
    p: int,
    realized: RealizedLevel | None = None,
) -> DefectRecord:
    """The level defect [h(ker d^p) + h(ker d^{p+1})] - h(C^{p-1}).

    Computed once via kernel dimensions and once via dim H^p of the quotient
    complex; the two integer values must agree exactly.
    """
    if not s.is_homomorphism:
        raise NotHomomorphism("defect is defined through the quotient complex")
    if not (1 <= p_dim <= c.top_dim):
        raise ValueError(f"dimension {p_dim} outside complex")
    if realized is None or realized.p != p:
        realized = realize(c, s, p)
    n = s.size
    ker_low = realized.ranks[p_dim - 1].kernel_dim
    ker_high = realized.kernel_dim_of(p_dim, c.orbit_counts)
    via_kernels = ker_low + ker_high - c.orbit_counts[p_dim - 1] * n
    via_cohomology = realized.kernel_dim_of(p_dim, c.orbit_counts) - realized.rank_into(p_dim)
    if via_kernels != via_cohomology:
        raise AssertionError(
            f"defect mismatch at level {s.level}: "
            f"kernel path {via_kernels} != cohomology path {via_cohomology}"
        )
    return DefectRecord(s.level, n, via_kernels, p)


def defect_sequence(
    c: EquivariantComplex,
    p_dim: int,
    levels: list[SoficApproximation],
    p: int,
    tail_window: int = DEFAULT_TAIL_WINDOW,
) -> list[DefectRecord]:
    return [yuzvinsky_defect(c, p_dim, s, p) for s in levels]


@dataclass
class SoficBettiEstimate:
    records: list[DefectRecord]
    tail_window: int = DEFAULT_TAIL_WINDOW

    @property
    def per_level(self) -> list[float]:
        return [r.sofic_betti for r in self.records]

    @property
    def estimate(self) -> float:
        """Tail limsup of the per-level normalized Betti numbers."""
        return max(r.sofic_betti for r in self.records[-self.tail_window :])


def sofic_betti(
    c: EquivariantComplex,
    p_dim: int,
    levels: list[SoficApproximation],
    p: int,
    tail_window: int = DEFAULT_TAIL_WINDOW,
) -> SoficBettiEstimate:
    return SoficBettiEstimate(defect_sequence(c, p_dim, levels, p), tail_window)


@dataclass
class LuckRecord:
    level: int
    size: int
    q_dim: int
    certain: bool

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.q_dim, self.size)

    @property
    def value(self) -> float:
        return self.q_dim / self.size


def luck_sequence(
    c: EquivariantComplex,
    p_dim: int,
    levels: list[SoficApproximation],
    p: int = 2,
) -> list[LuckRecord]:
    """Normalized rational Betti numbers dim_Q H^p(quotient)/N per level,
    computed alongside the GF(p) value to expose torsion discrepancies."""
    out = []
    for s in levels:
        qb: QuotientBetti = quotient_betti(c, s, p_dim, p)
        out.append(LuckRecord(s.level, s.size, qb.q_dim, qb.q_certain))
    return out


@dataclass
class CostBounds:
    group: str
    beta1: int
    cost_sup: Fraction
    p: int

    @property
    def lower(self) -> float:
        return (1 + self.beta1) * math.log(self.p)

    @property
    def upper(self) -> float:
        return float(self.cost_sup) * math.log(self.p)


def cost_bounds_report(group_tag: str, p: int) -> CostBounds:
    """Static literature bounds ((1 + beta^1_(2)) log p, cost^sup log p) for
    annotating reports.  Known tags: free groups ``F<r>``, ``Z^<d>``, and
    surface groups ``genus<g>`` (g >= 2)."""
    tag = group_tag.strip()
    m = re.fullmatch(r"F(\d+)", tag)
    if m:
        r = int(m.group(1))
        if r >= 1:
            return CostBounds(tag, r - 1, Fraction(r), p)
    m = re.fullmatch(r"Z\^?(\d+)", tag)
    if m and int(m.group(1)) >= 1:
        return CostBounds(tag, 0, Fraction(1), p)
    m = re.fullmatch(r"(?:genus|surface)(\d+)", tag)
    if m:
        g = int(m.group(1))
        if g >= 2:
            return CostBounds(tag, 2 * g - 2, Fraction(2 * g - 1), p)
    raise UnknownGroup(f"no reference bounds for group tag {group_tag!r}")
