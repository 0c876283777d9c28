"""Report generation: per-level rows, deterministic CSV/JSON writers, and a
static SVG convergence plot."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import entropy as ent
from . import oracle
from .complexes import quotient_betti
from .config import ConfigError, ExperimentConfig
from .words import IDENTITY, Word, generator

REPORT_VERSION = 1

CSV_COLUMNS = [
    "level",
    "N",
    "dim_ker",
    "rank",
    "dimH_ffp",
    "dimH_q",
    "normalized_ffp",
    "normalized_q",
    "defect",
    "sofic_betti",
]

CHAIN_INFO_COLUMNS = ["level", "N", "word", "trivial_image", "farber_defect"]


def _subshift_spec(cfg: ExperimentConfig) -> ent.SubshiftSpec:
    if cfg.subshift == "kernel":
        return ent.SubshiftSpec.kernel(cfg.matrix, cfg.p)
    if cfg.subshift == "full_shift":
        return ent.SubshiftSpec.full_shift(cfg.components, cfg.p)
    return ent.SubshiftSpec.ker_coboundary(cfg.complex, cfg.dim, cfg.p)


def compute_level_row(cfg: ExperimentConfig, index: int) -> dict:
    """One report row; independent across levels, safe for worker pools."""
    s = cfg.levels[index]
    row: dict = {"level": s.level, "N": s.size}
    logp = math.log(cfg.p)
    if cfg.kind == "entropy":
        spec = _subshift_spec(cfg)
        dim = ent.fix_log_count(spec, s).dim
        row["dim_ker"] = dim
        row["normalized_ffp"] = dim / s.size * logp
        image_of = cfg.matrix
        if image_of is None and cfg.subshift == "ker_coboundary":
            image_of = cfg.complex.coboundary(cfg.dim - 1)
        if image_of is not None:
            row["rank"] = ent.image_log_count(image_of, s, cfg.p).dim
    elif cfg.kind == "betti":
        qb = quotient_betti(cfg.complex, s, cfg.dim, cfg.p)
        row["dimH_ffp"] = qb.gf_dim
        row["dimH_q"] = qb.q_dim
        row["normalized_ffp"] = qb.gf_dim / s.size
        row["normalized_q"] = qb.q_dim / s.size
        row["sofic_betti"] = qb.gf_dim / s.size
        row["q_certain"] = qb.q_certain
    elif cfg.kind == "defect":
        rec = ent.yuzvinsky_defect(cfg.complex, cfg.dim, s, cfg.p)
        row["dimH_ffp"] = rec.dim
        row["normalized_ffp"] = rec.dim / s.size
        row["defect"] = rec.value
        row["sofic_betti"] = rec.sofic_betti
    elif cfg.kind == "luck":
        qb = quotient_betti(cfg.complex, s, cfg.dim, cfg.p)
        row["dimH_q"] = qb.q_dim
        row["normalized_q"] = qb.q_dim / s.size
        row["q_certain"] = qb.q_certain
    elif cfg.kind == "oracle-check":
        res = oracle.cross_check_kernel(cfg.matrix, s, cfg.p, cfg.oracle_cap)
        row["dim_ker"] = res.kernel_dim
        row["brute_count"] = res.brute_count
        row["linear_count"] = res.linear_count
    else:
        raise ConfigError(f"no per-level computation for kind {cfg.kind!r}")
    return row


def chain_info_rows(cfg: ExperimentConfig) -> list[dict]:
    """Per (level, word) Farber defects for nonempty words up to the
    configured length; words acting trivially are flagged, not failed."""
    words = _words_up_to(cfg.presentation.alphabet.rank, cfg.max_word_length)
    rows = []
    for s in cfg.levels:
        for w in words:
            frac = s.farber_defect(w)
            rows.append(
                {
                    "level": s.level,
                    "N": s.size,
                    "word": w.format(cfg.presentation.alphabet),
                    "trivial_image": frac == 1.0,
                    "farber_defect": frac,
                }
            )
    return rows


def _words_up_to(rank: int, max_len: int) -> list[Word]:
    letters = [generator(i, sign) for i in range(rank) for sign in (1, -1)]
    out: list[Word] = []
    frontier = [IDENTITY]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in letters:
                u = w * letter
                if len(u) == len(w) + 1:
                    nxt.append(u)
        out.extend(nxt)
        frontier = nxt
    # freely reduced words come out once each; keep deterministic order
    return out


@dataclass
class Report:
    cfg: ExperimentConfig
    rows: list[dict]
    summary: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return CHAIN_INFO_COLUMNS if self.cfg.kind == "chain-info" else CSV_COLUMNS


def build_summary(cfg: ExperimentConfig, rows: list[dict]) -> dict:
    summary: dict = {"levels": len(rows)}
    series_key = _series_key(cfg.kind)
    if series_key:
        values = [row[series_key] for row in rows if series_key in row]
        tail = values[-cfg.tail_window :]
        if tail:
            summary[series_key + "_tail_limsup"] = max(tail)
            summary[series_key + "_tail_liminf"] = min(tail)
    if cfg.group_tag:
        try:
            cb = ent.cost_bounds_report(cfg.group_tag, cfg.p)
            summary["reference"] = {
                "group": cb.group,
                "beta1": cb.beta1,
                "beta1_logp": cb.beta1 * math.log(cfg.p),
                "lower": cb.lower,
                "upper": cb.upper,
            }
        except ent.UnknownGroup:
            pass
    return summary


def _series_key(kind: str) -> str | None:
    return {
        "entropy": "normalized_ffp",
        "betti": "sofic_betti",
        "defect": "defect",
        "luck": "normalized_q",
    }.get(kind)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(report: Report, path: Path) -> None:
    lines = [
        f"# soficlab report v{REPORT_VERSION}; kind={report.cfg.kind}; "
        f"p={report.cfg.p}; columns={','.join(report.columns)}"
    ]
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_fmt(row.get(col)) for col in report.columns))
    path.write_text("\n".join(lines) + "\n")


def write_json(report: Report, path: Path) -> None:
    payload = {
        "version": REPORT_VERSION,
        "kind": report.cfg.kind,
        "p": report.cfg.p,
        "config": str(report.cfg.path),
        "records": report.rows,
        "summary": report.summary,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def write_plot(report: Report, path: Path) -> None:
    """Static SVG line chart: x = log N, y = the report's normalized series,
    with horizontal reference lines at declared target values."""
    key = _series_key(report.cfg.kind)
    if key is None:
        raise ConfigError(f"kind {report.cfg.kind!r} has no plottable series")
    points = [
        (math.log(row["N"]), float(row[key])) for row in report.rows if key in row
    ]
    if len(points) < 2:
        raise ConfigError("plotting needs at least two levels")
    refs: dict[str, float] = {}
    ref = report.summary.get("reference")
    if ref:
        tag = ref["group"]
        if report.cfg.kind == "defect":
            refs[f"beta1 log p [{tag}]"] = ref["beta1_logp"]
        elif report.cfg.kind in ("betti", "luck"):
            refs[f"beta1 [{tag}]"] = float(ref["beta1"])
        else:
            refs[f"(1+beta1) log p [{tag}]"] = ref["lower"]
            if ref["upper"] != ref["lower"]:
                refs[f"cost_sup log p [{tag}]"] = ref["upper"]
    path.write_text(_svg_chart(points, key, refs, title=f"{report.cfg.kind} — {report.cfg.stem}"))


def _svg_chart(
    points: list[tuple[float, float]],
    label: str,
    refs: dict[str, float],
    title: str,
    width: int = 640,
    height: int = 420,
) -> str:
    left, right, top, bottom = 60, 20, 36, 44
    xs = [p[0] for p in points]
    ys = [p[1] for p in points] + list(refs.values())
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys + [0.0]), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right)

    def sy(y: float) -> float:
        return height - bottom - (y - y_lo) / (y_hi - y_lo) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle">{title}</text>',
        f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" '
        f'y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 10}" text-anchor="middle">log N</text>',
        f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {height / 2:.1f})">{label}</text>',
    ]
    for i, (name, value) in enumerate(sorted(refs.items())):
        y = sy(value)
        parts.append(
            f'<line x1="{left}" y1="{y:.2f}" x2="{width - right}" y2="{y:.2f}" '
            f'stroke="#888" stroke-dasharray="6 4"/>'
        )
        parts.append(
            f'<text x="{width - right - 4}" y="{y - 4:.2f}" text-anchor="end" '
            f'fill="#555">{name} = {value:.4g}</text>'
        )
    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
    parts.append(f'<polyline points="{poly}" fill="none" stroke="#1565c0" stroke-width="2"/>')
    for x, y in points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#1565c0"/>')
    # axis extremes
    for x in (x_lo, x_hi):
        parts.append(
            f'<text x="{sx(x):.2f}" y="{height - bottom + 16}" '
            f'text-anchor="middle">{x:.2f}</text>'
        )
    for y in (y_lo, y_hi):
        parts.append(
            f'<text x="{left - 6}" y="{sy(y) + 4:.2f}" text-anchor="end">{y:.3g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
