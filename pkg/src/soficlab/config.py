"""TOML experiment configuration: group presentation, chain of levels,
complex, field, and per-kind experiment parameters."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import sofic
from .complexes import EquivariantComplex, cayley_complex
from .words import (
    GroupRingElement,
    GroupRingMatrix,
    Presentation,
    parse_ring_element,
)

KINDS = ("entropy", "betti", "defect", "luck", "oracle-check", "chain-info")


class ConfigError(Exception):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass
class ExperimentConfig:
    path: Path
    kind: str
    p: int
    presentation: Presentation
    complex: EquivariantComplex | None
    levels: list[sofic.SoficApproximation]
    dim: int = 1
    subshift: str = "ker_coboundary"
    matrix: GroupRingMatrix | None = None
    components: int = 1
    tail_window: int = 3
    group_tag: str = ""
    max_word_length: int = 4
    oracle_cap: int = 1 << 24
    oracle_trials: int = 0
    seed: int = 0

    @property
    def stem(self) -> str:
        return self.path.stem


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"missing key {key!r} in [{where}]")
    return table[key]


def _parse_presentation(table: dict) -> Presentation:
    generators = _require(table, "generators", "presentation")
    relators = table.get("relators", [])
    if not isinstance(generators, str) or not generators:
        raise ConfigError("presentation.generators must be a nonempty string")
    if not isinstance(relators, list):
        raise ConfigError("presentation.relators must be a list of words")
    try:
        return Presentation.parse(generators, relators)
    except ValueError as e:
        raise ConfigError(f"bad presentation: {e}") from e


def _parse_matrix(data, presentation: Presentation) -> GroupRingMatrix:
    if not (isinstance(data, list) and data and all(isinstance(r, list) for r in data)):
        raise ConfigError("matrix must be a nonempty array of arrays of strings")
    rows = []
    for row in data:
        out_row = []
        for cell in row:
            try:
                out_row.append(parse_ring_element(cell, presentation.alphabet))
            except ValueError as e:
                raise ConfigError(f"bad group-ring entry {cell!r}: {e}") from e
        rows.append(out_row)
    try:
        return GroupRingMatrix(rows)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _parse_complex(table: dict | None, presentation: Presentation) -> EquivariantComplex:
    if table is None or table.get("source", "cayley") == "cayley":
        return cayley_complex(presentation)
    orbit_counts = _require(table, "orbit_counts", "complex")
    coboundaries: list[GroupRingMatrix | None] = []
    for k in range(len(orbit_counts) - 1):
        key = f"coboundary{k + 1}"
        data = table.get(key)
        if data is None:
            if orbit_counts[k + 1] != 0:
                raise ConfigError(f"complex.{key} required")
            coboundaries.append(None)
        else:
            coboundaries.append(_parse_matrix(data, presentation))
    try:
        return EquivariantComplex(presentation, list(orbit_counts), coboundaries, "explicit")
    except ValueError as e:
        raise ConfigError(f"bad complex: {e}") from e


def _parse_chain(table: dict, presentation: Presentation) -> list[sofic.SoficApproximation]:
    levels: list[sofic.SoficApproximation] = []
    try:
        if "builtin" in table:
            if table["builtin"] != "abelianization":
                raise ConfigError(f"unknown builtin chain {table['builtin']!r}")
            levels.extend(
                sofic.abelianization_chain(
                    presentation,
                    int(_require(table, "modulus", "chain")),
                    int(_require(table, "levels", "chain")),
                )
            )
        for entry in table.get("level", []):
            if "quotient_perms" in entry:
                built = sofic.chain_from_quotients(
                    presentation, [entry["quotient_perms"]]
                )[0]
            elif "random" in entry:
                spec = entry["random"]
                built = sofic.random_sofic_model(
                    presentation.alphabet.rank,
                    int(_require(spec, "N", "chain.level.random")),
                    int(_require(spec, "seed", "chain.level.random")),
                )
            else:
                raise ConfigError(
                    "each [[chain.level]] needs quotient_perms or random"
                )
            built.level = len(levels) + 1
            levels.append(built)
    except (sofic.RelatorViolated, ValueError) as e:
        raise ConfigError(str(e)) from e
    if not levels:
        raise ConfigError("chain defines no levels")
    return levels


def load_config(path: str | Path, kind: str | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in {path}: {e}") from e

    kind = kind or data.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")

    p = int(data.get("p", 2))
    if not _is_prime(p):
        raise ConfigError(f"p = {p} is not prime")

    presentation = _parse_presentation(_require(data, "presentation", "config"))
    levels = _parse_chain(_require(data, "chain", "config"), presentation)
    complex_ = _parse_complex(data.get("complex"), presentation)

    exp = data.get("experiment", {})
    matrix = None
    if "matrix" in exp:
        matrix = _parse_matrix(exp["matrix"], presentation)

    cfg = ExperimentConfig(
        path=path,
        kind=kind,
        p=p,
        presentation=presentation,
        complex=complex_,
        levels=levels,
        dim=int(exp.get("dim", 1)),
        subshift=exp.get("subshift", "ker_coboundary"),
        matrix=matrix,
        components=int(exp.get("components", 1)),
        tail_window=int(data.get("tail_window", 3)),
        group_tag=exp.get("group_tag", ""),
        max_word_length=int(exp.get("max_word_length", 4)),
        oracle_cap=int(exp.get("cap", 1 << 24)),
        oracle_trials=int(exp.get("trials", 0)),
        seed=int(data.get("seed", 0)),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.subshift not in ("kernel", "ker_coboundary", "full_shift"):
        raise ConfigError(f"unknown subshift kind {cfg.subshift!r}")
    if cfg.kind == "oracle-check" and cfg.matrix is None:
        raise ConfigError("oracle-check needs experiment.matrix")
    if cfg.kind == "entropy" and cfg.subshift == "kernel" and cfg.matrix is None:
        raise ConfigError("kernel subshift needs experiment.matrix")
    if cfg.kind in ("betti", "defect", "luck"):
        if not (1 <= cfg.dim <= cfg.complex.top_dim):
            raise ConfigError(
                f"experiment.dim = {cfg.dim} outside complex of top dimension "
                f"{cfg.complex.top_dim}"
            )
