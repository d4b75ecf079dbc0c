"""The thirteen per-release metric counters.

All counters are pure functions of a linked VariantModel. The identifier
total is always derived as packages + classes + attributes + methods
(interfaces stay outside the sum), never counted independently.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from .loc import count_loc
from .model import CLASS_LIKE_KINDS, INTERFACE_LIKE_KINDS, VariantModel

METRIC_NAMES = (
    "LOC", "NOP", "NOC", "NOI", "NOA", "NOM", "NOL",
    "NOID", "NOPM", "NOSM", "NOIR", "NOAA", "NOMI",
)

COMPLEXITY_METRICS = ("NOIR", "NOAA", "NOMI")
GROWTH_METRICS = tuple(m for m in METRIC_NAMES if m not in COMPLEXITY_METRICS)


@dataclass(frozen=True)
class MetricsConfig:
    """Switches for the conventions the counters leave configurable."""

    inheritance_mode: str = "all"  # "all" | "extends-only"
    dependency_scope: str = "all"  # "all" | "cross-class"
    constructors: str = "include"  # "include" | "exclude"
    count_new_as_invocation: bool = False

    def __post_init__(self) -> None:
        if self.inheritance_mode not in ("all", "extends-only"):
            raise ValueError(f"bad inheritance_mode: {self.inheritance_mode}")
        if self.dependency_scope not in ("all", "cross-class"):
            raise ValueError(f"bad dependency_scope: {self.dependency_scope}")
        if self.constructors not in ("include", "exclude"):
            raise ValueError(f"bad constructors: {self.constructors}")


@dataclass
class MetricsVector:
    release_name: str
    release_date: dt.date
    LOC: int = 0
    NOP: int = 0
    NOC: int = 0
    NOI: int = 0
    NOA: int = 0
    NOM: int = 0
    NOL: int = 0
    NOID: int = 0
    NOPM: int = 0
    NOSM: int = 0
    NOIR: int = 0
    NOAA: int = 0
    NOMI: int = 0

    def value(self, metric: str) -> int:
        return getattr(self, metric)

    def values(self) -> tuple[int, ...]:
        return tuple(getattr(self, m) for m in METRIC_NAMES)

    def as_dict(self) -> dict[str, int]:
        return {m: getattr(self, m) for m in METRIC_NAMES}


def count_declarations(
    model: VariantModel, cfg: MetricsConfig = MetricsConfig()
) -> dict[str, int]:
    """NOP, NOC, NOI, NOA, NOM, NOL, NOPM, NOSM for one release."""
    nop = len(model.packages)
    noc = noi = noa = nom = nol = nopm = nosm = 0
    for decl in model.all_types():
        if decl.kind in CLASS_LIKE_KINDS:
            noc += 1
        elif decl.kind in INTERFACE_LIKE_KINDS:
            noi += 1
        noa += len(decl.fields)
        for method in decl.methods:
            if method.is_constructor and cfg.constructors == "exclude":
                continue
            nom += 1
            if "public" in method.modifiers:
                nopm += 1
            if "static" in method.modifiers:
                nosm += 1
            if method.body is not None:
                nol += method.body.local_var_decls
    return {
        "NOP": nop, "NOC": noc, "NOI": noi, "NOA": noa,
        "NOM": nom, "NOL": nol, "NOPM": nopm, "NOSM": nosm,
    }


def count_inheritance_relations(model: VariantModel, mode: str = "all") -> int:
    """Declared supertype edges; targets external to the model count too."""
    if mode == "all":
        return len(model.inheritance_edges)
    if mode == "extends-only":
        return sum(1 for e in model.inheritance_edges if e.edge_kind == "extends")
    raise ValueError(f"bad inheritance mode: {mode}")


def count_attribute_accesses(model: VariantModel, scope: str = "all") -> int:
    """Counted field access occurrences across all method bodies."""
    if scope not in ("all", "cross-class"):
        raise ValueError(f"bad scope: {scope}")
    total = 0
    for body in model.iter_bodies():
        for site in body.field_access_sites:
            if not site.counted:
                continue
            if scope == "all" or site.cross_class:
                total += 1
    return total


def count_method_invocations(
    model: VariantModel, scope: str = "all", include_new: bool = False
) -> int:
    """Call expressions across all method bodies; nested and chained calls
    each count once. Constructor calls join in only when requested."""
    if scope not in ("all", "cross-class"):
        raise ValueError(f"bad scope: {scope}")
    total = 0
    for body in model.iter_bodies():
        sites = body.invocation_sites
        if include_new:
            sites = sites + body.constructor_calls
        for site in sites:
            if scope == "all" or site.cross_class:
                total += 1
    return total


def compute_metrics(
    model: VariantModel, cfg: MetricsConfig = MetricsConfig()
) -> MetricsVector:
    """All thirteen metrics for one linked release."""
    decls = count_declarations(model, cfg)
    vector = MetricsVector(
        release_name=model.release_name,
        release_date=model.release_date,
        LOC=sum(count_loc(unit.file.text) for unit in model.units),
        NOIR=count_inheritance_relations(model, cfg.inheritance_mode),
        NOAA=count_attribute_accesses(model, cfg.dependency_scope),
        NOMI=count_method_invocations(
            model, cfg.dependency_scope, include_new=cfg.count_new_as_invocation
        ),
        **decls,
    )
    vector.NOID = vector.NOP + vector.NOC + vector.NOA + vector.NOM
    return vector
