"""Glyph decompositions and the composition-method complexity score."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

__all__ = [
    "ComponentKind",
    "ConnectionKind",
    "WeightScheme",
    "GlyphRecord",
    "ConsistencyReport",
    "DEFAULT_WEIGHTS",
    "ALTMANN2004_WEIGHTS",
    "get_weight_scheme",
    "complexity",
    "component_count",
    "connection_count",
    "check_consistency",
]


class ComponentKind(enum.Enum):
    POINT = "point"
    LINE = "line"
    ARCH = "arch"
    FILL = "fill"


class ConnectionKind(enum.Enum):
    CONTINUOUS = "continuous"
    CRISP = "crisp"
    CROSSING = "crossing"


def _frozen_counts(counts, kinds) -> Mapping:
    """Return a read-only map with every kind present (missing kinds -> 0)."""
    out = {k: 0 for k in kinds}
    for key, value in dict(counts or {}).items():
        kind = key if isinstance(key, kinds) else kinds(key)
        value = int(value)
        if value < 0:
            raise ValueError(f"negative count for {kind.value}: {value}")
        out[kind] += value
    return MappingProxyType(out)


@dataclass(frozen=True)
class WeightScheme:
    """Integer weights for each component and connection kind."""

    component_weights: Mapping[ComponentKind, int]
    connection_weights: Mapping[ConnectionKind, int]
    name: str = "custom"

    def __post_init__(self):
        cw = dict(self.component_weights)
        nw = dict(self.connection_weights)
        missing = [k.value for k in ComponentKind if k not in cw]
        missing += [k.value for k in ConnectionKind if k not in nw]
        if missing:
            raise ValueError(f"weight scheme lacks weights for: {', '.join(missing)}")
        if any(int(v) < 0 for v in (*cw.values(), *nw.values())):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "component_weights", _frozen_counts(cw, ComponentKind))
        object.__setattr__(self, "connection_weights", _frozen_counts(nw, ConnectionKind))


DEFAULT_WEIGHTS = WeightScheme(
    {ComponentKind.POINT: 1, ComponentKind.LINE: 2, ComponentKind.ARCH: 3, ComponentKind.FILL: 2},
    {ConnectionKind.CONTINUOUS: 1, ConnectionKind.CRISP: 2, ConnectionKind.CROSSING: 3},
    name="default",
)

# Altmann's original proposal scores filled areas as 1.
ALTMANN2004_WEIGHTS = WeightScheme(
    {**DEFAULT_WEIGHTS.component_weights, ComponentKind.FILL: 1},
    DEFAULT_WEIGHTS.connection_weights,
    name="altmann2004",
)

_SCHEMES = {s.name: s for s in (DEFAULT_WEIGHTS, ALTMANN2004_WEIGHTS)}


def get_weight_scheme(name: str | WeightScheme) -> WeightScheme:
    if isinstance(name, WeightScheme):
        return name
    try:
        return _SCHEMES[name]
    except KeyError:
        raise ValueError(
            f"unknown weight scheme {name!r}; choose from {sorted(_SCHEMES)}"
        ) from None


@dataclass(frozen=True)
class GlyphRecord:
    """One decomposed glyph: counts per component and connection kind.

    ``stated_complexity`` holds the published value, if any, and is never
    recomputed; see :func:`check_consistency`.
    """

    id: int
    transliteration: str
    components: Mapping[ComponentKind, int] = field(default_factory=dict)
    connections: Mapping[ConnectionKind, int] = field(default_factory=dict)
    stated_complexity: Optional[int] = None

    def __post_init__(self):
        if int(self.id) < 1:
            raise ValueError(f"glyph id must be positive, got {self.id}")
        object.__setattr__(self, "components", _frozen_counts(self.components, ComponentKind))
        object.__setattr__(self, "connections", _frozen_counts(self.connections, ConnectionKind))
        if not any(self.components.values()):
            raise ValueError(f"glyph {self.id} has no components")
        if self.stated_complexity is not None and int(self.stated_complexity) < 0:
            raise ValueError(f"glyph {self.id}: negative stated complexity")


def complexity(g, w: WeightScheme = DEFAULT_WEIGHTS) -> int:
    """Weighted sum of component and connection counts."""
    w = get_weight_scheme(w)
    total = sum(n * w.component_weights[k] for k, n in g.components.items())
    total += sum(n * w.connection_weights[k] for k, n in g.connections.items())
    return total


def component_count(g) -> int:
    return sum(g.components.values())


def connection_count(g) -> int:
    return sum(g.connections.values())


@dataclass(frozen=True)
class ConsistencyReport:
    id: int
    transliteration: str
    computed: int
    stated: Optional[int]

    @property
    def checked(self) -> bool:
        """False when there was no stated value to compare against."""
        return self.stated is not None

    @property
    def match(self) -> Optional[bool]:
        if self.stated is None:
            return None
        return self.computed == self.stated


def check_consistency(g: GlyphRecord, w: WeightScheme = DEFAULT_WEIGHTS) -> ConsistencyReport:
    """Compare the computed complexity with the stated one.

    A record without a stated value yields a report whose ``match`` is
    ``None`` (nothing to check) rather than an error.
    """
    return ConsistencyReport(g.id, g.transliteration, complexity(g, w), g.stated_complexity)
