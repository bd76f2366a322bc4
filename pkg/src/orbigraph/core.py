"""Weights, cone signatures, 2-orbifold classification and the singular graph.

Every comparison of reciprocal sums is done on integers: for positive
integers ``x, y, z`` the inequality ``1/x + 1/y + 1/z > 1`` is equivalent to
``xy + yz + zx > xyz``.  ``Fraction`` is used only where an exact rational
value is the return type.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import InvalidWeight


def check_weight(value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidWeight(f"weight must be an integer, got {value!r}")
    if value < 2:
        raise InvalidWeight(f"weight must be >= 2, got {value}")
    return value


_DIGITS = re.compile(r"(\d+)")


@lru_cache(maxsize=None)
def id_key(ident: str):
    """Total order on identifiers: natural order, then the raw string."""
    parts = _DIGITS.split(ident)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts)), ident


class ConeSignature(tuple):
    """Cone-point weights of a 2-orbifold with underlying space S^2, sorted."""

    def __new__(cls, weights: Iterable[int] = ()):
        return super().__new__(cls, sorted(check_weight(w) for w in weights))

    def __repr__(self) -> str:
        return f"ConeSignature({list(self)})"

    def label(self) -> str:
        if not self:
            return "S2"
        return "S2(" + ",".join(str(w) for w in self) + ")"


class TwoOrbifoldClass(enum.Enum):
    SphericalSmooth = "SphericalSmooth"
    SphericalFootball = "SphericalFootball"
    SphericalTriangle = "SphericalTriangle"
    BadTeardrop = "BadTeardrop"
    BadFootball = "BadFootball"
    Toroidal = "Toroidal"
    Hyperbolic = "Hyperbolic"
    NotSpherical = "NotSpherical"

    @property
    def is_spherical(self) -> bool:
        return self in _SPHERICAL

    @property
    def is_bad(self) -> bool:
        return self in (TwoOrbifoldClass.BadTeardrop, TwoOrbifoldClass.BadFootball)


_SPHERICAL = frozenset(
    {
        TwoOrbifoldClass.SphericalSmooth,
        TwoOrbifoldClass.SphericalFootball,
        TwoOrbifoldClass.SphericalTriangle,
    }
)


def _triple_excess(a1: int, a2: int, a3: int) -> int:
    # sign of 1/a1 + 1/a2 + 1/a3 - 1, scaled by a1*a2*a3
    return a1 * a2 + a2 * a3 + a3 * a1 - a1 * a2 * a3


def vertex_triple_is_admissible(a1: int, a2: int, a3: int) -> bool:
    """True iff ``1/a1 + 1/a2 + 1/a3 > 1``."""
    for w in (a1, a2, a3):
        check_weight(w)
    return _triple_excess(a1, a2, a3) > 0


def classify_cone_signature(sig: Iterable[int]) -> TwoOrbifoldClass:
    sig = sig if isinstance(sig, ConeSignature) else ConeSignature(sig)
    n = len(sig)
    if n == 0:
        return TwoOrbifoldClass.SphericalSmooth
    if n == 1:
        return TwoOrbifoldClass.BadTeardrop
    if n == 2:
        if sig[0] == sig[1]:
            return TwoOrbifoldClass.SphericalFootball
        return TwoOrbifoldClass.BadFootball
    if n == 3:
        excess = _triple_excess(*sig)
        if excess > 0:
            return TwoOrbifoldClass.SphericalTriangle
        if excess == 0:
            return TwoOrbifoldClass.Toroidal
        return TwoOrbifoldClass.Hyperbolic
    return TwoOrbifoldClass.NotSpherical


def is_spherical(sig: Iterable[int]) -> bool:
    return classify_cone_signature(sig).is_spherical


def orbifold_euler_characteristic(sig: Iterable[int]) -> Fraction:
    """``2 - sum(1 - 1/a)`` over the cone points."""
    sig = sig if isinstance(sig, ConeSignature) else ConeSignature(sig)
    return 2 - sum((1 - Fraction(1, a) for a in sig), Fraction(0))


# ---------------------------------------------------------------------------
# Singular graph


class HalfEdge(NamedTuple):
    edge: str
    end: int


@dataclass(frozen=True)
class Edge:
    """An edge of the singular set: a weighted circle, or an arc ``end0 -> end1``."""

    id: str
    weight: int
    ends: tuple[str, str] | None = None

    @property
    def is_circle(self) -> bool:
        return self.ends is None

    @property
    def is_loop(self) -> bool:
        return self.ends is not None and self.ends[0] == self.ends[1]

    def vertex(self, end: int) -> str:
        if self.ends is None:
            raise ValueError(f"edge {self.id} is a circle and has no ends")
        return self.ends[end]


EdgeLike = Union[Edge, Sequence]


def _as_edge(item: EdgeLike) -> Edge:
    if isinstance(item, Edge):
        return item
    ident, weight, *rest = item
    ends = rest[0] if rest else None
    return Edge(ident, weight, None if ends is None else (ends[0], ends[1]))


class SingularGraph:
    """Immutable weighted trivalent graph plus weighted circles.

    Incidence is derived from the arc ends, so a graph can be built in an
    invalid state; :func:`validate_graph` reports what is wrong with it.
    """

    __slots__ = ("_vertices", "_vset", "_edges", "_edge_map", "_incidence", "_hash")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[EdgeLike] = ()):
        verts = set(vertices)
        edge_map: dict[str, Edge] = {}
        for item in edges:
            edge = _as_edge(item)
            if edge.id in edge_map:
                raise ValueError(f"duplicate edge id {edge.id!r}")
            edge_map[edge.id] = edge
        clash = verts & edge_map.keys()
        if clash:
            raise ValueError(f"identifiers used for both a vertex and an edge: {sorted(clash)}")
        self._vertices = tuple(sorted(verts, key=id_key))
        self._vset = frozenset(verts)
        self._edges = tuple(edge_map[k] for k in sorted(edge_map, key=id_key))
        self._edge_map = edge_map
        incidence: dict[str, list[HalfEdge]] = {v: [] for v in self._vertices}
        for edge in self._edges:
            if edge.ends is None:
                continue
            for end, v in enumerate(edge.ends):
                incidence.setdefault(v, []).append(HalfEdge(edge.id, end))
        self._incidence = {v: tuple(hs) for v, hs in incidence.items()}
        self._hash = None

    # -- basic access -----------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def edge(self, ident: str) -> Edge:
        return self._edge_map[ident]

    def has_edge(self, ident: str) -> bool:
        return ident in self._edge_map

    def has_vertex(self, ident: str) -> bool:
        return ident in self._vset

    def weight(self, ident: str) -> int:
        return self._edge_map[ident].weight

    def incident(self, v: str) -> tuple[HalfEdge, ...]:
        """Half-edges at ``v`` ordered by edge id then end index."""
        return self._incidence.get(v, ())

    def vertex_of(self, h: HalfEdge) -> str:
        return self._edge_map[h.edge].ends[h.end]

    def opposite(self, h: HalfEdge) -> HalfEdge:
        return HalfEdge(h.edge, 1 - h.end)

    def vertex_weights(self, v: str) -> tuple[int, ...]:
        return tuple(sorted(self._edge_map[h.edge].weight for h in self.incident(v)))

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._edges)

    def __len__(self) -> int:
        return len(self._vertices) + len(self._edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SingularGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._edges))
        return self._hash

    def __repr__(self) -> str:
        parts = []
        for e in self._edges:
            shape = "circle" if e.ends is None else f"{e.ends[0]}-{e.ends[1]}"
            parts.append(f"{e.id}:{e.weight}:{shape}")
        return f"SingularGraph(V={list(self._vertices)}, E=[{', '.join(parts)}])"

    # -- derived quantities -------------------------------------------------

    def component_count(self) -> int:
        """Connected components of the graph (circles count individually)."""
        parent = {v: v for v in self._vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        circles = 0
        for e in self._edges:
            if e.ends is None:
                circles += 1
                continue
            a, b = e.ends
            if a in parent and b in parent:
                parent[find(a)] = find(b)
        return circles + len({find(v) for v in self._vertices})

    def ids(self) -> Iterator[str]:
        yield from self._vertices
        yield from self._edge_map


class Violation(NamedTuple):
    kind: str
    ref: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.ref}{': ' + self.detail if self.detail else ''})"


NON_TRIVALENT = "NonTrivalentVertex"
INADMISSIBLE = "InadmissibleVertex"
WEIGHT_TOO_SMALL = "WeightTooSmall"
DANGLING = "DanglingHalfEdge"


def validate_graph(g: SingularGraph) -> list[Violation]:
    out: list[Violation] = []
    known = set(g.vertices)
    for e in g.edges:
        w = e.weight
        if isinstance(w, bool) or not isinstance(w, int) or w < 2:
            out.append(Violation(WEIGHT_TOO_SMALL, e.id, f"weight {w!r}"))
        if e.ends is not None:
            for end, v in enumerate(e.ends):
                if v not in known:
                    out.append(Violation(DANGLING, e.id, f"end {end} at unknown vertex {v!r}"))
    for v in g.vertices:
        hs = g.incident(v)
        if len(hs) != 3:
            out.append(Violation(NON_TRIVALENT, v, f"valence {len(hs)}"))
            continue
        ws = [g.weight(h.edge) for h in hs]
        if all(isinstance(w, int) and w >= 2 for w in ws) and _triple_excess(*ws) <= 0:
            out.append(Violation(INADMISSIBLE, v, f"weights {tuple(sorted(ws))}"))
    return out


class FreshIds:
    """Deterministic fresh identifiers ``v<n>`` / ``e<n>`` from one counter.

    The counter starts above every trailing integer found in the graph's ids,
    so fresh ids never collide with existing ones.
    """

    def __init__(self, *graphs: SingularGraph, start: int | None = None):
        top = 0
        for g in graphs:
            for ident in g.ids():
                m = re.search(r"(\d+)$", ident)
                if m:
                    top = max(top, int(m.group(1)))
        self.next = top + 1 if start is None else start

    def _take(self, prefix: str) -> str:
        ident = f"{prefix}{self.next}"
        self.next += 1
        return ident

    def vertex(self) -> str:
        return self._take("v")

    def edge(self) -> str:
        return self._take("e")


# ---------------------------------------------------------------------------
# Witnesses and the summand ledger


@dataclass(frozen=True)
class Teardrop:
    edge: str

    @property
    def edges(self) -> tuple[str, ...]:
        return (self.edge,)

    kind = "teardrop"


@dataclass(frozen=True)
class Football:
    """A bad football meeting the heavy edge ``e`` and the light edge ``f``.

    ``f_plus_side`` names the end of ``f`` lying on the ``v+`` side, where
    ``v+`` is the vertex at end 1 of ``e``.  Only football Form 1 reads it.
    """

    e: str
    f: str
    f_plus_side: int | None = None

    @property
    def edges(self) -> tuple[str, ...]:
        return (self.e, self.f)

    kind = "football"


BadnessWitness = Union[Teardrop, Football]


def check_witness(g: SingularGraph, w: BadnessWitness) -> None:
    from .errors import WitnessInconsistent

    for ident in w.edges:
        if not g.has_edge(ident):
            raise WitnessInconsistent(f"witness edge {ident!r} is not in the graph")
    if isinstance(w, Football):
        if w.e == w.f:
            raise WitnessInconsistent("football edges e and f must differ")
        if g.weight(w.e) <= g.weight(w.f):
            raise WitnessInconsistent(
                f"football heavy edge {w.e} (weight {g.weight(w.e)}) must be heavier "
                f"than {w.f} (weight {g.weight(w.f)})"
            )
        if w.f_plus_side not in (None, 0, 1):
            raise WitnessInconsistent(f"f_plus_side must be 0, 1 or None, got {w.f_plus_side!r}")


S2xI = "S2xI"
S2xS1minusB3 = "S2xS1minusB3"
UNDERLYING_TAGS = (S2xI, S2xS1minusB3)


@dataclass(frozen=True)
class LedgerEntry:
    step: int
    form: str
    underlying: str
    signatures: tuple[ConeSignature, ...]

    def problems(self) -> list[str]:
        out = []
        expected = {S2xI: 2, S2xS1minusB3: 1}.get(self.underlying)
        if expected is None:
            out.append(f"step {self.step}: unknown underlying tag {self.underlying!r}")
        elif len(self.signatures) != expected:
            out.append(
                f"step {self.step}: {self.underlying} needs {expected} boundary "
                f"signature(s), got {len(self.signatures)}"
            )
        for sig in self.signatures:
            if not is_spherical(sig):
                out.append(f"step {self.step}: boundary {sig.label()} is not spherical")
        return out


class SummandLedger(tuple):
    """Ordered per-step record of the cut-and-capped summands."""

    def __new__(cls, entries: Iterable[LedgerEntry] = ()):
        return super().__new__(cls, entries)

    def problems(self) -> list[str]:
        return [p for entry in self for p in entry.problems()]
