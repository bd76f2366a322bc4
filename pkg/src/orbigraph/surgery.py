"""Cut-and-cap surgery and the reverse operation, piece attachment.

Both directions are local rewrites of the same kind.  The edges touched by
the rewrite are cut into *segments*; each segment end is either a surviving
vertex or a dangling *port*.  Ports are then closed off, either by fusing
two of them or by attaching one to a vertex, and the segments are traced
into chains.  Every chain becomes one edge of the result: an arc when it
runs between vertices, a circle when it closes up.

A chain keeps the id of the smallest original edge it contains (unless an
earlier chain already took that id); all other chains get fresh ids.  The
``renames`` map records where each original edge went, so witnesses on
surviving edges can be carried across a step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .classify import ALL_FORMS, CutGerm, XDescription
from .core import (
    ConeSignature,
    Edge,
    FreshIds,
    Football,
    SingularGraph,
    Teardrop,
    id_key,
    is_spherical,
    validate_graph,
    vertex_triple_is_admissible,
)
from .errors import InconsistentX, InvalidGraph, InvalidPiece, SiteMismatch, UnknownForm

SMOOTH_CAP = "SmoothCap"
SPLICE_CAP = "SpliceCap"
CONE_CAP = "ConeCap"


@dataclass(frozen=True)
class CapRecord:
    kind: str
    created: tuple[str, ...]
    consumed: tuple[CutGerm, ...]
    signature: ConeSignature


class Rename(NamedTuple):
    edge: str
    flipped: bool


# ---------------------------------------------------------------------------
# Segment assembly


class _Seg:
    __slots__ = ("origin", "weight", "ends")

    def __init__(self, origin, weight, start, stop):
        self.origin = origin
        self.weight = weight
        # ("v", vertex) or ("p", port)
        self.ends = (start, stop)


def _split_arc(edge: Edge, cut_ends: Mapping[int, object], pierces: Sequence[tuple]) -> list[_Seg]:
    """Cut an arc at its ends and at interior points ordered from end 0 to end 1.

    ``pierces`` holds ``(port_end0_side, port_end1_side)`` pairs.
    """
    segs = []
    start = ("p", cut_ends[0]) if 0 in cut_ends else ("v", edge.ends[0])
    for side0, side1 in pierces:
        segs.append(_Seg(edge.id, edge.weight, start, ("p", side0)))
        start = ("p", side1)
    stop = ("p", cut_ends[1]) if 1 in cut_ends else ("v", edge.ends[1])
    segs.append(_Seg(edge.id, edge.weight, start, stop))
    return segs


def _split_circle(edge: Edge, pierces: Sequence[tuple]) -> list[_Seg]:
    k = len(pierces)
    return [_Seg(edge.id, edge.weight, ("p", pierces[i][1]), ("p", pierces[(i + 1) % k][0])) for i in range(k)]


@dataclass
class _Assembly:
    edges: list[Edge]
    seg_edge: list[tuple[str, bool]]  # per segment: (edge id, traversed forward)
    renames: dict[str, Rename]
    split: set[str]


def _assemble(segs: list[_Seg], fuse: Sequence[tuple], attach: Mapping, fresh: FreshIds) -> _Assembly:
    owner = {}
    for i, s in enumerate(segs):
        for j, (kind, val) in enumerate(s.ends):
            if kind == "p":
                if val in owner:
                    raise InconsistentX(f"port {val!r} appears twice")
                owner[val] = (i, j)
    link = {}
    for p, q in fuse:
        for a, b in ((p, q), (q, p)):
            if a in link:
                raise InconsistentX(f"port {a!r} closed twice")
            link[a] = ("p", b)
    for p, v in attach.items():
        if p in link:
            raise InconsistentX(f"port {p!r} closed twice")
        link[p] = ("v", v)
    for p in owner:
        if p not in link:
            raise InconsistentX(f"port {p!r} is left dangling")
    for p in link:
        if p not in owner:
            raise InconsistentX(f"port {p!r} does not belong to any segment")

    def terminal(end):
        kind, val = end
        if kind == "v":
            return val
        lk = link[val]
        return lk[1] if lk[0] == "v" else None

    visited = [False] * len(segs)
    chains = []  # (list of (seg, forward), start vertex | None, end vertex | None)

    def walk(i, j):
        path = []
        start_v = terminal(segs[i].ends[j])
        while True:
            visited[i] = True
            path.append((i, j == 0))
            exit_end = segs[i].ends[1 - j]
            stop_v = terminal(exit_end)
            if stop_v is not None:
                return path, start_v, stop_v
            i, j = owner[link[exit_end[1]][1]]
            if visited[i]:
                return path, None, None

    for i, s in enumerate(segs):
        for j in (0, 1):
            if not visited[i] and terminal(s.ends[j]) is not None:
                chains.append(walk(i, j))
    for i in range(len(segs)):
        if not visited[i]:
            chains.append(walk(i, 0))

    def chain_key(item):
        idx, (path, _, _) = item
        origins = [segs[k].origin for k, _ in path if segs[k].origin is not None]
        if origins:
            return (0, min(id_key(o) for o in origins), idx)
        return (1, (), idx)

    taken: set[str] = set()
    edges = []
    seg_edge: list = [None] * len(segs)
    seen_in: dict[str, set[str]] = {}
    renames: dict[str, Rename] = {}
    for _, (path, start_v, stop_v) in sorted(enumerate(chains), key=chain_key):
        origins = sorted({segs[k].origin for k, _ in path if segs[k].origin is not None}, key=id_key)
        ident = next((o for o in origins if o not in taken), None)
        if ident is None:
            ident = fresh.edge()
        else:
            anchor = next(fwd for k, fwd in path if segs[k].origin == ident)
            if not anchor:
                path = [(k, not fwd) for k, fwd in reversed(path)]
                start_v, stop_v = stop_v, start_v
        taken.add(ident)
        weights = {segs[k].weight for k, _ in path}
        if len(weights) != 1:
            raise InconsistentX(f"chain for {ident} joins edges of different weights {sorted(weights)}")
        ends = None if start_v is None else (start_v, stop_v)
        edges.append(Edge(ident, weights.pop(), ends))
        for k, fwd in path:
            seg_edge[k] = (ident, fwd)
            o = segs[k].origin
            if o is not None:
                seen_in.setdefault(o, set()).add(ident)
                renames.setdefault(o, Rename(ident, not fwd))
    split = {o for o, ids in seen_in.items() if len(ids) > 1}
    for o in split:
        del renames[o]
    return _Assembly(edges, seg_edge, renames, split)


# ---------------------------------------------------------------------------
# Cut and cap


@dataclass(frozen=True)
class SurgeryResult:
    graph: SingularGraph
    caps: tuple[CapRecord, ...]
    renames: Mapping[str, Rename] = field(default_factory=dict)
    removed_edges: frozenset = frozenset()

    def __iter__(self):
        # unpacks as (graph, caps)
        return iter((self.graph, self.caps))


def _check_x(g: SingularGraph, x: XDescription) -> None:
    for v in x.interior_vertices:
        if not g.has_vertex(v):
            raise InconsistentX(f"interior vertex {v} is not in the graph")
    for e in x.interior_edges:
        if not g.has_edge(e):
            raise InconsistentX(f"interior edge {e} is not in the graph")
        edge = g.edge(e)
        if edge.ends is not None and not set(edge.ends) <= x.interior_vertices:
            raise InconsistentX(f"interior edge {e} leaves the interior vertices")
    seen = set()
    pierced: dict[str, set[int]] = {}
    for comp in x.boundary:
        for germ in comp:
            if germ in seen:
                raise InconsistentX(f"germ {germ} listed twice")
            seen.add(germ)
            if not g.has_edge(germ.edge):
                raise InconsistentX(f"germ references dead edge {germ.edge}")
            if germ.edge in x.interior_edges:
                raise InconsistentX(f"germ references interior edge {germ.edge}")
            edge = g.edge(germ.edge)
            if germ.weight != edge.weight:
                raise InconsistentX(f"germ weight {germ.weight} != weight of {germ.edge}")
            if germ.pierce:
                pierced.setdefault(germ.edge, set()).add(germ.end)
            elif edge.ends is None or edge.ends[germ.end] not in x.interior_vertices:
                raise InconsistentX(f"germ {germ.edge}@{germ.end} is not next to deleted material")
    for e, sides in pierced.items():
        if sides != {0, 1}:
            raise InconsistentX(f"pierced edge {e} needs germs on both sides")
    for v in x.interior_vertices:
        for h in g.incident(v):
            if h.edge in x.interior_edges:
                continue
            if CutGerm(h.edge, h.end, False, g.weight(h.edge)) not in seen:
                raise InconsistentX(f"half-edge {h.edge}@{h.end} at deleted vertex {v} is not cut")


def cut_and_cap(g: SingularGraph, x: XDescription, *, validate: bool = True) -> SurgeryResult:
    """Remove ``X`` and cap every boundary component with a cone."""
    if validate:
        violations = validate_graph(g)
        if violations:
            raise InvalidGraph(violations)
    _check_x(g, x)

    cut_ends: dict[str, dict[int, CutGerm]] = {}
    pierces: dict[str, dict[int, CutGerm]] = {}
    for comp in x.boundary:
        for germ in comp:
            table = pierces if germ.pierce else cut_ends
            table.setdefault(germ.edge, {})[germ.end] = germ

    touched = sorted(set(cut_ends) | set(pierces), key=id_key)
    segs: list[_Seg] = []
    for e in touched:
        edge = g.edge(e)
        pp = [(pierces[e][0], pierces[e][1])] if e in pierces else []
        if edge.ends is None:
            segs.extend(_split_circle(edge, pp))
        else:
            segs.extend(_split_arc(edge, cut_ends.get(e, {}), pp))

    fresh = FreshIds(g)
    fuse, attach, plans = [], {}, []
    for comp in x.boundary:
        sig = ConeSignature(germ.weight for germ in comp)
        if len(comp) == 0:
            plans.append((SMOOTH_CAP, (), comp, sig))
        elif len(comp) == 2:
            if comp[0].weight != comp[1].weight:
                raise InconsistentX(f"splice cap on unequal weights {sig.label()}")
            fuse.append((comp[0], comp[1]))
            plans.append((SPLICE_CAP, None, comp, sig))
        elif len(comp) == 3:
            if not is_spherical(sig):
                raise InconsistentX(f"cone cap on non-spherical boundary {sig.label()}")
            z = fresh.vertex()
            for germ in comp:
                attach[germ] = z
            plans.append((CONE_CAP, (z,), comp, sig))
        else:
            raise InconsistentX(f"boundary component with {len(comp)} germs cannot be capped")

    asm = _assemble(segs, fuse, attach, fresh)
    port_edge = {}
    for k, s in enumerate(segs):
        for kind, val in s.ends:
            if kind == "p":
                port_edge[val] = asm.seg_edge[k][0]

    caps = []
    for kind, created, comp, sig in plans:
        if kind == SPLICE_CAP:
            created = (port_edge[comp[0]],)
        caps.append(CapRecord(kind, created, tuple(comp), sig))

    removed = set(x.interior_edges) | set(touched)
    kept = [e for e in g.edges if e.id not in removed]
    new_vertices = [v for v in g.vertices if v not in x.interior_vertices]
    new_vertices += [c.created[0] for c in caps if c.kind == CONE_CAP]
    out = SingularGraph(new_vertices, kept + asm.edges)
    renames = {e.id: Rename(e.id, False) for e in kept}
    renames.update(asm.renames)
    return SurgeryResult(out, tuple(caps), renames, frozenset(x.interior_edges) | frozenset(asm.split))


def apply_cut_and_cap(g: SingularGraph, x: XDescription) -> tuple[SingularGraph, tuple[CapRecord, ...]]:
    res = cut_and_cap(g, x)
    return res.graph, res.caps


# ---------------------------------------------------------------------------
# Pieces


FORM_PARAMS: dict[str, tuple[str, ...]] = {
    "TD_Smooth": ("a",),
    "TD_Form1": ("a", "aplus", "aminus"),
    "TD_Form2": ("a", "aplus", "aminus", "abarminus", "a2", "a3"),
    "TD_Form3": ("a", "aplus", "abarplus", "aminus", "abarminus", "a2", "a3", "a2p", "a3p"),
    "TD_Form4a": ("a", "aplus", "aplusplus"),
    "TD_Form4b": ("a", "aplus", "aplusplus", "abarplusplus", "a1", "a2"),
    "TD_Form5a": ("a", "astar", "a1", "a1star"),
    "TD_Form5b": ("a", "astar", "a1", "a1star", "a2", "a3"),
    "TD_Form6": ("a", "aplus", "abarplus", "aminus", "abarminus", "astar"),
    "FB_Smooth": ("b", "a"),
    "FB_Form1": ("b", "a", "a2", "a3", "a2p", "a3p"),
    "FB_Form2": ("a", "b", "astar"),
}
assert set(FORM_PARAMS) == set(ALL_FORMS)


def normalize_params(form: str, params) -> dict[str, int]:
    if form not in FORM_PARAMS:
        raise UnknownForm(form)
    names = FORM_PARAMS[form]
    if isinstance(params, Mapping):
        if set(params) != set(names):
            raise InvalidPiece(f"{form} takes parameters {names}, got {sorted(params)}")
        values = {k: params[k] for k in names}
    else:
        params = tuple(params)
        if len(params) != len(names):
            raise InvalidPiece(f"{form} takes {len(names)} parameters {names}, got {len(params)}")
        values = dict(zip(names, params))
    for k, v in values.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 2:
            raise InvalidPiece(f"{form}: parameter {k} must be an integer >= 2, got {v!r}")
    return values


def _adm(*ws: int) -> bool:
    return vertex_triple_is_admissible(*ws)


def validate_form_params(form: str, params) -> bool:
    """Whether the weights can occur around a witness classified as ``form``."""
    try:
        p = normalize_params(form, params)
    except InvalidPiece:
        return False
    a = p.get("a")
    if form == "TD_Smooth":
        return True
    if form == "TD_Form1":
        return _adm(a, p["aplus"], p["aplus"]) and _adm(a, p["aminus"], p["aminus"])
    if form == "TD_Form2":
        return (
            _adm(a, p["aplus"], p["aplus"])
            and p["aminus"] > p["abarminus"]
            and _adm(a, p["aminus"], p["abarminus"])
            and p["a2"] <= p["a3"]
            and _adm(p["aminus"], p["a2"], p["a3"])
            and is_spherical((p["abarminus"], p["a2"], p["a3"]))
        )
    if form == "TD_Form3":
        return (
            p["aplus"] > p["abarplus"]
            and p["aminus"] > p["abarminus"]
            and _adm(a, p["aplus"], p["abarplus"])
            and _adm(a, p["aminus"], p["abarminus"])
            and p["a2"] <= p["a3"]
            and p["a2p"] <= p["a3p"]
            and _adm(p["aplus"], p["a2"], p["a3"])
            and _adm(p["aminus"], p["a2p"], p["a3p"])
            and is_spherical((p["abarplus"], p["a2"], p["a3"]))
            and is_spherical((p["abarminus"], p["a2p"], p["a3p"]))
        )
    if form == "TD_Form4a":
        return _adm(a, a, p["aplus"]) and _adm(p["aplus"], p["aplusplus"], p["aplusplus"])
    if form == "TD_Form4b":
        return (
            _adm(a, a, p["aplus"])
            and p["aplusplus"] > p["abarplusplus"]
            and _adm(p["aplus"], p["aplusplus"], p["abarplusplus"])
            and p["a1"] <= p["a2"]
            and _adm(p["aplusplus"], p["a1"], p["a2"])
            and is_spherical((p["abarplusplus"], p["a1"], p["a2"]))
        )
    if form in ("TD_Form5a", "TD_Form5b"):
        ok = _adm(a, p["astar"], p["a1"]) and _adm(a, p["astar"], p["a1star"])
        if form == "TD_Form5a":
            return ok and p["a1"] == p["a1star"]
        return (
            ok
            and p["a1"] < p["a1star"]
            and p["a2"] <= p["a3"]
            and _adm(p["a1star"], p["a2"], p["a3"])
            and is_spherical((p["a1"], p["a2"], p["a3"]))
        )
    if form == "TD_Form6":
        return (
            p["astar"] == 2
            and (p["aminus"], p["abarminus"]) == (3, 2)
            and p["aplus"] in (3, 4, 5)
            and p["abarplus"] in (2, 3)
            and a <= 5
            and p["aplus"] > p["abarplus"]
            and _adm(a, p["aplus"], p["abarplus"])
            and _adm(a, p["aminus"], p["abarminus"])
            and _adm(p["aplus"], p["aminus"], p["astar"])
        )
    if form == "FB_Smooth":
        return p["b"] > a
    if form == "FB_Form1":
        b = p["b"]
        return (
            b > a
            and p["a2"] <= p["a3"]
            and p["a2p"] <= p["a3p"]
            and _adm(b, p["a2"], p["a3"])
            and _adm(b, p["a2p"], p["a3p"])
        )
    if form == "FB_Form2":
        return (a, p["b"], p["astar"]) == (2, 3, 2)
    raise UnknownForm(form)


class Slot(NamedTuple):
    """One place a boundary component of a piece meets the outside.

    Either an outside edge ends on template ``vertex``, or the outside edge
    runs on through the piece along ``strand`` (entering at ``side``).
    """

    weight: int
    vertex: str | None = None
    strand: str | None = None
    side: int = 0


@dataclass(frozen=True)
class PieceSpec:
    """Template for one removable region, in local names.

    ``edges`` are ``(name, weight, (end0, end1) | None)``; ``strands`` are
    unbroken stretches of an outside edge passing through the piece.
    """

    form: str
    params: tuple[tuple[str, int], ...]
    vertices: tuple[str, ...]
    edges: tuple[tuple, ...]
    strands: tuple[tuple[str, int], ...]
    components: tuple[tuple[Slot, ...], ...]
    witness: tuple

    def signatures(self) -> tuple[ConeSignature, ...]:
        return tuple(ConeSignature(s.weight for s in comp) for comp in self.components)

    def param(self, name: str) -> int:
        return dict(self.params)[name]


def make_piece(form: str, params) -> PieceSpec:
    p = normalize_params(form, params)
    if not validate_form_params(form, p):
        raise InvalidPiece(f"{form}: parameters {p} cannot occur")
    S = Slot
    a = p.get("a")
    strands: tuple = ()
    td = ("teardrop", "e")
    if form == "TD_Smooth":
        verts, edges, comps, wit = (), (("e", a, None),), ((),), td
    elif form == "TD_Form1":
        ap, am = p["aplus"], p["aminus"]
        verts = ("vp", "vm")
        edges = (("e", a, ("vm", "vp")),)
        comps = ((S(ap, "vp"), S(ap, "vp")), (S(am, "vm"), S(am, "vm")))
        wit = td
    elif form == "TD_Form2":
        verts = ("vp", "vm", "vmm")
        edges = (("e", a, ("vm", "vp")), ("em", p["aminus"], ("vm", "vmm")))
        ap = p["aplus"]
        comps = (
            (S(ap, "vp"), S(ap, "vp")),
            (S(p["abarminus"], "vm"), S(p["a2"], "vmm"), S(p["a3"], "vmm")),
        )
        wit = td
    elif form == "TD_Form3":
        verts = ("vp", "vm", "vpp", "vmm")
        edges = (
            ("e", a, ("vm", "vp")),
            ("ep", p["aplus"], ("vp", "vpp")),
            ("em", p["aminus"], ("vm", "vmm")),
        )
        comps = (
            (S(p["abarplus"], "vp"), S(p["a2"], "vpp"), S(p["a3"], "vpp")),
            (S(p["abarminus"], "vm"), S(p["a2p"], "vmm"), S(p["a3p"], "vmm")),
        )
        wit = td
    elif form == "TD_Form4a":
        verts = ("v", "vpp")
        edges = (("e", a, ("v", "v")), ("ep", p["aplus"], ("v", "vpp")))
        app = p["aplusplus"]
        comps = ((S(app, "vpp"), S(app, "vpp")),)
        wit = td
    elif form == "TD_Form4b":
        verts = ("v", "vpp", "w")
        edges = (
            ("e", a, ("v", "v")),
            ("ep", p["aplus"], ("v", "vpp")),
            ("epp", p["aplusplus"], ("vpp", "w")),
        )
        comps = ((S(p["abarplusplus"], "vpp"), S(p["a1"], "w"), S(p["a2"], "w")),)
        wit = td
    elif form == "TD_Form5a":
        verts = ("vm", "vp")
        edges = (("e", a, ("vm", "vp")), ("es", p["astar"], ("vm", "vp")))
        comps = ((S(p["a1"], "vm"), S(p["a1star"], "vp")),)
        wit = td
    elif form == "TD_Form5b":
        verts = ("vm", "vp", "w")
        edges = (
            ("e", a, ("vm", "vp")),
            ("es", p["astar"], ("vm", "vp")),
            ("e1", p["a1star"], ("vp", "w")),
        )
        comps = ((S(p["a1"], "vm"), S(p["a2"], "w"), S(p["a3"], "w")),)
        wit = td
    elif form == "TD_Form6":
        verts = ("vp", "vm", "u")
        edges = (
            ("e", a, ("vm", "vp")),
            ("ep", p["aplus"], ("vp", "u")),
            ("em", p["aminus"], ("vm", "u")),
        )
        comps = ((S(p["abarplus"], "vp"), S(p["abarminus"], "vm"), S(p["astar"], "u")),)
        wit = td
    elif form == "FB_Smooth":
        verts = ()
        edges = (("e", p["b"], None),)
        strands = (("f", a),)
        comps = ((S(a, strand="f", side=0), S(a, strand="f", side=1)),)
        wit = ("football", "e", "f")
    elif form == "FB_Form1":
        verts = ("vm", "vp")
        edges = (("e", p["b"], ("vm", "vp")),)
        strands = (("f", a),)
        comps = (
            (S(a, strand="f", side=0), S(p["a2"], "vm"), S(p["a3"], "vm")),
            (S(a, strand="f", side=1), S(p["a2p"], "vp"), S(p["a3p"], "vp")),
        )
        wit = ("football", "e", "f")
    elif form == "FB_Form2":
        verts = ("v",)
        edges = (("e", p["b"], ("v", "v")),)
        strands = (("f", a),)
        comps = ((S(a, strand="f", side=0), S(a, strand="f", side=1), S(p["astar"], "v")),)
        wit = ("football", "e", "f")
    else:  # pragma: no cover - normalize_params already rejected it
        raise UnknownForm(form)
    return PieceSpec(form, tuple(p.items()), verts, edges, strands, comps, wit)


# ---------------------------------------------------------------------------
# Attachment


@dataclass(frozen=True)
class AttachmentSite:
    """Where a boundary component of a piece is glued in.

    ``vertex``: a trivalent vertex is removed, exposing three stubs.
    ``edge``: the edge is cut at a point, exposing two stubs; ``position``
    orders several cut points on one edge (from end 0 towards end 1).
    ``smooth``: a smooth ball, exposing nothing.
    """

    kind: str
    ref: str | None = None
    position: int = 0

    @classmethod
    def at_vertex(cls, v: str) -> "AttachmentSite":
        return cls("vertex", v)

    @classmethod
    def on_edge(cls, e: str, position: int = 0) -> "AttachmentSite":
        return cls("edge", e, position)

    @classmethod
    def smooth(cls) -> "AttachmentSite":
        return cls("smooth")


@dataclass(frozen=True)
class AttachResult:
    graph: SingularGraph
    witness: Teardrop | Football
    new_vertices: frozenset
    new_edges: frozenset

    def __iter__(self):
        return iter((self.graph, self.witness))


def _stubs(g: SingularGraph, site: AttachmentSite):
    """Exposed ports of a site as ``(sort key, port, weight)``."""
    if site.kind == "smooth":
        return []
    if site.kind == "vertex":
        if not g.has_vertex(site.ref):
            raise SiteMismatch(f"no vertex {site.ref!r}")
        out = []
        for h in g.incident(site.ref):
            w = g.weight(h.edge)
            out.append(((w, id_key(h.edge), 0, h.end), ("cut", h.edge, h.end), w))
        return out
    if site.kind == "edge":
        if not g.has_edge(site.ref):
            raise SiteMismatch(f"no edge {site.ref!r}")
        w = g.weight(site.ref)
        return [
            ((w, id_key(site.ref), 1, site.position, side), ("pierce", site.ref, site.position, side), w)
            for side in (0, 1)
        ]
    raise SiteMismatch(f"unknown site kind {site.kind!r}")


def attach_piece_detailed(g: SingularGraph, p: PieceSpec, sites: Sequence[AttachmentSite]) -> AttachResult:
    violations = validate_graph(g)
    if violations:
        raise InvalidGraph(violations)
    if not validate_form_params(p.form, dict(p.params)):
        raise InvalidPiece(f"{p.form}: inadmissible parameters {dict(p.params)}")
    if len(sites) != len(p.components):
        raise SiteMismatch(f"{p.form} needs {len(p.components)} site(s), got {len(sites)}")
    if len(set(sites)) != len(sites):
        raise SiteMismatch("attachment sites must be distinct")

    exposed = []
    for site, comp in zip(sites, p.components):
        stubs = sorted(_stubs(g, site))
        got = ConeSignature(w for _, _, w in stubs)
        want = ConeSignature(s.weight for s in comp)
        if got != want:
            raise SiteMismatch(f"site {site} exposes {got.label()}, piece boundary is {want.label()}")
        exposed.append(stubs)

    cut_ends: dict[str, dict[int, tuple]] = {}
    pierces: dict[str, list] = {}
    for stubs in exposed:
        for _, port, _ in stubs:
            if port[0] == "cut":
                cut_ends.setdefault(port[1], {})[port[2]] = port
            elif port[3] == 0:
                pierces.setdefault(port[1], []).append((port[2], port, port[:3] + (1,)))

    fresh = FreshIds(g)
    local_v = {name: fresh.vertex() for name in p.vertices}

    segs: list[_Seg] = []
    for e in sorted(set(cut_ends) | set(pierces), key=id_key):
        edge = g.edge(e)
        pp = [(s0, s1) for _, s0, s1 in sorted(pierces.get(e, []))]
        if edge.ends is None:
            segs.extend(_split_circle(edge, pp))
        else:
            segs.extend(_split_arc(edge, cut_ends.get(e, {}), pp))

    local_e: dict[str, str] = {}
    template_seg: dict[str, int] = {}
    direct_edges = []
    for name, weight, ends in p.edges:
        if ends is None:
            local_e[name] = fresh.edge()
            direct_edges.append(Edge(local_e[name], weight, None))
        else:
            template_seg[name] = len(segs)
            segs.append(_Seg(None, weight, ("v", local_v[ends[0]]), ("v", local_v[ends[1]])))
    strand_seg = {}
    for name, weight in p.strands:
        strand_seg[name] = len(segs)
        segs.append(_Seg(None, weight, ("p", ("strand", name, 0)), ("p", ("strand", name, 1))))

    fuse, attach = [], {}
    for stubs, comp in zip(exposed, p.components):
        slots = sorted(range(len(comp)), key=lambda i: (comp[i].weight, i))
        for (_, port, w), i in zip(stubs, slots):
            slot = comp[i]
            if slot.weight != w:  # pragma: no cover - signatures already matched
                raise SiteMismatch("stub and slot weights differ")
            if slot.vertex is not None:
                attach[port] = local_v[slot.vertex]
            else:
                fuse.append((port, ("strand", slot.strand, slot.side)))

    asm = _assemble(segs, fuse, attach, fresh)
    for name, k in template_seg.items():
        local_e[name] = asm.seg_edge[k][0]

    removed = set(cut_ends) | set(pierces)
    kept = [e for e in g.edges if e.id not in removed]
    gone = {s.ref for s in sites if s.kind == "vertex"}
    vertices = [v for v in g.vertices if v not in gone] + list(local_v.values())
    out = SingularGraph(vertices, kept + direct_edges + asm.edges)

    if p.witness[0] == "teardrop":
        witness = Teardrop(local_e[p.witness[1]])
    else:
        f_id, forward = asm.seg_edge[strand_seg[p.witness[2]]]
        side = (1 if forward else 0) if p.form == "FB_Form1" else 0
        witness = Football(local_e[p.witness[1]], f_id, side)
    return AttachResult(out, witness, frozenset(local_v.values()), frozenset(local_e.values()))


def attach_piece(g: SingularGraph, p: PieceSpec, sites: Sequence[AttachmentSite]):
    """Glue piece ``p`` in at ``sites``; returns ``(graph, witness)``."""
    res = attach_piece_detailed(g, p, sites)
    return res.graph, res.witness
