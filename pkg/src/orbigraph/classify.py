"""Local pictures around a declared teardrop or bad football.

Given a valid singular graph and a witness, the classifiers walk a short
tree of branches out from the witness edge (a locally injective unfolding:
distinct tree nodes may land on the same graph vertex) and decide which of
the twelve removable regions ``X`` contains the witness.  The result is an
:class:`XDescription`: the graph material inside ``X`` and, per boundary
component of ``X``, the germs of the surviving edges that cross it.

Tie-breaks are deterministic: heavier branch first, then smaller edge id;
among endpoints, the smaller vertex id takes the ``+`` role when weights do
not decide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .core import (
    S2xI,
    S2xS1minusB3,
    ConeSignature,
    Football,
    HalfEdge,
    SingularGraph,
    Teardrop,
    check_witness,
    id_key,
    is_spherical,
    validate_graph,
)
from .errors import InvalidGraph, WitnessInconsistent

TEARDROP_FORMS = (
    "TD_Smooth",
    "TD_Form1",
    "TD_Form2",
    "TD_Form3",
    "TD_Form4a",
    "TD_Form4b",
    "TD_Form5a",
    "TD_Form5b",
    "TD_Form6",
)
FOOTBALL_FORMS = ("FB_Smooth", "FB_Form1", "FB_Form2")
ALL_FORMS = TEARDROP_FORMS + FOOTBALL_FORMS


class CutGerm(NamedTuple):
    """Where a surviving edge crosses the boundary of ``X``.

    With ``pierce=False`` the edge is severed next to its ``end`` vertex,
    which lies inside ``X``.  With ``pierce=True`` the edge is severed at an
    interior point and this germ is the stub on the ``end`` side of it.
    """

    edge: str
    end: int
    pierce: bool
    weight: int


@dataclass(frozen=True)
class XDescription:
    form: str
    interior_vertices: frozenset
    interior_edges: frozenset
    boundary: tuple  # tuple of components, each a tuple of CutGerm
    underlying: str
    labels: tuple = field(default=(), compare=False)

    def signatures(self) -> tuple[ConeSignature, ...]:
        return tuple(ConeSignature(g.weight for g in comp) for comp in self.boundary)

    def label(self, name: str) -> int:
        return dict(self.labels)[name]

    def summary(self) -> str:
        sigs = " ; ".join(sig.label() for sig in self.signatures())
        return f"{self.form}  boundary: {sigs}  underlying: {self.underlying}"


# ---------------------------------------------------------------------------
# Local exploration


@dataclass(frozen=True)
class Branch:
    half: HalfEdge  # the half-edge at the explored vertex
    weight: int
    far: HalfEdge  # the other end of the same edge
    far_vertex: str


def _branch(g: SingularGraph, h: HalfEdge) -> Branch:
    edge = g.edge(h.edge)
    far = HalfEdge(h.edge, 1 - h.end)
    return Branch(h, edge.weight, far, edge.ends[far.end])


def branches_at(g: SingularGraph, v: str, exclude) -> tuple[Branch, ...]:
    """Branches at ``v`` other than the half-edges in ``exclude``, heavy first."""
    hs = [h for h in g.incident(v) if h not in exclude]
    hs.sort(key=lambda h: (-g.weight(h.edge), id_key(h.edge), h.end))
    return tuple(_branch(g, h) for h in hs)


@dataclass(frozen=True)
class LocalExploration:
    """First level of the unfolding tree around an arc ``e``.

    ``minus`` is the vertex at end 0 of ``e`` and ``plus`` the vertex at end 1,
    before any role swap done by the classifiers.  For a loop both ends share
    one vertex and each side lists the single remaining branch.
    """

    edge: str
    weight: int
    vminus: str
    vplus: str
    minus: tuple[Branch, ...]
    plus: tuple[Branch, ...]

    def beyond(self, g: SingularGraph, b: Branch) -> tuple[Branch, ...]:
        """Second level: the branches at ``b.far_vertex`` other than ``b`` itself."""
        return branches_at(g, b.far_vertex, {b.far})


def explore(g: SingularGraph, e: str) -> LocalExploration:
    edge = g.edge(e)
    if edge.ends is None:
        raise WitnessInconsistent(f"edge {e} is a circle; there is nothing to explore")
    own = {HalfEdge(e, 0), HalfEdge(e, 1)}
    v0, v1 = edge.ends
    minus = branches_at(g, v0, own)
    plus = branches_at(g, v1, own)
    expected = 1 if v0 == v1 else 2
    if len(minus) != expected or len(plus) != expected:
        raise WitnessInconsistent(f"edge {e} does not sit in a trivalent neighbourhood")
    return LocalExploration(e, edge.weight, v0, v1, minus, plus)


# ---------------------------------------------------------------------------
# Helpers


def _require_valid(g: SingularGraph) -> None:
    violations = validate_graph(g)
    if violations:
        raise InvalidGraph(violations)


def _cut(b: Branch) -> CutGerm:
    return CutGerm(b.half.edge, b.half.end, False, b.weight)


def _pierce(g: SingularGraph, edge: str) -> tuple[CutGerm, CutGerm]:
    w = g.weight(edge)
    return CutGerm(edge, 0, True, w), CutGerm(edge, 1, True, w)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise WitnessInconsistent(message)


def _finish(form, verts, edges, boundary, underlying, labels) -> XDescription:
    x = XDescription(
        form,
        frozenset(verts),
        frozenset(edges),
        tuple(tuple(comp) for comp in boundary),
        underlying,
        tuple(labels),
    )
    for sig in x.signatures():
        _require(is_spherical(sig), f"{form}: boundary {sig.label()} is not spherical")
    _require((len(x.boundary) == 2) == (underlying == S2xI), f"{form}: boundary count mismatch")
    return x


# ---------------------------------------------------------------------------
# Teardrops


def classify_teardrop(g: SingularGraph, w: Teardrop | str, *, validate: bool = True) -> XDescription:
    if validate:
        _require_valid(g)
    if isinstance(w, str):
        w = Teardrop(w)
    check_witness(g, w)
    e = w.edge
    edge = g.edge(e)
    a = edge.weight

    if edge.ends is None:
        return _finish("TD_Smooth", (), (e,), [()], S2xS1minusB3, [("a", a)])

    ex = explore(g, e)
    if ex.vminus == ex.vplus:
        return _teardrop_loop(g, ex)

    v0, v1 = ex.vminus, ex.vplus
    parallels = [
        x
        for x in g.edges
        if x.id != e and x.ends is not None and {x.ends[0], x.ends[1]} == {v0, v1} and x.ends[0] != x.ends[1]
    ]
    if parallels:
        return _teardrop_parallel(g, ex, parallels)
    return _teardrop_generic(g, ex)


def _teardrop_loop(g: SingularGraph, ex: LocalExploration) -> XDescription:
    a = ex.weight
    v = ex.vminus
    (eplus,) = ex.plus
    vpp = eplus.far_vertex
    _require(vpp != v, "loop: third edge must leave the loop vertex")
    hi, lo = ex.beyond(g, eplus)
    app, abpp = hi.weight, lo.weight
    labels = [("a", a), ("aplus", eplus.weight), ("aplusplus", app), ("abarplusplus", abpp)]
    if app == abpp:
        return _finish(
            "TD_Form4a",
            (v, vpp),
            (ex.edge, eplus.half.edge),
            [(_cut(hi), _cut(lo))],
            S2xS1minusB3,
            labels,
        )
    w = hi.far_vertex
    _require(w not in (v, vpp), "Form 4.b: heavier branch must reach a new vertex")
    a1, a2 = ex.beyond(g, hi)
    labels += [("a1", a1.weight), ("a2", a2.weight)]
    return _finish(
        "TD_Form4b",
        (v, vpp, w),
        (ex.edge, eplus.half.edge, hi.half.edge),
        [(_cut(lo), _cut(a1), _cut(a2))],
        S2xS1minusB3,
        labels,
    )


def _teardrop_parallel(g: SingularGraph, ex: LocalExploration, parallels) -> XDescription:
    star = min(parallels, key=lambda x: (-x.weight, id_key(x.id)))
    used = {ex.edge, star.id}
    thirds = []
    for branches in (ex.minus, ex.plus):
        rest = [b for b in branches if b.half.edge not in used]
        _require(len(rest) == 1, "Form 5: endpoint must have exactly one third edge")
        thirds.append(rest[0])
    t_minus, t_plus = thirds
    light, heavy = sorted(thirds, key=lambda b: (b.weight, b is t_plus))
    a1, a1s = light.weight, heavy.weight
    labels = [("a", ex.weight), ("astar", star.weight), ("a1", a1), ("a1star", a1s)]
    verts = (ex.vminus, ex.vplus)
    if a1 == a1s:
        return _finish(
            "TD_Form5a",
            verts,
            (ex.edge, star.id),
            [(_cut(t_minus), _cut(t_plus))],
            S2xS1minusB3,
            labels,
        )
    w = heavy.far_vertex
    _require(w not in verts, "Form 5.b: heavier third edge must reach a new vertex")
    b2, b3 = ex.beyond(g, heavy)
    labels += [("a2", b2.weight), ("a3", b3.weight)]
    return _finish(
        "TD_Form5b",
        verts + (w,),
        (ex.edge, star.id, heavy.half.edge),
        [(_cut(light), _cut(b2), _cut(b3))],
        S2xS1minusB3,
        labels,
    )


def _teardrop_generic(g: SingularGraph, ex: LocalExploration) -> XDescription:
    sides = {ex.vminus: ex.minus, ex.vplus: ex.plus}
    eq = {v: bs[0].weight == bs[1].weight for v, bs in sides.items()}
    vm, vp = ex.vminus, ex.vplus
    if eq[vm] != eq[vp]:
        plus = vm if eq[vm] else vp
    elif eq[vm]:
        plus = min(vm, vp, key=id_key)
    else:
        # strict on both sides: heavier branch is "+"; ties by vertex id
        plus = min(vm, vp, key=lambda v: (-sides[v][0].weight, id_key(v)))
    minus = vp if plus == vm else vm
    ep, ebp = sides[plus]
    em, ebm = sides[minus]
    a = ex.weight
    labels = [
        ("a", a),
        ("aplus", ep.weight),
        ("abarplus", ebp.weight),
        ("aminus", em.weight),
        ("abarminus", ebm.weight),
    ]

    if eq[plus] and eq[minus]:
        return _finish(
            "TD_Form1",
            (plus, minus),
            (ex.edge,),
            [(_cut(ep), _cut(ebp)), (_cut(em), _cut(ebm))],
            S2xI,
            labels,
        )

    if eq[plus]:
        vmm = em.far_vertex
        _require(vmm not in (minus, plus), "Form 2: heavy branch must reach a new vertex")
        b2, b3 = ex.beyond(g, em)
        labels += [("a2", b2.weight), ("a3", b3.weight)]
        return _finish(
            "TD_Form2",
            (plus, minus, vmm),
            (ex.edge, em.half.edge),
            [(_cut(ep), _cut(ebp)), (_cut(ebm), _cut(b2), _cut(b3))],
            S2xI,
            labels,
        )

    vpp, vmm = ep.far_vertex, em.far_vertex
    _require(vpp not in (plus, minus) and vmm not in (plus, minus), "Forms 3/6: heavy branches must leave e")
    if vpp != vmm:
        p2, p3 = ex.beyond(g, ep)
        m2, m3 = ex.beyond(g, em)
        labels += [("a2", p2.weight), ("a3", p3.weight), ("a2p", m2.weight), ("a3p", m3.weight)]
        return _finish(
            "TD_Form3",
            (plus, minus, vpp, vmm),
            (ex.edge, ep.half.edge, em.half.edge),
            [(_cut(ebp), _cut(p2), _cut(p3)), (_cut(ebm), _cut(m2), _cut(m3))],
            S2xI,
            labels,
        )

    u = vpp
    rest = branches_at(g, u, {ep.far, em.far})
    _require(len(rest) == 1, "Form 6: shared far vertex must have one more branch")
    (third,) = rest
    astar = third.weight
    labels.append(("astar", astar))
    _require(astar == 2, f"Form 6: third weight at the shared vertex must be 2, got {astar}")
    _require((em.weight, ebm.weight) == (3, 2), f"Form 6: lighter side must be (3,2), got {(em.weight, ebm.weight)}")
    _require(ep.weight in (3, 4, 5), f"Form 6: a+ must be 3, 4 or 5, got {ep.weight}")
    _require(ebp.weight in (2, 3), f"Form 6: abar+ must be 2 or 3, got {ebp.weight}")
    _require(a <= 5, f"Form 6: teardrop weight must be at most 5, got {a}")
    return _finish(
        "TD_Form6",
        (plus, minus, u),
        (ex.edge, ep.half.edge, em.half.edge),
        [(_cut(ebp), _cut(ebm), _cut(third))],
        S2xS1minusB3,
        labels,
    )


# ---------------------------------------------------------------------------
# Bad footballs


def classify_football(g: SingularGraph, w: Football, *, validate: bool = True) -> XDescription:
    if validate:
        _require_valid(g)
    check_witness(g, w)
    e, f = g.edge(w.e), g.edge(w.f)
    b, a = e.weight, f.weight
    labels = [("a", a), ("b", b)]

    if e.ends is None or f.ends is None:
        if e.ends is None:
            return _finish("FB_Smooth", (), (e.id,), [_pierce(g, f.id)], S2xS1minusB3, labels)
        return _finish("FB_Smooth", (), (f.id,), [_pierce(g, e.id)], S2xS1minusB3, labels)

    ex = explore(g, e.id)
    if ex.vminus != ex.vplus:
        if w.f_plus_side is None:
            raise WitnessInconsistent("football Form 1 needs f_plus_side to split the pierced light edge")
        s = w.f_plus_side
        minus_comp = (CutGerm(f.id, 1 - s, True, a), _cut(ex.minus[0]), _cut(ex.minus[1]))
        plus_comp = (CutGerm(f.id, s, True, a), _cut(ex.plus[0]), _cut(ex.plus[1]))
        labels += [
            ("a2", ex.minus[0].weight),
            ("a3", ex.minus[1].weight),
            ("a2p", ex.plus[0].weight),
            ("a3p", ex.plus[1].weight),
        ]
        return _finish("FB_Form1", (ex.vminus, ex.vplus), (e.id,), [minus_comp, plus_comp], S2xI, labels)

    (third,) = ex.plus
    astar = third.weight
    labels.append(("astar", astar))
    _require((a, b, astar) == (2, 3, 2), f"football Form 2 forces (a,b,a*) = (2,3,2), got {(a, b, astar)}")
    comp = _pierce(g, f.id) + (_cut(third),)
    return _finish("FB_Form2", (ex.vminus,), (e.id,), [comp], S2xS1minusB3, labels)


def classify(g: SingularGraph, w, *, validate: bool = True) -> XDescription:
    if isinstance(w, Football):
        return classify_football(g, w, validate=validate)
    return classify_teardrop(g, w, validate=validate)
