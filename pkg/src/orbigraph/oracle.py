"""Brute-force routes used to cross-check the main implementation.

Nothing in here calls the classifier's case logic or the parameter
validator; the enumerations work from raw integer inequalities so the two
routes can be compared.  The random generator is the exception: it builds
bad orbifolds by attaching pieces and uses the classifier to reject
attachments whose witness would be read back as a different piece.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .classify import ALL_FORMS, TEARDROP_FORMS, classify
from .core import ConeSignature, Football, SingularGraph, validate_graph
from .errors import InvalidGraph, NoAdmissibleAttachment, UnknownForm
from .surgery import FORM_PARAMS, AttachmentSite, attach_piece_detailed, make_piece


@dataclass(frozen=True)
class EnumerationBounds:
    max_weight: int = 6
    max_vertices: int = 4
    max_edges: int = 6

    def __post_init__(self):
        if self.max_weight < 2:
            raise ValueError("max_weight must be at least 2")
        if self.max_vertices < 0 or self.max_edges < 0:
            raise ValueError("bounds must be non-negative")


# ---------------------------------------------------------------------------
# Signatures and form parameters


def _vertex_ok(a: int, b: int, c: int) -> bool:
    # 1/a + 1/b + 1/c > 1, cleared of denominators
    return a * b + b * c + c * a > a * b * c


def _sphere_ok(*ws: int) -> bool:
    if len(ws) == 0:
        return True
    if len(ws) == 2:
        return ws[0] == ws[1]
    if len(ws) == 3:
        return _vertex_ok(*ws)
    return False


def enumerate_spherical_signatures(max_weight: int) -> set[ConeSignature]:
    """All spherical signatures with at most three cone points of weight <= max_weight."""
    if max_weight < 2:
        raise ValueError("max_weight must be at least 2")
    ws = range(2, max_weight + 1)
    out = {ConeSignature()}
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(ws, k):
            if _sphere_ok(*combo):
                out.add(ConeSignature(combo))
    return out


# Per form: list of (variables, predicate).  A predicate is checked as soon as
# all its variables are assigned, which keeps the search small.
_Rule = tuple[tuple[str, ...], Callable[..., bool]]


def _rules(form: str) -> list[_Rule]:
    V = _vertex_ok
    S = _sphere_ok
    gt = lambda x, y: x > y  # noqa: E731
    le = lambda x, y: x <= y  # noqa: E731
    if form == "TD_Smooth":
        return []
    if form == "TD_Form1":
        return [(("a", "aplus"), lambda a, p: V(a, p, p)), (("a", "aminus"), lambda a, m: V(a, m, m))]
    if form == "TD_Form2":
        return [
            (("a", "aplus"), lambda a, p: V(a, p, p)),
            (("aminus", "abarminus"), gt),
            (("a", "aminus", "abarminus"), V),
            (("a2", "a3"), le),
            (("aminus", "a2", "a3"), V),
            (("abarminus", "a2", "a3"), S),
        ]
    if form == "TD_Form3":
        return [
            (("aplus", "abarplus"), gt),
            (("a", "aplus", "abarplus"), V),
            (("aminus", "abarminus"), gt),
            (("a", "aminus", "abarminus"), V),
            (("a2", "a3"), le),
            (("aplus", "a2", "a3"), V),
            (("abarplus", "a2", "a3"), S),
            (("a2p", "a3p"), le),
            (("aminus", "a2p", "a3p"), V),
            (("abarminus", "a2p", "a3p"), S),
        ]
    if form == "TD_Form4a":
        return [(("a", "aplus"), lambda a, p: V(a, a, p)), (("aplus", "aplusplus"), lambda p, q: V(p, q, q))]
    if form == "TD_Form4b":
        return [
            (("a", "aplus"), lambda a, p: V(a, a, p)),
            (("aplusplus", "abarplusplus"), gt),
            (("aplus", "aplusplus", "abarplusplus"), V),
            (("a1", "a2"), le),
            (("aplusplus", "a1", "a2"), V),
            (("abarplusplus", "a1", "a2"), S),
        ]
    if form == "TD_Form5a":
        return [
            (("a", "astar", "a1"), V),
            (("a", "astar", "a1star"), V),
            (("a1", "a1star"), S),
        ]
    if form == "TD_Form5b":
        return [
            (("a", "astar", "a1"), V),
            (("a", "astar", "a1star"), V),
            (("a1star", "a1"), gt),
            (("a2", "a3"), le),
            (("a1star", "a2", "a3"), V),
            (("a1", "a2", "a3"), S),
        ]
    if form == "TD_Form6":
        return [
            (("aplus", "abarplus"), gt),
            (("a", "aplus", "abarplus"), V),
            (("aminus", "abarminus"), gt),
            (("aminus", "aplus"), le),
            (("a", "aminus", "abarminus"), V),
            (("aplus", "aminus", "astar"), V),
            (("abarplus", "abarminus", "astar"), S),
        ]
    if form == "FB_Smooth":
        return [(("b", "a"), gt), (("a",), lambda a: S(a, a))]
    if form == "FB_Form1":
        return [
            (("b", "a"), gt),
            (("a2", "a3"), le),
            (("b", "a2", "a3"), V),
            (("a", "a2", "a3"), S),
            (("a2p", "a3p"), le),
            (("b", "a2p", "a3p"), V),
            (("a", "a2p", "a3p"), S),
        ]
    if form == "FB_Form2":
        return [(("b", "a"), gt), (("b", "astar"), lambda b, s: V(b, b, s)), (("a", "astar"), lambda a, s: S(a, a, s))]
    raise UnknownForm(form)


def enumerate_admissible_form_params(form: str, max_weight: int) -> set[tuple[int, ...]]:
    """Every parameter tuple (in FORM_PARAMS order) with weights <= max_weight that fits ``form``."""
    if form not in FORM_PARAMS:
        raise UnknownForm(form)
    if max_weight < 2:
        raise ValueError("max_weight must be at least 2")
    names = FORM_PARAMS[form]
    rules = _rules(form)
    # attach each rule to the position of its last variable
    due: list[list[_Rule]] = [[] for _ in names]
    for vars_, pred in rules:
        due[max(names.index(v) for v in vars_)].append((vars_, pred))
    weights = range(2, max_weight + 1)
    out: set[tuple[int, ...]] = set()
    values: dict[str, int] = {}

    def extend(i: int) -> None:
        if i == len(names):
            out.add(tuple(values[n] for n in names))
            return
        for w in weights:
            values[names[i]] = w
            if all(pred(*(values[v] for v in vars_)) for vars_, pred in due[i]):
                extend(i + 1)
        del values[names[i]]

    extend(0)
    return out


# ---------------------------------------------------------------------------
# Small graphs


def _shapes(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Trivalent multigraphs on ``n`` labelled vertices, one per isomorphism class."""
    stubs = [v for v in range(n) for _ in range(3)]
    seen = set()
    out = []

    def matchings(rest):
        if not rest:
            yield ()
            return
        first = rest[0]
        for j in range(1, len(rest)):
            pair = (stubs[first], stubs[rest[j]])
            for tail in matchings(rest[1:j] + rest[j + 1 :]):
                yield (pair,) + tail

    perms = list(itertools.permutations(range(n)))
    for m in matchings(list(range(len(stubs)))):
        edges = tuple(sorted(tuple(sorted(p)) for p in m))
        key = min(tuple(sorted(tuple(sorted((pi[a], pi[b]))) for a, b in edges)) for pi in perms)
        if key not in seen:
            seen.add(key)
            out.append(edges)
    return out


def _canonical_key(n: int, arcs: Sequence[tuple[int, int, int]], circles: Sequence[int], perms) -> tuple:
    best = min(tuple(sorted((*sorted((pi[a], pi[b])), w) for a, b, w in arcs)) for pi in perms)
    return (n, best, tuple(sorted(circles)))


def enumerate_small_graphs(bounds: EnumerationBounds = EnumerationBounds()) -> Iterator[SingularGraph]:
    """Every valid graph within ``bounds``, once per isomorphism class.

    Ids are ``v1..`` for vertices and ``e1..`` for edges, arcs first.
    """
    weights = range(2, bounds.max_weight + 1)
    for n in range(0, bounds.max_vertices + 1, 2):
        arc_count = 3 * n // 2
        if arc_count > bounds.max_edges:
            break
        perms = list(itertools.permutations(range(n)))
        seen = set()
        spare = bounds.max_edges - arc_count
        for shape in _shapes(n):
            for ws in _weightings(n, shape, weights):
                arcs = [(a, b, w) for (a, b), w in zip(shape, ws)]
                for k in range(spare + 1):
                    for circles in itertools.combinations_with_replacement(weights, k):
                        key = _canonical_key(n, arcs, circles, perms)
                        if key in seen:
                            continue
                        seen.add(key)
                        yield _build(n, arcs, circles)


def _weightings(n, shape, weights):
    incid = [[] for _ in range(n)]
    for i, (a, b) in enumerate(shape):
        incid[a].append(i)
        incid[b].append(i)
    # position after which vertex v is fully weighted
    last = {}
    for v in range(n):
        last.setdefault(max(incid[v]), []).append(v)
    ws: list[int] = []

    def rec(i):
        if i == len(shape):
            yield tuple(ws)
            return
        for w in weights:
            ws.append(w)
            if all(_vertex_ok(*(ws[j] for j in incid[v])) for v in last.get(i, ())):
                yield from rec(i + 1)
            ws.pop()

    if not shape:
        yield ()
        return
    yield from rec(0)


def _build(n, arcs, circles) -> SingularGraph:
    vs = [f"v{i + 1}" for i in range(n)]
    edges = [(f"e{i + 1}", w, (vs[a], vs[b])) for i, (a, b, w) in enumerate(arcs)]
    edges += [(f"e{len(arcs) + i + 1}", w, None) for i, w in enumerate(circles)]
    return SingularGraph(vs, edges)


def _invariants(g: SingularGraph):
    return (
        len(g.vertices),
        tuple(sorted(e.weight for e in g.edges)),
        tuple(sorted(e.weight for e in g.edges if e.is_loop)),
        tuple(sorted(e.weight for e in g.edges if e.is_circle)),
        tuple(sorted(tuple(sorted(g.vertex_weights(v))) for v in g.vertices)),
    )


def _between(g: SingularGraph) -> dict:
    table: dict = {}
    for e in g.edges:
        if e.ends is None:
            continue
        a, b = e.ends
        for key in ((a, b), (b, a)) if a != b else ((a, a),):
            table.setdefault(key, []).append(e.weight)
    return {k: sorted(v) for k, v in table.items()}


def graphs_isomorphic(g1: SingularGraph, g2: SingularGraph) -> bool:
    """Weight-preserving isomorphism test by backtracking over vertex maps."""
    if _invariants(g1) != _invariants(g2):
        return False
    t1, t2 = _between(g1), _between(g2)
    vs1, vs2 = list(g1.vertices), list(g2.vertices)
    sig2 = {v: tuple(sorted(g2.vertex_weights(v))) for v in vs2}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def fits(v, image) -> bool:
        for u, u_img in list(mapping.items()) + [(v, image)]:
            if t1.get((v, u), []) != t2.get((image, u_img), []):
                return False
        return True

    def rec(i) -> bool:
        if i == len(vs1):
            return True
        v = vs1[i]
        want = tuple(sorted(g1.vertex_weights(v)))
        for cand in vs2:
            if cand in used or sig2[cand] != want or not fits(v, cand):
                continue
            mapping[v] = cand
            used.add(cand)
            if rec(i + 1):
                return True
            del mapping[v]
            used.discard(cand)
        return False

    return rec(0)


# ---------------------------------------------------------------------------
# Random bad orbifolds


@lru_cache(maxsize=None)
def _pieces_by_boundary(forms: tuple[str, ...], max_weight: int):
    groups: dict[tuple, list] = {}
    for form in forms:
        names = FORM_PARAMS[form]
        for params in sorted(enumerate_admissible_form_params(form, max_weight)):
            piece = make_piece(form, dict(zip(names, params)))
            groups.setdefault(piece.signatures(), []).append(piece)
    return tuple(sorted(groups.items()))


def _site_options(g: SingularGraph, sigs: tuple, blocked: set[str], allow_smooth: bool) -> list[tuple]:
    per_comp = []
    for sig in sigs:
        if len(sig) == 0:
            opts = [AttachmentSite.smooth()] if allow_smooth else []
        elif len(sig) == 2:
            opts = [AttachmentSite.on_edge(e.id) for e in g.edges if e.weight == sig[0] and e.id not in blocked]
        else:
            opts = [
                AttachmentSite.at_vertex(v)
                for v in g.vertices
                if ConeSignature(g.vertex_weights(v)) == sig and not any(h.edge in blocked for h in g.incident(v))
            ]
        per_comp.append(opts)
    out = []
    for combo in itertools.product(*per_comp):
        if len(combo) == 2 and combo[0].ref == combo[1].ref:
            if combo[0].kind == "vertex":
                continue
            combo = (combo[0], AttachmentSite.on_edge(combo[1].ref, 1))
        out.append(combo)
    return out


def random_bad_orbifold(
    seed: SingularGraph,
    steps: int,
    rng_seed: int,
    *,
    max_weight: int = 6,
    allow_smooth: bool = True,
    forms: Sequence[str] = ALL_FORMS,
    max_attempts: int = 1000,
) -> tuple[SingularGraph, list]:
    """Attach ``steps`` random pieces to ``seed``.

    Each step draws uniformly from all (piece, sites) choices that fit the
    current graph, using ``random.Random(rng_seed)``.  Football pieces are
    only offered until the first teardrop piece is attached, so the returned
    witnesses (most recent first within each phase) list teardrops before
    footballs and decompose cleanly in that order.
    """
    violations = validate_graph(seed)
    if violations:
        raise InvalidGraph(violations)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = random.Random(rng_seed)
    g = seed
    teardrops: list = []
    footballs: list = []
    for _ in range(steps):
        allowed = tuple(f for f in forms if f in TEARDROP_FORMS) if teardrops else tuple(forms)
        blocked = {e for w in teardrops + footballs for e in w.edges}
        options = []
        total = 0
        for sigs, pieces in _pieces_by_boundary(allowed, max_weight):
            sites = _site_options(g, sigs, blocked, allow_smooth)
            if sites:
                options.append((total, pieces, sites))
                total += len(pieces) * len(sites)
        if total == 0:
            raise NoAdmissibleAttachment("no piece fits any site of the current graph")
        for _attempt in range(max_attempts):
            r = rng.randrange(total)
            base, pieces, sites = max((o for o in options if o[0] <= r), key=lambda o: o[0])
            i, j = divmod(r - base, len(sites))
            piece = pieces[i]
            res = attach_piece_detailed(g, piece, sites[j])
            x = classify(res.graph, res.witness, validate=False)
            if x.form == piece.form and x.interior_vertices == res.new_vertices and x.interior_edges == res.new_edges:
                break
        else:
            raise NoAdmissibleAttachment(f"no faithful attachment found in {max_attempts} draws")
        g = res.graph
        (footballs if isinstance(res.witness, Football) else teardrops).append(res.witness)
    return g, teardrops[::-1] + footballs[::-1]
