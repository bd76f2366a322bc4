"""Driver that removes declared bad pieces one at a time.

Given a graph and an ordered list of witnesses (teardrops first, then
footballs) it classifies each witness in the current graph, cuts the
described region out, caps the boundary and records the step.  Witnesses
still pending are carried across each step through the surgery's rename map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .classify import XDescription, classify
from .core import (
    Football,
    LedgerEntry,
    SingularGraph,
    SummandLedger,
    Teardrop,
    check_witness,
    is_spherical,
    validate_graph,
)
from .errors import InvalidGraph, PhaseOrderViolation, StaleWitness
from .surgery import CapRecord, Rename, cut_and_cap

# Components are counted in the singular graph only; whether a removed piece
# separates the ambient orbifold is not visible from the graph.
COMPONENT_CAVEAT = "graph components only"


@dataclass(frozen=True)
class TraceStep:
    input: SingularGraph
    witness: Teardrop | Football
    form: str
    x: XDescription
    caps: tuple[CapRecord, ...]
    output: SingularGraph
    remaining: int  # witnesses still pending after this step


@dataclass(frozen=True)
class DecompositionTrace:
    initial: SingularGraph
    witnesses: tuple
    steps: tuple[TraceStep, ...]
    ledger: SummandLedger
    final: SingularGraph
    n: int
    m: int
    caveat: str = COMPONENT_CAVEAT

    def __len__(self) -> int:
        return len(self.steps)

    def problems(self) -> list[str]:
        """Structural self-check of the trace; an empty list means consistent."""
        out = list(self.ledger.problems())
        if len(self.ledger) != self.n + self.m or len(self.steps) != self.n + self.m:
            out.append("ledger length differs from n + m")
        prev = self.initial
        for i, step in enumerate(self.steps):
            if step.input != prev:
                out.append(f"step {i + 1}: input differs from previous output")
            if validate_graph(step.output):
                out.append(f"step {i + 1}: output graph is invalid")
            want_td = i < self.n
            if step.form.startswith("TD_") != want_td:
                out.append(f"step {i + 1}: {step.form} out of phase")
            if step.remaining != self.n + self.m - i - 1:
                out.append(f"step {i + 1}: remaining witness count is {step.remaining}")
            for cap in step.caps:
                if not is_spherical(cap.signature):
                    out.append(f"step {i + 1}: cap on non-spherical {cap.signature.label()}")
            prev = step.output
        if prev != self.final:
            out.append("final graph differs from last output")
        return out


def check_phase_order(witnesses: Sequence) -> None:
    seen_football = False
    for i, w in enumerate(witnesses):
        if isinstance(w, Football):
            seen_football = True
        elif isinstance(w, Teardrop):
            if seen_football:
                raise PhaseOrderViolation(f"teardrop witness #{i + 1} follows a football witness")
        else:
            raise TypeError(f"not a witness: {w!r}")


def check_disjoint(witnesses: Sequence) -> None:
    owner: dict[str, int] = {}
    for i, w in enumerate(witnesses):
        for e in w.edges:
            if e in owner:
                raise StaleWitness(f"edge {e} is shared by witnesses #{owner[e] + 1} and #{i + 1}")
            owner[e] = i


def remap_witness(w, renames: Mapping[str, Rename]):
    """Carry a pending witness across one surgery step."""
    try:
        if isinstance(w, Teardrop):
            return Teardrop(renames[w.edge].edge)
        e, f = renames[w.e], renames[w.f]
    except KeyError as exc:
        raise StaleWitness(f"witness {w} refers to edge {exc.args[0]} consumed by an earlier step") from None
    side = w.f_plus_side
    if side is not None and e.flipped != f.flipped:
        side = 1 - side
    return Football(e.edge, f.edge, side)


def decompose(g: SingularGraph, witnesses: Sequence) -> DecompositionTrace:
    violations = validate_graph(g)
    if violations:
        raise InvalidGraph(violations)
    witnesses = tuple(witnesses)
    check_phase_order(witnesses)
    check_disjoint(witnesses)
    for w in witnesses:
        check_witness(g, w)

    n = sum(isinstance(w, Teardrop) for w in witnesses)
    pending = list(witnesses)
    steps, entries = [], []
    current = g
    while pending:
        w = pending.pop(0)
        x = classify(current, w, validate=False)
        res = cut_and_cap(current, x, validate=False)
        pending = [remap_witness(p, res.renames) for p in pending]
        check_disjoint(pending)
        steps.append(TraceStep(current, w, x.form, x, res.caps, res.graph, len(pending)))
        entries.append(LedgerEntry(len(steps), x.form, x.underlying, x.signatures()))
        current = res.graph
    return DecompositionTrace(g, witnesses, tuple(steps), SummandLedger(entries), current, n, len(witnesses) - n)
