"""Exception hierarchy shared by all orbigraph modules."""

from __future__ import annotations


class OrbigraphError(Exception):
    """Base class for every error raised by this package."""


class InvalidWeight(OrbigraphError, ValueError):
    pass


class InvalidGraph(OrbigraphError):
    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid singular graph: {detail}")


class WitnessInconsistent(OrbigraphError):
    """A witness does not fit the graph, or a forced relation failed."""


class InconsistentX(OrbigraphError):
    """An XDescription does not describe removable material of the graph."""


class UnknownForm(OrbigraphError, KeyError):
    def __str__(self) -> str:
        return f"unknown form id: {self.args[0]!r}"


class InvalidPiece(OrbigraphError):
    pass


class SiteMismatch(OrbigraphError):
    pass


class PhaseOrderViolation(OrbigraphError):
    pass


class StaleWitness(OrbigraphError):
    pass


class NoAdmissibleAttachment(OrbigraphError):
    pass


class ParseError(OrbigraphError):
    def __init__(self, message: str, path: str = "", line: int | None = None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class VersionError(ParseError):
    pass


class DocumentValidationError(OrbigraphError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))
