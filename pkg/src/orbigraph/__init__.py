"""Combinatorial cut-and-cap of bad pieces in orbifold singular graphs."""

from .classify import ALL_FORMS, FOOTBALL_FORMS, TEARDROP_FORMS, CutGerm, XDescription, classify, classify_football, classify_teardrop
from .core import (
    ConeSignature,
    Edge,
    Football,
    SingularGraph,
    Teardrop,
    TwoOrbifoldClass,
    classify_cone_signature,
    is_spherical,
    orbifold_euler_characteristic,
    validate_graph,
    vertex_triple_is_admissible,
)
from .decompose import DecompositionTrace, decompose
from .document import OrbifoldDocument, parse_document, to_dot, write_document
from .surgery import AttachmentSite, CapRecord, PieceSpec, apply_cut_and_cap, attach_piece, make_piece, validate_form_params

__version__ = "0.1.0"
