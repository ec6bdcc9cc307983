"""2-box structures of subfactor planar algebras."""

import json

from ._core import (
    Structure,
    TwoBoxError,
    biprojection_traces,
    catalog_names,
    find_isomorphism,
    fourier_dual,
    free_product,
    named,
    new_part_dimension,
    parse,
    report_text,
    tensor_product,
    verify,
)
from . import _core


def classify(s, tol=0.0):
    """Dim-4 classification verdict as a dict."""
    return json.loads(_core.classify_json(s, tol))


def report(s, tol=0.0):
    """Structure summary as a dict."""
    return json.loads(_core.report_json(s, tol))


__all__ = [
    "Structure",
    "TwoBoxError",
    "biprojection_traces",
    "catalog_names",
    "classify",
    "find_isomorphism",
    "fourier_dual",
    "free_product",
    "named",
    "new_part_dimension",
    "parse",
    "report",
    "report_text",
    "tensor_product",
    "verify",
]
