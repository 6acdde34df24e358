"""Module definition files.

Two shapes are accepted::

    {"action": [[[...]], ...]}            one dim x dim matrix per ring variable
    {"presentation": [["x", "y"], ...]}   cokernel of a matrix of ring elements

A presentation matrix has one row per generator and one column per
relation, so ``[["x", "y"]]`` is ``R / (x, y)``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import LocalAlgebra, RingFileError, _locate
from .exactla import DTYPE
from .modcat import ModuleError, RModule, presentation_module
from .polynomial import Poly, PolynomialSyntaxError, parse_polynomial


class ModuleFileError(RingFileError):
    pass


def element_from_poly(algebra: LocalAlgebra, poly: Poly) -> np.ndarray:
    """The algebra element represented by a polynomial in the generators."""
    out = np.zeros(algebra.dim, dtype=DTYPE)
    for expo, coef in poly.items():
        term = algebra.unit()
        for k, e in enumerate(expo):
            for _ in range(e):
                term = algebra.mul(term, algebra.generators[k])
        out = (out + coef * term) % algebra.p
    return out


def element_from_string(algebra: LocalAlgebra, text: str) -> np.ndarray:
    return element_from_poly(algebra, parse_polynomial(text, list(algebra.gen_names), algebra.p))


def module_from_text(raw: str, algebra: LocalAlgebra, name: str = "") -> RModule:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ModuleFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or ("action" in doc) == ("presentation" in doc):
        raise ModuleFileError('expected exactly one of the keys "action" or "presentation"')
    name = doc.get("name", name)
    if "action" in doc:
        mats = np.asarray(doc["action"], dtype=DTYPE)
        if mats.ndim != 3 or mats.shape[0] != algebra.ngens or mats.shape[1] != mats.shape[2]:
            raise ModuleFileError(f"need {algebra.ngens} square matrices of equal size, one per ring variable")
        try:
            return RModule(algebra, mats % algebra.p, dim=mats.shape[1], name=name, check=True)
        except ModuleError as exc:
            raise ModuleFileError(str(exc)) from None
    rows = doc["presentation"]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ModuleFileError("presentation must be a nonempty rectangular matrix")
    mat = np.zeros((len(rows), len(rows[0]), algebra.dim), dtype=DTYPE)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            try:
                mat[i, j] = element_from_string(algebra, str(entry))
            except PolynomialSyntaxError as exc:
                line, col = _locate(raw, exc.text, exc.pos)
                raise ModuleFileError(str(exc), line, col) from None
    return presentation_module(algebra, mat, name=name)


def load_module(path: str | Path, algebra: LocalAlgebra) -> RModule:
    return module_from_text(Path(path).read_text(), algebra, name=Path(path).stem)
