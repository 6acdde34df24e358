"""Finite-dimensional commutative local algebras over F_p.

An algebra is stored by its structure constants on a monomial basis whose
first element is 1; every other basis element lies in the maximal ideal.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import exactla as la
from .exactla import DTYPE, PrimeField
from .polynomial import Poly, PolynomialSyntaxError, format_monomial, parse_polynomial


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraPresentation:
    """``F_p[variables] / (relations)`` with ``(variables)^N`` inside the ideal."""

    field: PrimeField
    variables: tuple[str, ...]
    relations: tuple[Poly, ...]
    nilpotency_bound: int

    def __post_init__(self):
        if self.nilpotency_bound < 1:
            raise AlgebraError("nilpotency bound must be at least 1")
        if len(set(self.variables)) != len(self.variables):
            raise AlgebraError("variable names must be distinct")
        zero = (0,) * len(self.variables)
        for rel in self.relations:
            if rel.get(zero, 0) % self.field.p:
                raise AlgebraError("relations must have zero constant term")

    @classmethod
    def from_strings(cls, p: int, variables, relations, nilpotency_bound: int):
        variables = tuple(variables)
        polys = tuple(parse_polynomial(r, list(variables), p) for r in relations)
        return cls(PrimeField(p), variables, polys, nilpotency_bound)


@dataclass(frozen=True, eq=False)
class LocalAlgebra:
    """Structure constants ``mult[i, j, l]`` with ``e_i e_j = sum_l mult[i, j, l] e_l``.

    ``generators`` holds the images of the algebra generators (the ring
    variables) as coordinate vectors, and ``exponents[r]`` expresses basis
    element ``r`` as a monomial in them.
    """

    field: PrimeField
    labels: tuple[str, ...]
    mult: np.ndarray
    generators: np.ndarray
    gen_names: tuple[str, ...]
    exponents: np.ndarray
    name: str = ""
    unit_index: int = 0
    _validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        for arr in (self.mult, self.generators, self.exponents):
            arr.setflags(write=False)
        if self._validate:
            self._check_axioms()

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def ngens(self) -> int:
        return len(self.gen_names)

    @property
    def maxideal_basis(self) -> list[int]:
        return [i for i in range(self.dim) if i != self.unit_index]

    def __repr__(self):
        return f"LocalAlgebra({self.name or '?'}, {self.field}, dim={self.dim})"

    @cached_property
    def left_mult(self) -> np.ndarray:
        """``left_mult[i]`` is the matrix of multiplication by ``e_i``."""
        return np.ascontiguousarray(np.transpose(self.mult, (0, 2, 1)))

    @cached_property
    def gen_mult(self) -> np.ndarray:
        """Multiplication matrices of the generators."""
        return np.einsum("gi,ilj->glj", self.generators, self.left_mult) % self.p

    @cached_property
    def parents(self) -> list[tuple[int, int] | None]:
        """``parents[r] = (k, s)`` with ``e_r = g_k * e_s``; ``None`` for the unit."""
        where = {tuple(row): i for i, row in enumerate(self.exponents.tolist())}
        out: list[tuple[int, int] | None] = []
        for r, row in enumerate(self.exponents.tolist()):
            if r == self.unit_index:
                out.append(None)
                continue
            for k, e in enumerate(row):
                if e:
                    prev = list(row)
                    prev[k] -= 1
                    s = where.get(tuple(prev))
                    if s is not None:
                        out.append((k, s))
                        break
            else:
                raise AlgebraError(f"basis element {self.labels[r]} has no monomial parent")
        return out

    @cached_property
    def order(self) -> list[int]:
        """Basis indices ordered so that each parent precedes its children."""
        deg = self.exponents.sum(axis=1)
        return sorted(range(self.dim), key=lambda r: (deg[r], r))

    def element(self, coeffs) -> np.ndarray:
        return np.asarray(coeffs, dtype=DTYPE) % self.p

    def unit(self) -> np.ndarray:
        e = np.zeros(self.dim, dtype=DTYPE)
        e[self.unit_index] = 1
        return e

    def mul(self, a, b) -> np.ndarray:
        return np.einsum("i,j,ijl->l", np.asarray(a, DTYPE), np.asarray(b, DTYPE), self.mult) % self.p

    def same_as(self, other: "LocalAlgebra") -> bool:
        return self is other or (
            self.p == other.p
            and self.labels == other.labels
            and np.array_equal(self.mult, other.mult)
        )

    def maxideal_power_dims(self) -> list[int]:
        """Dimensions of ``m^0 = R, m, m^2, ...`` until zero."""
        p = self.p
        span = la.column_space(np.eye(self.dim, dtype=DTYPE)[:, self.maxideal_basis], p)
        dims = [self.dim]
        while span.shape[1]:
            dims.append(span.shape[1])
            prods = np.concatenate([la.matmul(g, span, p) for g in self.gen_mult], axis=1)
            span = la.column_space(prods, p) if prods.size else prods
        return dims

    def _check_axioms(self):
        p, d, u = self.p, self.dim, self.unit_index
        c = self.mult
        if c.shape != (d, d, d):
            raise AlgebraError("structure constants have the wrong shape")
        if not np.array_equal(c[u], np.eye(d, dtype=DTYPE)):
            raise AlgebraError("the unit does not act as identity")
        if not np.array_equal(c, np.transpose(c, (1, 0, 2))):
            raise AlgebraError("multiplication is not commutative")
        left = np.einsum("ijl,lkm->ijkm", c, c) % p
        right = np.einsum("jkl,ilm->ijkm", c, c) % p
        if not np.array_equal(left, right):
            raise AlgebraError("multiplication is not associative")
        m = self.maxideal_basis
        if m and np.any(c[np.ix_(m, range(d), [u])] % p):
            raise AlgebraError("not local: the maximal ideal is not closed under multiplication")
        span = np.eye(d, dtype=DTYPE)[:, m]
        for _ in range(d):
            if not span.size:
                break
            prods = np.concatenate([la.matmul(self.left_mult[i], span, p) for i in m], axis=1)
            span = la.column_space(prods, p)
        if span.size:
            raise AlgebraError("not local: the maximal ideal is not nilpotent")
        if self.generators.shape != (self.ngens, d) or self.exponents.shape != (d, self.ngens):
            raise AlgebraError("generator data has the wrong shape")
        if np.any(self.generators[:, u] % p):
            raise AlgebraError("generators must lie in the maximal ideal")
        # basis elements are the stated monomials in the generators
        for r in self.order:
            par = self.parents[r]
            if par is None:
                continue
            k, s = par
            if not np.array_equal(self.mul(self.generators[k], np.eye(d, dtype=DTYPE)[s]), np.eye(d, dtype=DTYPE)[r]):
                raise AlgebraError(f"basis element {self.labels[r]} is not the product its exponents claim")

    @classmethod
    def field_algebra(cls, p: int) -> "LocalAlgebra":
        return cls(
            PrimeField(p), ("1",), np.ones((1, 1, 1), dtype=DTYPE),
            np.zeros((0, 1), dtype=DTYPE), (), np.zeros((1, 0), dtype=DTYPE), name=f"F_{p}",
        )


def _monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def build_algebra(pres: AlgebraPresentation, name: str = "") -> LocalAlgebra:
    """The local algebra presented by ``pres``, on a basis of standard monomials.

    Works in polynomials of degree at most N modulo degree N+1, row-reduces
    the truncated ideal with the largest monomials first, and reads the
    basis off the non-pivot columns.
    """
    p = pres.field.p
    nv = len(pres.variables)
    N = pres.nilpotency_bound
    monos = sorted(_monomials(nv, N), key=lambda a: (sum(a), a), reverse=True)
    col = {a: i for i, a in enumerate(monos)}
    rows = []
    for rel in pres.relations:
        for mu in monos:
            row = np.zeros(len(monos), dtype=DTYPE)
            for e, c in rel.items():
                prod = tuple(x + y for x, y in zip(mu, e))
                if sum(prod) <= N:
                    row[col[prod]] = (row[col[prod]] + c) % p
            if row.any():
                rows.append(row)
    if rows:
        red, _, pivots = la.rref(np.array(rows), p)
    else:
        red, _, pivots = np.zeros((0, len(monos)), dtype=DTYPE), 0, []
    pivot_row = {c: r for r, c in enumerate(pivots)}
    standard = [a for a in monos if col[a] not in pivot_row]
    standard.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    index = {a: i for i, a in enumerate(standard)}
    d = len(standard)

    def normal_form(a: tuple[int, ...]) -> np.ndarray:
        v = np.zeros(d, dtype=DTYPE)
        if sum(a) > N:
            return v
        c = col[a]
        if c not in pivot_row:
            v[index[a]] = 1
            return v
        r = pivot_row[c]
        for b in standard:
            v[index[b]] = (-red[r, col[b]]) % p
        return v

    for a in monos:
        if sum(a) == N and normal_form(a).any():
            raise AlgebraError(
                f"nilpotency bound violated: {format_monomial(a, list(pres.variables))} "
                f"is not in the ideal"
            )
    mult = np.zeros((d, d, d), dtype=DTYPE)
    for i, a in enumerate(standard):
        for j, b in enumerate(standard):
            mult[i, j] = normal_form(tuple(x + y for x, y in zip(a, b)))
    gens = np.array(
        [normal_form(tuple(int(k == v) for k in range(nv))) for v in range(nv)], dtype=DTYPE
    ).reshape(nv, d)
    labels = tuple(format_monomial(a, list(pres.variables)) for a in standard)
    return LocalAlgebra(
        pres.field, labels, mult, gens, tuple(pres.variables),
        np.array(standard, dtype=DTYPE).reshape(d, nv), name=name,
    )


def tensor_algebras(a: LocalAlgebra, b: LocalAlgebra, name: str = "") -> LocalAlgebra:
    """``a (x)_k b`` on the basis of pairs, pair ``(i, j)`` at index ``i * dim(b) + j``."""
    if a.p != b.p:
        raise AlgebraError(f"field mismatch: {a.field} vs {b.field}")
    da, db = a.dim, b.dim
    mult = np.einsum("ikm,jln->ijklmn", a.mult, b.mult).reshape(da * db, da * db, da * db) % a.p

    gens = [np.kron(g, b.unit()) for g in a.generators] + [np.kron(a.unit(), h) for h in b.generators]
    names = list(a.gen_names)
    for v in b.gen_names:
        while v in names:
            v += "'"
        names.append(v)
    gen_names = tuple(names)
    expo = np.array(
        [list(ea) + list(eb) for ea in a.exponents.tolist() for eb in b.exponents.tolist()],
        dtype=DTYPE,
    ).reshape(da * db, len(gen_names))
    labels = tuple(format_monomial(tuple(row), names) for row in expo.tolist())
    return LocalAlgebra(
        a.field, labels, mult, np.array(gens, dtype=DTYPE).reshape(len(gens), da * db),
        gen_names, expo, name=name or f"({a.name})(x)({b.name})",
        unit_index=a.unit_index * db + b.unit_index,
    )


def socle(a: LocalAlgebra) -> np.ndarray:
    """Columns span ``{r : m r = 0}``."""
    if a.ngens == 0:
        return np.eye(a.dim, dtype=DTYPE)
    stacked = np.concatenate(list(a.gen_mult), axis=0)
    return la.kernel_basis(stacked, a.p)


def swap_isomorphism(a: LocalAlgebra, b: LocalAlgebra) -> np.ndarray:
    """Permutation matrix carrying ``a (x) b`` onto ``b (x) a``."""
    da, db = a.dim, b.dim
    perm = np.zeros((da * db, da * db), dtype=DTYPE)
    for i in range(da):
        for j in range(db):
            perm[j * da + i, i * db + j] = 1
    return perm


def is_algebra_map(f: np.ndarray, src: LocalAlgebra, dst: LocalAlgebra) -> bool:
    """Whether the linear map ``f`` respects units and structure constants."""
    p = src.p
    if not np.array_equal(f @ src.unit() % p, dst.unit()):
        return False
    lhs = np.einsum("ijl,ml->ijm", src.mult, f) % p
    rhs = np.einsum("ai,bj,abm->ijm", f, f, dst.mult) % p
    return np.array_equal(lhs, rhs)


class RingFileError(ValueError):
    """A ring or module file could not be read; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def _locate(raw: str, needle: str, offset: int) -> tuple[int | None, int | None]:
    quoted = json.dumps(needle)
    at = raw.find(quoted)
    if at < 0:
        return None, None
    at += 1 + offset
    line = raw.count("\n", 0, at) + 1
    col = at - (raw.rfind("\n", 0, at) + 1) + 1
    return line, col


def load_ring(path: str | Path) -> LocalAlgebra:
    """Read a ring definition file ``{"p", "vars", "relations", "nilpotency_bound"}``."""
    raw = Path(path).read_text()
    return ring_from_text(raw, name=Path(path).stem)


def ring_from_text(raw: str, name: str = "") -> LocalAlgebra:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise RingFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    for key in ("p", "vars", "relations", "nilpotency_bound"):
        if key not in doc:
            raise RingFileError(f"missing key {key!r}")
    try:
        pres = AlgebraPresentation.from_strings(
            int(doc["p"]), doc["vars"], doc["relations"], int(doc["nilpotency_bound"])
        )
    except PolynomialSyntaxError as exc:
        line, col = _locate(raw, exc.text, exc.pos)
        raise RingFileError(str(exc), line, col) from None
    return build_algebra(pres, name=doc.get("name", name))


def regular_module(a: LocalAlgebra):
    """``R`` as a module over itself."""
    from .modcat import RModule

    return RModule(a, a.gen_mult.copy(), dim=a.dim, name="R")
