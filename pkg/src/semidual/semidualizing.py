"""Semidualizing modules over Artinian local algebras.

Certification, the reflexivity order, Bass and Auslander classes, Bass
series, flat base change and a bounded enumeration of classes.  Infinite
Ext/Tor vanishing is decided through three certificates: a terminating
resolution, an injective (resp. free) second argument, or a syzygy
repetition ``Omega^(a+per) ~= (Omega^a)^r``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import exactla as la
from .algebra import LocalAlgebra, regular_module, socle, tensor_algebras
from .exactla import DTYPE
from .modcat import (
    HomSpace,
    ModuleMap,
    ResolutionTooLarge,
    RModule,
    TensorProduct,
    ext_dim,
    free_module,
    hom_module_naive,
    is_free,
    is_injective,
    is_isomorphic,
    matlis_dual,
    quotient,
    socle_dim,
    submodule,
    tor_dim,
)

log = logging.getLogger(__name__)


class Status(str, Enum):
    CERTIFIED = "certified"
    CERTIFIED_TO_BOUND = "certified_to_bound"
    REFUTED = "refuted"


class Verdict(str, Enum):
    YES = "yes"
    YES_TO_BOUND = "yes_to_bound"
    NO = "no"

    def holds(self) -> bool:
        return self is not Verdict.NO


class PreconditionError(ValueError):
    pass


def default_bound(algebra: LocalAlgebra) -> int:
    return 2 * algebra.dim


@dataclass
class Vanishing:
    """Outcome of checking ``Ext^i`` or ``Tor_i`` for ``i >= 1``."""

    vanishes: bool
    certified: bool
    checked_to: int
    method: str
    witness_degree: int | None = None
    witness_dim: int = 0
    periodicity: tuple[int, int, int] | None = None

    @property
    def verdict(self) -> Verdict:
        if not self.vanishes:
            return Verdict.NO
        return Verdict.YES if self.certified else Verdict.YES_TO_BOUND

    def describe(self, what: str) -> str:
        if not self.vanishes:
            return f"{what}^{self.witness_degree} has dimension {self.witness_dim}"
        if self.certified:
            return f"{what} vanishes in all positive degrees ({self.method})"
        return f"{what} vanishes in degrees 1..{self.checked_to} ({self.method})"


def _vanishing(m: RModule, bound: int, degree_dim, shortcut: str | None, seed: int) -> Vanishing:
    if shortcut:
        return Vanishing(True, True, 0, shortcut)
    res = m.resolution
    checked = 0
    for i in range(1, bound + 1):
        try:
            dim = degree_dim(i)
        except ResolutionTooLarge as exc:
            log.info("stopping at degree %d: %s", i, exc)
            return Vanishing(True, False, checked, f"resolution size budget reached at degree {i}")
        if dim:
            return Vanishing(False, True, checked, "computed", i, dim)
        checked = i
        if res.terminated():
            return Vanishing(True, True, checked, "finite free resolution")
        per = res.periodicity(min(i, len(res.syzygies) - 1), seed=seed)
        if per is not None and per[0] + per[1] <= checked:
            return Vanishing(True, True, checked, f"syzygy repetition {per}", periodicity=per)
    return Vanishing(True, False, checked, "bounded check")


def ext_vanishing(m: RModule, n: RModule, bound: int, seed: int = 0) -> Vanishing:
    """Does ``Ext^i(M, N)`` vanish for ``i >= 1``?"""
    shortcut = None
    if is_injective(n):
        shortcut = "injective second argument"
    elif is_free(m):
        shortcut = "free first argument"
    return _vanishing(m, bound, lambda i: ext_dim(i, m, n), shortcut, seed)


def tor_vanishing(m: RModule, n: RModule, bound: int, seed: int = 0) -> Vanishing:
    """Does ``Tor_i(M, N)`` vanish for ``i >= 1``?  Resolves ``M``."""
    shortcut = None
    if is_free(m) or is_free(n):
        shortcut = "free argument"
    return _vanishing(m, bound, lambda i: tor_dim(i, m, n), shortcut, seed)


@dataclass
class SdCertificate:
    module: RModule
    homothety_iso: bool
    homothety: ModuleMap | None
    ext_checked_to: int
    periodicity: tuple[int, int, int] | None
    status: Status
    reason: str
    ext_witness: tuple[int, int] | None = None  # (degree, dim Ext^degree(C, C))

    def summary(self) -> str:
        return f"{self.status.value}: {self.reason}"


def homothety(c: RModule) -> tuple[ModuleMap, HomSpace]:
    """The map ``R -> Hom(C, C)`` sending ``r`` to multiplication by ``r``."""
    end = HomSpace(c, c)
    cols = [end.coords_of_map(c.action[r]) for r in range(c.algebra.dim)]
    mat = np.array(cols, dtype=DTYPE).T.reshape(end.dim, c.algebra.dim)
    return ModuleMap(regular_module(c.algebra), end.module, mat), end


def certify_semidualizing(c: RModule, bound: int | None = None, seed: int = 0) -> SdCertificate:
    """Check the homothety and Ext self-vanishing; a refutation lists every failure found."""
    alg = c.algebra
    bound = default_bound(alg) if bound is None else bound
    if bound < 1:
        raise ValueError("ext bound must be at least 1")
    chi, end = homothety(c)
    van = ext_vanishing(c, c, bound, seed)
    problems = []
    witness = None
    if not van.vanishes:
        problems.append(van.describe("Ext"))
        witness = (van.witness_degree, van.witness_dim)
    if not chi.is_bijective():
        problems.append(f"homothety R -> Hom(C,C) is not bijective "
                        f"(dim R = {alg.dim}, dim Hom(C,C) = {end.dim}, rank {chi.rank()})")
    if problems:
        return SdCertificate(c, chi.is_bijective(), chi, van.checked_to, None, Status.REFUTED,
                             "; ".join(problems), witness)
    status = Status.CERTIFIED if van.certified else Status.CERTIFIED_TO_BOUND
    return SdCertificate(c, True, chi, van.checked_to, van.periodicity, status, van.describe("Ext"))


def omega(algebra: LocalAlgebra) -> RModule:
    """The dualizing module: the Matlis dual of the algebra."""
    w = matlis_dual(regular_module(algebra))
    w.name = "omega"
    return w


def is_dualizing(c: RModule, seed: int = 0) -> bool:
    return is_isomorphic(c, omega(c.algebra), seed=seed).verdict == "yes"


@dataclass
class Reflexivity:
    verdict: Verdict
    reason: str
    ext_source: Vanishing | None = None
    ext_dual: Vanishing | None = None
    biduality: ModuleMap | None = None


def biduality(x: RModule, c: RModule) -> tuple[ModuleMap, HomSpace]:
    """``delta: X -> Hom(Hom(X, C), C)``, ``x -> (f -> f(x))``."""
    h1 = HomSpace(x, c)
    h2 = HomSpace(h1.module, c)
    maps = h1.basis_maps  # (h1, nC, nX)
    cols = [h2.coords_of_map(maps[:, :, s].T) for s in range(x.dim)]
    mat = np.array(cols, dtype=DTYPE).T.reshape(h2.dim, x.dim)
    return ModuleMap(x, h2.module, mat), h1


def is_reflexive(x: RModule, c: RModule, bound: int | None = None, seed: int = 0) -> Reflexivity:
    bound = default_bound(c.algebra) if bound is None else bound
    e1 = ext_vanishing(x, c, bound, seed)
    if not e1.vanishes:
        return Reflexivity(Verdict.NO, e1.describe("Ext(X,C)"), e1)
    delta, h1 = biduality(x, c)
    e2 = ext_vanishing(h1.module, c, bound, seed)
    if not e2.vanishes:
        return Reflexivity(Verdict.NO, e2.describe("Ext(Hom(X,C),C)"), e1, e2, delta)
    if not delta.is_bijective():
        why = f"biduality X -> Hom(Hom(X,C),C) is not bijective ({x.dim} -> {delta.target.dim}, rank {delta.rank()})"
        return Reflexivity(Verdict.NO, why, e1, e2, delta)
    verdict = Verdict.YES if e1.certified and e2.certified else Verdict.YES_TO_BOUND
    return Reflexivity(verdict, "Ext vanishing both ways and biduality bijective", e1, e2, delta)


def order_leq(c: RModule, b: RModule, bound: int | None = None, seed: int = 0) -> Verdict:
    """``[C] <| [B]``: is ``B`` C-reflexive?"""
    return is_reflexive(b, c, bound, seed).verdict


def dagger(b: RModule, c: RModule, bound: int | None = None, seed: int = 0) -> RModule:
    """``Hom(B, C)`` for a C-reflexive ``B``."""
    ref = is_reflexive(b, c, bound, seed)
    if not ref.verdict.holds():
        raise PreconditionError(f"{b.name or 'B'} is not {c.name or 'C'}-reflexive: {ref.reason}")
    h = HomSpace(b, c).module
    h.name = f"{b.name or 'B'}^+{c.name or 'C'}"
    return h


@dataclass
class Membership:
    verdict: Verdict
    reason: str
    checks: dict = field(default_factory=dict)


def _combine(vans: list[Vanishing], iso: bool, iso_name: str) -> Membership:
    checks = {f"vanishing_{k}": v.verdict.value for k, v in enumerate(vans)}
    checks[iso_name] = iso
    for v in vans:
        if not v.vanishes:
            return Membership(Verdict.NO, v.describe("homology"), checks)
    if not iso:
        return Membership(Verdict.NO, f"{iso_name} is not bijective", checks)
    certified = all(v.certified for v in vans)
    return Membership(Verdict.YES if certified else Verdict.YES_TO_BOUND, "all conditions hold", checks)


def evaluation(c: RModule, x: RModule) -> ModuleMap:
    """``xi: C (x) Hom(C, X) -> X``, ``c (x) f -> f(c)``."""
    hom = HomSpace(c, x)
    tens = TensorProduct(c, hom.module)
    gens = tens.res.gens[0]  # generators of C as vectors in C
    maps = hom.basis_maps  # (h, nX, nC)
    # ambient (Hom)^{b0}: block j, coordinate a maps to f_a(g_j)
    amb = np.einsum("axc,cj->xja", maps, gens) % c.p
    amb = amb.reshape(x.dim, gens.shape[1] * hom.dim)
    return ModuleMap(tens.module, x, la.matmul(amb, tens.lift, c.p))


def unit(c: RModule, x: RModule) -> ModuleMap:
    """``gamma: X -> Hom(C, C (x) X)``, ``x -> (c -> c (x) x)``."""
    tens = TensorProduct(c, x)
    hom = HomSpace(c, tens.module)
    pair = tens.pairing()  # (nT, nC, nX)
    cols = [hom.coords_of_map(pair[:, :, s]) for s in range(x.dim)]
    mat = np.array(cols, dtype=DTYPE).T.reshape(hom.dim, x.dim)
    return ModuleMap(x, hom.module, mat)


def bass_class_member(x: RModule, c: RModule, bound: int | None = None, seed: int = 0) -> Membership:
    bound = default_bound(c.algebra) if bound is None else bound
    e = ext_vanishing(c, x, bound, seed)
    if not e.vanishes:
        return _combine([e], False, "evaluation")
    t = tor_vanishing(c, HomSpace(c, x).module, bound, seed)
    xi = evaluation(c, x)
    return _combine([e, t], xi.is_bijective(), "evaluation")


def auslander_class_member(x: RModule, c: RModule, bound: int | None = None, seed: int = 0) -> Membership:
    bound = default_bound(c.algebra) if bound is None else bound
    t = tor_vanishing(c, x, bound, seed)
    if not t.vanishes:
        return _combine([t], False, "unit")
    e = ext_vanishing(c, TensorProduct(c, x).module, bound, seed)
    gamma = unit(c, x)
    return _combine([t, e], gamma.is_bijective(), "unit")


@dataclass
class BassSeries:
    offset: int
    coeffs: list[int]
    trunc: int
    method: str = ""

    def is_monomial(self) -> bool:
        return sum(1 for v in self.coeffs if v) == 1

    def __mul__(self, other: "BassSeries") -> "BassSeries":
        t = min(self.trunc, other.trunc)
        out = [sum(self.coeffs[i] * other.coeffs[n - i] for i in range(n + 1)) for n in range(t + 1)]
        return BassSeries(self.offset + other.offset, out, t, "product")


def betti_numbers(m: RModule, trunc: int, seed: int = 0) -> tuple[list[int], str]:
    """``b_0 .. b_trunc``, extrapolated along a syzygy repetition when one appears.

    Stops early (returning fewer numbers) if the resolution outgrows its budget.
    """
    res = m.resolution
    out: list[int] = []
    for n in range(trunc + 1):
        try:
            per = res.periodicity(min(n, len(res.syzygies) - 1), seed=seed) if n else None
            if per is not None:
                a, step, r = per
                res.extend(a + step)
                betti = list(res.betti[: a + step + 1])
                while len(betti) <= trunc:
                    betti.append(r * betti[len(betti) - step])
                return betti[: trunc + 1], f"computed to {a + step}, extended by repetition {per}"
            res.extend(n)
        except ResolutionTooLarge:
            return out, f"resolution budget reached at degree {n}"
        out.append(res.betti[n])
        if res.terminated() and res.betti[n] == 0:
            return out + [0] * (trunc - n), "finite resolution"
    return out, "computed"


def bass_series(algebra: LocalAlgebra, trunc: int = 20, seed: int = 0) -> BassSeries:
    """Bass numbers ``mu^n = dim Ext^n(k, R)``, read off as Betti numbers of ``omega``.

    ``trunc`` of the result is lowered when the resolution budget cuts the computation short.
    """
    if trunc < 0:
        raise ValueError("truncation must be nonnegative")
    coeffs, how = betti_numbers(omega(algebra), trunc, seed)
    return BassSeries(0, coeffs, len(coeffs) - 1, how)


def is_gorenstein(algebra: LocalAlgebra) -> bool:
    return socle(algebra).shape[1] == 1


def is_gorenstein_hom(fibre: LocalAlgebra) -> bool:
    """A flat local map is Gorenstein exactly when its closed fibre is."""
    return is_gorenstein(fibre)


@dataclass
class HomBassSeries:
    series: BassSeries
    gorenstein: bool
    product_identity: bool
    source: BassSeries
    target: BassSeries


def hom_bass_series(r: LocalAlgebra, fibre: LocalAlgebra, trunc: int = 20, seed: int = 0) -> HomBassSeries:
    """Relative Bass series of the flat map ``R -> R (x) fibre``, with the product identity checked."""
    s = tensor_algebras(r, fibre)
    i_phi = bass_series(fibre, trunc, seed)
    i_r = bass_series(r, trunc, seed)
    i_s = bass_series(s, trunc, seed)
    prod = i_phi * i_r
    upto = min(prod.trunc, i_s.trunc)
    ok = prod.coeffs[: upto + 1] == i_s.coeffs[: upto + 1]
    return HomBassSeries(i_phi, is_gorenstein_hom(fibre), ok, i_r, i_s)


def external_tensor(m: RModule, n: RModule, algebra: LocalAlgebra | None = None) -> RModule:
    """``M (x)_k N`` over ``A (x)_k B``."""
    algebra = algebra or tensor_algebras(m.algebra, n.algebra)
    im, inn = np.eye(m.dim, dtype=DTYPE), np.eye(n.dim, dtype=DTYPE)
    acts = [np.kron(a, inn) for a in m.gen_action] + [np.kron(im, b) for b in n.gen_action]
    acts = np.array(acts, dtype=DTYPE).reshape(algebra.ngens, m.dim * n.dim, m.dim * n.dim)
    return RModule(algebra, acts, dim=m.dim * n.dim, name=f"{m.name or 'M'}#{n.name or 'N'}")


def base_change(c: RModule, fibre: LocalAlgebra, algebra: LocalAlgebra | None = None) -> RModule:
    """``S (x)_R C = C (x)_k T`` over ``S = R (x)_k T``."""
    out = external_tensor(c, regular_module(fibre), algebra)
    out.name = f"S*{c.name or 'C'}"
    return out


@dataclass
class SdClassRecord:
    representative: RModule
    certificate: SdCertificate
    label: str


@dataclass
class Catalog:
    algebra: LocalAlgebra
    records: list[SdClassRecord]
    order: list[list[str]]
    transitive: bool
    gen_bound: int
    ext_bound: int
    seed: int
    candidates: int
    survivors: int
    truncated: bool

    @property
    def count(self) -> int:
        return len(self.records)

    def power_of_two(self) -> int | None:
        c = self.count
        return c.bit_length() - 1 if c and c & (c - 1) == 0 else None


def _label(m: RModule, counter: int) -> str:
    try:
        betti = m.resolution.extend(2).betti[:3]
    except ResolutionTooLarge:
        betti = m.resolution.betti
    return f"d{m.dim}-b{'.'.join(map(str, betti))}-s{socle_dim(m)}-{counter}"


def _is_faithful(m: RModule) -> bool:
    return la.rank(m.action.reshape(m.algebra.dim, -1), m.p) == m.algebra.dim


def submodules_of_maxideal_power(algebra: LocalAlgebra, rank: int, limit: int):
    """Every submodule of ``m R^rank`` (as a basis matrix), breadth first; stops at ``limit``."""
    p, d = algebra.p, algebra.dim
    free = free_module(algebra, rank)
    amb_rows = [j * d + r for j in range(rank) for r in range(d) if r != algebra.unit_index]
    seen = {}
    start = np.zeros((rank * d, 0), dtype=DTYPE)
    queue = [start]
    seen[b""] = True
    yield start
    produced = 1
    while queue:
        nxt = []
        for u in queue:
            red = la.rref(u.T, p)[0][: u.shape[1]] if u.shape[1] else np.zeros((0, rank * d), dtype=DTYPE)
            piv = {int(np.flatnonzero(row)[0]) for row in red}
            free_rows = [r for r in amb_rows if r not in piv]
            for coeffs in itertools.product(range(p), repeat=len(free_rows)):
                if not any(coeffs):
                    continue
                lead = next(c for c in coeffs if c)
                if lead != 1:
                    continue
                v = np.zeros((rank * d, 1), dtype=DTYPE)
                v[free_rows, 0] = coeffs
                _, basis = submodule(free, np.hstack([u, v]))
                key = la.rref(basis.T, p)[0].tobytes()
                if key in seen:
                    continue
                seen[key] = True
                nxt.append(basis)
                yield basis
                produced += 1
                if produced >= limit:
                    return
        queue = nxt


def enumerate_semidualizing(algebra: LocalAlgebra, gen_bound: int = 3, ext_bound: int | None = None,
                            seed: int = 0, limit: int = 50000) -> Catalog:
    """Semidualizing classes among modules with at most ``gen_bound`` generators.

    A module with ``r`` minimal generators is ``R^r / U`` for a submodule
    ``U`` of ``m R^r``; all such ``U`` are visited unless ``limit`` is hit.
    """
    if gen_bound < 1:
        raise ValueError("generator bound must be at least 1")
    ext_bound = default_bound(algebra) if ext_bound is None else ext_bound
    records: list[SdClassRecord] = []
    candidates = survivors = 0
    truncated = False
    refuted: list[RModule] = []
    for r in range(1, gen_bound + 1):
        free = free_module(algebra, r)
        for sub in submodules_of_maxideal_power(algebra, r, limit):
            candidates += 1
            if candidates >= limit:
                truncated = True
                break
            c = quotient(free, sub).module
            if not _is_faithful(c) or hom_module_naive(c, c)[0].dim != algebra.dim:
                continue
            survivors += 1
            if any(is_isomorphic(c, rec.representative, seed=seed).verdict == "yes" for rec in records):
                continue
            if any(is_isomorphic(c, bad, seed=seed).verdict == "yes" for bad in refuted):
                continue
            cert = certify_semidualizing(c, ext_bound, seed)
            if cert.status is Status.REFUTED:
                refuted.append(c)
                continue
            c.name = _label(c, len(records))
            records.append(SdClassRecord(c, cert, c.name))
            log.info("new class %s (%s)", c.name, cert.status.value)
        if truncated:
            break
    order = [[order_leq(a.representative, b.representative, ext_bound, seed).value for b in records]
             for a in records]
    return Catalog(algebra, records, order, _transitive(order), gen_bound, ext_bound, seed,
                   candidates, survivors, truncated)


def _transitive(order: list[list[str]]) -> bool:
    n = len(order)
    rel = [[order[i][j] != Verdict.NO.value for j in range(n)] for i in range(n)]
    return all(not (rel[i][j] and rel[j][k]) or rel[i][k]
               for i in range(n) for j in range(n) for k in range(n))


def catalog_report(cat: Catalog) -> dict:
    exp = cat.power_of_two()
    return {
        "ring": cat.algebra.name,
        "dim": cat.algebra.dim,
        "bounds": {"gen_bound": cat.gen_bound, "ext_bound": cat.ext_bound, "truncated": cat.truncated},
        "seed": cat.seed,
        "candidates": cat.candidates,
        "survivors": cat.survivors,
        "classes": [
            {"label": rec.label, "dim": rec.representative.dim, "status": rec.certificate.status.value,
             "reason": rec.certificate.reason, "dualizing": is_dualizing(rec.representative, cat.seed),
             "free": is_free(rec.representative)}
            for rec in cat.records
        ],
        "count": cat.count,
        "power_of_two": f"2^{exp}" if exp is not None else "not a power of 2",
        "order": cat.order,
        "transitive": cat.transitive,
    }
