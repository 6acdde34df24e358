"""Finitely generated modules over a local algebra, and the functors on them.

A module is a representation: a vector space with one commuting matrix per
algebra generator.  Hom and tensor are computed from a minimal presentation
of the first argument, Ext and Tor from a lazily extended minimal free
resolution.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactla as la
from .algebra import LocalAlgebra
from .exactla import DTYPE

log = logging.getLogger(__name__)

#: largest k-dimension of a free module a resolution step may allocate
DEFAULT_RESOLUTION_BUDGET = 3000


class ModuleError(ValueError):
    pass


class ResolutionTooLarge(RuntimeError):
    pass


def _span(vectors: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Basis (columns) of the span of the columns, identity on the returned pivot rows."""
    if vectors.size == 0:
        return np.zeros((vectors.shape[0], 0), dtype=DTYPE), []
    red, r, pivots = la.rref(vectors.T, p)
    return np.ascontiguousarray(red[:r].T), pivots


class RModule:
    """A module over ``algebra`` given by the action of each generator.

    ``gen_action[k]`` is the ``dim x dim`` matrix of generator ``k``; the
    action of every basis element is derived from the monomial structure
    of the algebra (see :attr:`action`).
    """

    def __init__(self, algebra: LocalAlgebra, gen_action, dim: int | None = None,
                 name: str = "", check: bool = False):
        self.algebra = algebra
        acts = np.asarray(gen_action, dtype=DTYPE)
        if dim is None:
            if acts.ndim != 3 or acts.shape[0] == 0:
                raise ModuleError("dimension must be given when the algebra has no generators")
            dim = acts.shape[1]
        acts = acts.reshape(algebra.ngens, dim, dim) % algebra.p
        acts.setflags(write=False)
        self.gen_action = acts
        self.dim = int(dim)
        self.name = name
        self._lock = threading.RLock()
        self._resolution: FreeResolution | None = None
        if check:
            self.validate()

    def __repr__(self):
        return f"RModule({self.name or '?'}, dim={self.dim}, over {self.algebra.name or 'R'})"

    @property
    def p(self) -> int:
        return self.algebra.p

    @classmethod
    def from_basis_action(cls, algebra: LocalAlgebra, action, name: str = "") -> "RModule":
        """Build from one matrix per basis element of the algebra (checked)."""
        action = np.asarray(action, dtype=DTYPE) % algebra.p
        if action.ndim != 3 or action.shape[0] != algebra.dim:
            raise ModuleError("need one square matrix per algebra basis element")
        gens = np.einsum("gr,rab->gab", algebra.generators, action) % algebra.p
        mod = cls(algebra, gens, dim=action.shape[1], name=name)
        if not np.array_equal(mod.action, action):
            raise ModuleError("action is not an algebra homomorphism")
        mod.validate()
        return mod

    @cached_property
    def action(self) -> np.ndarray:
        """``action[r]`` is the matrix of basis element ``r``."""
        return self.apply_all(np.eye(self.dim, dtype=DTYPE))

    def apply_all(self, vectors: np.ndarray) -> np.ndarray:
        """``out[r] = e_r . vectors`` for every basis element ``r``."""
        alg, p = self.algebra, self.p
        v = np.asarray(vectors, dtype=DTYPE)
        out = np.zeros((alg.dim,) + v.shape, dtype=DTYPE)
        for r in alg.order:
            par = alg.parents[r]
            if par is None:
                out[r] = v % p
            else:
                k, s = par
                out[r] = la.matmul(self.gen_action[k], out[s], p)
        return out

    def act(self, elements: np.ndarray) -> np.ndarray:
        """Matrices of algebra elements ``elements[..., r]`` acting on this module."""
        return np.einsum("...r,rab->...ab", np.asarray(elements, DTYPE), self.action) % self.p

    def validate(self):
        """Raise unless the generator matrices define a module over the algebra."""
        alg, p, A = self.algebra, self.p, self.action
        for k in range(alg.ngens):
            if not np.array_equal(self.gen_action[k], np.einsum("r,rab->ab", alg.generators[k], A) % p):
                raise ModuleError(f"generator {alg.gen_names[k]} acts inconsistently with the relations")
        lhs = np.einsum("iab,jbc->ijac", A, A) % p
        rhs = np.einsum("ijl,lac->ijac", alg.mult, A) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleError("action does not respect the multiplication of the algebra")

    @property
    def resolution(self) -> "FreeResolution":
        with self._lock:
            if self._resolution is None:
                self._resolution = FreeResolution(self)
            return self._resolution

    def is_zero(self) -> bool:
        return self.dim == 0

    def maxideal_image(self) -> np.ndarray:
        """Basis of ``m M``."""
        if self.algebra.ngens == 0 or self.dim == 0:
            return np.zeros((self.dim, 0), dtype=DTYPE)
        return _span(np.concatenate(list(self.gen_action), axis=1), self.p)[0]


def zero_module(algebra: LocalAlgebra) -> RModule:
    return RModule(algebra, np.zeros((algebra.ngens, 0, 0), dtype=DTYPE), dim=0, name="0")


def residue_field(algebra: LocalAlgebra) -> RModule:
    return RModule(algebra, np.zeros((algebra.ngens, 1, 1), dtype=DTYPE), dim=1, name="k")


def free_module(algebra: LocalAlgebra, rank: int) -> RModule:
    acts = np.array([np.kron(np.eye(rank, dtype=DTYPE), g) for g in algebra.gen_mult], dtype=DTYPE)
    return RModule(algebra, acts, dim=rank * algebra.dim, name=f"R^{rank}")


def direct_sum(*mods: RModule) -> RModule:
    alg = mods[0].algebra
    n = sum(m.dim for m in mods)
    acts = np.zeros((alg.ngens, n, n), dtype=DTYPE)
    at = 0
    for m in mods:
        acts[:, at : at + m.dim, at : at + m.dim] = m.gen_action
        at += m.dim
    return RModule(alg, acts, dim=n, name="+".join(m.name or "?" for m in mods))


def restrict(module: RModule, basis: np.ndarray, rows: list[int], name: str = "") -> RModule:
    """The submodule spanned by ``basis`` (invariant, identity on ``rows``)."""
    acts = [la.matmul(g, basis, module.p)[rows] for g in module.gen_action]
    k = basis.shape[1]
    return RModule(module.algebra, np.array(acts, dtype=DTYPE).reshape(module.algebra.ngens, k, k),
                   dim=k, name=name)


def submodule(module: RModule, vectors: np.ndarray, name: str = "") -> tuple[RModule, np.ndarray]:
    """The submodule generated by the columns of ``vectors`` and its inclusion matrix."""
    images = module.apply_all(np.asarray(vectors, DTYPE).reshape(module.dim, -1))
    flat = np.transpose(images, (1, 0, 2)).reshape(module.dim, -1)
    basis, rows = _span(flat, module.p)
    return restrict(module, basis, rows, name), basis


@dataclass
class Quotient:
    """``module / U`` with projection ``proj`` and a linear section ``lift``."""

    module: RModule
    proj: np.ndarray
    lift: np.ndarray


def quotient(module: RModule, sub_basis: np.ndarray, name: str = "") -> Quotient:
    p, n = module.p, module.dim
    sub = np.asarray(sub_basis, DTYPE)
    ub, pivots = _span(sub if sub.ndim == 2 else sub.reshape(n, -1), p)
    comp = [c for c in range(n) if c not in set(pivots)]
    proj = np.zeros((len(comp), n), dtype=DTYPE)
    proj[np.arange(len(comp)), comp] = 1
    if pivots:
        proj[:, pivots] = (-ub[comp, :]) % p
    lift = np.zeros((n, len(comp)), dtype=DTYPE)
    lift[comp, np.arange(len(comp))] = 1
    acts = [la.matmul(la.matmul(proj, g, p), lift, p) for g in module.gen_action]
    q = len(comp)
    mod = RModule(module.algebra, np.array(acts, dtype=DTYPE).reshape(module.algebra.ngens, q, q),
                  dim=q, name=name)
    return Quotient(mod, proj, lift)


def matlis_dual(module: RModule) -> RModule:
    """``Hom_k(M, k)``: the dual space with transposed action."""
    acts = np.transpose(module.gen_action, (0, 2, 1)).copy()
    return RModule(module.algebra, acts, dim=module.dim, name=f"{module.name or 'M'}^v")


def presentation_module(algebra: LocalAlgebra, matrix: np.ndarray, name: str = "") -> RModule:
    """Cokernel of ``R^a -> R^b`` whose ``(l, j)`` entry is the algebra element ``matrix[l, j]``."""
    mat = np.asarray(matrix, dtype=DTYPE) % algebra.p
    b, a = mat.shape[:2]
    free = free_module(algebra, b)
    cols = mat.transpose(1, 0, 2).reshape(a, b * algebra.dim).T
    if a == 0:
        cols = np.zeros((b * algebra.dim, 0), dtype=DTYPE)
    _, sub = submodule(free, cols)
    return quotient(free, sub, name=name).module


class FreeResolution:
    """Minimal free resolution ``... -> F_1 -> F_0 -> M``, extended on demand.

    ``syzygies[i]`` is the module Omega^i (Omega^0 = M), embedded in
    ``F_{i-1} = R^{b_{i-1}}`` by ``inclusions[i]``.  ``boundaries[i - 1]``
    holds ``d_i`` as an array of algebra elements of shape
    ``(b_{i-1}, b_i, dim R)``.
    """

    def __init__(self, module: RModule, budget: int = DEFAULT_RESOLUTION_BUDGET):
        self.module = module
        self.budget = budget
        self.syzygies: list[RModule] = [module]
        self.gens: list[np.ndarray] = []
        self.inclusions: list[np.ndarray | None] = [None]
        self.boundaries: list[np.ndarray] = []
        self._lock = threading.RLock()
        self._periodicity: tuple[int, int, int] | None = None
        self._period_checked = 0

    @property
    def betti(self) -> list[int]:
        return [g.shape[1] for g in self.gens]

    @property
    def length(self) -> int:
        """Index of the last computed free module."""
        return len(self.gens) - 1

    def terminated(self) -> bool:
        """Some computed syzygy is zero (finite projective dimension)."""
        return any(s.dim == 0 for s in self.syzygies)

    def extend(self, length: int) -> "FreeResolution":
        """Compute ``b_0 .. b_length`` and the boundaries between them."""
        with self._lock:
            while len(self.gens) <= length:
                self._step()
        return self

    def _step(self):
        alg, p, d = self.module.algebra, self.module.p, self.module.algebra.dim
        i = len(self.gens)
        x = self.syzygies[i]
        comp = minimal_generator_coords(x)
        g = np.zeros((x.dim, len(comp)), dtype=DTYPE)
        g[comp, np.arange(len(comp))] = 1
        b = g.shape[1]
        if b * d > self.budget:
            raise ResolutionTooLarge(f"F_{i} would have dimension {b * d} > {self.budget}")
        self.gens.append(g)
        if i >= 1:
            prev_b = self.gens[i - 1].shape[1]
            cols = self.inclusions[i][:, comp]
            self.boundaries.append(cols.reshape(prev_b, d, b).transpose(0, 2, 1).copy())
        # next syzygy: kernel of F_i -> Omega^i
        images = x.apply_all(g)  # (d, n, b)
        pi = np.transpose(images, (1, 2, 0)).reshape(x.dim, b * d)
        if x.dim == 0:
            kern, free = np.eye(b * d, dtype=DTYPE), list(range(b * d))
        else:
            kern, free = la.nullspace(pi, p)
        k = kern.shape[1]
        k3 = kern.reshape(b, d, k)
        acts = np.zeros((alg.ngens, k, k), dtype=DTYPE)
        for g in range(alg.ngens):
            acts[g] = (np.einsum("ls,bsk->blk", alg.gen_mult[g], k3).reshape(b * d, k) % p)[free]
        self.syzygies.append(RModule(alg, acts, dim=k, name=f"Omega^{i + 1}"))
        self.inclusions.append(kern)
        log.debug("resolution of %s: b_%d = %d, dim Omega^%d = %d", self.module.name, i, b, i + 1, k)

    @cached_property
    def section(self) -> np.ndarray:
        """A k-linear right inverse of the augmentation ``F_0 -> M``."""
        self.extend(0)
        x = self.module
        images = x.apply_all(self.gens[0])
        pi = np.transpose(images, (1, 2, 0)).reshape(x.dim, -1)
        if x.dim == 0:
            return np.zeros((pi.shape[1], 0), dtype=DTYPE)
        s = la.solve(pi, np.eye(x.dim, dtype=DTYPE), x.p)
        assert s is not None
        return s

    def boundary(self, i: int) -> np.ndarray:
        self.extend(i)
        if i == 0:
            return np.zeros((0, self.betti[0], self.module.algebra.dim), dtype=DTYPE)
        return self.boundaries[i - 1]

    def is_minimal(self) -> bool:
        u = self.module.algebra.unit_index
        return all(not np.any(bd[..., u]) for bd in self.boundaries)

    def periodicity(self, max_index: int, seed: int = 0) -> tuple[int, int, int] | None:
        """Look for ``Omega^(a+per) ~= (Omega^a)^r`` among syzygies up to ``max_index``.

        Once found, every later syzygy is a direct sum of ``r`` copies of the
        one ``per`` steps earlier, so Ext and Tor against a fixed module are
        decided by the degrees ``1 .. a + per``.
        """
        with self._lock:
            if self._periodicity is not None:
                return self._periodicity
            for j in range(max(self._period_checked + 1, 1), max_index + 1):
                self.extend(j)
                self._period_checked = j
                sj = self.syzygies[j]
                if sj.dim == 0:
                    return None
                for a in range(j - 1, -1, -1):
                    sa = self.syzygies[a]
                    if sa.dim == 0 or sj.dim % sa.dim:
                        continue
                    r = sj.dim // sa.dim
                    if self.betti[j] != r * self.betti[a]:
                        continue
                    if radical_dims(sj) != [r * v for v in radical_dims(sa)]:
                        continue
                    target = sa if r == 1 else direct_sum(*([sa] * r))
                    if is_isomorphic(sj, target, seed=seed).verdict == "yes":
                        self._periodicity = (a, j - a, r)
                        log.debug("syzygy periodicity for %s: %s", self.module.name, self._periodicity)
                        return self._periodicity
            return None


def minimal_generator_coords(module: RModule) -> list[int]:
    """Coordinates whose unit vectors map to a basis of ``M / m M``."""
    if module.dim == 0:
        return []
    _, pivots = _span(module.maxideal_image(), module.p)
    piv = set(pivots)
    return [c for c in range(module.dim) if c not in piv]


def minimal_free_resolution(module: RModule, length: int) -> FreeResolution:
    return module.resolution.extend(length)


def radical_dims(module: RModule) -> list[int]:
    """Dimensions of ``M, mM, m^2 M, ...`` down to zero."""
    p = module.p
    dims = [module.dim]
    span = np.eye(module.dim, dtype=DTYPE)
    while span.shape[1] and module.algebra.ngens:
        prods = np.concatenate([la.matmul(g, span, p) for g in module.gen_action], axis=1)
        span = _span(prods, p)[0]
        if not span.shape[1]:
            break
        dims.append(span.shape[1])
    return dims


def socle_dim(module: RModule) -> int:
    if module.algebra.ngens == 0:
        return module.dim
    stacked = np.concatenate(list(module.gen_action), axis=0)
    return module.dim - la.rank(stacked, module.p)


def is_free(module: RModule) -> bool:
    res = module.resolution.extend(0)
    return module.dim == res.betti[0] * module.algebra.dim


def is_injective(module: RModule) -> bool:
    """Injective modules over an Artinian local ring are the Matlis duals of free ones."""
    return is_free(matlis_dual(module))


def _check_same(m: RModule, n: RModule):
    if not m.algebra.same_as(n.algebra):
        raise ModuleError("modules live over different algebras")


class HomSpace:
    """``Hom_R(M, N)``, realized inside ``N^{b_0}`` by the images of the generators of M."""

    def __init__(self, m: RModule, n: RModule):
        _check_same(m, n)
        self.source, self.target = m, n
        p = m.p
        res = m.resolution.extend(1)
        self.res = res
        b0 = res.betti[0]
        cochain = hom_cochain(res, 1, n)
        if cochain.shape[0] == 0:
            self.basis, self.free = np.eye(b0 * n.dim, dtype=DTYPE), list(range(b0 * n.dim))
        else:
            self.basis, self.free = la.nullspace(cochain, p)
        h = self.basis.shape[1]
        acts = []
        for g in n.gen_action:
            big = np.kron(np.eye(b0, dtype=DTYPE), g)
            acts.append(la.matmul(big, self.basis, p)[self.free])
        self.module = RModule(m.algebra, np.array(acts, dtype=DTYPE).reshape(m.algebra.ngens, h, h),
                              dim=h, name=f"Hom({m.name or 'M'},{n.name or 'N'})")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def images(self, coords) -> np.ndarray:
        """Images of the generators of the source: shape ``(b_0, dim N)``."""
        v = la.matmul(self.basis, np.asarray(coords, DTYPE).reshape(-1, 1), self.source.p)
        return v.reshape(-1, self.target.dim)

    def map_matrix(self, coords) -> np.ndarray:
        """The k-linear matrix (``dim N x dim M``) of the element with these coordinates."""
        n, p = self.target, self.source.p
        f = self.images(coords).T  # (dim N, b0)
        phi = np.transpose(n.apply_all(f), (1, 2, 0)).reshape(n.dim, -1)
        return la.matmul(phi, self.res.section, p)

    @cached_property
    def basis_maps(self) -> np.ndarray:
        eye = np.eye(self.dim, dtype=DTYPE)
        out = np.zeros((self.dim, self.target.dim, self.source.dim), dtype=DTYPE)
        for t in range(self.dim):
            out[t] = self.map_matrix(eye[t])
        return out

    def coords_of_map(self, matrix: np.ndarray) -> np.ndarray:
        """Coordinates of an R-linear map given as a k-linear matrix."""
        p = self.source.p
        f = la.matmul(np.asarray(matrix, DTYPE), self.res.gens[0], p)  # (dim N, b0)
        return f.T.reshape(-1)[self.free]


class TensorProduct:
    """``M (x)_R N`` as the cokernel of ``F_1 (x) N -> F_0 (x) N``."""

    def __init__(self, m: RModule, n: RModule):
        _check_same(m, n)
        self.left, self.right = m, n
        res = m.resolution.extend(1)
        self.res = res
        b0 = res.betti[0]
        ambient = RModule(m.algebra, [np.kron(np.eye(b0, dtype=DTYPE), g) for g in n.gen_action], dim=b0 * n.dim)
        chain = tor_chain(res, 1, n)
        q = quotient(ambient, chain, name=f"{m.name or 'M'}(x){n.name or 'N'}")
        self.module, self.proj, self.lift = q.module, q.proj, q.lift

    def element(self, mvec, nvec) -> np.ndarray:
        """Coordinates of the pure tensor ``m (x) n``."""
        m, n, p = self.left, self.right, self.left.p
        r = la.matmul(self.res.section, np.asarray(mvec, DTYPE).reshape(-1, 1), p).reshape(-1, m.algebra.dim)
        blocks = la.matmul(n.act(r), np.asarray(nvec, DTYPE).reshape(-1, 1), p).reshape(-1)
        return la.matmul(self.proj, blocks.reshape(-1, 1), p).reshape(-1)

    def pairing(self) -> np.ndarray:
        """``out[:, u, s]`` = coordinates of ``e_u (x) e_s`` for all basis pairs."""
        m, n, p = self.left, self.right, self.left.p
        r3 = self.res.section.reshape(-1, m.algebra.dim, m.dim)  # (b0, d, nM)
        blocks = np.einsum("jru,rab->jaub", r3, n.action) % p
        blocks = blocks.reshape(-1, m.dim * n.dim)
        return la.matmul(self.proj, blocks, p).reshape(-1, m.dim, n.dim)

    def generator_block(self, j: int) -> np.ndarray:
        """Matrix of ``x -> g_j (x) x`` for the ``j``-th generator of the left factor."""
        n = self.right.dim
        return self.proj[:, j * n : (j + 1) * n]


def hom_cochain(res: FreeResolution, i: int, n: RModule) -> np.ndarray:
    """Matrix of ``Hom(d_i, N): N^{b_{i-1}} -> N^{b_i}`` (zero map from 0 when ``i == 0``)."""
    res.extend(i)
    b = res.betti
    if i == 0:
        return np.zeros((b[0] * n.dim, 0), dtype=DTYPE)
    blocks = n.act(res.boundaries[i - 1])  # (b_{i-1}, b_i, nN, nN)
    return np.transpose(blocks, (1, 2, 0, 3)).reshape(b[i] * n.dim, b[i - 1] * n.dim)


def tor_chain(res: FreeResolution, i: int, n: RModule) -> np.ndarray:
    """Matrix of ``d_i (x) N: N^{b_i} -> N^{b_{i-1}}``."""
    res.extend(i)
    b = res.betti
    if i == 0:
        return np.zeros((0, b[0] * n.dim), dtype=DTYPE)
    blocks = n.act(res.boundaries[i - 1])
    return np.transpose(blocks, (0, 2, 1, 3)).reshape(b[i - 1] * n.dim, b[i] * n.dim)


def hom_module(m: RModule, n: RModule) -> RModule:
    return HomSpace(m, n).module


def tensor_module(m: RModule, n: RModule) -> RModule:
    return TensorProduct(m, n).module


def ext_dim(i: int, m: RModule, n: RModule) -> int:
    """``dim_k Ext^i_R(M, N)`` from the minimal resolution of ``M``."""
    if i < 0:
        raise ValueError("negative degree")
    _check_same(m, n)
    res = m.resolution.extend(i + 1)
    p = m.p
    total = res.betti[i] * n.dim
    if total == 0:
        return 0
    out_rank = la.rank(hom_cochain(res, i + 1, n), p)
    in_rank = la.rank(hom_cochain(res, i, n), p) if i else 0
    return total - out_rank - in_rank


def tor_dim(i: int, m: RModule, n: RModule, resolve: str = "first") -> int:
    """``dim_k Tor_i^R(M, N)``; ``resolve="second"`` resolves ``N`` instead of ``M``."""
    if i < 0:
        raise ValueError("negative degree")
    _check_same(m, n)
    if resolve not in ("first", "second"):
        raise ValueError(f"resolve must be 'first' or 'second', not {resolve!r}")
    if resolve == "second":
        m, n = n, m
    res = m.resolution.extend(i + 1)
    p = m.p
    total = res.betti[i] * n.dim
    if total == 0:
        return 0
    in_rank = la.rank(tor_chain(res, i + 1, n), p)
    out_rank = la.rank(tor_chain(res, i, n), p) if i else 0
    return total - out_rank - in_rank


def _subquotient(ambient: RModule, kernel_of: np.ndarray, image_of: np.ndarray, name: str) -> RModule:
    p = ambient.p
    if kernel_of.shape[0]:
        zb, zfree = la.nullspace(kernel_of, p)
    else:
        zb, zfree = np.eye(ambient.dim, dtype=DTYPE), list(range(ambient.dim))
    z = restrict(ambient, zb, zfree)
    img = image_of[zfree, :] if image_of.size else np.zeros((len(zfree), 0), dtype=DTYPE)
    return quotient(z, img, name=name).module


def ext_module(i: int, m: RModule, n: RModule) -> RModule:
    """``Ext^i_R(M, N)`` with its R-module structure."""
    res = m.resolution.extend(i + 1)
    b = res.betti[i]
    ambient = RModule(m.algebra, [np.kron(np.eye(b, dtype=DTYPE), g) for g in n.gen_action], dim=b * n.dim)
    return _subquotient(ambient, hom_cochain(res, i + 1, n), hom_cochain(res, i, n), f"Ext^{i}")


def tor_module(i: int, m: RModule, n: RModule) -> RModule:
    """``Tor_i^R(M, N)`` with its R-module structure."""
    res = m.resolution.extend(i + 1)
    b = res.betti[i]
    ambient = RModule(m.algebra, [np.kron(np.eye(b, dtype=DTYPE), g) for g in n.gen_action], dim=b * n.dim)
    return _subquotient(ambient, tor_chain(res, i, n), tor_chain(res, i + 1, n), f"Tor_{i}")


@dataclass
class ModuleMap:
    source: RModule
    target: RModule
    matrix: np.ndarray

    def is_equivariant(self) -> bool:
        p = self.source.p
        return all(
            np.array_equal(la.matmul(self.matrix, a, p), la.matmul(b, self.matrix, p))
            for a, b in zip(self.source.gen_action, self.target.gen_action)
        )

    def rank(self) -> int:
        if self.matrix.size == 0:
            return 0
        return la.rank(self.matrix, self.source.p)

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and self.rank() == self.source.dim


@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "unknown"
    witness: ModuleMap | None = None
    reason: str = ""

    def __bool__(self):
        return self.verdict == "yes"


def invariants(module: RModule) -> dict:
    res = module.resolution.extend(0)
    return {
        "dim": module.dim,
        "radical_dims": radical_dims(module),
        "socle_dim": socle_dim(module),
        "b0": res.betti[0],
    }


def is_isomorphic(m: RModule, n: RModule, seed: int = 0, samples: int = 200,
                  exhaustive_limit: int = 12) -> IsoResult:
    """Decide ``M ~= N``; a "yes" always carries a verified equivariant bijection."""
    _check_same(m, n)
    p = m.p
    if m.dim != n.dim:
        return IsoResult("no", reason=f"dim {m.dim} != {n.dim}")
    if m.dim == 0:
        return IsoResult("yes", ModuleMap(m, n, np.zeros((0, 0), dtype=DTYPE)), "zero modules")
    im, inn = invariants(m), invariants(n)
    for key in im:
        if im[key] != inn[key]:
            return IsoResult("no", reason=f"{key} {im[key]} != {inn[key]}")
    if not m.gen_action.any() and not n.gen_action.any():
        return _verified(m, n, np.eye(m.dim, dtype=DTYPE), "trivial actions")
    hom = HomSpace(m, n)
    end_dim = HomSpace(m, m).dim
    if hom.dim != end_dim:
        return IsoResult("no", reason=f"dim Hom(M,N) {hom.dim} != dim End(M) {end_dim}")
    maps = hom.basis_maps
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, p, size=(samples, hom.dim), dtype=DTYPE)
    cands = np.einsum("sh,hab->sab", coeffs, maps) % p
    good = np.flatnonzero(la.batch_invertible(cands, p))
    if good.size:
        return _verified(m, n, cands[good[0]], "random search")
    if hom.dim <= exhaustive_limit and p in (2, 3):
        total = p ** hom.dim
        chunk = 4096
        digits = p ** np.arange(hom.dim, dtype=DTYPE)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=DTYPE)
            c = (idx[:, None] // digits[None, :]) % p
            mats = np.einsum("sh,hab->sab", c, maps) % p
            good = np.flatnonzero(la.batch_invertible(mats, p))
            if good.size:
                return _verified(m, n, mats[good[0]], "exhaustive search")
        return IsoResult("no", reason="no bijective element of Hom(M,N) (exhaustive)")
    return IsoResult("unknown", reason=f"random search over dim Hom = {hom.dim} exhausted")


def _verified(m: RModule, n: RModule, matrix: np.ndarray, how: str) -> IsoResult:
    f = ModuleMap(m, n, np.asarray(matrix, DTYPE) % m.p)
    if f.is_equivariant() and f.is_bijective():
        return IsoResult("yes", f, how)
    return IsoResult("unknown", reason=f"candidate from {how} failed verification")


def hom_module_naive(m: RModule, n: RModule) -> tuple[RModule, np.ndarray]:
    """Hom as the solution space of ``X A_M = A_N X``; returns the module and its basis maps."""
    _check_same(m, n)
    p = m.p
    nm, nn = m.dim, n.dim
    eqs = [np.kron(b, np.eye(nm, dtype=DTYPE)) - np.kron(np.eye(nn, dtype=DTYPE), a.T)
           for a, b in zip(m.gen_action, n.gen_action)]
    if eqs:
        basis, free = la.nullspace(np.concatenate(eqs, axis=0) % p, p)
    else:
        basis, free = np.eye(nm * nn, dtype=DTYPE), list(range(nm * nn))
    h = basis.shape[1]
    acts = [la.matmul(np.kron(b, np.eye(nm, dtype=DTYPE)), basis, p)[free] for b in n.gen_action]
    mod = RModule(m.algebra, np.array(acts, dtype=DTYPE).reshape(m.algebra.ngens, h, h), dim=h)
    return mod, basis.T.reshape(h, nn, nm)


def tensor_module_naive(m: RModule, n: RModule) -> RModule:
    """``M (x)_k N`` modulo ``r u (x) v - u (x) r v`` for the generators ``r``."""
    _check_same(m, n)
    nm, nn = m.dim, n.dim
    big = RModule(m.algebra, [np.kron(a, np.eye(nn, dtype=DTYPE)) for a in m.gen_action], dim=nm * nn)
    rels = [np.kron(a, np.eye(nn, dtype=DTYPE)) - np.kron(np.eye(nm, dtype=DTYPE), b)
            for a, b in zip(m.gen_action, n.gen_action)]
    sub = np.concatenate(rels, axis=1) % m.p if rels else np.zeros((nm * nn, 0), dtype=DTYPE)
    return quotient(big, sub).module
