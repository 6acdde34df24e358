import itertools
import threading

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from semidual import exactla as la
from semidual.algebra import regular_module
from semidual.modcat import (
    FreeResolution,
    ModuleError,
    ModuleMap,
    ResolutionTooLarge,
    RModule,
    direct_sum,
    ext_dim,
    ext_module,
    free_module,
    hom_module,
    hom_module_naive,
    is_injective,
    is_isomorphic,
    matlis_dual,
    minimal_free_resolution,
    presentation_module,
    radical_dims,
    residue_field,
    socle_dim,
    submodule,
    tensor_module,
    tensor_module_naive,
    tor_dim,
    tor_module,
    zero_module,
)

from conftest import random_algebra, random_module

seeds = st.integers(0, 2**32 - 1)
slow = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def maxideal(alg):
    r = regular_module(alg)
    vecs = np.eye(alg.dim, dtype=la.DTYPE)[:, alg.maxideal_basis]
    return submodule(r, vecs)[0]


# --- Hom and tensor ---------------------------------------------------------


def test_hom_from_free_and_between_residue_fields(sq):
    m = maxideal(sq)
    assert hom_module(regular_module(sq), m).dim == m.dim
    k = residue_field(sq)
    assert hom_module(k, k).dim == 1


def test_hom_omega_omega_against_enumeration(sq):
    w = matlis_dual(regular_module(sq))
    count = 0
    for bits in itertools.product((0, 1), repeat=9):
        f = np.array(bits, dtype=la.DTYPE).reshape(3, 3)
        count += ModuleMap(w, w, f).is_equivariant()
    assert count == 2**3
    assert hom_module(w, w).dim == 3


def test_tensor_examples(sq):
    r, k = regular_module(sq), residue_field(sq)
    m = maxideal(sq)
    assert is_isomorphic(tensor_module(r, m), m)
    assert is_isomorphic(tensor_module(k, k), k)
    t = tensor_module(m, k)
    assert t.dim == 2 == tensor_module_naive(m, k).dim
    assert t.dim == minimal_free_resolution(m, 0).betti[0]


def test_algebra_mismatch_is_rejected(dual2, sq):
    with pytest.raises(ModuleError):
        hom_module(residue_field(dual2), residue_field(sq))
    with pytest.raises(ModuleError):
        tensor_module(residue_field(dual2), residue_field(sq))


def test_zero_module_everywhere(sq):
    z, r = zero_module(sq), regular_module(sq)
    assert hom_module(z, r).dim == 0 and hom_module(r, z).dim == 0
    assert tensor_module(z, r).dim == 0 and tensor_module(r, z).dim == 0
    assert ext_dim(1, z, r) == 0 and tor_dim(2, r, z) == 0
    assert is_isomorphic(z, zero_module(sq))


@slow
@given(seeds)
def test_hom_and_tensor_agree_with_naive_constructions(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m, n = random_module(rng, alg), random_module(rng, alg)
    naive, maps = hom_module_naive(m, n)
    assert hom_module(m, n).dim == naive.dim
    assert all(ModuleMap(m, n, f).is_equivariant() for f in maps)
    assert tensor_module(m, n).dim == tensor_module_naive(m, n).dim


@slow
@given(seeds)
def test_hom_from_regular_and_tensor_with_regular(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m, r = random_module(rng, alg), regular_module(alg)
    assert is_isomorphic(hom_module(r, m), m).verdict == "yes"
    assert is_isomorphic(tensor_module(r, m), m).verdict == "yes"


# --- resolutions ------------------------------------------------------------


def test_free_module_resolution(sq):
    res = minimal_free_resolution(free_module(sq, 3), 2)
    assert res.betti[0] == 3 and res.terminated()
    assert res.betti[1:] == [0, 0]


def test_periodic_and_doubling_resolutions(dual2, sq):
    assert minimal_free_resolution(residue_field(dual2), 5).betti == [1] * 6
    assert minimal_free_resolution(residue_field(sq), 4).betti == [1, 2, 4, 8, 16]


def test_resolution_budget(sq):
    res = FreeResolution(residue_field(sq), budget=20)
    with pytest.raises(ResolutionTooLarge):
        res.extend(5)
    assert res.betti == [1, 2, 4]


def algebra_mult(alg, a, b):
    return np.einsum("i,j,ijl->l", a, b, alg.mult) % alg.p


def compose(alg, d1, d2):
    """Product of matrices over the algebra, entries as coordinate vectors."""
    out = np.zeros((d1.shape[0], d2.shape[1], alg.dim), dtype=la.DTYPE)
    for i, j, k in itertools.product(range(d1.shape[0]), range(d2.shape[1]), range(d1.shape[1])):
        out[i, j] = (out[i, j] + algebra_mult(alg, d1[i, k], d2[k, j])) % alg.p
    return out


@slow
@given(seeds)
def test_resolution_is_a_minimal_complex(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m = random_module(rng, alg)
    res = minimal_free_resolution(m, 3)
    assert res.is_minimal()
    for i in range(1, 3):
        assert not compose(alg, res.boundary(i), res.boundary(i + 1)).any()
    # rank-nullity on each step: F_i = image + kernel as k-spaces
    for i in range(3):
        assert res.syzygies[i].dim + res.syzygies[i + 1].dim == res.betti[i] * alg.dim


@slow
@given(seeds)
def test_betti_numbers_are_ext_into_k(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m = random_module(rng, alg)
    k = residue_field(alg)
    betti = minimal_free_resolution(m, 4).betti
    assert betti == [ext_dim(i, m, k) for i in range(5)]
    assert betti == [tor_dim(i, m, k) for i in range(5)]


def test_non_minimal_boundary_is_detected(dual2):
    res = minimal_free_resolution(residue_field(dual2), 2)
    assert res.is_minimal()
    bumped = res.boundaries[0].copy()
    bumped[..., dual2.unit_index] = 1
    res.boundaries[0] = bumped
    assert not res.is_minimal()


def test_resolution_cache_fills_once_under_threads(sq):
    m = residue_field(sq)
    results, errors = [], []

    def work(n):
        try:
            results.append(tuple(m.resolution.extend(n).betti[: n + 1]))
        except Exception as exc:  # pragma: no cover - surfaced by the assert below
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(3 + i % 3,)) for i in range(12)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert m.resolution is m.resolution
    assert set(r[:4] for r in results) == {(1, 2, 4, 8)}
    assert m.resolution.betti[:6] == [1, 2, 4, 8, 16, 32]


# --- Ext and Tor ------------------------------------------------------------


def test_ext_tor_examples(dual2, sq):
    k = residue_field(dual2)
    assert ext_dim(1, k, k) == 1 and tor_dim(1, k, k) == 1
    m, n = maxideal(sq), matlis_dual(regular_module(sq))
    assert ext_dim(0, m, n) == hom_module(m, n).dim
    assert tor_dim(0, m, n) == tensor_module(m, n).dim
    r = regular_module(sq)
    assert all(ext_dim(i, r, m) == 0 == tor_dim(i, r, m) for i in range(1, 4))


def test_ext_and_tor_modules_match_dimensions(sq):
    k, w = residue_field(sq), matlis_dual(regular_module(sq))
    for i in range(3):
        assert ext_module(i, k, w).dim == ext_dim(i, k, w)
        assert tor_module(i, k, w).dim == tor_dim(i, k, w)
    assert ext_module(1, k, k).dim == 2


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seeds)
def test_matlis_duality_exchanges_ext_and_tor(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng)
    m, n = random_module(rng, alg), random_module(rng, alg)
    nd = matlis_dual(n)
    for i in range(6):
        assert ext_dim(i, m, nd) == tor_dim(i, m, n, resolve="second")


@slow
@given(seeds)
def test_tor_is_balanced(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m, n = random_module(rng, alg), random_module(rng, alg)
    for i in range(4):
        assert tor_dim(i, m, n) == tor_dim(i, m, n, resolve="second")


def test_tor_rejects_unknown_side(dual2):
    k = residue_field(dual2)
    with pytest.raises(ValueError):
        tor_dim(1, k, k, resolve="middle")


# --- Matlis duality and isomorphism -----------------------------------------


def test_matlis_dual_examples(dual2, sq):
    k = residue_field(sq)
    assert is_isomorphic(matlis_dual(k), k)
    m = maxideal(sq)
    assert is_isomorphic(matlis_dual(matlis_dual(m)), m)
    r = regular_module(dual2)
    # x acts by [[0,0],[1,0]] on R and by its transpose on the dual; swap the basis
    swap = np.array([[0, 1], [1, 0]], dtype=la.DTYPE)
    assert ModuleMap(r, matlis_dual(r), swap).is_equivariant()
    assert is_isomorphic(matlis_dual(r), r).verdict == "yes"


def test_isomorphism_examples(sq):
    m = maxideal(sq)
    same = is_isomorphic(m, m)
    assert same.verdict == "yes" and same.witness.is_bijective()
    assert is_isomorphic(m, regular_module(sq)).verdict == "no"
    r, w = regular_module(sq), matlis_dual(regular_module(sq))
    verdict = is_isomorphic(r, w)
    assert verdict.verdict == "no" and verdict.reason
    assert radical_dims(r) != radical_dims(w) and socle_dim(r) != socle_dim(w)


def test_isomorphism_needs_exhaustive_search(sq):
    k, w = residue_field(sq), matlis_dual(regular_module(sq))
    a = direct_sum(w, k)
    perm = np.random.default_rng(3).permutation(a.dim)
    p = np.eye(a.dim, dtype=la.DTYPE)[perm]
    b = RModule(sq, [p @ g @ p.T for g in a.gen_action])
    res = is_isomorphic(a, b, samples=0)
    assert res.verdict == "yes" and res.reason == "exhaustive search"
    assert res.witness.is_equivariant() and res.witness.is_bijective()


def test_unknown_when_search_is_cut_short(sq):
    a = direct_sum(*(residue_field(sq) for _ in range(4)), matlis_dual(regular_module(sq)))
    res = is_isomorphic(a, a, samples=0, exhaustive_limit=0)
    assert res.verdict in ("yes", "unknown")
    if res.verdict == "unknown":
        assert "exhausted" in res.reason


@slow
@given(seeds)
def test_isomorphism_never_returns_unverified_yes(seed):
    rng = np.random.default_rng(seed)
    alg = random_algebra(rng, max_dim=4)
    m = random_module(rng, alg)
    # a random change of basis of m is isomorphic to m
    while True:
        g = rng.integers(0, alg.p, size=(m.dim, m.dim))
        inv = la.inverse(g, alg.p)
        if inv is not None:
            break
    n = RModule(alg, [la.matmul(la.matmul(g, a, alg.p), inv, alg.p) for a in m.gen_action], dim=m.dim)
    res = is_isomorphic(m, n, seed=seed)
    assert res.verdict == "yes"
    assert res.witness.is_equivariant() and res.witness.is_bijective()


def test_injective_detection(sq, dual2):
    assert is_injective(matlis_dual(regular_module(sq)))
    assert not is_injective(regular_module(sq))
    assert is_injective(regular_module(dual2))


# --- construction -----------------------------------------------------------


def test_module_validation_rejects_noncommuting_actions(sq):
    x = np.array([[0, 0], [1, 0]])
    y = np.array([[0, 1], [0, 0]])
    with pytest.raises(ModuleError):
        RModule(sq, [x, y], check=True)


def test_presentation_of_residue_field(dual2):
    x = np.zeros((1, 1, 2), dtype=la.DTYPE)
    x[0, 0] = dual2.generators[0]
    k = presentation_module(dual2, x)
    assert k.dim == 1 and is_isomorphic(k, residue_field(dual2))
