from pathlib import Path

import numpy as np
import pytest

from semidual.algebra import AlgebraPresentation, LocalAlgebra, build_algebra, regular_module, tensor_algebras
from semidual.modcat import RModule, free_module, matlis_dual, quotient, submodule

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def ring(p, variables, relations, bound=3, name=""):
    return build_algebra(AlgebraPresentation.from_strings(p, variables, relations, bound), name=name)


def dual_numbers(p=2, var="x"):
    return ring(p, [var], [f"{var}^2"], name=f"F{p}[{var}]/({var}^2)")


def square_zero(p=2, a="x", b="y"):
    return ring(p, [a, b], [f"{a}^2", f"{a}*{b}", f"{b}^2"], name=f"F{p}[{a},{b}]/({a},{b})^2")


@pytest.fixture(scope="session")
def field2() -> LocalAlgebra:
    return LocalAlgebra.field_algebra(2)


@pytest.fixture(scope="session")
def dual2() -> LocalAlgebra:
    return dual_numbers(2)


@pytest.fixture(scope="session")
def dual3() -> LocalAlgebra:
    return dual_numbers(3)


@pytest.fixture(scope="session")
def sq() -> LocalAlgebra:
    return square_zero(2)


@pytest.fixture(scope="session")
def sq_uv() -> LocalAlgebra:
    return square_zero(2, "u", "v")


@pytest.fixture(scope="session")
def product9(sq, sq_uv) -> LocalAlgebra:
    return tensor_algebras(sq, sq_uv, name="S9")


def _mono(names, exps) -> str:
    return "*".join(f"{v}^{e}" for v, e in zip(names, exps) if e)


def random_algebra(rng: np.random.Generator, max_dim: int = 5) -> LocalAlgebra:
    """A random local algebra in one or two variables of dimension at most ``max_dim``."""
    p = int(rng.choice([2, 3]))
    while True:
        nv = int(rng.integers(1, 3))
        names = ["x", "y"][:nv]
        top = int(rng.integers(2, 4))
        # every monomial of degree `top`, then a few random relations of degree >= 2
        rels = [_mono(names, (top - k, k)[:nv]) for k in range(top + 1 if nv == 2 else 1)]
        for _ in range(int(rng.integers(0, 3))):
            terms = []
            for _ in range(int(rng.integers(1, 3))):
                ex = rng.integers(0, top, size=nv)
                ex[0] += max(0, 2 - int(ex.sum()))
                terms.append(f"{int(rng.integers(1, p))}*{_mono(names, ex)}")
            rels.append(" + ".join(terms))
        alg = ring(p, names, rels, bound=top)
        if alg.dim <= max_dim:
            return alg


def random_module(rng: np.random.Generator, alg: LocalAlgebra, max_rank: int = 2) -> RModule:
    """A random quotient of a small free module, or the Matlis dual of one."""
    r = int(rng.integers(1, max_rank + 1))
    free = free_module(alg, r)
    k = int(rng.integers(0, 3))
    vecs = rng.integers(0, alg.p, size=(free.dim, k))
    for j in range(r):
        vecs[j * alg.dim + alg.unit_index] = 0  # stay inside m R^r
    _, sub = submodule(free, vecs)
    mod = quotient(free, sub).module
    return matlis_dual(mod) if rng.random() < 0.3 else mod


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


__all__ = ["ring", "dual_numbers", "square_zero", "random_algebra", "random_module", "regular_module"]
