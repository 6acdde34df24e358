import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semidual.algebra import regular_module
from semidual.lattice import (
    NOT_SEMIDUALIZING,
    ChainSpec,
    DaggerWord,
    HypothesisError,
    NotReflexive,
    SubsetClass,
    build_lattice,
    cross_validate,
    dagger_word_of,
    hom_class,
    iter_containments,
    normalize_dagger,
    reflexive_leq,
    staged_dot,
    symbolic_base_change,
    tensor_class,
    to_dot,
    verify_doubling,
)
from semidual.semidualizing import external_tensor, omega

from conftest import GOLDEN

S = SubsetClass.of


def subsets(n):
    return st.integers(0, (1 << n) - 1).map(SubsetClass.from_mask)


# --- value types ------------------------------------------------------------


def test_subset_class_validation_and_display():
    assert str(S([3, 1])) == "B{1,3}" and str(S([])) == "B{}"
    assert S([1, 3]).mask == 0b101 and SubsetClass.from_mask(0b101) == S([1, 3])
    with pytest.raises(ValueError):
        SubsetClass((2, 1))
    with pytest.raises(ValueError):
        SubsetClass((0,))
    with pytest.raises(ValueError):
        S([4]).check(ChainSpec(3))


def test_dagger_word_validation_and_display():
    assert str(DaggerWord()) == "C0"
    assert str(DaggerWord((1, 3))) == "C0^†C1†C3"
    with pytest.raises(ValueError):
        DaggerWord((2, 2))


def test_chain_spec_validation():
    assert ChainSpec(2).labels == ("C0", "C1", "C2")
    with pytest.raises(ValueError):
        ChainSpec(-1)
    with pytest.raises(ValueError):
        ChainSpec(1, labels=("A", "A"))
    with pytest.raises(ValueError):
        ChainSpec(2, labels=("A", "B"))


# --- order, hom, tensor -----------------------------------------------------


def test_reflexive_leq_examples():
    assert reflexive_leq(S([1, 2]), S([1]))
    assert reflexive_leq(S([]), S([]))
    assert not reflexive_leq(S([1]), S([2]))


def test_hom_class_examples():
    assert hom_class(S([1]), S([1, 3])) == S([3])
    assert hom_class(S([]), S([2, 3])) == S([2, 3])
    assert hom_class(S([1, 2]), S([1, 2])) == S([])
    with pytest.raises(NotReflexive, match="not reflexive"):
        hom_class(S([2]), S([1]))


def test_tensor_class_examples():
    assert tensor_class(S([1]), S([2])) == S([1, 2])
    assert tensor_class(S([]), S([3])) == S([3])
    assert tensor_class(S([1]), S([1])) == NOT_SEMIDUALIZING


@settings(max_examples=200)
@given(subsets(6), subsets(6), subsets(6))
def test_reflexive_leq_is_a_partial_order(a, b, c):
    assert reflexive_leq(a, a)
    if reflexive_leq(a, b) and reflexive_leq(b, a):
        assert a == b
    if reflexive_leq(a, b) and reflexive_leq(b, c):
        assert reflexive_leq(a, c)


@settings(max_examples=200)
@given(subsets(6), subsets(6), subsets(6))
def test_hom_is_an_involution_and_reverses_order(i, s, t):
    s = SubsetClass.from_mask(s.mask & i.mask)
    t = SubsetClass.from_mask(t.mask & i.mask)
    assert hom_class(hom_class(s, i), i) == s
    assert reflexive_leq(t, s) == reflexive_leq(hom_class(s, i), hom_class(t, i))


@settings(max_examples=200)
@given(subsets(6), subsets(6))
def test_tensor_is_commutative_with_unit(a, b):
    assert tensor_class(a, b) == tensor_class(b, a)
    assert tensor_class(a, S([])) == a
    assert (tensor_class(a, b) == NOT_SEMIDUALIZING) == bool(a.mask & b.mask)


def test_hypothesis_flags():
    loose = ChainSpec(2, assume_nested=False)
    with pytest.raises(HypothesisError):
        reflexive_leq(S([1]), S([]), loose)
    with pytest.raises(HypothesisError):
        build_lattice(loose)
    # without transitivity only containment can be concluded
    open_order = ChainSpec(2, assume_transitive=False)
    assert reflexive_leq(S([1, 2]), S([1]), open_order)
    with pytest.raises(HypothesisError):
        reflexive_leq(S([1]), S([2]), open_order)
    with pytest.raises(HypothesisError):
        normalize_dagger(DaggerWord((1,)), ChainSpec(2, assume_c0_trivial=False))
    assert build_lattice(ChainSpec(2, assume_c0_trivial=False)).words == {}


def test_operations_check_ranges():
    with pytest.raises(ValueError):
        hom_class(S([]), S([3]), ChainSpec(2))
    with pytest.raises(ValueError):
        normalize_dagger(DaggerWord((3,)), ChainSpec(2))


# --- dagger words -----------------------------------------------------------


def test_normalize_dagger_examples():
    spec = ChainSpec(2)
    assert normalize_dagger(DaggerWord(), spec) == S([])
    assert normalize_dagger(DaggerWord((1,)), spec) == S([1])
    assert normalize_dagger(DaggerWord((1, 2)), spec) == S([2])


def naive_normalize(word, n):
    """Direct recursion: normalize the word without its last letter, then complement."""
    if not word:
        return frozenset()
    inner = naive_normalize(word[:-1], word[-1] - 1)
    return frozenset(range(1, word[-1] + 1)) - inner


@pytest.mark.parametrize("n", range(0, 8))
def test_normalize_matches_direct_recursion(n):
    spec = ChainSpec(n)
    for k in range(n + 1):
        for word in itertools.combinations(range(1, n + 1), k):
            got = normalize_dagger(DaggerWord(word), spec)
            assert set(got.elements) == naive_normalize(word, n)


@pytest.mark.parametrize("n", range(0, 11))
def test_normalize_dagger_is_a_bijection(n):
    spec = ChainSpec(n)
    images = set()
    for mask in range(1 << n):
        word = DaggerWord(tuple(k + 1 for k in range(n) if mask >> k & 1))
        images.add(normalize_dagger(word, spec).mask)
    assert len(images) == 1 << n
    for mask in range(1 << n):
        assert normalize_dagger(dagger_word_of(mask, n), spec).mask == mask


# --- the lattice ------------------------------------------------------------


@pytest.mark.parametrize("n", range(0, 9))
def test_counts(n):
    lat = build_lattice(ChainSpec(n))
    assert len(lat.nodes) == 2**n
    assert lat.relation_count == 3**n == len(lat.relations())
    assert len(lat.hasse()) == n * 2 ** (n - 1) if n else len(lat.hasse()) == 0


def test_single_node_lattice():
    lat = build_lattice(ChainSpec(0))
    assert lat.nodes == [S([])] and lat.relations() == [(S([]), S([]))]


def test_count_n10():
    assert sum(1 for _ in iter_containments(10)) == 3**10


def test_n3_relation_matches_diagram():
    # the 19 strict containments among subsets of {1,2,3}
    lat = build_lattice(ChainSpec(3))
    expected = {(a, b) for a in range(8) for b in range(8) if a != b and a & b == b}
    got = {(i.mask, s.mask) for i, s in lat.relations(strict=True)}
    assert got == expected and len(got) == 19


def test_dot_matches_golden_files():
    assert to_dot(build_lattice(ChainSpec(3))) == (GOLDEN / "lattice_n3.dot").read_text()
    assert staged_dot(3) == (GOLDEN / "lattice_stages_n3.dot").read_text()


def test_hasse_dot_has_covering_edges_only():
    text = to_dot(build_lattice(ChainSpec(3)), hasse=True)
    assert text.count("->") == 12
    assert '"B{1,2,3}" -> "B{1,2}"' in text and '"B{1,2,3}" -> "B{1}"' not in text


# --- doubling and base change -----------------------------------------------


def test_doubling_examples():
    trace = verify_doubling(S([1, 2]), S([1]))
    assert trace.ok
    assert {img for _, img, _ in trace.images} == {S([2]), S([1, 2])}
    trace = verify_doubling(S([1]), S([]))
    assert trace.ok and [img for _, img, _ in trace.images] == [S([1])]
    with pytest.raises(NotReflexive):
        verify_doubling(S([1]), S([1]))
    with pytest.raises(NotReflexive):
        verify_doubling(S([1]), S([2]))


def test_doubling_sweep_against_enumeration():
    n = 6
    for a, c in iter_containments(n):
        if a == c:
            continue
        trace = verify_doubling(a, c)
        lower = {s for s in range(1 << n) if s & c == s}
        images = [img.mask for _, img, _ in trace.images]
        assert trace.ok
        assert len(set(images)) == len(lower) and not set(images) & lower
        assert all(img & a == img for img in images)


def test_symbolic_base_change():
    assert symbolic_base_change(1, False)[0] == 2
    assert symbolic_base_change(3, True)[0] == 3
    bound, trace = symbolic_base_change(2, False)
    assert bound == 4 and len(trace) == 4


# --- cross validation -------------------------------------------------------


def test_cross_validate_trivial_chain(sq):
    report = cross_validate(ChainSpec(0), {"C0": regular_module(sq)})
    assert report.ok and len(report.modules) == 1


def test_cross_validate_length_one(sq):
    report = cross_validate(ChainSpec(1), {"C0": regular_module(sq), "C1": omega(sq)})
    assert report.ok and report.chain_ok and report.nesting_ok
    assert len(report.order_agree) == 4 and all(report.order_agree.values())


def test_cross_validate_boolean_square(sq, sq_uv, product9):
    chain = {
        "C0": regular_module(product9),
        "C1": external_tensor(omega(sq), regular_module(sq_uv), product9),
        "C2": omega(product9),
    }
    report = cross_validate(ChainSpec(2), chain)
    assert report.ok, report.mismatches
    assert len(report.order_agree) == 16 and all(report.order_agree.values())
    assert all(report.auslander_agree.values())
    assert set(report.certificates.values()) == {"certified"}


def test_cross_validate_reports_broken_chain(sq):
    report = cross_validate(ChainSpec(1), {"C0": omega(sq), "C1": omega(sq)}, auslander=False)
    assert not report.ok and not report.chain_ok
    assert any("fails strictly" in m for m in report.mismatches)


def test_cross_validate_length_limit(sq):
    with pytest.raises(ValueError):
        cross_validate(ChainSpec(4), {})
