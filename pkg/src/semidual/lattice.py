"""Subset calculus for chains of semidualizing modules.

Given a chain ``[C_n] <| ... <| [C_0]`` with nested reflexive classes, the
modules ``B_i = Hom(C_(i-1), C_i)`` and their tensor products ``B_I``
are indexed by subsets ``I`` of ``{1..n}``.  Subsets are handled as
bitmasks internally (bit ``k - 1`` stands for ``k``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .modcat import RModule, is_isomorphic, tensor_module
from .semidualizing import (
    Status,
    auslander_class_member,
    certify_semidualizing,
    dagger,
    order_leq,
)


class HypothesisError(ValueError):
    """An operation needs a chain hypothesis that has been switched off."""


class NotReflexive(ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    n: int
    labels: tuple[str, ...] = ()
    assume_nested: bool = True
    assume_transitive: bool = True
    assume_c0_trivial: bool = True

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("chain length must be nonnegative")
        labels = self.labels or tuple(f"C{i}" for i in range(self.n + 1))
        if len(labels) != self.n + 1 or len(set(labels)) != len(labels):
            raise ValueError("need n + 1 distinct labels")
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def require_nested(self, what: str):
        if not self.assume_nested:
            raise HypothesisError(f"{what} needs nested reflexive classes along the chain")


@dataclass(frozen=True, order=True)
class SubsetClass:
    """The index set of ``B_I``; elements are strictly increasing in ``1..n``."""

    elements: tuple[int, ...] = ()

    def __post_init__(self):
        els = tuple(int(e) for e in self.elements)
        if any(e < 1 for e in els) or any(a >= b for a, b in zip(els, els[1:])):
            raise ValueError(f"subset elements must be strictly increasing positive integers: {els}")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, items) -> "SubsetClass":
        return cls(tuple(sorted(set(items))))

    @classmethod
    def from_mask(cls, mask: int) -> "SubsetClass":
        return cls(tuple(k + 1 for k in range(mask.bit_length()) if mask >> k & 1))

    @property
    def mask(self) -> int:
        return reduce(lambda acc, e: acc | 1 << (e - 1), self.elements, 0)

    def check(self, spec: ChainSpec):
        if self.elements and self.elements[-1] > spec.n:
            raise ValueError(f"{self} is not a subset of 1..{spec.n}")

    def __str__(self):
        return "B{" + ",".join(map(str, self.elements)) + "}"


@dataclass(frozen=True)
class DaggerWord:
    """The word ``C_0^(dagger C_i1 ... dagger C_ij)`` for ``i1 < ... < ij``."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 1 for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"dagger indices must be strictly increasing positive integers: {idx}")
        object.__setattr__(self, "indices", idx)

    def __str__(self):
        return "C0" + ("^" + "".join(f"†C{i}" for i in self.indices) if self.indices else "")


def _mask(x) -> int:
    return x.mask if isinstance(x, SubsetClass) else int(x)


def _checked(spec: ChainSpec | None, what: str, *subsets):
    if spec is None:
        return
    spec.require_nested(what)
    for s in subsets:
        if isinstance(s, SubsetClass):
            s.check(spec)
        elif _mask(s) & ~spec.full:
            raise ValueError(f"mask {s:b} exceeds 1..{spec.n}")


def reflexive_leq(i, s, spec: ChainSpec | None = None) -> bool:
    """``[B_i] <| [B_s]`` exactly when ``i`` contains ``s``."""
    _checked(spec, "the reflexivity order on B-classes", i, s)
    a, b = _mask(i), _mask(s)
    contains = a & b == b
    if not contains and spec is not None and not spec.assume_transitive:
        raise HypothesisError("non-containment only excludes reflexivity when the order is transitive")
    return contains


def hom_class(s, i, spec: ChainSpec | None = None):
    """``Hom(B_s, B_i) ~ B_(i minus s)`` for ``i`` containing ``s``."""
    _checked(spec, "hom of B-classes", s, i)
    a, b = _mask(i), _mask(s)
    if a & b != b:
        raise NotReflexive(f"{SubsetClass.from_mask(a)} does not contain {SubsetClass.from_mask(b)}: not reflexive")
    out = a & ~b
    return SubsetClass.from_mask(out) if isinstance(i, SubsetClass) else out


NOT_SEMIDUALIZING = "not semidualizing"


def tensor_class(i, s, spec: ChainSpec | None = None):
    """``B_i (x) B_s ~ B_(i union s)`` when disjoint; otherwise not semidualizing."""
    _checked(spec, "tensor of B-classes", i, s)
    a, b = _mask(i), _mask(s)
    if a & b:
        return NOT_SEMIDUALIZING
    return SubsetClass.from_mask(a | b) if isinstance(i, SubsetClass) else a | b


def normalize_dagger_mask(indices: tuple[int, ...], n: int) -> int:
    # a trailing dagger C_top sends the inner subset u of 1..top-1 to its complement in 1..top
    out = 0
    for top in range(n, 0, -1):
        if indices and indices[-1] == top:
            indices = indices[:-1]
            out ^= (1 << top) - 1
    if indices:
        raise ValueError(f"malformed dagger word {indices}")
    return out


def normalize_dagger(word: DaggerWord, spec: ChainSpec) -> SubsetClass:
    """The subset ``I`` with ``B_I ~ word``, following the chain recursion."""
    spec.require_nested("dagger normalization")
    if not spec.assume_c0_trivial:
        raise HypothesisError("dagger words name B-classes only when C_0 is the ring itself")
    if word.indices and word.indices[-1] > spec.n:
        raise ValueError(f"word {word} uses indices beyond {spec.n}")
    return SubsetClass.from_mask(normalize_dagger_mask(word.indices, spec.n))


def dagger_word_of(subset: SubsetClass | int, n: int) -> DaggerWord:
    """Inverse of :func:`normalize_dagger`."""
    target = _mask(subset)
    word: list[int] = []
    for top in range(n, 0, -1):
        full = (1 << top) - 1
        if target >> (top - 1) & 1:
            word.append(top)
            target = full & ~target
    return DaggerWord(tuple(reversed(word)))


@dataclass
class Lattice:
    spec: ChainSpec
    nodes: list[SubsetClass]
    words: dict[SubsetClass, DaggerWord]
    relation_count: int

    def relations(self, strict: bool = False) -> list[tuple[SubsetClass, SubsetClass]]:
        """All pairs ``(i, s)`` with ``i`` containing ``s``."""
        out = [(a, b) for a, b in iter_containments(self.spec.n) if not strict or a != b]
        out.sort(key=lambda pr: (_node_key(pr[0]), _node_key(pr[1])))
        return [(SubsetClass.from_mask(a), SubsetClass.from_mask(b)) for a, b in out]

    def hasse(self) -> list[tuple[SubsetClass, SubsetClass]]:
        """Covering pairs: ``i`` is ``s`` plus one element."""
        out = []
        for a in range(1 << self.spec.n):
            for k in range(self.spec.n):
                if a >> k & 1:
                    out.append((a, a & ~(1 << k)))
        out.sort(key=lambda pr: (_node_key(pr[0]), _node_key(pr[1])))
        return [(SubsetClass.from_mask(a), SubsetClass.from_mask(b)) for a, b in out]


def _node_key(mask: int):
    return (bin(mask).count("1"), SubsetClass.from_mask(mask).elements)


def iter_containments(n: int):
    """Mask pairs ``(i, s)`` with ``s`` a submask of ``i``."""
    for a in range(1 << n):
        sub = a
        while True:
            yield a, sub
            if sub == 0:
                break
            sub = (sub - 1) & a


def build_lattice(spec: ChainSpec) -> Lattice:
    spec.require_nested("the subset lattice")
    masks = sorted(range(1 << spec.n), key=_node_key)
    nodes = [SubsetClass.from_mask(m) for m in masks]
    words = {s: dagger_word_of(s, spec.n) for s in nodes} if spec.assume_c0_trivial else {}
    count = sum(1 for _ in iter_containments(spec.n))
    return Lattice(spec, nodes, words, count)


def _node_line(s: SubsetClass, words: dict, ident: str | None = None) -> str:
    label = str(s) + (f"\\n{words[s]}" if s in words else "")
    return f'  "{ident or s}" [label="{label}"];'


def to_dot(lat: Lattice, hasse: bool = False) -> str:
    """DOT text; edges run from the larger subset to the smaller one."""
    edges = lat.hasse() if hasse else lat.relations(strict=True)
    kind = "hasse" if hasse else "relation"
    lines = [f'digraph "lattice_n{lat.spec.n}_{kind}" {{', "  rankdir=TB;", "  node [shape=box];"]
    lines += [_node_line(s, lat.words) for s in lat.nodes]
    lines += [f'  "{a}" -> "{b}";' for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def staged_dot(n: int) -> str:
    """Covering diagrams for chains of length ``0..n`` side by side, labelled by dagger words."""
    lines = ['digraph "lattice_stages" {', "  rankdir=TB;", "  node [shape=box];"]
    for m in range(n + 1):
        lat = build_lattice(ChainSpec(m))
        lines.append(f'  subgraph "cluster_n{m}" {{')
        lines.append(f'    label="n={m}";')
        for s in lat.nodes:
            lines.append("  " + _node_line(s, lat.words, f"{s}@{m}"))
        for a, b in lat.hasse():
            lines.append(f'    "{a}@{m}" -> "{b}@{m}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class DoublingTrace:
    a: SubsetClass
    c: SubsetClass
    images: list[tuple[SubsetClass, SubsetClass, int]]  # (s, a minus s, witness in (a minus s) outside c)
    injective: bool
    disjoint: bool

    @property
    def ok(self) -> bool:
        return self.injective and self.disjoint


def verify_doubling(a, c) -> DoublingTrace:
    """``s -> a minus s`` sends the subsets of ``c`` injectively outside them."""
    am, cm = _mask(a), _mask(c)
    if am & cm != cm or am == cm:
        raise NotReflexive("doubling needs a to strictly contain c")
    witness = (am & ~cm) & -(am & ~cm)
    images = []
    seen = set()
    injective = disjoint = True
    sub = cm
    while True:
        img = am & ~sub
        injective &= img not in seen
        seen.add(img)
        outside = img & ~cm
        disjoint &= bool(outside) and bool(img & witness)
        images.append((SubsetClass.from_mask(sub), SubsetClass.from_mask(img), witness.bit_length()))
        if sub == 0:
            break
        sub = (sub - 1) & cm
    return DoublingTrace(SubsetClass.from_mask(am), SubsetClass.from_mask(cm), images[::-1], injective, disjoint)


def symbolic_base_change(catalog_size: int, gorenstein: bool) -> tuple[int, list[str]]:
    """Lower bound for the number of classes after flat base change."""
    trace = ["base change of classes is injective"]
    if gorenstein:
        trace.append("Gorenstein map: no doubling is asserted")
        return catalog_size, trace
    trace += [
        "image of the classes reflexive over the minimal class lies among those reflexive over its base change",
        "those lie in all classes of the target, which are the classes reflexive over its dualizing module",
        "the dualizing module is not reflexive over the base change of the minimal class, so doubling applies",
    ]
    return 2 * catalog_size, trace


@dataclass
class CrossValidation:
    spec: ChainSpec
    modules: dict[SubsetClass, RModule]
    certificates: dict[SubsetClass, str]
    chain_ok: bool
    nesting_ok: bool
    order_agree: dict[tuple[SubsetClass, SubsetClass], bool]
    auslander_agree: dict[tuple[SubsetClass, SubsetClass], bool]
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cross_validate(spec: ChainSpec, concrete: dict[str, RModule], bound: int | None = None,
                   seed: int = 0, auslander: bool = True) -> CrossValidation:
    """Compare the subset calculus with the engine on a concrete chain ``C_0 .. C_n``."""
    if spec.n > 3:
        raise ValueError("concrete cross-validation is limited to chains of length at most 3")
    chain = [concrete[label] for label in spec.labels]
    mismatches: list[str] = []

    chain_ok = True
    for i in range(1, spec.n + 1):
        down = order_leq(chain[i], chain[i - 1], bound, seed).holds()
        up = order_leq(chain[i - 1], chain[i], bound, seed).holds()
        if not down or up:
            chain_ok = False
            mismatches.append(f"[{spec.labels[i]}] <| [{spec.labels[i - 1]}] fails strictly")

    basic = {}
    for i in range(1, spec.n + 1):
        b = dagger(chain[i - 1], chain[i], bound, seed)
        b.name = f"B{i}"
        basic[i] = b
    modules: dict[SubsetClass, RModule] = {}
    for mask in range(1 << spec.n):
        sub = SubsetClass.from_mask(mask)
        mods = [basic[e] for e in sub.elements]
        if mods:
            m = reduce(tensor_module, mods)
            m.name = str(sub)
        else:
            m = chain[0]
        modules[sub] = m

    certificates = {}
    for sub, m in modules.items():
        cert = certify_semidualizing(m, bound, seed)
        certificates[sub] = cert.status.value
        if cert.status is Status.REFUTED:
            mismatches.append(f"{sub} not semidualizing: {cert.reason}")

    subs = list(modules)
    verdicts = {(x, y): order_leq(modules[x], modules[y], bound, seed) for x in subs for y in subs}

    nesting_ok = True
    pool = list(modules.values())
    for i in range(1, spec.n):
        for x in pool:
            if order_leq(chain[i - 1], x, bound, seed).holds() and not order_leq(chain[i], x, bound, seed).holds():
                nesting_ok = False
                mismatches.append(f"nesting fails between {spec.labels[i - 1]} and {spec.labels[i]} at {x.name}")

    order_agree = {}
    for (x, y), v in verdicts.items():
        expect = reflexive_leq(x, y)
        order_agree[(x, y)] = v.holds() == expect
        if v.holds() != expect:
            mismatches.append(f"order {x} <| {y}: engine {v.value}, subsets say {expect}")

    auslander_agree = {}
    if auslander:
        for x in subs:
            for y in subs:
                member = auslander_class_member(modules[x], modules[y], bound, seed).verdict
                expect = tensor_class(x, y) != NOT_SEMIDUALIZING
                auslander_agree[(x, y)] = member.holds() == expect
                if member.holds() != expect:
                    mismatches.append(f"{x} in A_{y}: engine {member.value}, subsets say {expect}")

    for (x, y), v in verdicts.items():
        if v.holds() and verdicts[(y, x)].holds() and x != y:
            if is_isomorphic(modules[x], modules[y], seed=seed).verdict != "yes":
                mismatches.append(f"antisymmetry fails for {x}, {y}")

    return CrossValidation(spec, modules, certificates, chain_ok, nesting_ok, order_agree,
                           auslander_agree, mismatches)


__all__ = [
    "ChainSpec", "SubsetClass", "DaggerWord", "HypothesisError", "NotReflexive", "NOT_SEMIDUALIZING",
    "reflexive_leq", "hom_class", "tensor_class", "normalize_dagger", "dagger_word_of", "build_lattice",
    "iter_containments", "to_dot", "staged_dot", "verify_doubling", "symbolic_base_change", "cross_validate",
    "Lattice", "DoublingTrace", "CrossValidation",
]
