"""Generalized tree edit distance.

A special transformation is a pair of trees ``(before, after)``.  A
generalized transformation is a family of special transformations, given
here as a matcher predicate plus a cost.  ``gted_distance`` is the cheapest
way to turn one tree into another using steps from a ``TransformationSet``.

Distance semantics
------------------
With dumb operations (insert / delete / relabel) enabled, the distance is
the minimum of

* the plain Zhang-Shasha distance, and
* for every canonicalizing transformation (alpha-conversion): the cost of
  renaming both trees to canonical form plus the Zhang-Shasha distance
  between the canonical forms.

Each candidate is the cost of an actual transformation sequence, so the
result never exceeds plain TED and is 0 for alpha-equivalent trees.
Without dumb operations only single-step conversions are possible; when
none applies the distance is ``math.inf``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .opt import (
    PLACEHOLDER,
    QUANTIFIER_KINDS,
    OperatorTree,
    OptNode,
    is_statement_root,
    leaf,
    quotient,
)
from .ted import UNIT, SizeLimit, UnitCostModel, zhang_shasha

ALPHA_MODES = ("rename-only", "scoped")
DEFAULT_THETA = 0.6


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SpecialTransformation:
    before: OperatorTree
    after: OperatorTree


@dataclass(frozen=True)
class GeneralizedTransformation:
    name: str
    matcher: Callable[[SpecialTransformation], bool] = field(compare=False)
    cost: float = 1
    # maps a tree to a representative of its class; set for transformations
    # the distance computation can fold into the dynamic program
    canonicalize: Optional[Callable[[OperatorTree], list[str]]] = field(default=None, compare=False)

    def matches(self, f: SpecialTransformation) -> bool:
        return self.matcher(f)


@dataclass(frozen=True)
class TransformationSet:
    transformations: tuple[GeneralizedTransformation, ...] = ()
    include_dumb_ops: bool = True

    def validate(self, corpus: Iterable[OperatorTree]) -> "TransformationSet":
        """Reject overlapping members by probing pairs built from ``corpus``.

        Identity pairs are skipped: the identity always costs 0."""
        if len(self.transformations) < 2:
            return self
        names = [t.name for t in self.transformations]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate transformation names: {names}")
        for f in probe_pairs(list(corpus)):
            hits = [t.name for t in self.transformations if t.matches(f)]
            if len(hits) > 1:
                raise ConfigError(f"transformations {hits} overlap (they match the same pair)")
        return self


@dataclass(frozen=True)
class DecisionConfig:
    theta: float = DEFAULT_THETA
    clamp_negative: bool = True

    def __post_init__(self):
        if not 0 <= self.theta <= 1:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}")


# ------------------------------------------------------------------ depiction


def _occurrences(tree: OperatorTree, target: OperatorTree) -> list[int]:
    return [n.node_id for n in tree.nodes if n == target.root]


def is_local_depiction(f: SpecialTransformation, g: SpecialTransformation) -> bool:
    """f ≼ g: f's trees sit inside g's trees with identical surroundings."""
    for a in _occurrences(g.before, f.before):
        q1 = quotient(g.before, a)
        for b in _occurrences(g.after, f.after):
            if q1 == quotient(g.after, b):
                return True
    return False


def _collapse_match(pattern: OptNode, target: OptNode, collapsed: list[OptNode]) -> bool:
    """Can ``target`` be quotiented down to ``pattern``?  Collects the
    collapsed subtrees (excluding trivial placeholder-on-placeholder)."""
    if pattern.label == PLACEHOLDER and not pattern.children:
        if not (target.label == PLACEHOLDER and not target.children):
            collapsed.append(target)
        return True
    if pattern.label != target.label or len(pattern.children) != len(target.children):
        return False
    return all(_collapse_match(p, t, collapsed) for p, t in zip(pattern.children, target.children))


def is_colocal_depiction(f: SpecialTransformation, g: SpecialTransformation, bound: int = 256) -> bool:
    """f ≼' g: quotienting the same list of common subtrees out of both of
    g's trees yields f's trees."""
    if g.before.size > bound or g.after.size > bound:
        raise SizeLimit(f"co-local depiction search bounded at {bound} nodes")
    left: list[OptNode] = []
    right: list[OptNode] = []
    if not _collapse_match(f.before.root, g.before.root, left):
        return False
    if not _collapse_match(f.after.root, g.after.root, right):
        return False
    return Counter(left) == Counter(right)


def depicted_by(f: SpecialTransformation, name: str, cost: float = 1) -> GeneralizedTransformation:
    """The generalized transformation of ``f``: every pair f locally or
    co-locally depicts."""

    def matcher(g: SpecialTransformation) -> bool:
        return is_local_depiction(f, g) or is_colocal_depiction(f, g)

    return GeneralizedTransformation(name, matcher, cost)


# ------------------------------------------------------------------ alpha


_BINDER_LABEL = re.compile(r"^[\[{]?(?:_ )+: _[\]}]?$")


def _root_binders(root: OptNode) -> list[OptNode]:
    """Binder children of a statement root (the last child is the goal)."""
    if not is_statement_root(root):
        return []
    return [b for b in root.children[:-1] if b.children and _BINDER_LABEL.match(b.label)]


def _binder_names(b: OptNode) -> list[str]:
    if not b.children:
        return [b.label]
    return [n.label for n in b.children[:-1]]


def _binder_type(b: OptNode) -> Optional[OptNode]:
    return b.children[-1] if b.children else None


def scoped_canonical(tree: OperatorTree) -> list[str]:
    """Labels (by preorder id) with bound variables replaced by their binding
    depth (de Bruijn levels).  Two trees are alpha-equivalent iff these agree."""
    labels = [n.label for n in tree.nodes]

    def binder(b: OptNode, env: dict[str, int], depth: int) -> tuple[dict[str, int], int]:
        typ = _binder_type(b)
        if typ is not None:
            walk(typ, env, depth)
        env = dict(env)
        names = b.children[:-1] if b.children else [b]
        for n in names:
            env[n.label] = depth
            labels[n.node_id] = f"#{depth}"
            depth += 1
        return env, depth

    def walk(n: OptNode, env: dict[str, int], depth: int) -> None:
        if not n.children:
            if n.label in env:
                labels[n.node_id] = f"#{env[n.label]}"
            return
        if n.label in QUANTIFIER_KINDS:
            env2, depth2 = binder(n.children[0], env, depth)
            walk(n.children[1], env2, depth2)
            return
        for c in n.children:
            walk(c, env, depth)

    root = tree.root
    if not is_statement_root(root):
        walk(root, {}, 0)
        return labels
    binders = _root_binders(root)
    env: dict[str, int] = {}
    depth = 0
    for c in root.children:
        if any(c is b for b in binders):
            env, depth = binder(c, env, depth)
        else:
            walk(c, env, depth)
    return labels


def _binding_sites(tree: OperatorTree) -> list[OptNode]:
    """Binder nodes in preorder (theorem binders and quantifier binders)."""
    sites = list(_root_binders(tree.root))
    for n in tree.nodes:
        if n.label in QUANTIFIER_KINDS and n.children:
            sites.append(n.children[0])
    sites.sort(key=lambda b: b.node_id)
    return sites


def rename_only_canonical(tree: OperatorTree) -> list[str]:
    """Uniform renaming without scope tracking: every leaf spelled like some
    declared variable gets that variable's first-declaration index."""
    order: dict[str, str] = {}
    for b in _binding_sites(tree):
        for name in _binder_names(b):
            order.setdefault(name, f"#{len(order)}")
    return [order.get(n.label, n.label) if not n.children else n.label for n in tree.nodes]


def alpha_transformation(mode: str = "scoped", cost: float = 0) -> GeneralizedTransformation:
    if mode not in ALPHA_MODES:
        raise ConfigError(f"unknown alpha mode {mode!r}; choose from {ALPHA_MODES}")
    canon = scoped_canonical if mode == "scoped" else rename_only_canonical

    def matcher(f: SpecialTransformation) -> bool:
        return same_shape(f.before.root, f.after.root) and canon(f.before) == canon(f.after)

    return GeneralizedTransformation(f"alpha-conversion:{mode}", matcher, cost, canon)


def same_shape(a: OptNode, b: OptNode) -> bool:
    if len(a.children) != len(b.children):
        return False
    if a.children and a.label != b.label:
        return False
    return all(same_shape(x, y) for x, y in zip(a.children, b.children))


def rename_bound(tree: OperatorTree, fresh: Callable[[str], str]) -> OperatorTree:
    """Scope-respecting renaming: each binding site gets ``fresh(old)`` and
    exactly the occurrences it binds follow it.  ``fresh`` must return names
    unused anywhere in the tree, or capture can occur."""

    def binder(b: OptNode, env: dict[str, str]) -> tuple[OptNode, dict[str, str]]:
        if not b.children:
            new = fresh(b.label)
            return leaf(new), {**env, b.label: new}
        typ = walk(b.children[-1], env)
        env = dict(env)
        names = []
        for n in b.children[:-1]:
            new = fresh(n.label)
            env[n.label] = new
            names.append(leaf(new))
        return OptNode(b.label, tuple(names) + (typ,)), env

    def walk(n: OptNode, env: dict[str, str]) -> OptNode:
        if not n.children:
            return leaf(env.get(n.label, n.label))
        if n.label in QUANTIFIER_KINDS:
            b, env2 = binder(n.children[0], env)
            return OptNode(n.label, (b, walk(n.children[1], env2)))
        return OptNode(n.label, tuple(walk(c, env) for c in n.children))

    root = tree.root
    if not is_statement_root(root):
        return OperatorTree(walk(root, {}))
    binders = _root_binders(root)
    env: dict[str, str] = {}
    kids = []
    for c in root.children:
        if any(c is b for b in binders):
            nb, env = binder(c, env)
            kids.append(nb)
        else:
            kids.append(walk(c, env))
    return OperatorTree(OptNode(root.label, tuple(kids)))


# ------------------------------------------------------------------ dumb ops


def _relabel_matcher(f: SpecialTransformation) -> bool:
    a, b = f.before.nodes, f.after.nodes
    if len(a) != len(b) or not same_shape(f.before.root, f.after.root):
        return False
    return sum(x.label != y.label for x, y in zip(a, b)) == 1


def _delete_one(root: OptNode, target: int) -> list[OptNode]:
    """Tree(s) left after deleting the node with preorder id ``target``
    (its children are spliced into its parent).  Deleting the root of a
    single-child tree returns the child."""
    def go(n: OptNode) -> list[OptNode]:
        if n.node_id == target:
            return [c for c in n.children]
        kids: list[OptNode] = []
        for c in n.children:
            kids.extend(go(c))
        return [OptNode(n.label, tuple(kids))]

    return go(root)


def _is_single_deletion(big: OperatorTree, small: OperatorTree) -> bool:
    if big.size != small.size + 1:
        return False
    for i in range(big.size):
        res = _delete_one(big.root, i)
        if len(res) == 1 and res[0] == small.root:
            return True
    return False


def relabel_transformation(cost: float = 1) -> GeneralizedTransformation:
    return GeneralizedTransformation("relabel", _relabel_matcher, cost)


def delete_transformation(cost: float = 1) -> GeneralizedTransformation:
    return GeneralizedTransformation("delete", lambda f: _is_single_deletion(f.before, f.after), cost)


def insert_transformation(cost: float = 1) -> GeneralizedTransformation:
    return GeneralizedTransformation("insert", lambda f: _is_single_deletion(f.after, f.before), cost)


def dumb_transformations(cost: UnitCostModel = UNIT) -> tuple[GeneralizedTransformation, ...]:
    return (
        insert_transformation(cost.insert),
        delete_transformation(cost.delete),
        relabel_transformation(cost.relabel),
    )


# ------------------------------------------------------------------ distance


def gted_distance(
    t1: OperatorTree,
    t2: OperatorTree,
    hset: TransformationSet = TransformationSet(),
    cost: UnitCostModel = UNIT,
) -> float:
    if t1 == t2:
        return 0.0
    candidates = []
    if hset.include_dumb_ops:
        candidates.append(zhang_shasha(t1, t2, cost))
    direct = SpecialTransformation(t1, t2)
    for tr in hset.transformations:
        if tr.canonicalize is not None:
            c1, c2 = tr.canonicalize(t1), tr.canonicalize(t2)
            steps = tr.cost * ((c1 != _labels(t1)) + (c2 != _labels(t2)))
            if hset.include_dumb_ops:
                candidates.append(steps + zhang_shasha(t1, t2, cost, c1, c2))
            elif same_shape(t1.root, t2.root) and c1 == c2:
                candidates.append(steps)
        if tr.matches(direct):
            candidates.append(tr.cost)
    return float(min(candidates)) if candidates else math.inf


def _labels(tree: OperatorTree) -> list[str]:
    return [n.label for n in tree.nodes]


def similarity(
    t1: OperatorTree,
    t2: OperatorTree,
    hset: TransformationSet = TransformationSet(),
    cost: UnitCostModel = UNIT,
    clamp_negative: bool = True,
    distance: Optional[float] = None,
) -> Optional[float]:
    """``1 - d / max(|T1|, |T2|)``; ``None`` when the distance is infinite."""
    d = gted_distance(t1, t2, hset, cost) if distance is None else distance
    if math.isinf(d):
        return None
    m = max(t1.size, t2.size)
    s = (m - d) / m
    return max(s, 0.0) if clamp_negative else s


def decide(
    t1: OperatorTree,
    t2: OperatorTree,
    hset: TransformationSet = TransformationSet(),
    cost: UnitCostModel = UNIT,
    config: DecisionConfig = DecisionConfig(),
) -> bool:
    s = similarity(t1, t2, hset, cost, config.clamp_negative)
    return threshold(s, config.theta)


def threshold(sim: Optional[float], theta: float) -> bool:
    return sim is not None and sim > theta


# ------------------------------------------------------------------ probing


def _leaf_relabels(tree: OperatorTree) -> Iterable[OperatorTree]:
    for n in tree.nodes:
        if not n.children:
            labels = {n.node_id: n.label + "ʹ"}

            def swap(m: OptNode) -> OptNode:
                if m.node_id in labels:
                    return leaf(labels[m.node_id])
                return OptNode(m.label, tuple(swap(c) for c in m.children))

            yield OperatorTree(swap(tree.root))


def probe_pairs(corpus: Sequence[OperatorTree]) -> Iterable[SpecialTransformation]:
    """Non-identity special transformations used to test disjointness: each
    tree against an alpha-renamed copy, against each single-leaf relabel,
    and against every other corpus tree."""
    counter = itertools.count()
    for t in corpus:
        renamed = rename_bound(t, lambda old: f"{old}_{next(counter)}")
        if renamed != t:
            yield SpecialTransformation(t, renamed)
        for r in _leaf_relabels(t):
            yield SpecialTransformation(t, r)
    for a, b in itertools.permutations(corpus, 2):
        if a != b:
            yield SpecialTransformation(a, b)
