import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtedkit.fixtures import ALPHA_PAIR, fixture_trees
from gtedkit.gted import (
    ConfigError,
    DecisionConfig,
    SpecialTransformation,
    TransformationSet,
    alpha_transformation,
    decide,
    depicted_by,
    dumb_transformations,
    gted_distance,
    is_colocal_depiction,
    is_local_depiction,
    probe_pairs,
    rename_bound,
    rename_only_canonical,
    scoped_canonical,
    similarity,
    threshold,
)
from gtedkit.opt import OperatorTree, OptNode, from_oneline, quotient_many
from gtedkit.pipeline import statement_tree
from gtedkit.ted import SizeLimit, UnitCostModel, ted_distance
from treegen import random_tree, small_trees

T = from_oneline
SCOPED = TransformationSet((alpha_transformation("scoped"),))
DUMB = TransformationSet()
NOTHING = TransformationSet((), include_dumb_ops=False)


def pair(a: str, b: str) -> SpecialTransformation:
    return SpecialTransformation(T(a), T(b))


# ---- depiction


def test_local_depiction_examples():
    f = pair("x", "y")
    assert is_local_depiction(f, f)
    assert is_local_depiction(f, pair("P(x)", "P(y)"))
    assert not is_local_depiction(f, pair("P(x)", "Q(y)"))


def _plug(context: OptNode, hole: int, filler: OptNode) -> OptNode:
    """Replace the node with preorder id ``hole`` by ``filler``."""
    if context.node_id == hole:
        return filler
    return OptNode(context.label, tuple(_plug(c, hole, filler) for c in context.children))


def _wrap(rng, f: SpecialTransformation) -> SpecialTransformation:
    ctx = random_tree(rng, 4, "pq")
    hole = rng.randrange(ctx.size)
    return SpecialTransformation(
        OperatorTree(_plug(ctx.root, hole, f.before.root)), OperatorTree(_plug(ctx.root, hole, f.after.root))
    )


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_local_depiction_is_a_partial_order(seed):
    rng = random.Random(seed)
    f = SpecialTransformation(random_tree(rng, 3, "ab"), random_tree(rng, 3, "ab"))
    g = _wrap(rng, f)
    h = _wrap(rng, g)
    assert is_local_depiction(f, f)
    assert is_local_depiction(f, g) and is_local_depiction(g, h)
    assert is_local_depiction(f, h)
    if is_local_depiction(g, f):
        assert g == f


@settings(max_examples=100)
@given(small_trees(4, "ab"), small_trees(4, "ab"), small_trees(4, "ab"), small_trees(4, "ab"))
def test_local_depiction_antisymmetric(a, b, c, d):
    f, g = SpecialTransformation(a, b), SpecialTransformation(c, d)
    if is_local_depiction(f, g) and is_local_depiction(g, f):
        assert f == g


def test_colocal_depiction_examples():
    g = SpecialTransformation(statement_tree(ALPHA_PAIR[0]), statement_tree(ALPHA_PAIR[1]))
    assert is_colocal_depiction(g, g)
    nat = [n.node_id for n in g.before.nodes if n.label == "Nat"]
    f = SpecialTransformation(quotient_many(g.before, nat), quotient_many(g.after, nat))
    assert is_colocal_depiction(f, g)
    # collapsing Nat on one side only is not a common-subtree quotient
    assert not is_colocal_depiction(SpecialTransformation(f.before, g.after), g)
    assert not is_colocal_depiction(pair("a(b)", "c(d)"), pair("a(e)", "c(f)"))
    with pytest.raises(SizeLimit):
        is_colocal_depiction(g, g, bound=3)


def test_depicted_by_matches_contexts():
    phi = depicted_by(pair("ℕ", "ℝ"), "nat-to-real")
    assert phi.matches(pair("_ : _(x,ℕ)", "_ : _(x,ℝ)"))
    assert not phi.matches(pair("_ : _(x,ℕ)", "_ : _(y,ℝ)"))


# ---- alpha


def test_alpha_pair_both_modes():
    t1, t2 = (statement_tree(s) for s in ALPHA_PAIR)
    f = SpecialTransformation(t1, t2)
    for mode in ("scoped", "rename-only"):
        tr = alpha_transformation(mode)
        assert tr.cost == 0 and tr.matches(f) and tr.matches(SpecialTransformation(t1, t1))
    assert gted_distance(t1, t2, SCOPED) == 0
    assert gted_distance(t1, t2, DUMB) == 2
    assert similarity(t1, t2, DUMB) == pytest.approx(5 / 7)


def test_scope_tracking_matters():
    base = statement_tree("theorem s : (λ x => (λ x => x) y z) = z")
    outer_only = statement_tree("theorem s : (λ u => (λ x => x) y z) = z")
    assert scoped_canonical(base) == scoped_canonical(outer_only)
    # the unscoped mode conflates the two x binders and misses this renaming
    assert rename_only_canonical(base) != rename_only_canonical(outer_only)


def test_free_variables_are_not_renamed():
    a = statement_tree("theorem s (x : ℕ) : x = y")
    b = statement_tree("theorem s (x : ℕ) : x = z")
    assert gted_distance(a, b, SCOPED) == 1


def test_binder_types_see_outer_scope():
    a = statement_tree("theorem s (α : Type) (x : α) : x = x")
    b = statement_tree("theorem s (β : Type) (y : β) : y = y")
    c = statement_tree("theorem s (β : Type) (y : α) : y = y")
    assert gted_distance(a, b, SCOPED) == 0
    assert gted_distance(a, c, SCOPED) > 0


def test_rename_bound_only_touches_bound_names():
    t = statement_tree("theorem s (x : ℕ) : ∀ y, x + y = z")
    r = rename_bound(t, lambda old: old.upper())
    assert [n.label for n in r.nodes if not n.children] == ["X", "ℕ", "Y", "X", "Y", "z"]


def test_unknown_alpha_mode():
    with pytest.raises(ConfigError):
        alpha_transformation("loose")


# ---- transformation sets and distance


def test_overlapping_set_rejected():
    corpus = fixture_trees()
    with pytest.raises(ConfigError):
        TransformationSet((alpha_transformation("scoped"), alpha_transformation("rename-only"))).validate(corpus)
    with pytest.raises(ConfigError):
        TransformationSet(dumb_transformations() + dumb_transformations()).validate(corpus)


def test_disjoint_set_accepted():
    corpus = fixture_trees()
    hset = TransformationSet((alpha_transformation("scoped"), depicted_by(pair("ℕ", "ℝ"), "n2r", 0.5)))
    assert hset.validate(corpus) is hset


def test_probe_pairs_skip_identity():
    for f in probe_pairs(fixture_trees()[:4]):
        assert f.before != f.after


def test_distance_without_dumb_ops():
    a = statement_tree("theorem s (x : ℕ) : x = x")
    b = statement_tree("theorem s (x : ℝ) : x = x")
    assert gted_distance(a, a, NOTHING) == 0
    assert math.isinf(gted_distance(a, b, NOTHING))
    assert similarity(a, b, NOTHING) is None
    assert not decide(a, b, NOTHING, config=DecisionConfig(theta=0))
    n2r = TransformationSet((depicted_by(pair("ℕ", "ℝ"), "n2r", 0.5),), include_dumb_ops=False)
    assert gted_distance(a, b, n2r) == 0.5


def test_similarity_boundaries():
    a, b = T("a"), T("b")
    assert similarity(a, a) == 1.0
    assert similarity(a, b) == 0.0
    assert similarity(T("a(b,c)"), T("x"), clamp_negative=False) == pytest.approx((3 - 3) / 3)
    heavy = UnitCostModel(relabel=5)
    assert similarity(a, b, DUMB, heavy) == 0.0
    assert similarity(a, b, DUMB, heavy, clamp_negative=False) == -1.0


def test_decision_threshold_is_strict():
    assert threshold(1.0, 0.9)
    assert not threshold(None, 0.0)
    assert not threshold(5 / 7, 5 / 7)
    assert threshold(5 / 7, 0.71)
    with pytest.raises(ConfigError):
        DecisionConfig(theta=1.5)


def test_adding_alpha_never_increases_distance_on_fixtures():
    trees = fixture_trees()
    for a, b in itertools.product(trees, repeat=2):
        assert gted_distance(a, b, SCOPED) <= gted_distance(a, b, DUMB)


def test_reduces_to_ted_on_all_fixture_pairs():
    trees = fixture_trees()
    for a, b in itertools.combinations(trees, 2):
        assert gted_distance(a, b, DUMB) == ted_distance(a, b)


def test_dumb_single_steps():
    ins, dele, rel = dumb_transformations()
    assert rel.matches(pair("a(b)", "a(c)"))
    assert not rel.matches(pair("a(b)", "c(d)"))
    assert dele.matches(pair("a(b(c,d))", "a(c,d)"))
    assert ins.matches(pair("a(c,d)", "a(b(c,d))"))
    assert gted_distance(T("a(b)"), T("a(c)"), TransformationSet(dumb_transformations(), False)) == 1
