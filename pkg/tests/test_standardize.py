import pytest

from gtedkit.fixtures import STATEMENTS
from gtedkit.parser import App, Arrow, Atom, Binder, BinOp, Quantifier, UnOp, parse_expr, parse_theorem
from gtedkit.standardize import StandardizeConfig, expand_binders, normalize_name, rewrite_expr, standardize


def _names_and_types(binders):
    return [(n, b.type, b.bracket) for b in binders for n in b.names]


def test_expand_compact_declaration():
    stmt = expand_binders(parse_theorem("theorem t (f g : ℝ → ℝ) : f = g"))
    fun = Arrow(Atom("ℝ"), Atom("ℝ"))
    assert stmt.binders == (Binder(("f",), fun), Binder(("g",), fun))


def test_expand_singleton_unchanged():
    stmt = parse_theorem("theorem t (x : ℕ) : x = x")
    assert expand_binders(stmt) == stmt


def test_expand_keeps_bracket_and_order():
    stmt = expand_binders(parse_theorem("theorem t {a b c : ℤ} : a = c"))
    assert [(b.names, b.bracket) for b in stmt.binders] == [(("a",), "implicit"), (("b",), "implicit"), (("c",), "implicit")]


@pytest.mark.parametrize("name", ["mathd_numbertheory_254", "thm", "t1"])
def test_normalize_name(name):
    stmt = parse_theorem(f"theorem {name} (x : ℕ) : x = 1")
    out = normalize_name(stmt)
    assert out.name == "thm"
    assert (out.binders, out.goal) == (stmt.binders, stmt.goal)


def test_standardize_composes_passes():
    s = standardize(parse_theorem("theorem t (x y : ℕ) : x = y"))
    assert s.name == "thm"
    assert s.binders == (Binder(("x",), Atom("ℕ")), Binder(("y",), Atom("ℕ")))
    assert s.provenance == ("name", "rewrite", "binder-expansion")


def test_standardize_trivial_and_alpha_statement():
    s = standardize(parse_theorem("theorem thm : True"))
    assert (s.name, s.binders, s.goal) == ("thm", (), Atom("True"))
    s = standardize(parse_theorem("theorem t1 (x : Nat) : P x"))
    assert s.binders == (Binder(("x",), Atom("Nat")),)
    assert s.goal == App(Atom("P"), Atom("x"))


def test_rewrite_splits_quantifiers():
    e = rewrite_expr(parse_expr("∀ x y : ℕ, x = y"))
    inner = Quantifier("forall", Binder(("y",), Atom("ℕ")), BinOp("=", Atom("x"), Atom("y")))
    assert e == Quantifier("forall", Binder(("x",), Atom("ℕ")), inner)


def test_rewrite_unary_minus():
    assert rewrite_expr(parse_expr("-(x)")) == UnOp("-", Atom("x"))
    assert rewrite_expr(parse_expr("-(2)")) == rewrite_expr(parse_expr("-2"))


def test_config_flags():
    stmt = parse_theorem("theorem t (x y : ℕ) : ∀ a b, a = b")
    off = standardize(stmt, StandardizeConfig(rewrite=False, expand=False))
    assert off.provenance == ("name",)
    assert off.binders == stmt.binders and off.goal == stmt.goal


@pytest.mark.parametrize("source", STATEMENTS)
def test_invariants_on_fixtures(source):
    stmt = parse_theorem(source)
    s = standardize(stmt)
    assert s.name == "thm"
    assert all(len(b.names) == 1 for b in s.binders)
    assert s.provenance[-1] == "binder-expansion"
    # idempotent
    assert standardize(s) == s
    # order and count of declared names survive expansion
    assert _names_and_types(expand_binders(stmt).binders) == _names_and_types(stmt.binders)
