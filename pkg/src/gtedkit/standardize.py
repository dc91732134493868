"""Syntax standardization applied before operator-tree construction.

Three passes, always in this order:

1. ``name``: the theorem name becomes ``thm``.
2. ``rewrite``: a small fixed rule set (split multi-variable quantifiers,
   drop brackets around the operand of unary minus on atoms).
3. ``binder-expansion``: ``(f g : ℝ → ℝ)`` becomes ``(f : ℝ → ℝ) (g : ℝ → ℝ)``.

There is no type inference: statements are compared as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

from .parser import (
    App,
    Arrow,
    Ascription,
    Atom,
    Binder,
    BinOp,
    Bracket,
    Expr,
    Numeral,
    Paren,
    Quantifier,
    TheoremStmt,
    UnOp,
)

CANONICAL_NAME = "thm"


@dataclass(frozen=True)
class StandardizeConfig:
    rewrite: bool = True
    expand: bool = True


@dataclass(frozen=True)
class StandardizedStmt:
    name: str
    binders: tuple[Binder, ...]
    goal: Expr
    provenance: tuple[str, ...] = field(default=())
    trailer: str | None = field(default=None, compare=False)


def expand_binders(stmt: TheoremStmt) -> TheoremStmt:
    out = []
    for b in stmt.binders:
        if len(b.names) == 1:
            out.append(b)
        else:
            out.extend(Binder((name,), b.type, b.bracket) for name in b.names)
    return replace(stmt, binders=tuple(out))


def normalize_name(stmt: TheoremStmt) -> TheoremStmt:
    return replace(stmt, name=CANONICAL_NAME)


def rewrite_expr(e: Expr) -> Expr:
    """Apply the rewrite rules bottom-up."""
    match e:
        case Atom() | Numeral():
            return e
        case App(head, arg):
            return App(rewrite_expr(head), rewrite_expr(arg), e.span)
        case BinOp(op, lhs, rhs):
            return BinOp(op, rewrite_expr(lhs), rewrite_expr(rhs), e.span)
        case UnOp("-", Paren(inner)) if isinstance(inner, (Atom, Numeral)):
            return UnOp("-", inner, e.span)
        case UnOp(op, operand):
            return UnOp(op, rewrite_expr(operand), e.span)
        case Arrow(lhs, rhs):
            return Arrow(rewrite_expr(lhs), rewrite_expr(rhs), e.span)
        case Ascription(inner, typ):
            return Ascription(rewrite_expr(inner), rewrite_expr(typ), e.span)
        case Paren(inner):
            return Paren(rewrite_expr(inner), e.span)
        case Bracket(open_, items):
            return Bracket(open_, tuple(rewrite_expr(i) for i in items), e.span)
        case Quantifier(kind, binder, body):
            typ = rewrite_expr(binder.type) if binder.type is not None else None
            body = rewrite_expr(body)
            # ∀ x y : T, p  ->  ∀ x : T, ∀ y : T, p
            for name in reversed(binder.names[1:]):
                body = Quantifier(kind, Binder((name,), typ, binder.bracket), body)
            return Quantifier(kind, Binder(binder.names[:1], typ, binder.bracket, binder.span), body, e.span)
    raise TypeError(f"unexpected expression {e!r}")


def rewrite(stmt: TheoremStmt) -> TheoremStmt:
    binders = tuple(
        Binder(b.names, rewrite_expr(b.type) if b.type is not None else None, b.bracket, b.span)
        for b in stmt.binders
    )
    return replace(stmt, binders=binders, goal=rewrite_expr(stmt.goal))


def standardize(
    stmt: Union[TheoremStmt, StandardizedStmt], config: StandardizeConfig = StandardizeConfig()
) -> StandardizedStmt:
    s = TheoremStmt(stmt.name, stmt.binders, stmt.goal, stmt.trailer)
    provenance = ["name"]
    s = normalize_name(s)
    if config.rewrite:
        s = rewrite(s)
        provenance.append("rewrite")
    if config.expand:
        s = expand_binders(s)
        provenance.append("binder-expansion")
    return StandardizedStmt(s.name, s.binders, s.goal, tuple(provenance), s.trailer)
