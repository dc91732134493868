"""Operator trees.

Internal nodes carry an operator template whose parameter slots are written
``_`` (``_ + _``, ``∀ _, _``, ``_ _`` for application); leaves carry atom,
numeral or variable names.  The statement root is labeled with the theorem
name and has one child per binder followed by the goal.  Round brackets
never appear as nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Union

from .parser import (
    ANONYMOUS_INSTANCE,
    APP_BP,
    BINARY_OPS,
    NEG_BP,
    NOT_BP,
    OPEN_DELIMS,
    App,
    Arrow,
    Ascription,
    Atom,
    BinOp,
    Bracket,
    Expr,
    Numeral,
    Paren,
    Quantifier,
    UnOp,
)
from .standardize import StandardizedStmt

PLACEHOLDER = "_"
SLOT = re.compile(r"(?<![\w'.✝])_(?![\w'.✝])")

QUANTIFIER_LABELS = {"forall": "∀ _, _", "exists": "∃ _, _", "lambda": "fun _ => _"}
QUANTIFIER_KINDS = {v: k for k, v in QUANTIFIER_LABELS.items()}
BINDER_WRAP = {"explicit": ("", ""), "implicit": ("{", "}"), "instance": ("[", "]")}
APP_LABEL = "_ _"
ASCRIPTION_LABEL = "_ : _"
PREFIX_LABELS = {"¬ _": NOT_BP, "-_": NEG_BP}
ATOMIC = 1000


class InvalidRef(LookupError):
    pass


def slot_count(label: str) -> int:
    if label == PLACEHOLDER:
        return 0
    return len(SLOT.findall(label))


@dataclass(frozen=True)
class OptNode:
    label: str
    children: tuple["OptNode", ...] = ()
    node_id: int = field(default=-1, compare=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __iter__(self) -> Iterator["OptNode"]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def _renumber(node: OptNode, counter: list[int]) -> OptNode:
    nid = counter[0]
    counter[0] += 1
    children = tuple(_renumber(c, counter) for c in node.children)
    return OptNode(node.label, children, nid)


@dataclass(frozen=True)
class OperatorTree:
    """Rooted ordered labeled tree.  Node ids are preorder indices."""

    root: OptNode

    def __post_init__(self):
        object.__setattr__(self, "root", _renumber(self.root, [0]))

    @cached_property
    def nodes(self) -> list[OptNode]:
        return list(self.root)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> OptNode:
        if not 0 <= node_id < self.size:
            raise InvalidRef(f"node {node_id} not in tree of size {self.size}")
        return self.nodes[node_id]

    def subtree(self, node_id: int) -> "OperatorTree":
        return OperatorTree(self.node(node_id))

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class SubtreeRef:
    tree: OperatorTree
    node_id: int

    def __post_init__(self):
        self.tree.node(self.node_id)

    @property
    def node(self) -> OptNode:
        return self.tree.node(self.node_id)

    @property
    def subtree(self) -> OperatorTree:
        return self.tree.subtree(self.node_id)


def leaf(label: str) -> OptNode:
    return OptNode(label)


def node(label: str, *children: OptNode) -> OptNode:
    return OptNode(label, tuple(children))


# ------------------------------------------------------------------ building


def binder_label(n_names: int, bracket: str) -> str:
    opening, closing = BINDER_WRAP[bracket]
    return opening + " ".join([PLACEHOLDER] * n_names) + " : _" + closing


def _binder_node(names: tuple[str, ...], typ: Expr, bracket: str) -> OptNode:
    return OptNode(binder_label(len(names), bracket), tuple(leaf(n) for n in names) + (expr_to_node(typ),))


def expr_to_node(e: Expr) -> OptNode:
    match e:
        case Atom(name):
            return leaf(name)
        case Numeral(value):
            return leaf(value)
        case Paren(inner):
            return expr_to_node(inner)
        case App(head, arg):
            return node(APP_LABEL, expr_to_node(head), expr_to_node(arg))
        case BinOp(op, lhs, rhs):
            return node(f"_ {op} _", expr_to_node(lhs), expr_to_node(rhs))
        case Arrow(lhs, rhs):
            return node("_ → _", expr_to_node(lhs), expr_to_node(rhs))
        case UnOp("¬", operand):
            return node("¬ _", expr_to_node(operand))
        case UnOp(op, operand):
            return node(f"{op}_", expr_to_node(operand))
        case Ascription(inner, typ):
            return node(ASCRIPTION_LABEL, expr_to_node(inner), expr_to_node(typ))
        case Bracket(open_, items):
            label = open_ + ", ".join([PLACEHOLDER] * len(items)) + OPEN_DELIMS[open_]
            return OptNode(label, tuple(expr_to_node(i) for i in items))
        case Quantifier(kind, binder, body):
            out = expr_to_node(body)
            for name in reversed(binder.names):
                if binder.type is None:
                    bnode = leaf(name)
                else:
                    bnode = _binder_node((name,), binder.type, binder.bracket)
                out = node(QUANTIFIER_LABELS[kind], bnode, out)
            return out
    raise TypeError(f"unexpected expression {e!r}")


def build_opt(stmt: StandardizedStmt) -> OperatorTree:
    children = [_binder_node(b.names, b.type, b.bracket) for b in stmt.binders]
    children.append(expr_to_node(stmt.goal))
    return OperatorTree(OptNode(stmt.name, tuple(children)))


def tree_size(tree: OperatorTree) -> int:
    return tree.size


# ------------------------------------------------------------------ algebra


def _replace(node: OptNode, targets: set[int]) -> OptNode:
    if node.node_id in targets:
        return leaf(PLACEHOLDER)
    if not node.children:
        return node
    return OptNode(node.label, tuple(_replace(c, targets) for c in node.children))


def quotient_many(tree: OperatorTree, node_ids) -> OperatorTree:
    """Collapse each listed (pairwise disjoint) subtree to a placeholder leaf."""
    ids = set(node_ids)
    for nid in ids:
        tree.node(nid)
    return OperatorTree(_replace(tree.root, ids))


def quotient(tree: OperatorTree, ref: Union[SubtreeRef, int]) -> OperatorTree:
    if isinstance(ref, SubtreeRef):
        if ref.tree != tree:
            raise InvalidRef("subtree reference points into a different tree")
        ref = ref.node_id
    return quotient_many(tree, [ref])


def enumerate_subtrees(tree: OperatorTree) -> list[SubtreeRef]:
    return [SubtreeRef(tree, i) for i in range(tree.size)]


def is_statement_root(n: OptNode) -> bool:
    return bool(n.children) and slot_count(n.label) == 0


def invariant_violations(tree: OperatorTree) -> list[str]:
    problems = []
    for i, n in enumerate(tree.nodes):
        if n.node_id != i:
            problems.append(f"node {i}: id {n.node_id} is not its preorder index")
        if n.label in ("(_)", "( _ )", "()"):
            problems.append(f"node {i}: bracket node {n.label!r}")
        if n.children and not (i == 0 and is_statement_root(n)):
            if slot_count(n.label) != len(n.children):
                problems.append(f"node {i}: {n.label!r} has {len(n.children)} children")
        if not n.children and slot_count(n.label) and n.label != PLACEHOLDER:
            problems.append(f"node {i}: leaf with slot label {n.label!r}")
    return problems


# ------------------------------------------------------------------ rendering


class Rendering(str):
    """Rendered text; ``is_template`` is set when placeholder leaves remain."""

    is_template: bool = False


def _binop(label: str) -> Optional[str]:
    m = re.fullmatch(r"_ (\S+) _", label)
    if m and m.group(1) in BINARY_OPS:
        return m.group(1)
    return None


def _is_bracket(label: str) -> bool:
    return bool(label) and label[0] in OPEN_DELIMS and label[0] != "("


def _prec(n: OptNode) -> int:
    if not n.children:
        return ATOMIC
    if n.label == APP_LABEL:
        return APP_BP
    op = _binop(n.label)
    if op is not None:
        return BINARY_OPS[op][0]
    if n.label in PREFIX_LABELS:
        return PREFIX_LABELS[n.label]
    if n.label in QUANTIFIER_KINDS:
        return 0
    return ATOMIC


def _fill(label: str, parts: list[str]) -> str:
    pieces = SLOT.split(label)
    out = [pieces[0]]
    for text, piece in zip(parts, pieces[1:]):
        out.append(text)
        out.append(piece)
    return "".join(out)


def _sub(n: OptNode, min_prec: int, tail: bool) -> str:
    if n.label in QUANTIFIER_KINDS and n.children:
        paren = not tail
    else:
        paren = _prec(n) < min_prec
    text = _render_expr(n, True if paren else tail)
    return f"({text})" if paren else text


def _render_binder(b: OptNode, in_quantifier: bool) -> str:
    if not b.children:
        return b.label
    *names, typ = b.children
    typ_text = _render_expr(typ, True)
    if b.label.startswith("[") and [n.label for n in names] == [ANONYMOUS_INSTANCE]:
        return f"[{typ_text}]"
    inner = " ".join(n.label for n in names) + " : " + typ_text
    if b.label.startswith("{"):
        return "{" + inner + "}"
    if b.label.startswith("["):
        return "[" + inner + "]"
    return inner if in_quantifier else f"({inner})"


def _render_expr(n: OptNode, tail: bool) -> str:
    label, kids = n.label, n.children
    if not kids:
        return label
    if label == APP_LABEL:
        return f"{_sub(kids[0], APP_BP, False)} {_sub(kids[1], APP_BP + 1, False)}"
    op = _binop(label)
    if op is not None:
        bp, right = BINARY_OPS[op]
        lhs = _sub(kids[0], bp + 1 if right else bp, False)
        rhs = _sub(kids[1], bp if right else bp + 1, tail)
        return f"{lhs} {op} {rhs}"
    if label in PREFIX_LABELS:
        return _fill(label, [_sub(kids[0], PREFIX_LABELS[label], tail)])
    if label in QUANTIFIER_KINDS:
        binder = _render_binder(kids[0], in_quantifier=True)
        return _fill(label, [binder, _render_expr(kids[1], True)])
    if label == ASCRIPTION_LABEL:
        return f"({_render_expr(kids[0], True)} : {_render_expr(kids[1], True)})"
    if _is_bracket(label):
        return _fill(label, [_render_expr(k, True) for k in kids])
    if slot_count(label) == len(kids):
        return _fill(label, [_sub(k, ATOMIC, False) for k in kids])
    # label with no usable template: function-call notation
    return f"{label}({', '.join(_render_expr(k, True) for k in kids)})"


def render(tree: Union[OperatorTree, OptNode]) -> Rendering:
    root = tree.root if isinstance(tree, OperatorTree) else tree
    if is_statement_root(root):
        *binders, goal = root.children
        head = " ".join(["theorem", root.label] + [_render_binder(b, False) for b in binders])
        text = f"{head} : {_render_expr(goal, True)}"
    else:
        text = _render_expr(root, True)
    out = Rendering(text)
    out.is_template = any(n.label == PLACEHOLDER and not n.children for n in root)
    return out


# ------------------------------------------------------------------ display


def format_tree(tree: Union[OperatorTree, OptNode]) -> str:
    """One node per line: indentation, depth, label."""
    root = tree.root if isinstance(tree, OperatorTree) else tree
    lines = []
    stack = [(root, 0)]
    while stack:
        n, depth = stack.pop()
        lines.append(f"{'  ' * depth}{depth} {n.label}")
        stack.extend((c, depth + 1) for c in reversed(n.children))
    return "\n".join(lines)


def format_oneline(tree: Union[OperatorTree, OptNode]) -> str:
    root = tree.root if isinstance(tree, OperatorTree) else tree

    def go(n: OptNode) -> str:
        if not n.children:
            return n.label
        return f"{n.label}({','.join(go(c) for c in n.children)})"

    return go(root)


def from_oneline(text: str) -> OperatorTree:
    """Inverse of ``format_oneline`` for labels without ``(``, ``)`` or ``,``."""
    pos = 0

    def go() -> OptNode:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        label = text[start:pos]
        children = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            children.append(go())
            while text[pos] == ",":
                pos += 1
                children.append(go())
            pos += 1
        return OptNode(label, tuple(children))

    return OperatorTree(go())
