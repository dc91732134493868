"""Tokenizer and Pratt parser for a subset of Lean 4 theorem statements.

Spans are half-open ``(start, end)`` offsets into the source string (Python
code-point indices).  Expression nodes compare structurally: spans are
carried along but ignored by ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Span = tuple[int, int]

KEYWORDS = frozenset({"theorem", "lemma", "example", "fun"})
OPEN_DELIMS = {"(": ")", "{": "}", "[": "]", "⟨": "⟩", "⦃": "⦄"}
CLOSE_DELIMS = frozenset(OPEN_DELIMS.values())

# longest match first
MULTI_SYMBOLS = (":=", "<->", "->", "<=", ">=", "!=", "=>", "/\\", "\\/")
ASCII_SYNONYMS = {
    "->": "→",
    "<->": "↔",
    "<=": "≤",
    ">=": "≥",
    "!=": "≠",
    "/\\": "∧",
    "\\/": "∨",
}

# (binding power, right associative)
BINARY_OPS: dict[str, tuple[int, bool]] = {
    "→": (10, True),
    "↔": (20, True),
    "∨": (30, False),
    "∧": (40, False),
    "=": (60, False),
    "≠": (60, False),
    "<": (60, False),
    "≤": (60, False),
    ">": (60, False),
    "≥": (60, False),
    "∈": (60, False),
    "∉": (60, False),
    "∣": (60, False),
    "⊆": (60, False),
    "⊂": (60, False),
    "+": (70, False),
    "-": (70, False),
    "∪": (70, False),
    "*": (80, False),
    "/": (80, False),
    "%": (80, False),
    "∩": (80, False),
    "^": (90, False),
}
NOT_BP = 50
NEG_BP = 85
APP_BP = 100
COMPARISON_BP = 60

QUANTIFIER_SYMBOLS = {"∀": "forall", "∃": "exists", "λ": "lambda", "fun": "lambda"}
STRUCTURAL = frozenset({":", ",", ":=", "=>", "↦"})


class ParseError(ValueError):
    """Malformed statement text.  ``span`` locates the offending token."""

    def __init__(self, message: str, span: Optional[Span] = None, expected: Optional[str] = None):
        self.span = span
        self.expected = expected
        detail = message
        if expected:
            detail += f" (expected {expected})"
        if span is not None:
            detail += f" at {span[0]}:{span[1]}"
        super().__init__(detail)


class UnbalancedDelimiter(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | numeral | symbol | open-delim | close-delim
    text: str
    span: Span


def _ident_start(ch: str) -> bool:
    return (ch.isalpha() or ch == "_") and ch != "λ"


def _ident_char(ch: str) -> bool:
    return (ch.isalnum() or ch in "_'✝") and ch != "λ"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens.  Never fails: unknown characters become
    single-character ``symbol`` tokens."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch.isascii() and ch.isdigit():
            while i < n and source[i].isascii() and source[i].isdigit():
                i += 1
            if i + 1 < n and source[i] == "." and source[i + 1].isascii() and source[i + 1].isdigit():
                i += 1
                while i < n and source[i].isascii() and source[i].isdigit():
                    i += 1
            tokens.append(Token("numeral", source[start:i], (start, i)))
            continue
        if _ident_start(ch):
            i += 1
            while i < n:
                if _ident_char(source[i]):
                    i += 1
                elif source[i] == "." and i + 1 < n and _ident_char(source[i + 1]):
                    i += 2
                else:
                    break
            text = source[start:i]
            tokens.append(Token("keyword" if text in KEYWORDS else "identifier", text, (start, i)))
            continue
        if ch in OPEN_DELIMS:
            tokens.append(Token("open-delim", ch, (i, i + 1)))
            i += 1
            continue
        if ch in CLOSE_DELIMS:
            tokens.append(Token("close-delim", ch, (i, i + 1)))
            i += 1
            continue
        for sym in MULTI_SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token("symbol", sym, (i, i + len(sym))))
                i += len(sym)
                break
        else:
            tokens.append(Token("symbol", ch, (i, i + 1)))
            i += 1
    return tokens


# ---------------------------------------------------------------- syntax tree


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Atom(Expr):
    name: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Numeral(Expr):
    value: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class App(Expr):
    head: Expr
    arg: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class UnOp(Expr):
    op: str
    operand: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binder:
    names: tuple[str, ...]
    type: Optional[Expr]
    bracket: str = "explicit"  # explicit | implicit | instance
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Quantifier(Expr):
    kind: str  # forall | exists | lambda
    binder: Binder
    body: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Arrow(Expr):
    lhs: Expr
    rhs: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ascription(Expr):
    expr: Expr
    type: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Paren(Expr):
    inner: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bracket(Expr):
    """Square, curly or angle bracket notation in term position: ``[X]``,
    ``{1, 2, 3}``, ``⟨a, b⟩``."""

    open: str
    items: tuple[Expr, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TheoremStmt:
    name: str
    binders: tuple[Binder, ...]
    goal: Expr
    trailer: Optional[str] = None


ANONYMOUS_INSTANCE = "inst✝"
BRACKET_KINDS = {"(": "explicit", "{": "implicit", "[": "instance", "⦃": "implicit"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- cursor helpers
    def peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span())
        self.pos += 1
        return tok

    def _eof_span(self) -> Span:
        if not self.tokens:
            return (0, 0)
        end = self.tokens[-1].span[1]
        return (end, end)

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text in texts

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            span = tok.span if tok else self._eof_span()
            got = repr(tok.text) if tok else "end of input"
            raise ParseError(f"unexpected {got}", span, expected=repr(text))
        self.pos += 1
        return tok

    def span_from(self, start_pos: int) -> Span:
        return (self.tokens[start_pos].span[0], self.tokens[self.pos - 1].span[1])

    # -- expressions
    def starts_primary(self, tok: Optional[Token]) -> bool:
        if tok is None:
            return False
        if tok.kind in ("identifier", "numeral"):
            return True
        if tok.kind == "open-delim":
            return tok.text != "⦃"
        if tok.kind == "symbol":
            text = ASCII_SYNONYMS.get(tok.text, tok.text)
            return not (
                text in BINARY_OPS or text in STRUCTURAL or text in QUANTIFIER_SYMBOLS or text == "¬"
            )
        return False

    def expression(self, rbp: int = 0) -> Expr:
        start = self.pos
        left = self.nud()
        while True:
            tok = self.peek()
            if tok is None:
                break
            if rbp < APP_BP and self.starts_primary(tok):
                arg = self.primary()
                left = App(left, arg, self.span_from(start))
                continue
            op = ASCII_SYNONYMS.get(tok.text, tok.text) if tok.kind == "symbol" else None
            if op not in BINARY_OPS:
                break
            lbp, right_assoc = BINARY_OPS[op]
            if lbp <= rbp:
                break
            self.pos += 1
            rhs = self.expression(lbp - 1 if right_assoc else lbp)
            span = self.span_from(start)
            left = Arrow(left, rhs, span) if op == "→" else BinOp(op, left, rhs, span)
        return left

    def nud(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span(), expected="an expression")
        start = self.pos
        text = ASCII_SYNONYMS.get(tok.text, tok.text)
        if tok.text in QUANTIFIER_SYMBOLS:
            return self.quantifier()
        if text == "¬":
            self.pos += 1
            operand = self.expression(NOT_BP)
            return UnOp("¬", operand, self.span_from(start))
        if text == "-":
            self.pos += 1
            operand = self.expression(NEG_BP)
            return UnOp("-", operand, self.span_from(start))
        if self.starts_primary(tok):
            return self.primary()
        raise ParseError(f"unexpected {tok.text!r}", tok.span, expected="an expression")

    def primary(self) -> Expr:
        tok = self.advance()
        if tok.kind == "numeral":
            return Numeral(tok.text, tok.span)
        if tok.kind in ("identifier", "symbol"):
            return Atom(tok.text, tok.span)
        if tok.text == "(":
            inner = self.expression()
            if self.at(":"):
                self.pos += 1
                typ = self.expression()
                inner = Ascription(inner, typ, (inner.span[0], typ.span[1]))
            if self.at(","):
                raise ParseError("tuples are not supported", self.peek().span)
            self.expect(")")
            return Paren(inner, (tok.span[0], self.tokens[self.pos - 1].span[1]))
        if tok.kind == "open-delim":
            close = OPEN_DELIMS[tok.text]
            items = []
            if not self.at(close):
                items.append(self.item())
                while self.at(","):
                    self.pos += 1
                    items.append(self.item())
            self.expect(close)
            return Bracket(tok.text, tuple(items), (tok.span[0], self.tokens[self.pos - 1].span[1]))
        raise ParseError(f"unexpected {tok.text!r}", tok.span, expected="an expression")

    def item(self) -> Expr:
        start = self.pos
        expr = self.expression()
        if self.at(":"):
            self.pos += 1
            typ = self.expression()
            expr = Ascription(expr, typ, self.span_from(start))
        return expr

    def names(self) -> list[tuple[str, Span]]:
        names = []
        while self.peek() is not None and self.peek().kind == "identifier":
            tok = self.advance()
            names.append((tok.text, tok.span))
        return names

    def binder_group(self, allow_anonymous_instance: bool = True) -> Binder:
        open_tok = self.advance()
        bracket = BRACKET_KINDS[open_tok.text]
        close = OPEN_DELIMS[open_tok.text]
        save = self.pos
        names = self.names()
        if names and self.at(":"):
            self.pos += 1
            typ = self.expression()
        elif bracket == "instance" and allow_anonymous_instance:
            self.pos = save
            names = [(ANONYMOUS_INSTANCE, None)]
            typ = self.expression()
        else:
            tok = self.peek()
            raise ParseError(
                "malformed binder", tok.span if tok else self._eof_span(), expected="names followed by ':'"
            )
        self.expect(close)
        _check_unique(names)
        return Binder(tuple(n for n, _ in names), typ, bracket, (open_tok.span[0], self.tokens[self.pos - 1].span[1]))

    def at_binder_group(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "open-delim" and tok.text in BRACKET_KINDS

    def binders(self) -> list[Binder]:
        out = []
        while self.at_binder_group():
            out.append(self.binder_group())
        return out

    def quantifier(self) -> Expr:
        start = self.pos
        head = self.advance()
        kind = QUANTIFIER_SYMBOLS[head.text]
        if head.text == "fun":
            separators = ("=>", "↦")
        elif head.text == "λ":
            separators = (",", "=>", "↦")
        else:
            separators = (",",)
        binders: list[Binder] = []
        desugar = None
        if self.at_binder_group():
            while self.at_binder_group():
                binders.append(self.binder_group(allow_anonymous_instance=False))
        else:
            bstart = self.pos
            names = self.names()
            if not names:
                tok = self.peek()
                raise ParseError("quantifier without variables", tok.span if tok else self._eof_span())
            _check_unique(names)
            typ = None
            if self.at(":"):
                self.pos += 1
                typ = self.expression()
            elif self.peek() is not None and self.peek().kind == "symbol":
                op = ASCII_SYNONYMS.get(self.peek().text, self.peek().text)
                if BINARY_OPS.get(op, (0,))[0] == COMPARISON_BP and head.text in ("∀", "∃"):
                    # binder predicate: ∀ x > 0, p  /  ∃ x ∈ S, p
                    self.pos += 1
                    desugar = (op, self.expression(COMPARISON_BP))
            binders.append(Binder(tuple(n for n, _ in names), typ, "explicit", self.span_from(bstart)))
        tok = self.peek()
        if tok is None or tok.text not in separators:
            raise ParseError(
                "unterminated binder list", tok.span if tok else self._eof_span(), expected=" or ".join(map(repr, separators))
            )
        self.pos += 1
        body = self.expression()
        if desugar is not None:
            # expands like Lean's binder predicates: ∀ x, x > 0 → p  /  ∃ x, x ∈ S ∧ p
            op, bound = desugar
            result = body
            for name in reversed(binders[0].names):
                guard = BinOp(op, Atom(name), bound)
                inner = Arrow(guard, result) if kind == "forall" else BinOp("∧", guard, result)
                result = Quantifier(kind, Binder((name,), None), inner)
            return Quantifier(kind, result.binder, result.body, self.span_from(start))
        # nested groups: only the outermost quantifier corresponds to a source slice
        result = body
        for binder in reversed(binders[1:]):
            result = Quantifier(kind, binder, result)
        return Quantifier(kind, binders[0], result, self.span_from(start))


def _check_unique(names: list[tuple[str, Optional[Span]]]) -> None:
    seen = set()
    for name, span in names:
        if name in seen:
            raise ParseError(f"duplicate binder name {name!r}", span)
        seen.add(name)


def check_delimiters(tokens: list[Token]) -> None:
    stack: list[Token] = []
    for tok in tokens:
        if tok.kind == "open-delim":
            stack.append(tok)
        elif tok.kind == "close-delim":
            if not stack:
                raise UnbalancedDelimiter(f"unmatched {tok.text!r}", tok.span)
            opener = stack.pop()
            if OPEN_DELIMS[opener.text] != tok.text:
                raise UnbalancedDelimiter(
                    f"{opener.text!r} closed by {tok.text!r}", tok.span, expected=repr(OPEN_DELIMS[opener.text])
                )
    if stack:
        raise UnbalancedDelimiter(f"unclosed {stack[-1].text!r}", stack[-1].span)


def parse_expr(tokens: Union[list[Token], str]) -> Expr:
    """Parse a complete expression.  A trailing ``: T`` is read as an
    ascription."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    if not tokens:
        raise ParseError("empty expression", (0, 0), expected="an expression")
    check_delimiters(tokens)
    p = _Parser(tokens)
    expr = p.item()
    if p.peek() is not None:
        raise ParseError(f"unexpected {p.peek().text!r}", p.peek().span, expected="end of expression")
    return expr


def parse_theorem(source: str) -> TheoremStmt:
    tokens = tokenize(source)
    trailer = None
    depth = 0
    for i, tok in enumerate(tokens):
        if tok.kind == "open-delim":
            depth += 1
        elif tok.kind == "close-delim":
            depth -= 1
        elif tok.text == ":=" and depth <= 0:
            trailer = source[tok.span[0]:].rstrip()
            tokens = tokens[:i]
            break
    check_delimiters(tokens)
    p = _Parser(tokens)
    head = p.peek()
    if head is None or head.text not in ("theorem", "lemma", "example"):
        raise ParseError("statement must start with 'theorem' or 'example'", head.span if head else (0, 0))
    p.pos += 1
    if head.text == "example":
        name = "example"
    else:
        tok = p.peek()
        if tok is None or tok.kind != "identifier":
            raise ParseError("missing theorem name", tok.span if tok else p._eof_span(), expected="an identifier")
        name = p.advance().text
    binders = p.binders()
    p.expect(":")
    if not binders:
        # tolerate a misplaced colon before the binder list: `thm : {a : T} [C a] : goal`
        save = p.pos
        try:
            late = p.binders()
        except ParseError:
            late = []
        if late and p.at(":"):
            binders = late
            p.pos += 1
        else:
            p.pos = save
    goal = p.item()
    if p.peek() is not None:
        raise ParseError(f"unexpected {p.peek().text!r}", p.peek().span, expected="':=' or end of statement")
    return TheoremStmt(name, tuple(binders), goal, trailer)


def to_sexpr(node: Union[Expr, Binder, TheoremStmt]) -> str:
    """Compact structural dump used by the ``parse`` subcommand and tests."""
    match node:
        case Atom(name):
            return name
        case Numeral(value):
            return value
        case App(head, arg):
            return f"(app {to_sexpr(head)} {to_sexpr(arg)})"
        case BinOp(op, lhs, rhs):
            return f"({op} {to_sexpr(lhs)} {to_sexpr(rhs)})"
        case UnOp(op, operand):
            return f"({op} {to_sexpr(operand)})"
        case Arrow(lhs, rhs):
            return f"(→ {to_sexpr(lhs)} {to_sexpr(rhs)})"
        case Quantifier(kind, binder, body):
            return f"({kind} {to_sexpr(binder)} {to_sexpr(body)})"
        case Ascription(expr, typ):
            return f"(: {to_sexpr(expr)} {to_sexpr(typ)})"
        case Paren(inner):
            return f"(paren {to_sexpr(inner)})"
        case Bracket(open_, items):
            return f"({open_}{OPEN_DELIMS[open_]} {' '.join(to_sexpr(i) for i in items)})".replace("  ", " ")
        case Binder(names, typ, bracket):
            t = to_sexpr(typ) if typ is not None else "_"
            return f"[{bracket} {' '.join(names)} : {t}]"
        case TheoremStmt(name, binders, goal, trailer):
            parts = [f"theorem {name}"]
            parts += [to_sexpr(b) for b in binders]
            parts.append(f"goal {to_sexpr(goal)}")
            if trailer:
                parts.append(f"trailer {trailer!r}")
            return "\n".join(parts)
    raise TypeError(f"cannot dump {node!r}")
