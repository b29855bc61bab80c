"""Text syntax for specifications: tokenizer, recursive-descent parser, printer.

Grammar (loosest to tightest)::

    spec   := (NAME '=' alt ';')*
    alt    := par ('+' alt)?
    par    := seq ('||' par)?
    seq    := atom ('.' seq)?
    atom   := multi | 'delta' | '(' alt ')'
            | ('lmerge' | 'sync') '(' alt ',' alt ')'
            | OP '{' items '}' '(' alt ')'
    multi  := (NAME | 'tau') ('|' (NAME | 'tau'))*

A multi-action made of one bare name that is also a definition name is a
process reference.  Names outside ``[A-Za-z][A-Za-z0-9_']*`` (for instance
the generated ``a#f#1``) are written between backticks.  ``%`` starts a
comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, TauInCommRule
from .multiactions import ACTION_RE, MultiAction
from .process import (
    Act,
    Allow,
    Alt,
    Block,
    Comm,
    CommRule,
    DELTA,
    Delta,
    Hide,
    LMerge,
    Par,
    Ref,
    Rename,
    Seq,
    Specification,
    Sync,
    Term,
    validate,
)

KEYWORDS = frozenset(
    {"tau", "delta", "lmerge", "sync", "allow", "block", "rename", "comm", "hide"})
UNARY_KEYWORDS = ("allow", "block", "rename", "comm", "hide")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<quoted>`[^`\n]+`)
  | (?P<name>[A-Za-z][A-Za-z0-9_']*)
  | (?P<sym>\|\||->|[|.+(){},=;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'sym', 'eof'
    text: str
    line: int
    col: int
    quoted: bool = False


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "quoted":
            tokens.append(Token("name", m.group()[1:-1], line, col, quoted=True))
        elif kind == "name":
            tokens.append(Token("name", m.group(), line, col))
        elif kind == "sym":
            tokens.append(Token("sym", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.def_names = self._definition_names()

    def _definition_names(self) -> set[str]:
        names = set()
        at_start = True
        for tok, nxt in zip(self.tokens, self.tokens[1:]):
            if at_start and tok.kind == "name" and nxt.text == "=" and nxt.kind == "sym":
                names.add(tok.text)
            at_start = tok.kind == "sym" and tok.text == ";"
        return names

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text if tok.kind != "eof" else "end of input"
        return ParseError(f"{message}, found {found!r}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "name" and not self.tok.quoted and self.tok.text == word

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def name(self, what: str = "a name") -> str:
        tok = self.tok
        if tok.kind != "name" or (not tok.quoted and tok.text in KEYWORDS):
            raise self.error(f"expected {what}")
        self.i += 1
        return tok.text

    # grammar
    def spec(self) -> Specification:
        defs: dict[str, Term] = {}
        root = None
        while self.tok.kind != "eof":
            tok = self.tok
            name = self.name("a definition name")
            if name in defs:
                raise ParseError(f"duplicate definition {name!r}", tok.line, tok.col)
            self.expect("=")
            defs[name] = self.alt()
            self.expect(";")
            root = root or name
        if root is None:
            raise self.error("expected at least one definition")
        return Specification(defs, root)

    def alt(self) -> Term:
        left = self.par()
        if self.at("+"):
            self.i += 1
            return Alt(left, self.alt())
        return left

    def par(self) -> Term:
        left = self.seq()
        if self.at("||"):
            self.i += 1
            return Par(left, self.par())
        return left

    def seq(self) -> Term:
        left = self.atom()
        if self.at("."):
            self.i += 1
            return Seq(left, self.seq())
        return left

    def atom(self) -> Term:
        if self.at("("):
            self.i += 1
            t = self.alt()
            self.expect(")")
            return t
        if self.at_keyword("delta"):
            self.i += 1
            return DELTA
        for word, cls in (("lmerge", LMerge), ("sync", Sync)):
            if self.at_keyword(word):
                self.i += 1
                self.expect("(")
                left = self.alt()
                self.expect(",")
                right = self.alt()
                self.expect(")")
                return cls(left, right)
        for word in UNARY_KEYWORDS:
            if self.at_keyword(word):
                self.i += 1
                return getattr(self, "unary_" + word)()
        if self.tok.kind == "name":
            return self.multi_term()
        raise self.error("expected a process term")

    def multi(self) -> tuple[MultiAction, int, bool]:
        """Returns the multi-action, the number of parts, and whether tau was written."""
        names = []
        parts = 0
        saw_tau = False
        while True:
            if self.at_keyword("tau"):
                self.i += 1
                saw_tau = True
            else:
                names.append(self.name("an action"))
            parts += 1
            if not self.at("|"):
                break
            self.i += 1
        return MultiAction(names), parts, saw_tau

    def multi_term(self) -> Term:
        alpha, parts, _ = self.multi()
        if parts == 1 and len(alpha) == 1 and alpha.actions[0] in self.def_names:
            return Ref(alpha.actions[0])
        return Act(alpha)

    def braced(self, item):
        self.expect("{")
        items = []
        if not self.at("}"):
            items.append(item())
            while self.at(","):
                self.i += 1
                items.append(item())
        self.expect("}")
        self.expect("(")
        proc = self.alt()
        self.expect(")")
        return items, proc

    def unary_allow(self) -> Term:
        items, proc = self.braced(lambda: self.multi()[0])
        return Allow(frozenset(items), proc)

    def unary_block(self) -> Term:
        items, proc = self.braced(self.name)
        return Block(frozenset(items), proc)

    def unary_hide(self) -> Term:
        items, proc = self.braced(self.name)
        return Hide(frozenset(items), proc)

    def unary_rename(self) -> Term:
        def pair():
            src = self.name("an action")
            self.expect("->")
            return (src, self.name("an action"))

        items, proc = self.braced(pair)
        return Rename(frozenset(items), proc)

    def unary_comm(self) -> Term:
        def rule():
            tok = self.tok
            lhs, _, saw_tau = self.multi()
            if saw_tau:
                raise TauInCommRule(
                    f"{tok.line}:{tok.col}: tau may not occur in a communication")
            self.expect("->")
            return CommRule(lhs, self.name("an action"))

        items, proc = self.braced(rule)
        return Comm(frozenset(items), proc)


def parse(text: str) -> Specification:
    """Parse and validate a specification; the first definition is the root."""
    return validate(_Parser(text).spec())


def parse_term(text: str, def_names=()) -> Term:
    """Parse a single process term (no validation)."""
    p = _Parser(text)
    p.def_names = set(def_names)
    t = p.alt()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return t


# printing ------------------------------------------------------------------

_ALT, _PAR, _SEQ, _ATOM = 1, 2, 3, 4


def quote_name(name: str) -> str:
    if ACTION_RE.match(name) and name not in KEYWORDS:
        return name
    return f"`{name}`"


def format_multiaction(alpha: MultiAction) -> str:
    if not alpha.actions:
        return "tau"
    return "|".join(quote_name(a) for a in alpha.actions)


def _fmt(t: Term, defs: frozenset) -> tuple[str, int]:
    if isinstance(t, Act):
        text = format_multiaction(t.alpha)
        if len(t.alpha) == 1 and t.alpha.actions[0] in defs:
            # keep a lone action distinct from a reference of the same name
            text += "|tau"
        return text, _ATOM
    if isinstance(t, Delta):
        return "delta", _ATOM
    if isinstance(t, Ref):
        return quote_name(t.name), _ATOM
    if isinstance(t, Alt):
        return f"{_wrap(t.left, _PAR, defs)} + {_wrap(t.right, _ALT, defs)}", _ALT
    if isinstance(t, Par):
        return f"{_wrap(t.left, _SEQ, defs)} || {_wrap(t.right, _PAR, defs)}", _PAR
    if isinstance(t, Seq):
        return f"{_wrap(t.left, _ATOM, defs)} . {_wrap(t.right, _SEQ, defs)}", _SEQ
    if isinstance(t, (LMerge, Sync)):
        word = "lmerge" if isinstance(t, LMerge) else "sync"
        return f"{word}({_fmt(t.left, defs)[0]}, {_fmt(t.right, defs)[0]})", _ATOM
    if isinstance(t, Allow):
        items = ", ".join(format_multiaction(m) for m in sorted(t.allowed))
        return f"allow{{{items}}}({_fmt(t.proc, defs)[0]})", _ATOM
    if isinstance(t, (Block, Hide)):
        word = "block" if isinstance(t, Block) else "hide"
        items = ", ".join(quote_name(a) for a in sorted(t.actions))
        return f"{word}{{{items}}}({_fmt(t.proc, defs)[0]})", _ATOM
    if isinstance(t, Rename):
        items = ", ".join(f"{quote_name(a)}->{quote_name(b)}" for a, b in sorted(t.mapping))
        return f"rename{{{items}}}({_fmt(t.proc, defs)[0]})", _ATOM
    if isinstance(t, Comm):
        items = ", ".join(
            f"{format_multiaction(r.lhs)}->{quote_name(r.rhs)}" for r in sorted(t.rules))
        return f"comm{{{items}}}({_fmt(t.proc, defs)[0]})", _ATOM
    raise TypeError(f"not a process term: {t!r}")


def _wrap(t: Term, min_level: int, defs: frozenset) -> str:
    text, level = _fmt(t, defs)
    return f"({text})" if level < min_level else text


def format_term(t: Term, def_names=()) -> str:
    return _fmt(t, frozenset(def_names))[0]


def format_spec(spec: Specification) -> str:
    """Render a specification, root definition first, one definition per line."""
    defs = frozenset(spec.definitions)
    names = [spec.root] + [n for n in spec.definitions if n != spec.root]
    return "".join(
        f"{quote_name(n)} = {format_term(spec.definitions[n], defs)};\n" for n in names)
