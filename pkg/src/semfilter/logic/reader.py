"""Reader for the clause syntax used by theory, constraint and context files."""

from __future__ import annotations

import re

from .terms import Atom, Clause, Compound, Num, Term, Theory, Var


class TheorySyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)
      |(?P<number>-?\d+\.\d+|-?\d+)
      |(?P<var>[A-Z_][A-Za-z0-9_]*)
      |(?P<atom>[a-z][A-Za-z0-9_]*)
      |(?P<quoted>'(?:[^'\\\n]|\\.)*')
      |(?P<neck>:-)|(?P<punct>[(),.])""",
    re.VERBOSE,
)
_DOTTED = re.compile(r"[a-z][A-Za-z0-9_]*(?:\.[a-z][A-Za-z0-9_]*)+")


def _tokenize(text: str):
    pos, line = 0, 1
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise TheorySyntaxError(f"syntax error near {text[pos:pos + 10]!r}", line)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind == "atom":
            dotted = _DOTTED.match(text, pos)
            if dotted:
                name = dotted.group()
                raise TheorySyntaxError(
                    f"dotted predicate name {name!r}; use underscores ({name.replace('.', '_')})", line
                )
            out.append(("atom", m.group(), line))
        elif kind == "quoted":
            raw = m.group()[1:-1]
            out.append(("atom", re.sub(r"\\(.)", r"\1", raw), line))
        elif kind in ("neck", "punct"):
            out.append((m.group(), m.group(), line))
        elif kind in ("number", "var"):
            out.append((kind, m.group(), line))
        pos = m.end()
    out.append(("eof", "", line))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.anon = 0

    def peek(self, offset=0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise TheorySyntaxError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def term(self) -> Term:
        kind, value, line = self.take()
        if kind == "number":
            return Num(float(value) if "." in value else int(value))
        if kind == "var":
            if value == "_":
                self.anon += 1
                return Var(f"_G{self.anon}")
            return Var(value)
        if kind == "atom":
            if self.peek()[0] == "(":
                self.take("(")
                args = [self.term()]
                while self.peek()[0] == ",":
                    self.take(",")
                    args.append(self.term())
                self.take(")")
                return Compound(value, tuple(args))
            return Atom(value)
        raise TheorySyntaxError(f"unexpected {value or 'end of input'!r}", line)

    def clause(self, origin=None) -> Clause:
        line = self.peek()[2]
        head = self.term()
        body = []
        if self.peek()[0] == ":-":
            self.take(":-")
            body.append(self.term())
            while self.peek()[0] == ",":
                self.take(",")
                body.append(self.term())
        self.take(".")
        try:
            return Clause(head, tuple(body), origin)
        except ValueError as exc:
            raise TheorySyntaxError(str(exc), line) from None


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] == ".":
        p.take(".")
    p.take("eof")
    return t


def parse_clauses(text: str, origin: str | None = None) -> list[Clause]:
    p = _Parser(text)
    out = []
    while p.peek()[0] != "eof":
        out.append(p.clause(origin))
    return out


def parse_theory(text: str, name: str | None = None) -> Theory:
    """Parse a theory file.

    The file may open with ``theory <name>.`` and must then close with
    ``end.``; without a header the theory is called ``name`` (or
    ``anonymous``). Every clause records the theory name as its origin.
    """
    p = _Parser(text)
    header = None
    if p.peek()[:2] == ("atom", "theory") and p.peek(1)[0] == "atom" and p.peek(2)[0] == ".":
        p.take()
        header = p.take()[1]
        p.take(".")
    theory_name = header or name or "anonymous"
    clauses = []
    closed = False
    while p.peek()[0] != "eof":
        if header and p.peek()[:2] == ("atom", "end") and p.peek(1)[0] == ".":
            p.take()
            p.take(".")
            closed = True
            if p.peek()[0] != "eof":
                raise TheorySyntaxError("text after end.", p.peek()[2])
            break
        clauses.append(p.clause(theory_name))
    if header and not closed:
        raise TheorySyntaxError(f"theory {header} is missing its closing 'end.'", p.peek()[2])
    return Theory(theory_name, tuple(clauses))
