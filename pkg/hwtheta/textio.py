"""
Text formats: manifold files, words, module elements, Wh elements and barbell
descriptors. Parsers report errors with 1-based line and column; formatters
print the canonical syntax the parsers read back.

    group: Z(a)*Zmod(3)(b)        # or `group: 1` for the trivial group
    module: free(1)               # or `module: zero`
    w1: a=-1
    w2: e0=1
    circle: delta = a*b, disk = 2*(e0 @ a) - (e0 @ 1)

Words: `1` or `a^2*b^-1*a`. Module elements: `0` or `2*(e0 @ a*b) - (e1 @ 1)`.
Wh elements: `(1, (e0 @ a))[a*b] - (0, 0)[b]`, each term optionally `k*`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from hwtheta.barbell import BarbellDescriptor, Circle
from hwtheta.errors import HWThetaError, ParseError
from hwtheta.groupwords import FactorSpec, GroupPresentation, Word, word_normalize
from hwtheta.pi2module import ModuleElement, ModuleSpec
from hwtheta.whitehead import ManifoldData, WhElement, WhNormalForm, WhTerm, wh_scale

PUNCTUATION = "()[]*^+-,@=:;"
MANIFOLD_FIELDS = ("group", "module", "w1", "w2")


# ---------- tokens ----------

@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "end" or the punctuation character itself
    text: str
    line: int
    column: int


def tokenize(source: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split one logical input into tokens; `column` is where `source` starts."""
    if not source.isascii():
        bad = next(i for i, c in enumerate(source) if not c.isascii())
        raise ParseError("only ASCII input is supported", line, column + bad)
    tokens: List[Token] = []
    i, n = 0, len(source)
    col0 = column
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            col0 = -i
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start = i
        if c.isdigit():
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("int", source[start:i], line, col0 + start))
            continue
        if c.isalpha() or c == "_":
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(Token("name", source[start:i], line, col0 + start))
            continue
        if c in PUNCTUATION:
            tokens.append(Token(c, c, line, col0 + i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col0 + i)
    tokens.append(Token("end", "", line, col0 + n))
    return tokens


class _Stream:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "end":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what or repr(kind)}, found {_describe(tok)}", tok)
        return self.next()

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def finish(self):
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {_describe(tok)}", tok)


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.text)


def _int(s: _Stream, signed: bool = False) -> int:
    sign = 1
    if signed:
        if s.accept("-"):
            sign = -1
        else:
            s.accept("+")
    return sign * int(s.expect("int", "an integer").text)


# ---------- expression grammar ----------

def _word(s: _Stream, G: GroupPresentation) -> Word:
    tok = s.peek()
    if tok.kind == "int":
        if tok.text != "1":
            raise s.error(f"a word is `1` or a product of generators, found {tok.text!r}", tok)
        s.next()
        return G.identity()
    raw = []
    while True:
        name = s.expect("name", "a generator name")
        try:
            f = G.index_of(name.text)
        except HWThetaError:
            raise s.error(f"unknown generator {name.text!r}", name) from None
        e = 1
        if s.accept("^"):
            at = s.peek()
            e = _int(s, signed=True)
            if e == 0:
                raise s.error("zero exponent", at)
        raw.append((f, e))
        if not s.accept("*"):
            break
    return word_normalize(raw, G)


def _basis(s: _Stream, spec: ModuleSpec) -> int:
    tok = s.expect("name", "a basis name e<i>")
    if not (tok.text.startswith("e") and tok.text[1:].isdigit()):
        raise s.error(f"basis names look like e0, e1, ...; found {tok.text!r}", tok)
    index = int(tok.text[1:])
    if index >= spec.rank:
        raise s.error(f"basis index {tok.text} out of range for module {spec}", tok)
    return index


def _signed_terms(s: _Stream, term):
    """sum := ["-"] term (("+" | "-") term)*, each term given its sign."""
    out = []
    sign = -1 if s.accept("-") else 1
    while True:
        out.append((sign, term(s)))
        if s.accept("+"):
            sign = 1
        elif s.accept("-"):
            sign = -1
        else:
            return out


def _coefficient(s: _Stream) -> Optional[int]:
    """`k*` prefix, or None; a bare `0` returns 0."""
    tok = s.peek()
    if tok.kind != "int":
        return None
    if s.peek(1).kind == "*":
        s.next()
        s.next()
        return int(tok.text)
    if tok.text == "0":
        s.next()
        return 0
    raise s.error(f"expected `k*` or a term, found {tok.text!r}", tok)


def _module(s: _Stream, spec: ModuleSpec, G: GroupPresentation) -> ModuleElement:
    def term(s):
        k = _coefficient(s)
        if k == 0 and s.peek().kind != "(":
            return []
        s.expect("(")
        b = _basis(s, spec)
        s.expect("@")
        w = _word(s, G)
        s.expect(")")
        return [(b, w, 1 if k is None else k)]

    pieces = []
    for sign, terms in _signed_terms(s, term):
        pieces.extend((b, w, sign * c) for b, w, c in terms)
    return ModuleElement.from_terms(spec, G, pieces)


def _wh(s: _Stream, X: ManifoldData) -> WhElement:
    def term(s):
        k = _coefficient(s)
        if k == 0 and s.peek().kind != "(":
            return WhElement(X, ())
        s.expect("(")
        bit = s.expect("int", "0 or 1")
        if bit.text not in ("0", "1"):
            raise s.error(f"the Z2 part is 0 or 1, found {bit.text!r}", bit)
        s.expect(",")
        sigma = _module(s, X.module, X.group)
        s.expect(")")
        s.expect("[")
        gamma = _word(s, X.group)
        s.expect("]")
        x = WhElement(X, (WhTerm(int(bit.text), sigma, gamma),))
        return x if k is None else wh_scale(k, x)

    terms: List[WhTerm] = []
    for sign, x in _signed_terms(s, term):
        terms.extend(x.terms if sign > 0 else (-x).terms)
    return WhElement(X, tuple(terms))


def _parse(text: str, rule, line: int = 1, column: int = 1):
    s = _Stream(tokenize(text, line, column))
    value = rule(s)
    s.finish()
    return value


def parse_word(text: str, X: ManifoldData) -> Word:
    return _parse(text, lambda s: _word(s, X.group))


def parse_words(text: str, X: ManifoldData, sep: str = ";") -> List[Word]:
    """`;`-separated words; an empty string is the empty list."""
    out, column = [], 1
    for chunk in text.split(sep):
        if chunk.strip():
            out.append(_parse(chunk, lambda s: _word(s, X.group), 1, column))
        column += len(chunk) + 1
    return out


def parse_module_elem(text: str, X: ManifoldData) -> ModuleElement:
    return _parse(text, lambda s: _module(s, X.module, X.group))


def parse_wh(text: str, X: ManifoldData) -> WhElement:
    return _parse(text, lambda s: _wh(s, X))


# ---------- line-oriented documents ----------

def _lines(text: str):
    """(line number, key, key token, value, value column) for every non-blank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ParseError("expected `<field>: <value>`", number, col)
        key, value = body.split(":", 1)
        key_col = len(key) - len(key.lstrip()) + 1
        yield number, key.strip(), key_col, value, len(key) + 2


def _factor(s: _Stream) -> FactorSpec:
    head = s.expect("name", "Z(...) or Zmod(m)(...)")
    if head.text == "Z":
        s.expect("(")
        name = s.expect("name", "a generator name")
        s.expect(")")
        return FactorSpec(name.text)
    if head.text == "Zmod":
        s.expect("(")
        m = s.expect("int", "the factor order")
        s.expect(")")
        s.expect("(")
        name = s.expect("name", "a generator name")
        s.expect(")")
        if int(m.text) < 2:
            raise s.error(f"finite order must be >= 2, got {m.text}", m)
        return FactorSpec(name.text, int(m.text))
    raise s.error(f"unknown factor {head.text!r}; expected Z or Zmod", head)


def _group_rule(s: _Stream) -> GroupPresentation:
    tok = s.peek()
    if tok.kind == "int" and tok.text == "1":
        s.next()
        return GroupPresentation(())
    factors = [_factor(s)]
    while s.accept("*"):
        factors.append(_factor(s))
    names = [f.name for f in factors]
    for i, name in enumerate(names):
        if name in names[:i]:
            raise s.error(f"duplicate generator name {name!r}", tok)
    return GroupPresentation(tuple(factors))


def _module_rule(s: _Stream) -> ModuleSpec:
    tok = s.expect("name", "`zero` or `free(r)`")
    if tok.text == "zero":
        return ModuleSpec(0)
    if tok.text == "free":
        s.expect("(")
        r = s.expect("int", "the module rank")
        if int(r.text) < 1:
            raise s.error("free module rank must be >= 1 (use `zero` for a trivial pi_2)", r)
        s.expect(")")
        return ModuleSpec(int(r.text))
    raise s.error(f"unknown module {tok.text!r}; expected zero or free(r)", tok)


def _assignments(s: _Stream) -> List[Tuple[Token, int]]:
    out = []
    while s.peek().kind != "end":
        name = s.expect("name")
        s.expect("=")
        at = s.peek()
        out.append((name, _int(s, signed=True), at))
        s.accept(",")
    return out


def parse_manifold(text: str) -> ManifoldData:
    fields: Dict[str, Tuple[int, int, str]] = {}
    last = 0
    for number, key, key_col, value, col in _lines(text):
        last = number
        if key == "circle":
            continue
        if key not in MANIFOLD_FIELDS:
            raise ParseError(f"unknown field {key!r}", number, key_col)
        if key in fields:
            raise ParseError(f"field {key!r} given twice", number, key_col)
        if not value.strip():
            raise ParseError(f"missing value for field {key!r}", number, col)
        fields[key] = (number, col, value)
    for key in ("group", "module"):
        if key not in fields:
            raise ParseError(f"missing field {key!r}", last + 1, 1)

    group = _parse(fields["group"][2], _group_rule, fields["group"][0], fields["group"][1])
    module = _parse(fields["module"][2], _module_rule, fields["module"][0], fields["module"][1])

    w1 = [1] * len(group.factors)
    if "w1" in fields:
        number, col, value = fields["w1"]
        for name, sign, at in _parse(value, _assignments, number, col):
            try:
                f = group.index_of(name.text)
            except HWThetaError:
                raise ParseError(f"unknown generator {name.text!r}", name.line, name.column) from None
            if sign not in (1, -1):
                raise ParseError(f"w1({name.text}) must be +1 or -1, got {sign}", at.line, at.column)
            factor = group.factors[f]
            if sign == -1 and factor.order is not None and factor.order % 2:
                raise ParseError(
                    f"w1({name.text}) = -1 is not a homomorphism: {name.text} has odd order {factor.order}",
                    at.line, at.column,
                )
            w1[f] = sign

    w2 = [0] * module.rank
    if "w2" in fields:
        number, col, value = fields["w2"]
        for name, bit, at in _parse(value, _assignments, number, col):
            if not (name.text.startswith("e") and name.text[1:].isdigit()):
                raise ParseError(f"basis names look like e0, e1, ...; found {name.text!r}", name.line, name.column)
            index = int(name.text[1:])
            if index >= module.rank:
                raise ParseError(f"basis index {name.text} out of range for module {module}", name.line, name.column)
            if bit not in (0, 1):
                raise ParseError(f"w2({name.text}) must be 0 or 1, got {bit}", at.line, at.column)
            w2[index] = bit

    return ManifoldData(group, module, tuple(w1), tuple(w2))


def _circle_rule(X: ManifoldData):
    def rule(s: _Stream) -> Circle:
        for label in ("delta", "disk"):
            tok = s.expect("name", f"`{label} = ...`")
            if tok.text != label:
                raise s.error(f"expected `{label}`, found {tok.text!r}", tok)
            s.expect("=")
            if label == "delta":
                delta = _word(s, X.group)
                s.expect(",")
            else:
                disk = _module(s, X.module, X.group)
        return Circle(delta, disk)

    return rule


def parse_barbell(text: str, X: ManifoldData) -> BarbellDescriptor:
    circles = []
    for number, key, key_col, value, col in _lines(text):
        if key in MANIFOLD_FIELDS:
            continue
        if key != "circle":
            raise ParseError(f"unknown field {key!r}; barbell files hold `circle:` lines", number, key_col)
        circles.append(_parse(value, _circle_rule(X), number, col))
    return BarbellDescriptor(tuple(circles))


# ---------- formatting ----------

def _signed_join(parts: Sequence[Tuple[int, str]]) -> str:
    out = []
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out.append(body if sign > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(out)


def format_module_elem(sigma: ModuleElement) -> str:
    if sigma.is_zero:
        return "0"
    parts = []
    for b, w, c in sigma.terms:
        body = f"(e{b} @ {w})"
        parts.append((1 if c > 0 else -1, body if abs(c) == 1 else f"{abs(c)}*{body}"))
    return _signed_join(parts)


def _format_terms(items) -> str:
    parts = [f"({s}, {format_module_elem(sigma)})[{gamma}]" for s, sigma, gamma in items]
    return " + ".join(parts) if parts else "0"


def format_wh(x: WhElement) -> str:
    return _format_terms((t.s, t.sigma, t.gamma) for t in x.terms)


def format_normal_form(x: WhNormalForm) -> str:
    return _format_terms((e.s, e.sigma, e.key) for e in x.entries)


def format_manifold(X: ManifoldData) -> str:
    lines = [f"group: {X.group}", f"module: {X.module}"]
    odd = [f"{f.name}=-1" for f, sign in zip(X.group.factors, X.w1) if sign == -1]
    if odd:
        lines.append("w1: " + " ".join(odd))
    spin = [f"e{i}=1" for i, bit in enumerate(X.w2) if bit]
    if spin:
        lines.append("w2: " + " ".join(spin))
    return "\n".join(lines)


def format_barbell(b: BarbellDescriptor, X: Optional[ManifoldData] = None) -> str:
    lines = [format_manifold(X)] if X is not None else []
    lines.extend(f"circle: delta = {c.delta}, disk = {format_module_elem(c.disk)}" for c in b.circles)
    return "\n".join(lines)
