import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwtheta.barbell import delta_k
from hwtheta.errors import ParseError
from hwtheta.pi2module import ModuleSpec
from hwtheta.textio import (
    format_barbell,
    format_manifold,
    format_module_elem,
    format_normal_form,
    format_wh,
    parse_barbell,
    parse_manifold,
    parse_module_elem,
    parse_wh,
    parse_word,
    parse_words,
    tokenize,
)
from hwtheta.whitehead import wh_normalize
from strategies import characteristic_data, module_elements, wh_elements, words

MIXED = """
# a comment line
group: Z(a) * Zmod(3)(b)
module: free(2)   # trailing comment
w2: e1=1
"""


@pytest.fixture
def X():
    return parse_manifold(MIXED)


def test_parse_manifold(X):
    assert str(X.group) == "Z(a)*Zmod(3)(b)"
    assert X.module == ModuleSpec(2)
    assert X.w1 == (1, 1)
    assert X.w2 == (0, 1)


def test_parse_manifold_trivial_group():
    M = parse_manifold("group: 1\nmodule: zero\n")
    assert M.group.is_trivial and M.module.rank == 0


def test_parse_manifold_w1():
    M = parse_manifold("group: Z(a)*Zmod(2)(b)\nmodule: zero\nw1: a=-1, b=-1\n")
    assert M.w1 == (-1, -1)


@pytest.mark.parametrize(
    "text,message,line,column",
    [
        ("group: Z(a)*Zmod(3)(b)\nmodule: free(1)\nw1: b=-1\n", "odd order 3", 3, 7),
        ("group: Z(a)\nmodule:\n", "missing value for field 'module'", 2, 8),
        ("group: Z(a)\n", "missing field 'module'", 2, 1),
        ("group: Z(a)*Z(a)\nmodule: zero\n", "duplicate generator name 'a'", 1, 8),
        ("group: Z(a)\nmodule: free(1)\nw2: e1=1\n", "out of range", 3, 5),
        ("group: Z(a)\nmodule: zero\nw1: c=-1\n", "unknown generator 'c'", 3, 5),
        ("group: Zmod(1)(a)\nmodule: zero\n", "finite order must be >= 2", 1, 13),
        ("group: Z(a)\nmodule: free(0)\n", "rank must be >= 1", 2, 14),
        ("group: Q(a)\nmodule: zero\n", "unknown factor 'Q'", 1, 8),
        ("group: Z(a)\nmodule: zero\ncolor: red\n", "unknown field 'color'", 3, 1),
        ("group: Z(a)\ngroup: Z(b)\nmodule: zero\n", "given twice", 2, 1),
        ("group Z(a)\n", "expected `<field>: <value>`", 1, 1),
    ],
)
def test_parse_manifold_errors(text, message, line, column):
    with pytest.raises(ParseError) as info:
        parse_manifold(text)
    assert message in info.value.message
    assert (info.value.line, info.value.column) == (line, column)


def test_parse_word(X):
    w = parse_word("a^2*b^-1", X)
    assert w.syllables == ((0, 2), (1, 2))
    assert parse_word("1", X).is_identity
    assert parse_word(" a * a^-1 ", X).is_identity
    assert parse_word("b^4", X) == parse_word("b", X)


@pytest.mark.parametrize(
    "text,column",
    [("a*c", 3), ("a^0", 3), ("a*", 3), ("2", 1), ("a b", 3), ("a^", 3)],
)
def test_parse_word_errors(X, text, column):
    with pytest.raises(ParseError) as info:
        parse_word(text, X)
    assert info.value.column == column


def test_parse_words(X):
    assert [str(w) for w in parse_words("a; b*a ;1", X)] == ["a", "b*a", "1"]
    assert parse_words("", X) == []
    with pytest.raises(ParseError) as info:
        parse_words("a;b*z", X)
    assert info.value.column == 5


def test_parse_module_elem(X):
    sigma = parse_module_elem("2*(e0 @ a*b) - (e1 @ 1)", X)
    assert [(b, str(w), c) for b, w, c in sigma.terms] == [(0, "a*b", 2), (1, "1", -1)]
    assert parse_module_elem("0", X).is_zero
    assert parse_module_elem("(e0 @ a) - (e0 @ a)", X).is_zero
    assert parse_module_elem("-(e0 @ a) + 0", X) == -parse_module_elem("(e0 @ a)", X)


@pytest.mark.parametrize("text", ["(e2 @ a)", "(x0 @ a)", "(e0 a)", "2 (e0 @ a)", "(e0 @ a) +", "3"])
def test_parse_module_elem_errors(X, text):
    with pytest.raises(ParseError):
        parse_module_elem(text, X)


def test_parse_wh(X):
    x = parse_wh("(1, (e0 @ a))[a*b] - (0, 0)[b]", X)
    assert len(x.terms) == 2
    assert x.terms[0].s == 1 and str(x.terms[0].gamma) == "a*b"
    assert x.terms[1].sigma.is_zero

    k = parse_wh("3*(1, (e0 @ a))[b]", X)
    assert k.terms[0].s == 1
    assert format_module_elem(k.terms[0].sigma) == "3*(e0 @ a)"

    d4 = parse_manifold("group: Z(t)\nmodule: free(1)\n")
    assert str(parse_wh("(0, (e0 @ 1))[t^3]", d4).terms[0].gamma) == "t^3"


@pytest.mark.parametrize("text", ["(2, 0)[a]", "(0, 0)", "(0 0)[a]", "(0, 0)[a] (1, 0)[b]", "[a]"])
def test_parse_wh_errors(X, text):
    with pytest.raises(ParseError):
        parse_wh(text, X)


def test_parse_barbell(X):
    b = parse_barbell(MIXED + "circle: delta = a*b, disk = (e1 @ b^2)\ncircle: delta = 1, disk = 0\n", X)
    assert [str(c.delta) for c in b.circles] == ["a*b", "1"]
    assert format_module_elem(b.circles[0].disk) == "(e1 @ b^2)"
    assert parse_barbell("", X).circles == ()


def test_parse_barbell_errors(X):
    with pytest.raises(ParseError) as info:
        parse_barbell("circle: delta = a, disc = 0\n", X)
    assert (info.value.line, info.value.column) == (1, 20)
    with pytest.raises(ParseError):
        parse_barbell("loop: delta = a, disk = 0\n", X)


def test_tokenize_positions():
    tokens = tokenize("a^2\n  *b")
    assert [(t.kind, t.line, t.column) for t in tokens] == [
        ("name", 1, 1), ("^", 1, 2), ("int", 1, 3), ("*", 2, 3), ("name", 2, 4), ("end", 2, 5),
    ]
    with pytest.raises(ParseError) as info:
        tokenize("a & b")
    assert info.value.column == 3


def test_format_examples(X):
    assert format_module_elem(parse_module_elem("0", X)) == "0"
    assert format_module_elem(parse_module_elem("(e1 @ 1) - 2*(e0 @ a)", X)) == "-2*(e0 @ a) + (e1 @ 1)"
    assert format_wh(parse_wh("0", X)) == "0"
    assert format_manifold(X) == "group: Z(a)*Zmod(3)(b)\nmodule: free(2)\nw2: e1=1"


def test_deltak_document_round_trip():
    M, b = delta_k(4)
    text = format_barbell(b, M)
    assert text == "group: Z(t)\nmodule: zero\ncircle: delta = t^3, disk = 0"
    assert parse_manifold(text) == M
    assert parse_barbell(text, M) == b


BASE = parse_manifold(MIXED)


@given(data=st.data())
def test_round_trips(data):
    M = data.draw(characteristic_data(BASE.group, BASE.module))
    assert parse_manifold(format_manifold(M)) == M

    w = data.draw(words(M.group, 8))
    assert parse_word(str(w), M) == w

    sigma = data.draw(module_elements(M.module, M.group, 4, 6))
    assert parse_module_elem(format_module_elem(sigma), M) == sigma

    x = data.draw(wh_elements(M))
    assert parse_wh(format_wh(x), M) == x

    nf = wh_normalize(x)
    printed = format_normal_form(nf)
    assert format_normal_form(wh_normalize(parse_wh(printed, M))) == printed
    assert str(nf) == printed
