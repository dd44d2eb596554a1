import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwtheta.barbell import (
    BarbellDescriptor,
    Circle,
    add_meridian_terms,
    cerf_element,
    circle_manifold,
    delta_k,
    in_barbell_subgroup,
    induced_cerf_data,
    realization_route,
    realize,
    realize_composite,
    sigma_invariant,
    theta,
    theta_cerf,
    theta_element,
    theta_g,
    theta_special,
    theta_sum,
)
from hwtheta.errors import HWThetaError, MismatchError, PresentationError, RealizationError
from hwtheta.pi2module import ModuleSpec
from hwtheta.textio import format_normal_form, parse_barbell, parse_module_elem, parse_wh, parse_word, parse_words
from hwtheta.whitehead import ManifoldData, WhElement, WhTerm, involute, wh_neg, wh_normalize

from strategies import F2, FREE, ZZ2, characteristic_data, descriptors, module_elements, words

X = FREE
ODD = ManifoldData(F2, ModuleSpec(1), w2=(1,))

TWO_CIRCLES = """
circle: delta = a*b, disk = (e0 @ 1)
circle: delta = b^-1, disk = 2*(e0 @ a) - (e0 @ b)
"""


@pytest.mark.parametrize("k", range(1, 11))
def test_delta_k_has_vanishing_theta(k):
    M, b = delta_k(k)
    assert format_normal_form(theta(b, M)) == "0"
    assert format_normal_form(theta_g(b, M)) == "0"


def test_delta_k_descriptor():
    M, b = delta_k(4)
    assert M == circle_manifold()
    assert [str(c.delta) for c in b.circles] == ["t^3"]
    assert b.circles[0].disk.is_zero
    with pytest.raises(PresentationError):
        delta_k(0)


def test_theta_of_two_circles():
    b = parse_barbell(TWO_CIRCLES, X)
    assert format_normal_form(theta(b, X)) == "(0, -(e0 @ 1) + 2*(e0 @ a))[b^-1] + (0, (e0 @ 1))[a*b]"
    assert sigma_invariant(b) == 0


def test_theta_g_of_two_circles():
    b = parse_barbell(TWO_CIRCLES, X)
    assert format_normal_form(theta_g(b, X)) == "(0, -(e0 @ 1) + 2*(e0 @ a))[b] + (0, (e0 @ a^-1))[a^-1*b^-1]"


@given(data=st.data())
def test_theta_g_pairs_with_theta(data):
    M = data.draw(characteristic_data(ZZ2, ModuleSpec(1)))
    b = data.draw(descriptors(M))
    lhs = wh_normalize(involute(theta_g(b, M).to_element()))
    assert lhs == wh_normalize(wh_neg(theta_element(b, M)))


@pytest.mark.parametrize("M", [X, ODD], ids=["even", "odd"])
@given(data=st.data())
def test_realize_hits_the_target(M, data):
    sigma = data.draw(module_elements(M.module, M.group, 5, 8))
    alpha = data.draw(words(M.group, 8))
    b = realize(sigma, alpha, M)
    expected = wh_normalize(WhElement(M, (WhTerm(0, sigma, alpha),)))
    assert theta(b, M) == expected


def test_realization_route():
    sigma = parse_module_elem("(e0 @ a)", X)
    assert realization_route(sigma, X) == "framed"
    assert realization_route(parse_module_elem("(e0 @ a)", ODD), ODD) == "odd-tube"
    assert realization_route(parse_module_elem("2*(e0 @ a)", ODD), ODD) == "framed"


def test_theta_special():
    sigma = parse_module_elem("(e0 @ 1)", X)
    out = theta_special(sigma, parse_words("a; b*a*b^-1; b", X), X)
    assert format_normal_form(out) == "(0, (e0 @ 1) + (e0 @ b^-1))[a] + (0, (e0 @ 1))[b]"
    assert theta_special(sigma, [], X).is_zero


@given(descriptors(X))
def test_cerf_data_round_trip(b):
    data = induced_cerf_data(b)
    assert all(e.s == 0 for e in data.entries)
    assert theta_cerf(data, X) == theta(b, X)
    assert wh_normalize(cerf_element(data, X)) == theta(b, X)


@given(data=st.data())
def test_theta_ignores_circle_order(data):
    b = data.draw(descriptors(X, max_circles=5))
    shuffled = BarbellDescriptor(tuple(data.draw(st.permutations(b.circles))))
    assert theta(shuffled, X) == theta(b, X)
    assert theta_g(shuffled, X) == theta_g(b, X)


@given(descriptors(X), st.lists(words(F2, 6), max_size=10))
def test_meridians_do_not_change_theta(b, deltas):
    out = add_meridian_terms(b, len(deltas), deltas, X)
    assert len(out.circles) == len(b.circles) + len(deltas)
    assert theta(out, X) == theta(b, X)


def test_meridians_on_an_empty_barbell():
    out = add_meridian_terms(BarbellDescriptor(), 3, parse_words("a; b; a*b", X), X)
    assert [c.disk.spec for c in out.circles] == [X.module] * 3
    assert theta(out, X).is_zero
    assert theta_g(out, X).is_zero


def test_add_meridian_terms_checks_lengths():
    with pytest.raises(MismatchError):
        add_meridian_terms(BarbellDescriptor(), 2, [parse_word("a", X)], X)
    with pytest.raises(HWThetaError):
        add_meridian_terms(BarbellDescriptor(), -1, [], X)
    assert add_meridian_terms(BarbellDescriptor(), 0, [], X) == BarbellDescriptor()


def test_theta_sum_adds():
    b1 = parse_barbell("circle: delta = a, disk = (e0 @ 1)", X)
    b2 = parse_barbell("circle: delta = b*a*b^-1, disk = -(e0 @ b)", X)
    assert theta_sum([b1, b2], X).is_zero
    assert theta_sum([b1, b1], X) == wh_normalize(parse_wh("2*(0, (e0 @ 1))[a]", X))


def test_barbell_subgroup_and_composite_realization():
    x = wh_normalize(parse_wh("(0, (e0 @ 1))[a*b] + (0, 3*(e0 @ b))[a]", X))
    assert in_barbell_subgroup(x)
    parts = realize_composite(x)
    assert len(parts) == 2
    assert theta_sum(parts, X) == x

    odd = wh_normalize(parse_wh("(1, 0)[a]", X))
    assert not in_barbell_subgroup(odd)
    with pytest.raises(RealizationError):
        realize_composite(odd)
    assert in_barbell_subgroup(wh_normalize(parse_wh("(1, 0)[a]", ODD)))


def test_descriptor_must_match_manifold():
    other = ManifoldData(F2, ModuleSpec(2))
    b = parse_barbell("circle: delta = a, disk = (e1 @ 1)", other)
    with pytest.raises(MismatchError):
        theta(b, X)
