"""
Theta evaluators for half-unknotted (immersed) barbell diffeomorphisms.

A barbell is consumed as the combinatorial data of its intersection circles
with the 3-ball bounded by the unknotted sphere: for circle i a path delta_i
from the base point to the circle and the class D_i of the cut-off disk. Then

    Theta(f_beta) = sum_i (0, D_i^delta_i).[delta_i]

and Sigma(f_beta) = 0 (single-eye Cerf diagram, no handle slides).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from hwtheta.errors import MismatchError, PresentationError, RealizationError
from hwtheta.groupwords import FactorSpec, GroupPresentation, Word, invert
from hwtheta.pi2module import ModuleElement, ModuleSpec, act, w2_eval
from hwtheta.whitehead import (
    ManifoldData,
    WhElement,
    WhNormalForm,
    WhTerm,
    involute,
    wh_neg,
    wh_normalize,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Circle:
    delta: Word
    disk: ModuleElement


@dataclass(frozen=True)
class BarbellDescriptor:
    circles: Tuple[Circle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "circles", tuple(self.circles))


@dataclass(frozen=True)
class CerfEntry:
    s: int
    beta_star: ModuleElement
    gamma_star: Word


@dataclass(frozen=True)
class CerfIntersectionData:
    entries: Tuple[CerfEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))


def _check_descriptor(b: BarbellDescriptor, X: ManifoldData):
    for i, c in enumerate(b.circles):
        if c.delta.group is not X.group and c.delta.group != X.group:
            raise MismatchError(f"circle {i}: path uses a different presentation than the manifold")
        if c.disk.spec != X.module or (c.disk.group is not X.group and c.disk.group != X.group):
            raise MismatchError(f"circle {i}: disk class does not live in pi_2 of the manifold")


def sigma_invariant(b: BarbellDescriptor) -> int:
    """First Hatcher-Wagoner invariant of f_beta; always 0 in Wh2."""
    return 0


def induced_cerf_data(b: BarbellDescriptor) -> CerfIntersectionData:
    return CerfIntersectionData(tuple(CerfEntry(0, act(c.delta, c.disk), c.delta) for c in b.circles))


def cerf_element(d: CerfIntersectionData, X: ManifoldData) -> WhElement:
    return WhElement(X, tuple(WhTerm(e.s, e.beta_star, e.gamma_star) for e in d.entries))


def theta_element(b: BarbellDescriptor, X: ManifoldData) -> WhElement:
    """The unnormalized sum of (0, D_i^delta_i).[delta_i]."""
    _check_descriptor(b, X)
    return cerf_element(induced_cerf_data(b), X)


def theta(b: BarbellDescriptor, X: ManifoldData) -> WhNormalForm:
    return wh_normalize(theta_element(b, X), X)


def theta_cerf(d: CerfIntersectionData, X: ManifoldData) -> WhNormalForm:
    return wh_normalize(cerf_element(d, X), X)


def theta_special(sigma: ModuleElement, gammas: Sequence[Word], X: ManifoldData) -> WhNormalForm:
    """(0, [R_0^gamma]) . sum_i [gamma_i] for a sphere disjoint from the ball."""
    return wh_normalize(WhElement(X, tuple(WhTerm(0, sigma, g) for g in gammas)), X)


def theta_g(b: BarbellDescriptor, X: ManifoldData) -> WhNormalForm:
    """Theta of the (1,2)-eye pseudo-isotopy g_beta: minus the involute of Theta(f_beta)."""
    return wh_normalize(wh_neg(involute(theta_element(b, X), X)), X)


def theta_sum(descriptors: Iterable[BarbellDescriptor], X: ManifoldData) -> WhNormalForm:
    """Theta of the composition of the f_beta's."""
    terms: List[WhTerm] = []
    for b in descriptors:
        terms.extend(theta_element(b, X).terms)
    return wh_normalize(WhElement(X, tuple(terms)), X)


def circle_manifold() -> ManifoldData:
    """S^1 x D^3: pi_1 = Z(t), pi_2 = 0, orientable and spin."""
    return ManifoldData(GroupPresentation((FactorSpec("t"),)), ModuleSpec(0))


def delta_k(k: int) -> Tuple[ManifoldData, BarbellDescriptor]:
    """The barbell delta_k in S^1 x D^3: one circle at t^(k-1) with a null disk."""
    if k < 1:
        raise PresentationError(f"delta_k needs k >= 1, got {k}")
    X = circle_manifold()
    delta = Word(X.group, ((0, k - 1),)) if k > 1 else X.identity()
    return X, BarbellDescriptor((Circle(delta, X.zero_module()),))


def realize(sigma: ModuleElement, alpha: Word, X: ManifoldData) -> BarbellDescriptor:
    """A descriptor whose Theta is (0, sigma).[alpha]."""
    b = BarbellDescriptor((Circle(alpha, act(invert(alpha), sigma)),))
    _check_descriptor(b, X)
    return b


def realization_route(sigma: ModuleElement, X: ManifoldData) -> str:
    """`framed` for an even sphere (interior twists), `odd-tube` when it must be tubed to an odd one."""
    return "framed" if w2_eval(sigma, X) == 0 else "odd-tube"


def add_meridian_terms(b: BarbellDescriptor, n: int, deltas: Sequence[Word], X: ManifoldData) -> BarbellDescriptor:
    """Append n meridian circles (null disks) created by immersed self-intersections."""
    if n < 0 or len(deltas) != n:
        raise MismatchError(f"add_meridian_terms: expected {n} path(s), got {len(deltas)}")
    _check_descriptor(b, X)
    for d in deltas:
        if d.group is not X.group and d.group != X.group:
            raise MismatchError("meridian path uses a different presentation")
    zero = X.zero_module()
    return BarbellDescriptor(b.circles + tuple(Circle(d, zero) for d in deltas))


def in_barbell_subgroup(x: WhNormalForm) -> bool:
    """Is x in the subgroup generated by (s, sigma).[g] with s = 0 or w2(sigma) = 1?"""
    X = x.manifold
    if any(X.w2):
        return True
    return all(e.s == 0 for e in x.entries)


def realize_composite(x: WhNormalForm) -> List[BarbellDescriptor]:
    """One realized barbell per entry; their thetas add up to x."""
    bad = [str(e.key) for e in x.entries if e.s]
    if bad:
        raise RealizationError(f"classes with nonzero Z2 part are not barbell thetas: {', '.join(bad)}")
    X = x.manifold
    out = [realize(e.sigma, e.key, X) for e in x.entries]
    logger.info("realized %d class(es) by barbells", len(out))
    return out
