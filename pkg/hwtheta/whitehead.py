"""
Wh1(pi_1 M; Z2 x pi_2 M) for pi_1 a free product of cyclic groups.

Elements are formal sums of terms (s, sigma).[gamma] with s in Z2, sigma in
pi_2 and gamma in pi_1. The group is the quotient by

    beta.[1]                                  (identity class dies)
    alpha.[g] - alpha^tau.[tau g tau^-1]      (conjugation transport)

`wh_normalize` computes the canonical representative: one entry per nontrivial
conjugacy class, keyed by the class's canonical word, with the coefficient
transported to that word and reduced to centralizer coinvariants. Two elements
are equal in Wh1 iff their normal forms are identical.

The Z2 part is untouched by transport; only the involution changes it (by w2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from hwtheta.errors import MismatchError, PresentationError, RelationError
from hwtheta.groupwords import (
    GroupPresentation,
    Syllables,
    Word,
    _conjugacy,
    _inv,
    _key,
    _mul,
    centralizer_generator,
    conjugate,
    invert,
    w1_eval,
)
from hwtheta.pi2module import (
    ModuleElement,
    ModuleSpec,
    RawTerms,
    _orbit_canonical_raw,
    act,
    mod_neg,
    mod_scale,
    w2_eval,
)

logger = logging.getLogger(__name__)

KILL_IDENTITY = "kill-identity"
CONJUGATE_TRANSPORT = "conjugate-transport"
RELATION_CHOICES = (KILL_IDENTITY, CONJUGATE_TRANSPORT)


@dataclass(frozen=True)
class ManifoldData:
    """pi_1, pi_2 and the Stiefel-Whitney data the involution needs."""

    group: GroupPresentation
    module: ModuleSpec
    w1: Tuple[int, ...] = None  # one sign per factor generator
    w2: Tuple[int, ...] = None  # one bit per basis element

    def __post_init__(self):
        w1 = tuple(self.w1) if self.w1 is not None else (1,) * len(self.group.factors)
        w2 = tuple(self.w2) if self.w2 is not None else (0,) * self.module.rank
        if len(w1) != len(self.group.factors):
            raise PresentationError(f"w1 needs {len(self.group.factors)} value(s), got {len(w1)}")
        if len(w2) != self.module.rank:
            raise PresentationError(f"w2 needs {self.module.rank} value(s), got {len(w2)}")
        for factor, sign in zip(self.group.factors, w1):
            if sign not in (1, -1):
                raise PresentationError(f"w1({factor.name}) must be +1 or -1, got {sign}")
            if sign == -1 and factor.order is not None and factor.order % 2:
                raise PresentationError(
                    f"w1({factor.name}) = -1 is not a homomorphism: {factor.name} has odd order {factor.order}"
                )
        for i, bit in enumerate(w2):
            if bit not in (0, 1):
                raise PresentationError(f"w2(e{i}) must be 0 or 1, got {bit}")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @property
    def is_orientable(self) -> bool:
        return all(sign == 1 for sign in self.w1)

    def identity(self) -> Word:
        return self.group.identity()

    def zero_module(self) -> ModuleElement:
        return ModuleElement.zero(self.module, self.group)


@dataclass(frozen=True)
class WhTerm:
    s: int
    sigma: ModuleElement
    gamma: Word

    def __post_init__(self):
        if self.s not in (0, 1):
            object.__setattr__(self, "s", self.s % 2)
        if self.sigma.group is not self.gamma.group and self.sigma.group != self.gamma.group:
            raise MismatchError("term coefficient and class use different presentations")


@dataclass(frozen=True)
class WhElement:
    manifold: ManifoldData
    terms: Tuple[WhTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            _check_term(t, self.manifold)

    def __add__(self, other):
        return wh_add(self, other)

    def __neg__(self):
        return wh_neg(self)

    def __sub__(self, other):
        return wh_add(self, wh_neg(other))


@dataclass(frozen=True)
class WhEntry:
    key: Word
    s: int
    sigma: ModuleElement


@dataclass(frozen=True)
class WhNormalForm:
    manifold: ManifoldData
    entries: Tuple[WhEntry, ...] = field(default_factory=tuple)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def to_element(self) -> WhElement:
        return WhElement(self.manifold, tuple(WhTerm(e.s, e.sigma, e.key) for e in self.entries))

    def __str__(self):
        from hwtheta.textio import format_normal_form

        return format_normal_form(self)


def _check_term(t: WhTerm, X: ManifoldData):
    if t.gamma.group is not X.group and t.gamma.group != X.group:
        raise MismatchError("term class uses a different presentation than the manifold")
    if t.sigma.spec != X.module:
        raise MismatchError(f"term coefficient lives in {t.sigma.spec}, manifold has {X.module}")


def _check_manifold(x: WhElement, X: Optional[ManifoldData]) -> ManifoldData:
    if X is None:
        return x.manifold
    if x.manifold is not X and x.manifold != X:
        raise MismatchError("element and manifold data differ")
    return X


def term(s: int, sigma: ModuleElement, gamma: Word, X: ManifoldData) -> WhElement:
    return WhElement(X, (WhTerm(s, sigma, gamma),))


def wh_zero(X: ManifoldData) -> WhElement:
    return WhElement(X, ())


def wh_add(x: WhElement, y: WhElement) -> WhElement:
    _check_manifold(y, x.manifold)
    return WhElement(x.manifold, x.terms + y.terms)


def wh_neg(x: WhElement) -> WhElement:
    return WhElement(x.manifold, tuple(WhTerm(t.s, mod_neg(t.sigma), t.gamma) for t in x.terms))


def wh_scale(n: int, x: WhElement) -> WhElement:
    """n-fold sum of x (s scales mod 2)."""
    return WhElement(x.manifold, tuple(WhTerm((n * t.s) % 2, mod_scale(n, t.sigma), t.gamma) for t in x.terms))


def wh_sum(elements: Iterable[WhElement], X: ManifoldData) -> WhElement:
    out = wh_zero(X)
    for x in elements:
        out = wh_add(out, x)
    return out


def wh_normalize(x: WhElement, X: Optional[ManifoldData] = None) -> WhNormalForm:
    X = _check_manifold(x, X)
    orders = X.group.orders
    conj_cache: Dict[Syllables, Tuple[Syllables, Syllables]] = {}
    classes: Dict[Syllables, List] = {}

    for t in x.terms:
        gamma = t.gamma.syllables
        if not gamma:
            continue
        found = conj_cache.get(gamma)
        if found is None:
            canon, tau = _conjugacy(gamma, orders)
            found = conj_cache[gamma] = (canon, _inv(tau, orders))
        canon, tau_inv = found
        slot = classes.get(canon)
        if slot is None:
            slot = classes[canon] = [0, {}]
        slot[0] ^= t.s
        raw: RawTerms = slot[1]
        for b, g, c in t.sigma.terms:
            key = (b, _mul(tau_inv, g.syllables, orders) if tau_inv else g.syllables)
            raw[key] = raw.get(key, 0) + c

    entries = []
    for canon in sorted(classes, key=lambda syl: _key(syl, orders)):
        s, raw = classes[canon]
        key = Word(X.group, canon)
        reduced = _orbit_canonical_raw(raw, centralizer_generator(key))
        sigma = ModuleElement.from_raw(X.module, X.group, reduced)
        if s or not sigma.is_zero:
            entries.append(WhEntry(key, s, sigma))
    logger.debug("normalized %d term(s) into %d class(es), %d nonzero", len(x.terms), len(classes), len(entries))
    return WhNormalForm(X, tuple(entries))


def wh_equal(x: WhElement, y: WhElement, X: Optional[ManifoldData] = None) -> bool:
    X = _check_manifold(x, X)
    _check_manifold(y, X)
    return wh_normalize(x, X) == wh_normalize(y, X)


def involute(x: WhElement, X: Optional[ManifoldData] = None) -> WhElement:
    """(n, sigma).[g] -> (n + w2(sigma), -w1(g) sigma^(g^-1)).[g^-1], left unnormalized."""
    X = _check_manifold(x, X)
    out = []
    for t in x.terms:
        g_inv = invert(t.gamma)
        sigma = mod_scale(-w1_eval(t.gamma, X), act(g_inv, t.sigma))
        out.append(WhTerm((t.s + w2_eval(t.sigma, X)) % 2, sigma, g_inv))
    return WhElement(X, tuple(out))


def apply_relation(x: WhElement, choice: str, term_index: int, tau: Optional[Word] = None) -> WhElement:
    """Rewrite one term by a defining relation; the result equals x in Wh1."""
    if not 0 <= term_index < len(x.terms):
        raise RelationError(f"term index {term_index} out of range for {len(x.terms)} term(s)")
    t = x.terms[term_index]
    if choice == KILL_IDENTITY:
        if not t.gamma.is_identity:
            raise RelationError(f"kill-identity needs an identity-class term, term {term_index} sits at [{t.gamma}]")
        return WhElement(x.manifold, x.terms[:term_index] + x.terms[term_index + 1:])
    if choice == CONJUGATE_TRANSPORT:
        if tau is None:
            raise RelationError("conjugate-transport needs a conjugating word")
        moved = WhTerm(t.s, act(tau, t.sigma), conjugate(tau, t.gamma))
        return WhElement(x.manifold, x.terms[:term_index] + (moved,) + x.terms[term_index + 1:])
    raise RelationError(f"unknown relation {choice!r}; expected one of {', '.join(RELATION_CHOICES)}")
