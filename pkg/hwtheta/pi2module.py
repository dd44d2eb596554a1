"""
pi_2 as a free module over the group ring of pi_1.

A module element is a finitely supported integer combination of pairs
(basis index, group element); e0@g stands for g.e0. The pi_1 action is left
multiplication on the group-ring coordinate, w2 is read off the basis index
only, and `orbit_canonical` picks one coordinate per orbit of a cyclic subgroup
(the coinvariant reduction the Whitehead normal form needs).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import TYPE_CHECKING, Dict, Iterable, Mapping, Optional, Sequence, Tuple

from hwtheta.errors import MismatchError, PresentationError
from hwtheta.groupwords import (
    CentralizerGen,
    GroupPresentation,
    Syllables,
    Word,
    _cyclic_reduce,
    _inv,
    _key,
    _mul,
    _rank,
)

if TYPE_CHECKING:
    from hwtheta.whitehead import ManifoldData

RawTerms = Dict[Tuple[int, Syllables], int]


@dataclass(frozen=True)
class ModuleSpec:
    """`zero` when rank is 0, otherwise `free(rank)` with basis e0..e(rank-1)."""

    rank: int = 0

    def __post_init__(self):
        if self.rank < 0:
            raise PresentationError(f"module rank must be >= 0, got {self.rank}")

    @property
    def kind(self) -> str:
        return "zero" if self.rank == 0 else "free"

    @property
    def basis_names(self) -> Tuple[str, ...]:
        return tuple(f"e{i}" for i in range(self.rank))

    def __str__(self):
        return "zero" if self.rank == 0 else f"free({self.rank})"


@dataclass(frozen=True)
class ModuleElement:
    spec: ModuleSpec
    group: GroupPresentation
    # (basis, word, coefficient), sorted by (basis, word order), no zero coefficients
    terms: Tuple[Tuple[int, Word, int], ...] = ()

    @classmethod
    def zero(cls, spec: ModuleSpec, group: GroupPresentation) -> "ModuleElement":
        return cls(spec, group, ())

    @classmethod
    def from_raw(cls, spec: ModuleSpec, group: GroupPresentation, raw: Mapping[Tuple[int, Syllables], int]):
        orders = group.orders
        items = [(b, syl, c) for (b, syl), c in raw.items() if c]
        for b, _, _ in items:
            if not 0 <= b < spec.rank:
                raise PresentationError(f"basis index e{b} out of range for module {spec}")
        items.sort(key=lambda t: (t[0], _key(t[1], orders)))
        return cls(spec, group, tuple((b, Word(group, syl), c) for b, syl, c in items))

    @classmethod
    def from_terms(cls, spec: ModuleSpec, group: GroupPresentation, terms: Iterable[Tuple[int, Word, int]]):
        raw: RawTerms = {}
        for b, w, c in terms:
            if w.group is not group and w.group != group:
                raise MismatchError("module term word uses a different presentation")
            raw[(b, w.syllables)] = raw.get((b, w.syllables), 0) + c
        return cls.from_raw(spec, group, raw)

    @classmethod
    def basis(cls, spec: ModuleSpec, group: GroupPresentation, index: int, at: Optional[Word] = None):
        at = at if at is not None else group.identity()
        return cls.from_terms(spec, group, [(index, at, 1)])

    def raw(self) -> RawTerms:
        return {(b, w.syllables): c for b, w, c in self.terms}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return mod_add(self, other)

    def __neg__(self):
        return mod_neg(self)

    def __sub__(self, other):
        return mod_add(self, mod_neg(other))

    def __rmul__(self, n: int):
        return mod_scale(n, self)


def _check_same(x: ModuleElement, y: ModuleElement):
    if x.spec != y.spec:
        raise MismatchError(f"module specs differ: {x.spec} vs {y.spec}")
    if x.group is not y.group and x.group != y.group:
        raise MismatchError("module elements use different presentations")


def mod_add(x: ModuleElement, y: ModuleElement) -> ModuleElement:
    _check_same(x, y)
    raw = x.raw()
    for key, c in y.raw().items():
        raw[key] = raw.get(key, 0) + c
    return ModuleElement.from_raw(x.spec, x.group, raw)


def mod_neg(x: ModuleElement) -> ModuleElement:
    return ModuleElement(x.spec, x.group, tuple((b, w, -c) for b, w, c in x.terms))


def mod_scale(n: int, x: ModuleElement) -> ModuleElement:
    if n == 0:
        return ModuleElement.zero(x.spec, x.group)
    return ModuleElement(x.spec, x.group, tuple((b, w, n * c) for b, w, c in x.terms))


def _act_raw(tau: Syllables, raw: Mapping[Tuple[int, Syllables], int], orders) -> RawTerms:
    out: RawTerms = {}
    for (b, g), c in raw.items():
        key = (b, _mul(tau, g, orders))
        out[key] = out.get(key, 0) + c
    return out


def act(tau: Word, sigma: ModuleElement) -> ModuleElement:
    """sigma^tau: every coordinate g becomes tau*g."""
    if tau.group is not sigma.group and tau.group != sigma.group:
        raise MismatchError("acting word uses a different presentation")
    if tau.is_identity:
        return sigma
    return ModuleElement.from_raw(sigma.spec, sigma.group, _act_raw(tau.syllables, sigma.raw(), sigma.group.orders))


def w2_eval(sigma: ModuleElement, X: "ManifoldData") -> int:
    if sigma.spec != X.module:
        raise MismatchError(f"module element over {sigma.spec}, manifold has {X.module}")
    return sum(c * X.w2[b] for b, _, c in sigma.terms) % 2


# ---------- orbit canonicalization ----------

def _single_syllable_min(g: Syllables, f: int, e: int, m: Optional[int]) -> Syllables:
    # orbit of g under <f^e>: only the leading f-syllable of g moves
    j = g[0][1] if g and g[0][0] == f else 0
    rest = g[1:] if j else g
    if m is None:
        step = abs(e)
        r = j % step
        if r == 0:
            return rest
        x = min((r, r - step), key=lambda v: _rank(v, None))
    else:
        d = gcd(e, m)
        x = j % d
        if x == 0:
            return rest
    return ((f, x),) + rest


def _long_min(g: Syllables, z: Syllables, orders: Sequence[Optional[int]]) -> Syllables:
    best, best_key = g, _key(g, orders)
    bound = (2 * len(g)) // len(z)
    zi = _inv(z, orders)
    for step in (z, zi):
        # no cancellation at the junction means every power only gets longer
        if not g or step[-1][0] != g[0][0]:
            continue
        h = g
        for _ in range(bound):
            h = _mul(step, h, orders)
            k = _key(h, orders)
            if k < best_key:
                best, best_key = h, k
    return best


def _finite_min(g: Syllables, z: Syllables, order: int, orders) -> Syllables:
    best, best_key = g, _key(g, orders)
    h = g
    for _ in range(order - 1):
        h = _mul(z, h, orders)
        k = _key(h, orders)
        if k < best_key:
            best, best_key = h, k
    return best


def _orbit_reducer(z: CentralizerGen):
    """Return g -> minimal element of <z>.g on raw syllables."""
    orders = z.generator.group.orders
    syl = z.generator.syllables
    if not syl:
        return lambda g: g
    if len(syl) == 1:
        f, e = syl[0]
        return lambda g: _single_syllable_min(g, f, e, orders[f])
    if z.order is not None:
        return lambda g: _finite_min(g, syl, z.order, orders)
    core, _ = _cyclic_reduce(syl, orders)
    if core != syl:
        raise PresentationError(f"centralizer generator {z.generator} is not cyclically reduced")
    return lambda g: _long_min(g, syl, orders)


def _orbit_canonical_raw(raw: Mapping[Tuple[int, Syllables], int], z: CentralizerGen) -> RawTerms:
    reduce = _orbit_reducer(z)
    out: RawTerms = {}
    for (b, g), c in raw.items():
        key = (b, reduce(g))
        out[key] = out.get(key, 0) + c
    return out


def orbit_canonical(sigma: ModuleElement, z: CentralizerGen) -> ModuleElement:
    if z.generator.group is not sigma.group and z.generator.group != sigma.group:
        raise MismatchError("centralizer generator uses a different presentation")
    return ModuleElement.from_raw(sigma.spec, sigma.group, _orbit_canonical_raw(sigma.raw(), z))
