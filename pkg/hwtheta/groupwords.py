"""
Words in free products of cyclic groups.

Every fundamental group the engine handles is a free product of infinite and
finite cyclic factors. Elements are stored as reduced syllable sequences
(factor-index, exponent):

 - exponents are nonzero; finite-cyclic exponents live in 1..m-1
 - adjacent syllables belong to different factors
 - the empty sequence is the identity

The public functions take and return `Word` values. The underscore helpers work
on raw syllable tuples and are what the Whitehead normal form uses in its inner
loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Sequence, Tuple

from hwtheta.errors import MismatchError, PresentationError

if TYPE_CHECKING:
    from hwtheta.whitehead import ManifoldData

Syllables = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class FactorSpec:
    """One cyclic free factor: `Z(name)` when order is None, else `Zmod(order)(name)`."""

    name: str
    order: Optional[int] = None

    def __post_init__(self):
        if not self.name or not self.name.isidentifier():
            raise PresentationError(f"invalid generator name {self.name!r}")
        if self.order is not None and self.order < 2:
            raise PresentationError(f"factor {self.name}: finite order must be >= 2, got {self.order}")

    @property
    def kind(self) -> str:
        return "infinite-cyclic" if self.order is None else "finite-cyclic"

    @property
    def is_finite(self) -> bool:
        return self.order is not None


@dataclass(frozen=True)
class GroupPresentation:
    """Ordered free factors. An empty tuple is the trivial group."""

    factors: Tuple[FactorSpec, ...] = ()

    def __post_init__(self):
        names = [f.name for f in self.factors]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise PresentationError(f"duplicate generator names: {', '.join(dupes)}")

    @property
    def orders(self) -> Tuple[Optional[int], ...]:
        return tuple(f.order for f in self.factors)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def index_of(self, name: str) -> int:
        for i, f in enumerate(self.factors):
            if f.name == name:
                return i
        raise PresentationError(f"unknown generator {name!r}")

    def identity(self) -> "Word":
        return Word(self, ())

    def generator(self, index: int) -> "Word":
        self._check_index(index)
        return Word(self, ((index, 1),))

    def _check_index(self, index: int):
        if not 0 <= index < len(self.factors):
            raise PresentationError(f"factor index {index} out of range for {len(self.factors)} factor(s)")

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(f"Z({f.name})" if f.order is None else f"Zmod({f.order})({f.name})" for f in self.factors)


# ---------- raw syllable arithmetic ----------

def _norm(e: int, m: Optional[int]) -> int:
    return e if m is None else e % m


def _rank(e: int, m: Optional[int]) -> int:
    # 1 < -1 < 2 < -2 < ... for Z; 1 < 2 < ... < m-1 for Z/m
    if m is not None:
        return e
    return 2 * e - 1 if e > 0 else -2 * e


def _reduce(raw: Iterable[Tuple[int, int]], orders: Sequence[Optional[int]]) -> Syllables:
    stack = []
    for f, e in raw:
        e = _norm(e, orders[f])
        if e == 0:
            continue
        if stack and stack[-1][0] == f:
            merged = _norm(stack[-1][1] + e, orders[f])
            if merged == 0:
                stack.pop()
            else:
                stack[-1] = (f, merged)
        else:
            stack.append((f, e))
    return tuple(stack)


def _mul(a: Syllables, b: Syllables, orders: Sequence[Optional[int]]) -> Syllables:
    i, j = len(a), 0
    while i > 0 and j < len(b) and a[i - 1][0] == b[j][0]:
        f = b[j][0]
        merged = _norm(a[i - 1][1] + b[j][1], orders[f])
        if merged:
            return a[:i - 1] + ((f, merged),) + b[j + 1:]
        i -= 1
        j += 1
    return a[:i] + b[j:]


def _inv(a: Syllables, orders: Sequence[Optional[int]]) -> Syllables:
    return tuple((f, _norm(-e, orders[f])) for f, e in reversed(a))


def _key(a: Syllables, orders: Sequence[Optional[int]]):
    return (len(a), tuple((f, _rank(e, orders[f])) for f, e in a))


def _cyclic_reduce(a: Syllables, orders: Sequence[Optional[int]]) -> Tuple[Syllables, Syllables]:
    i, j = 0, len(a) - 1
    while j - i >= 1 and a[i][0] == a[j][0]:
        f = a[i][0]
        if _norm(a[i][1] + a[j][1], orders[f]) == 0:
            i += 1
            j -= 1
            continue
        # x M y = x (M yx) x^-1
        merged = (f, _norm(a[j][1] + a[i][1], orders[f]))
        return a[i + 1:j] + (merged,), a[:i + 1]
    return a[i:j + 1], a[:i]


def _min_rotation(core: Syllables, orders: Sequence[Optional[int]]) -> int:
    n = len(core)
    if n <= 1:
        return 0
    ranks = tuple((f, _rank(e, orders[f])) for f, e in core)
    doubled = ranks + ranks
    return min(range(n), key=lambda i: doubled[i:i + n])


def _conjugacy(a: Syllables, orders: Sequence[Optional[int]]) -> Tuple[Syllables, Syllables]:
    """(canonical, conjugator) with a = conjugator * canonical * conjugator^-1."""
    core, peel = _cyclic_reduce(a, orders)
    i = _min_rotation(core, orders)
    if i == 0:
        return core, peel
    return core[i:] + core[:i], _mul(peel, core[:i], orders)


def _period(core: Syllables) -> int:
    n = len(core)
    for p in range(1, n + 1):
        if n % p == 0 and core[p:] + core[:p] == core:
            return p
    return n


# ---------- public API ----------

@dataclass(frozen=True)
class Word:
    group: GroupPresentation
    syllables: Syllables = ()

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self):
        return len(self.syllables)

    @property
    def sort_key(self):
        return _key(self.syllables, self.group.orders)

    def __lt__(self, other: "Word"):
        _check_same(self, other)
        return self.sort_key < other.sort_key

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __str__(self):
        if not self.syllables:
            return "1"
        parts = []
        for f, e in self.syllables:
            name = self.group.factors[f].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


@dataclass(frozen=True)
class ConjugacyData:
    canonical: Word
    conjugator: Word


@dataclass(frozen=True)
class CentralizerGen:
    generator: Word
    order: Optional[int] = None  # None: infinite

    @property
    def is_infinite(self) -> bool:
        return self.order is None


def _check_same(u: Word, v: Word):
    if u.group is not v.group and u.group != v.group:
        raise MismatchError("words belong to different presentations")


def word_normalize(raw: Iterable[Tuple[int, int]], G: GroupPresentation) -> Word:
    raw = list(raw)
    for f, _ in raw:
        G._check_index(f)
    return Word(G, _reduce(raw, G.orders))


def multiply(u: Word, v: Word) -> Word:
    _check_same(u, v)
    return Word(u.group, _mul(u.syllables, v.syllables, u.group.orders))


def invert(u: Word) -> Word:
    return Word(u.group, _inv(u.syllables, u.group.orders))


def power(u: Word, k: int) -> Word:
    base = u if k >= 0 else invert(u)
    out = u.group.identity()
    for _ in range(abs(k)):
        out = multiply(out, base)
    return out


def conjugate(tau: Word, w: Word) -> Word:
    """tau * w * tau^-1"""
    return multiply(multiply(tau, w), invert(tau))


def word_compare(u: Word, v: Word) -> int:
    """Shortlex comparison: -1 (less), 0 (equal) or 1 (greater)."""
    _check_same(u, v)
    ku, kv = u.sort_key, v.sort_key
    return (ku > kv) - (ku < kv)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    core, conj = _cyclic_reduce(w.syllables, w.group.orders)
    return Word(w.group, core), Word(w.group, conj)


def conjugacy_rep(w: Word) -> ConjugacyData:
    canonical, conj = _conjugacy(w.syllables, w.group.orders)
    return ConjugacyData(Word(w.group, canonical), Word(w.group, conj))


def primitive_root(w: Word) -> Tuple[Word, int]:
    if w.is_identity:
        raise PresentationError("primitive_root of the identity is undefined")
    syl = w.syllables
    if len(syl) == 1:
        f, e = syl[0]
        if w.group.factors[f].is_finite:
            return Word(w.group, ((f, 1),)), e
        return Word(w.group, ((f, 1 if e > 0 else -1),)), abs(e)
    p = _period(syl)
    return Word(w.group, syl[:p]), len(syl) // p


def centralizer_generator(w: Word) -> CentralizerGen:
    if w.is_identity:
        raise PresentationError("the centralizer of the identity is the whole group")
    if len(w.syllables) == 1:
        f = w.syllables[0][0]
        return CentralizerGen(w.group.generator(f), w.group.factors[f].order)
    root, _ = primitive_root(w)
    return CentralizerGen(root, None)


def w1_eval(w: Word, X: "ManifoldData") -> int:
    if w.group is not X.group and w.group != X.group:
        raise MismatchError("word and manifold use different presentations")
    odd = sum(e for f, e in w.syllables if X.w1[f] == -1) % 2
    return -1 if odd else 1
