"""
Independent correctness checks for the Wh1 normal form.

Two oracles:

 - lattice: for pi_1 = Z/m the group ring is finite, so Wh1 is an explicit
   quotient of a finite-rank integer lattice. Equality becomes membership of a
   difference vector in the relation lattice, decided exactly from a Hermite
   basis (sympy, integer domain).
 - walk: for any supported group, apply random sound relation moves. The
   normal form must not change along the walk. This only ever certifies
   equalities.

All randomness goes through `random.Random(seed)` (Mersenne Twister), so a seed
reproduces a run on every platform.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_form

from hwtheta.errors import MismatchError, PresentationError
from hwtheta.groupwords import FactorSpec, GroupPresentation, Word
from hwtheta.pi2module import ModuleElement, ModuleSpec
from hwtheta.whitehead import (
    CONJUGATE_TRANSPORT,
    KILL_IDENTITY,
    ManifoldData,
    WhElement,
    WhTerm,
    apply_relation,
    wh_add,
    wh_equal,
    wh_normalize,
)

logger = logging.getLogger(__name__)


# ---------- random values ----------

def random_word(G: GroupPresentation, rng: random.Random, max_len: int = 6) -> Word:
    if G.is_trivial:
        return G.identity()
    n = len(G.factors)
    length = rng.randint(0, max_len if n > 1 else min(max_len, 1))
    syl = []
    prev = None
    for _ in range(length):
        f = rng.choice([i for i in range(n) if i != prev])
        m = G.factors[f].order
        e = rng.randrange(1, m) if m is not None else rng.choice((-3, -2, -1, 1, 2, 3))
        syl.append((f, e))
        prev = f
    return Word(G, tuple(syl))


def random_module_element(
    spec: ModuleSpec, G: GroupPresentation, rng: random.Random, max_terms: int = 3, max_len: int = 4
) -> ModuleElement:
    if spec.rank == 0:
        return ModuleElement.zero(spec, G)
    terms = [
        (rng.randrange(spec.rank), random_word(G, rng, max_len), rng.choice((-3, -2, -1, 1, 2, 3)))
        for _ in range(rng.randint(0, max_terms))
    ]
    return ModuleElement.from_terms(spec, G, terms)


def random_wh_element(
    X: ManifoldData, rng: random.Random, max_terms: int = 4, max_len: int = 6, module_terms: int = 3
) -> WhElement:
    terms = [
        WhTerm(rng.randint(0, 1), random_module_element(X.module, X.group, rng, module_terms, max_len),
               random_word(X.group, rng, max_len))
        for _ in range(rng.randint(0, max_terms))
    ]
    return WhElement(X, tuple(terms))


def random_characteristic_data(group: GroupPresentation, module: ModuleSpec, rng: random.Random) -> ManifoldData:
    """Random w1/w2 that still define a valid ManifoldData."""
    w1 = tuple(
        1 if (f.order is not None and f.order % 2) else rng.choice((1, -1))
        for f in group.factors
    )
    w2 = tuple(rng.randint(0, 1) for _ in range(module.rank))
    return ManifoldData(group, module, w1, w2)


# ---------- relation walk ----------

def _random_move(x: WhElement, X: ManifoldData, rng: random.Random, word_length: int) -> Tuple[str, WhElement]:
    terms = x.terms
    roll = rng.random()
    if roll < 0.4:
        if not terms:
            return "skip", x
        tau = random_word(X.group, rng, word_length)
        return "transport", apply_relation(x, CONJUGATE_TRANSPORT, rng.randrange(len(terms)), tau)
    if roll < 0.5:
        idle = [i for i, t in enumerate(terms) if t.gamma.is_identity]
        if not idle:
            return "skip", x
        return "kill", apply_relation(x, KILL_IDENTITY, rng.choice(idle))
    if roll < 0.6:
        junk = WhTerm(rng.randint(0, 1), random_module_element(X.module, X.group, rng), X.identity())
        at = rng.randint(0, len(terms))
        return "insert", WhElement(X, terms[:at] + (junk,) + terms[at:])
    if roll < 0.75:
        if not terms:
            return "skip", x
        i = rng.randrange(len(terms))
        t = terms[i]
        s1 = rng.randint(0, 1)
        part = random_module_element(X.module, X.group, rng)
        pieces = (WhTerm(s1, part, t.gamma), WhTerm(t.s ^ s1, t.sigma - part, t.gamma))
        return "split", WhElement(X, terms[:i] + pieces + terms[i + 1:])
    if roll < 0.9:
        by_class: Dict[Word, List[int]] = {}
        for i, t in enumerate(terms):
            by_class.setdefault(t.gamma, []).append(i)
        pairs = [idx for idx in by_class.values() if len(idx) > 1]
        if not pairs:
            return "skip", x
        i, j = rng.sample(rng.choice(pairs), 2)
        i, j = min(i, j), max(i, j)
        a, b = terms[i], terms[j]
        merged = WhTerm(a.s ^ b.s, a.sigma + b.sigma, a.gamma)
        return "merge", WhElement(X, terms[:i] + (merged,) + terms[i + 1:j] + terms[j + 1:])
    shuffled = list(terms)
    rng.shuffle(shuffled)
    return "shuffle", WhElement(X, tuple(shuffled))


def random_relation_walk(
    x: WhElement, X: ManifoldData, steps: int, seed, word_length: int = 4
) -> WhElement:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    counts: Dict[str, int] = {}
    for _ in range(steps):
        move, x = _random_move(x, X, rng, word_length)
        counts[move] = counts.get(move, 0) + 1
    logger.debug("walk of %d step(s): %s", steps, counts)
    return x


# ---------- finite cyclic lattice model ----------

@dataclass(frozen=True)
class FiniteSetup:
    """pi_1 = Z/m (trivial when m = 1), pi_2 = free(rank) or zero, trivial w."""

    m: int
    rank: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise PresentationError(f"finite setup needs m >= 1, got {self.m}")
        if self.rank < 0:
            raise PresentationError(f"finite setup needs rank >= 0, got {self.rank}")

    @property
    def block(self) -> int:
        # one Z2 coordinate + rank*m module coordinates per group element
        return 1 + self.rank * self.m

    @property
    def dimension(self) -> int:
        return self.m * self.block

    def z2_coord(self, g: int) -> int:
        return g * self.block

    def module_coord(self, g: int, basis: int, h: int) -> int:
        return g * self.block + 1 + basis * self.m + h


@lru_cache(maxsize=None)
def setup_manifold(setup: FiniteSetup) -> ManifoldData:
    factors = () if setup.m == 1 else (FactorSpec("t", setup.m),)
    return ManifoldData(GroupPresentation(factors), ModuleSpec(setup.rank))


def _exponent(w: Word) -> int:
    return w.syllables[0][1] if w.syllables else 0


def vectorize(x: WhElement, setup: FiniteSetup) -> np.ndarray:
    X = setup_manifold(setup)
    if x.manifold != X:
        raise MismatchError(f"element is not over the Z/{setup.m}, rank {setup.rank} setup")
    v = np.zeros(setup.dimension, dtype=object)
    for t in x.terms:
        g = _exponent(t.gamma)
        v[setup.z2_coord(g)] += t.s
        for b, h, c in t.sigma.terms:
            v[setup.module_coord(g, b, _exponent(h))] += c
    return v


def relation_vectors(setup: FiniteSetup) -> List[List[int]]:
    m, n = setup.m, setup.dimension

    def unit(i: int, scale: int = 1) -> List[int]:
        v = [0] * n
        v[i] = scale
        return v

    gens = [unit(c) for c in range(setup.block)]  # beta.[1]
    for g in range(m):
        for tau in range(m):
            conj = (tau + g - tau) % m
            for b in range(setup.rank):
                for h in range(m):
                    # alpha = e_b@h at [g] against alpha^tau = e_b@(tau h) at [tau g tau^-1]
                    moved = setup.module_coord(conj, b, (tau + h) % m)
                    here = setup.module_coord(g, b, h)
                    if moved != here:
                        v = unit(here)
                        v[moved] -= 1
                        gens.append(v)
            # the Z2 unit is fixed by tau and g is central: its relation vector is 0
    gens.extend(unit(setup.z2_coord(g), 2) for g in range(m))
    return gens


@dataclass(frozen=True)
class RelationLattice:
    setup: FiniteSetup
    generators: Tuple[Tuple[int, ...], ...]
    # Hermite basis columns keyed by pivot row (last nonzero entry)
    pivots: Dict[int, Tuple[int, ...]] = field(compare=False)

    @property
    def index(self) -> Optional[int]:
        """|Z^n / L| when finite."""
        if len(self.pivots) < self.setup.dimension:
            return None
        out = 1
        for r, col in self.pivots.items():
            out *= abs(col[r])
        return out


def _matrix(columns: Sequence[Sequence[int]], n: int) -> DomainMatrix:
    rows = [[ZZ(col[i]) for col in columns] for i in range(n)]
    return DomainMatrix(rows, (n, len(columns)), ZZ)


@lru_cache(maxsize=None)
def relation_lattice(setup: FiniteSetup) -> RelationLattice:
    n = setup.dimension
    gens = relation_vectors(setup)
    hnf = hermite_normal_form(_matrix(gens, n)).to_Matrix()
    pivots: Dict[int, Tuple[int, ...]] = {}
    for j in range(hnf.cols):
        col = tuple(int(hnf[i, j]) for i in range(n))
        nonzero = [i for i, c in enumerate(col) if c]
        if not nonzero:
            continue
        r = nonzero[-1]
        if r in pivots:
            raise RuntimeError(f"Hermite basis has two columns ending in row {r}")
        pivots[r] = col
    logger.info("relation lattice for Z/%d, rank %d: dim %d, %d generator(s), %d pivot(s)",
                setup.m, setup.rank, n, len(gens), len(pivots))
    return RelationLattice(setup, tuple(map(tuple, gens)), pivots)


def lattice_contains(lattice: RelationLattice, v: Sequence[int]) -> bool:
    v = [int(c) for c in v]
    for r in range(len(v) - 1, -1, -1):
        if v[r] == 0:
            continue
        col = lattice.pivots.get(r)
        if col is None or v[r] % col[r]:
            return False
        q = v[r] // col[r]
        for i in range(r + 1):
            v[i] -= q * col[i]
    return True


def oracle_equal(x: WhElement, y: WhElement, setup: FiniteSetup) -> bool:
    return lattice_contains(relation_lattice(setup), vectorize(x, setup) - vectorize(y, setup))


def quotient_invariants(setup: FiniteSetup) -> Tuple[int, List[int]]:
    """(free rank, torsion coefficients) of the lattice model of Wh1."""
    n = setup.dimension
    snf = smith_normal_form(_matrix(relation_vectors(setup), n)).to_Matrix()
    diag = [abs(int(snf[i, i])) for i in range(min(snf.rows, snf.cols))]
    nonzero = [d for d in diag if d]
    return n - len(nonzero), sorted(d for d in nonzero if d > 1)


# ---------- agreement runs ----------

@dataclass
class AgreementReport:
    setup: FiniteSetup
    trials: int = 0
    agree: int = 0
    equal_pairs: int = 0
    failures: List[Tuple[WhElement, WhElement]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.agree == self.trials

    def summary(self) -> str:
        return f"agree={self.agree}/{self.trials}"


def _perturbation(X: ManifoldData, setup: FiniteSetup, rng: random.Random, trivial: bool) -> WhElement:
    """A single-term difference; `trivial` picks one that is a relation."""
    G = X.group
    zero = X.zero_module()
    g = random_word(G, rng, 1)
    if trivial:
        kind = rng.randrange(3)
        if kind == 0:
            return WhElement(X, (WhTerm(rng.randint(0, 1), random_module_element(X.module, G, rng), X.identity()),))
        if kind == 1 or setup.rank == 0:
            return WhElement(X, (WhTerm(1, zero, g), WhTerm(1, zero, g)))
        alpha = ModuleElement.basis(X.module, G, rng.randrange(setup.rank), random_word(G, rng, 1))
        tau = random_word(G, rng, 1)
        moved = apply_relation(WhElement(X, (WhTerm(0, alpha, g),)), CONJUGATE_TRANSPORT, 0, tau)
        return wh_add(WhElement(X, (WhTerm(0, alpha, g),)), -moved)
    if setup.rank and rng.random() < 0.5:
        alpha = ModuleElement.basis(X.module, G, rng.randrange(setup.rank), random_word(G, rng, 1))
        return WhElement(X, (WhTerm(0, rng.choice((1, -1)) * alpha, g),))
    return WhElement(X, (WhTerm(1, zero, g),))


def agreement_trial(
    setup: FiniteSetup, rng: random.Random, steps: int = 10, max_terms: int = 4
) -> Tuple[WhElement, WhElement]:
    X = setup_manifold(setup)
    x = random_wh_element(X, rng, max_terms=max_terms, max_len=1, module_terms=3)
    mode = rng.randrange(5)
    if mode == 0:
        return x, random_relation_walk(x, X, steps, rng, word_length=1)
    if mode == 1:
        return x, random_relation_walk(x, X, 1, rng, word_length=1)
    if mode == 2:
        y = random_relation_walk(x, X, 1, rng, word_length=1)
        return x, wh_add(y, _perturbation(X, setup, rng, trivial=False))
    if mode == 3:
        y = random_relation_walk(x, X, 1, rng, word_length=1)
        return x, wh_add(y, _perturbation(X, setup, rng, trivial=True))
    return x, random_wh_element(X, rng, max_terms=max_terms, max_len=1, module_terms=3)


def check_agreement(
    setup: FiniteSetup, trials: int, seed, steps: int = 10, progress=None, max_terms: int = 4
) -> AgreementReport:
    """Compare wh_equal against the lattice oracle on randomized pairs."""
    rng = random.Random(seed)
    report = AgreementReport(setup)
    relation_lattice(setup)
    for _ in range(trials):
        x, y = agreement_trial(setup, rng, steps, max_terms)
        engine = wh_equal(x, y)
        lattice = oracle_equal(x, y, setup)
        report.trials += 1
        report.equal_pairs += engine
        if engine == lattice:
            report.agree += 1
        else:
            report.failures.append((x, y))
            logger.warning("oracle disagreement on Z/%d rank %d: engine=%s lattice=%s",
                           setup.m, setup.rank, engine, lattice)
        if progress is not None:
            progress.update(1)
    return report


def check_walk_invariance(
    X: ManifoldData, trials: int, seed, max_steps: int = 50, word_length: int = 4,
    max_terms: int = 4, max_len: int = 6,
) -> int:
    """Number of random walks (out of `trials`) that left the normal form unchanged."""
    rng = random.Random(seed)
    kept = 0
    for _ in range(trials):
        x = random_wh_element(X, rng, max_terms, max_len)
        y = random_relation_walk(x, X, rng.randint(0, max_steps), rng, word_length)
        kept += wh_normalize(x) == wh_normalize(y)
    return kept
