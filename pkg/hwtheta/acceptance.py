"""
The nine acceptance checks, as functions returning a CriterionResult. Used by
create_acceptance_report.py and by the slow test suite.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import asdict, dataclass
from itertools import product
from typing import Callable, Dict, List, Optional

from hwtheta.barbell import (
    BarbellDescriptor,
    Circle,
    add_meridian_terms,
    delta_k,
    realize,
    theta,
    theta_element,
    theta_g,
)
from hwtheta.groupwords import FactorSpec, GroupPresentation, Word
from hwtheta.oracle import (
    FiniteSetup,
    check_agreement,
    check_walk_invariance,
    random_characteristic_data,
    random_module_element,
    random_wh_element,
    random_word,
)
from hwtheta.pi2module import ModuleElement, ModuleSpec
from hwtheta.textio import format_normal_form
from hwtheta.whitehead import (
    ManifoldData,
    WhElement,
    WhTerm,
    involute,
    wh_neg,
    wh_normalize,
    wh_scale,
    wh_sum,
)

logger = logging.getLogger(__name__)

ORACLE_SETUPS = tuple(FiniteSetup(m, r) for m, r in product((2, 3, 4, 6), (0, 1)))
NORMALIZE_TIME_LIMIT = 2.0
# fixed sizes of the realization and timing checks
REALIZATION_TERMS, REALIZATION_WORD_LENGTH = 5, 8
PERFORMANCE_TERMS, PERFORMANCE_WORD_LENGTH = 2, 32


@dataclass(frozen=True)
class RandomSizes:
    """Sizes of the random words, elements and walks the randomized checks draw."""

    word_length: int = 6
    terms: int = 4
    steps: int = 50
    walk_word_length: int = 4

    @classmethod
    def from_config(cls, cfg: Dict) -> "RandomSizes":
        return cls(cfg["random_word_length"], cfg["random_terms"], cfg["steps"], cfg["walk_word_length"])


DEFAULT_SIZES = RandomSizes()


@dataclass
class CriterionResult:
    name: str
    trials: int
    passed: int
    seconds: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_dict(self) -> Dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def free_manifold(rank: int = 1) -> ManifoldData:
    return ManifoldData(GroupPresentation((FactorSpec("a"), FactorSpec("b"))), ModuleSpec(rank))


def mixed_manifold(order: int, rank: int = 1) -> ManifoldData:
    return ManifoldData(GroupPresentation((FactorSpec("a"), FactorSpec("b", order))), ModuleSpec(rank))


def random_descriptor(
    X: ManifoldData, rng: random.Random, sizes: RandomSizes = DEFAULT_SIZES, max_circles: int = 4
) -> BarbellDescriptor:
    return BarbellDescriptor(tuple(
        Circle(random_word(X.group, rng, sizes.word_length),
               random_module_element(X.module, X.group, rng, sizes.terms, sizes.word_length))
        for _ in range(rng.randint(0, max_circles))
    ))


# ---------- criteria ----------

def delta_vanishing(seed=None, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    ks = range(1, (trials or 10) + 1)
    passed = 0
    for k in ks:
        X, b = delta_k(k)
        passed += format_normal_form(theta(b, X)) == "0"
    return CriterionResult("delta_k vanishing", len(ks), passed)


def realization(seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    rng = random.Random(seed)
    X = free_manifold()
    n = trials or 200
    passed = 0
    for _ in range(n):
        sigma = random_module_element(X.module, X.group, rng, REALIZATION_TERMS, REALIZATION_WORD_LENGTH)
        alpha = random_word(X.group, rng, REALIZATION_WORD_LENGTH)
        expected = WhElement(X, (WhTerm(0, sigma, alpha),))
        passed += theta(realize(sigma, alpha, X), X) == wh_normalize(expected)
    return CriterionResult("realization", n, passed)


def involution(seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    rng = random.Random(seed)
    base = mixed_manifold(2)
    n = trials or 500
    passed = 0
    for _ in range(n):
        X = random_characteristic_data(base.group, base.module, rng)
        x = random_wh_element(X, rng, sizes.terms, sizes.word_length)
        passed += wh_normalize(involute(involute(x))) == wh_normalize(x)
    return CriterionResult("involution", n, passed)


def relation_soundness(seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    n = trials or 1000
    half = n // 2
    walk = (sizes.steps, sizes.walk_word_length, sizes.terms, sizes.word_length)
    kept = check_walk_invariance(free_manifold(), half, seed, *walk)
    kept += check_walk_invariance(mixed_manifold(3), n - half, seed, *walk)
    return CriterionResult("relation soundness", n, kept)


def oracle_agreement(
    seed=7, trials: Optional[int] = None, setups=ORACLE_SETUPS, sizes: RandomSizes = DEFAULT_SIZES
) -> CriterionResult:
    per = trials or 500
    agree, total, details = 0, 0, []
    for setup in setups:
        report = check_agreement(setup, per, seed, max_terms=sizes.terms)
        agree += report.agree
        total += report.trials
        details.append(f"Z/{setup.m} rank {setup.rank}: {report.summary()}")
    return CriterionResult("oracle agreement", total, agree, detail="; ".join(details))


def infinite_rank(
    seed=7, trials: Optional[int] = None, generators: int = 20, sizes: RandomSizes = DEFAULT_SIZES
) -> CriterionResult:
    rng = random.Random(seed)
    X = free_manifold()
    sigma = ModuleElement.basis(X.module, X.group, 0)
    # a*b^i: cyclically reduced with distinct b-exponents, so pairwise non-conjugate
    alphas = [Word(X.group, ((0, 1), (1, i))) for i in range(1, generators + 1)]
    gens = [theta(realize(sigma, alpha, X), X) for alpha in alphas]
    distinct = len(set(gens)) == len(gens) and not any(g.is_zero for g in gens)

    n = trials or 100
    passed = 0
    elements = [g.to_element() for g in gens]
    for _ in range(n):
        coeffs = [0] * len(gens)
        while not any(coeffs):
            coeffs = [rng.randint(-5, 5) for _ in gens]
        combo = wh_sum((wh_scale(c, x) for c, x in zip(coeffs, elements)), X)
        passed += not wh_normalize(combo).is_zero
    return CriterionResult("infinite rank", n + 1, passed + distinct,
                           detail=f"{generators} generators pairwise distinct: {distinct}")


def meridian_vanishing(seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    rng = random.Random(seed)
    X = free_manifold()
    n = trials or 100
    passed = 0
    for _ in range(n):
        b = random_descriptor(X, rng, sizes)
        k = rng.randint(0, 10)
        deltas = [random_word(X.group, rng, sizes.word_length) for _ in range(k)]
        passed += theta(add_meridian_terms(b, k, deltas, X), X) == theta(b, X)
    return CriterionResult("meridian vanishing", n, passed)


def g_pairing(seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES) -> CriterionResult:
    rng = random.Random(seed)
    base = mixed_manifold(2)
    n = trials or 100
    passed = 0
    for _ in range(n):
        X = random_characteristic_data(base.group, base.module, rng)
        b = random_descriptor(X, rng, sizes)
        lhs = wh_normalize(involute(theta_g(b, X).to_element()))
        passed += lhs == wh_normalize(wh_neg(theta_element(b, X)))
    return CriterionResult("g_beta pairing", n, passed)


def performance(
    seed=7, trials: Optional[int] = None, limit: float = NORMALIZE_TIME_LIMIT, sizes: RandomSizes = DEFAULT_SIZES
) -> CriterionResult:
    rng = random.Random(seed)
    G = GroupPresentation((FactorSpec("a"), FactorSpec("b"), FactorSpec("c", 3)))
    X = ManifoldData(G, ModuleSpec(2))
    n = trials or 10_000
    terms = tuple(
        WhTerm(rng.randint(0, 1), random_module_element(X.module, G, rng, PERFORMANCE_TERMS, PERFORMANCE_WORD_LENGTH),
               random_word(G, rng, PERFORMANCE_WORD_LENGTH))
        for _ in range(n)
    )
    x = WhElement(X, terms)
    start = time.perf_counter()
    first = wh_normalize(x)
    elapsed = time.perf_counter() - start
    second = wh_normalize(x)
    ok = first == second and elapsed < limit
    return CriterionResult("performance", 1, int(ok), elapsed,
                           detail=f"{n} terms, {len(first.entries)} entries, {elapsed:.3f}s (limit {limit}s)")


CRITERIA: List[Callable[..., CriterionResult]] = [
    delta_vanishing,
    realization,
    involution,
    relation_soundness,
    oracle_agreement,
    infinite_rank,
    meridian_vanishing,
    g_pairing,
    performance,
]


def run_criterion(
    check: Callable[..., CriterionResult], seed=7, trials: Optional[int] = None, sizes: RandomSizes = DEFAULT_SIZES
) -> CriterionResult:
    start = time.perf_counter()
    result = check(seed=seed, trials=trials, sizes=sizes)
    if not result.seconds:
        result.seconds = time.perf_counter() - start
    logger.info("%s: %d/%d in %.2fs", result.name, result.passed, result.trials, result.seconds)
    return result
