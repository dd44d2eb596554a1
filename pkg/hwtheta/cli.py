"""
Command-line interface.

    python -m hwtheta wh normalize --manifold M --expr "(0, (e0 @ a))[b*a]"
    python -m hwtheta barbell deltak --k 4 > d4.txt
    python -m hwtheta barbell theta --manifold d4.txt --barbell d4.txt
    python -m hwtheta oracle check --m 3 --rank 1 --trials 500 --seed 7

Exit codes: 0 success (and `equal`), 1 `not-equal` or a failed oracle check,
2 usage, parse and input errors. Output is computed in full before anything is
printed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

from hwtheta.barbell import (
    BarbellDescriptor,
    CerfEntry,
    CerfIntersectionData,
    add_meridian_terms,
    delta_k,
    realization_route,
    realize,
    realize_composite,
    sigma_invariant,
    theta,
    theta_cerf,
    theta_g,
    theta_special,
)
from hwtheta.config import load_config
from hwtheta.errors import HWThetaError, ParseError
from hwtheta.log import setup_logging, verbosity_level
from hwtheta.oracle import FiniteSetup, check_agreement, quotient_invariants, random_relation_walk
from hwtheta.textio import (
    format_barbell,
    format_module_elem,
    format_normal_form,
    format_wh,
    parse_barbell,
    parse_manifold,
    parse_module_elem,
    parse_wh,
    parse_word,
    parse_words,
)
from hwtheta.whitehead import ManifoldData, WhNormalForm, involute, wh_equal, wh_normalize

logger = logging.getLogger(__name__)

# (stdout text, json payload, exit code)
Outcome = Tuple[str, Dict, int]


# ---------- inputs ----------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf8")
    except OSError as e:
        raise HWThetaError(f"cannot read {path}: {e.strerror}") from None


def _in_file(path: str, parse: Callable[[str], object]):
    try:
        return parse(_read(path))
    except ParseError as e:
        raise ParseError(f"{path}: {e.message}", e.line, e.column) from None


def _in_arg(flag: str, text: Optional[str], parse: Callable[[str], object]):
    if text is None:
        raise HWThetaError(f"{flag} is required")
    try:
        return parse(text)
    except ParseError as e:
        raise ParseError(f"{flag}: {e.message}", e.line, e.column) from None


def _manifold(args) -> ManifoldData:
    if not args.manifold:
        raise HWThetaError("--manifold is required")
    X = _in_file(args.manifold, parse_manifold)
    logger.info("manifold %s: pi_1 = %s, pi_2 = %s, %s", args.manifold, X.group, X.module,
                "orientable" if X.is_orientable else "non-orientable")
    return X


def _barbell_input(args) -> Tuple[ManifoldData, BarbellDescriptor]:
    if args.k is not None:
        return delta_k(args.k)
    X = _manifold(args)
    if not args.barbell:
        raise HWThetaError("--barbell (or --k) is required")
    return X, _in_file(args.barbell, lambda text: parse_barbell(text, X))


def _nf_payload(nf: WhNormalForm) -> Dict:
    return {
        "normal_form": format_normal_form(nf),
        "zero": nf.is_zero,
        "entries": [
            {"class": str(e.key), "s": e.s, "sigma": format_module_elem(e.sigma)} for e in nf.entries
        ],
    }


def _nf_outcome(nf: WhNormalForm, **extra) -> Outcome:
    payload = _nf_payload(nf)
    payload.update(extra)
    return payload["normal_form"], payload, 0


# ---------- wh ----------

def cmd_wh_normalize(args, cfg) -> Outcome:
    X = _manifold(args)
    return _nf_outcome(wh_normalize(_in_arg("--expr", args.expr, lambda t: parse_wh(t, X))))


def cmd_wh_eq(args, cfg) -> Outcome:
    X = _manifold(args)
    lhs = _in_arg("--lhs", args.lhs, lambda t: parse_wh(t, X))
    rhs = _in_arg("--rhs", args.rhs, lambda t: parse_wh(t, X))
    equal = wh_equal(lhs, rhs)
    verdict = "equal" if equal else "not-equal"
    return verdict, {"result": verdict, "equal": equal}, 0 if equal else 1


def cmd_wh_bar(args, cfg) -> Outcome:
    X = _manifold(args)
    x = _in_arg("--expr", args.expr, lambda t: parse_wh(t, X))
    return _nf_outcome(wh_normalize(involute(x)))


# ---------- barbell ----------

def cmd_theta(args, cfg) -> Outcome:
    X, b = _barbell_input(args)
    return _nf_outcome(theta(b, X), sigma_invariant=sigma_invariant(b), circles=len(b.circles))


def cmd_theta_g(args, cfg) -> Outcome:
    X, b = _barbell_input(args)
    return _nf_outcome(theta_g(b, X), sigma_invariant=sigma_invariant(b), circles=len(b.circles))


def cmd_theta_special(args, cfg) -> Outcome:
    X = _manifold(args)
    sigma = _in_arg("--sigma", args.sigma, lambda t: parse_module_elem(t, X))
    gammas = _in_arg("--gammas", args.gammas, lambda t: parse_words(t, X))
    return _nf_outcome(theta_special(sigma, gammas, X))


def cmd_theta_cerf(args, cfg) -> Outcome:
    X = _manifold(args)
    x = _in_arg("--expr", args.expr, lambda t: parse_wh(t, X))
    data = CerfIntersectionData(tuple(CerfEntry(t.s, t.sigma, t.gamma) for t in x.terms))
    return _nf_outcome(theta_cerf(data, X))


def cmd_deltak(args, cfg) -> Outcome:
    if args.k is None:
        raise HWThetaError("--k is required")
    X, b = delta_k(args.k)
    text = format_barbell(b, X)
    return text, {"k": args.k, "document": text}, 0


def cmd_realize(args, cfg) -> Outcome:
    X = _manifold(args)
    sigma = _in_arg("--sigma", args.sigma, lambda t: parse_module_elem(t, X))
    alpha = _in_arg("--alpha", args.alpha, lambda t: parse_word(t, X))
    b = realize(sigma, alpha, X)
    route = realization_route(sigma, X)
    logger.info("realized (0, %s)[%s] by the %s construction", format_module_elem(sigma), alpha, route)
    text = f"# route: {route}\n" + format_barbell(b, X)
    return text, {"route": route, "document": format_barbell(b, X)}, 0


def cmd_add_meridians(args, cfg) -> Outcome:
    X, b = _barbell_input(args)
    deltas = _in_arg("--deltas", args.deltas or "", lambda t: parse_words(t, X))
    n = args.n if args.n is not None else len(deltas)
    out = add_meridian_terms(b, n, deltas, X)
    text = format_barbell(out, X)
    return text, {"circles": len(out.circles), "document": text}, 0


def cmd_realize_sum(args, cfg) -> Outcome:
    X = _manifold(args)
    nf = wh_normalize(_in_arg("--expr", args.expr, lambda t: parse_wh(t, X)))
    parts = realize_composite(nf)
    combined = BarbellDescriptor(tuple(c for b in parts for c in b.circles))
    text = format_barbell(combined, X)
    return text, {"descriptors": len(parts), "document": text}, 0


# ---------- oracle ----------

def _setup(args) -> FiniteSetup:
    if args.m is None:
        raise HWThetaError("--m is required")
    return FiniteSetup(args.m, args.rank)


def cmd_oracle_check(args, cfg) -> Outcome:
    setup = _setup(args)
    trials = args.trials if args.trials is not None else cfg["trials"]
    seed = args.seed if args.seed is not None else cfg["seed"]
    with tqdm(total=trials, desc=f"Z/{setup.m} rank {setup.rank}", disable=not args.progress,
              file=sys.stderr) as bar:
        report = check_agreement(setup, trials, seed, progress=bar, max_terms=cfg["random_terms"])
    payload = {
        "m": setup.m,
        "rank": setup.rank,
        "trials": report.trials,
        "agree": report.agree,
        "equal_pairs": report.equal_pairs,
        "passed": report.passed,
    }
    return report.summary(), payload, 0 if report.passed else 1


def cmd_oracle_walk(args, cfg) -> Outcome:
    X = _manifold(args)
    x = _in_arg("--expr", args.expr, lambda t: parse_wh(t, X))
    steps = args.steps if args.steps is not None else cfg["steps"]
    seed = args.seed if args.seed is not None else cfg["seed"]
    y = random_relation_walk(x, X, steps, seed, cfg["walk_word_length"])
    same = wh_normalize(x) == wh_normalize(y)
    text = format_wh(y)
    return text, {"element": text, "steps": steps, "seed": seed, "normal_form_unchanged": same}, 0


def cmd_oracle_invariants(args, cfg) -> Outcome:
    setup = _setup(args)
    free_rank, torsion = quotient_invariants(setup)
    text = f"free-rank={free_rank} torsion={','.join(map(str, torsion)) or 'none'}"
    return text, {"m": setup.m, "rank": setup.rank, "free_rank": free_rank, "torsion": torsion}, 0


# ---------- parser ----------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON object instead of text")
    common.add_argument("--config", help="YAML config file (default: config.yaml)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug on stderr")

    manifold = argparse.ArgumentParser(add_help=False)
    manifold.add_argument("--manifold", help="manifold file (group/module/w1/w2 lines)")

    barbell = argparse.ArgumentParser(add_help=False, parents=[manifold])
    barbell.add_argument("--barbell", help="barbell file (circle lines)")
    barbell.add_argument("--k", type=int, help="use the barbell delta_k in S^1 x D^3")

    finite = argparse.ArgumentParser(add_help=False)
    finite.add_argument("--m", type=int, help="order of pi_1 = Z/m (1 for the trivial group)")
    finite.add_argument("--rank", type=int, default=0, help="rank of the free pi_2 module")

    ap = argparse.ArgumentParser(prog="hwtheta", description="Theta invariants of barbell diffeomorphisms")
    groups = ap.add_subparsers(dest="group", metavar="{wh,barbell,oracle}", required=True)

    def leaf(sub, name, func, parents, help_text):
        p = sub.add_parser(name, parents=[common] + parents, help=help_text)
        p.set_defaults(func=func)
        return p

    wh = groups.add_parser("wh", help="Whitehead group arithmetic").add_subparsers(dest="command", required=True)
    leaf(wh, "normalize", cmd_wh_normalize, [manifold], "normal form of --expr").add_argument("--expr")
    p = leaf(wh, "eq", cmd_wh_eq, [manifold], "decide --lhs = --rhs in Wh1")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    leaf(wh, "bar", cmd_wh_bar, [manifold], "normal form of the involute of --expr").add_argument("--expr")

    bb = groups.add_parser("barbell", help="barbell invariants").add_subparsers(dest="command", required=True)
    leaf(bb, "theta", cmd_theta, [barbell], "Theta of f_beta")
    leaf(bb, "theta-g", cmd_theta_g, [barbell], "Theta of g_beta")
    p = leaf(bb, "theta-special", cmd_theta_special, [manifold], "sphere disjoint from the ball")
    p.add_argument("--sigma")
    p.add_argument("--gammas", help="';'-separated words")
    leaf(bb, "theta-cerf", cmd_theta_cerf, [manifold], "Theta from Cerf intersection data").add_argument("--expr")
    leaf(bb, "deltak", cmd_deltak, [], "print the delta_k descriptor").add_argument("--k", type=int)
    p = leaf(bb, "realize", cmd_realize, [manifold], "a barbell with Theta = (0, sigma)[alpha]")
    p.add_argument("--sigma")
    p.add_argument("--alpha")
    p = leaf(bb, "add-meridians", cmd_add_meridians, [barbell], "append meridian circles")
    p.add_argument("--n", type=int)
    p.add_argument("--deltas", help="';'-separated words")
    leaf(bb, "realize-sum", cmd_realize_sum, [manifold], "realize a class as a composite").add_argument("--expr")

    oc = groups.add_parser("oracle", help="independent checks").add_subparsers(dest="command", required=True)
    p = leaf(oc, "check", cmd_oracle_check, [finite], "compare with the lattice oracle")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--progress", action="store_true", help="show a progress bar on stderr")
    p = leaf(oc, "walk", cmd_oracle_walk, [manifold], "random relation walk from --expr")
    p.add_argument("--expr")
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    leaf(oc, "invariants", cmd_oracle_invariants, [finite], "group structure of the lattice model")
    return ap


def run_cli(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        cfg = load_config(args.config)
        setup_logging(verbosity_level(args.verbose, cfg["log_level"]), stream=stderr)
        logger.info("running %s %s", args.group, args.command)
        text, payload, code = args.func(args, cfg)
    except ValueError as e:  # HWThetaError included
        print(f"error: {e}", file=stderr)
        return 2

    if args.json:
        print(json.dumps(payload, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main():
    sys.exit(run_cli())
