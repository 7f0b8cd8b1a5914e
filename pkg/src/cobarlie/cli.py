"""Command-line surface: verify / homotopy / bar / compare, JSON in and out.

All numeric output is exact (integers and "p/q" strings).  Exit codes:
0 success, 1 verification or certificate failure, 2 invalid input,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bar as bar_mod
from . import dgl, fincat, freelie
from .errors import BudgetExceeded, ConventionFault, InvalidInput, WindowViolation
from .simplicial import load_space

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    command: str
    space: str | None = None
    cdga: str | None = None
    N: int = 3
    q_max: int = 8
    T: int = 2
    out: str | None = None
    seed: int = 0
    budget: int = dgl.DEFAULT_BUDGET
    direct_limit: int = dgl.DEFAULT_DIRECT_LIMIT
    verbose: bool = False
    debug_flip_sign: bool = False
    n_max: int = 6
    pq_max: int = 6
    workers: int = field(default_factory=lambda: _workers_from_env())


def _workers_from_env() -> int:
    raw = os.environ.get("COBARLIE_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"COBARLIE_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InvalidInput("COBARLIE_THREADS must be at least 1")
    return value


def _read_arg_or_file(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _emit(config: RunConfig, payload: dict) -> None:
    blob = json.dumps(payload, indent=2, sort_keys=True)
    if config.out:
        Path(config.out).write_text(blob + "\n")
    print(blob)


# ---------------------------------------------------------------------------
# verify

def _identity_suites(config: RunConfig):
    """Yield (name, callable) pairs; each callable returns an optional
    counterexample string (None means the identity holds)."""
    n_max, pq_max = config.n_max, config.pq_max
    flip = config.debug_flip_sign

    def ring_identities():
        for n in range(1, n_max + 1):
            s = fincat.s_element(n, flip_sign=flip)
            if (s * s) != s.scale(n):
                return f"s_{n}^2 != {n} s_{n}"
        return None

    def ring_identities_w():
        for n in range(1, n_max + 1):
            w = fincat.w_element(n, flip_sign=flip)
            if (w * w) != w.scale(n):
                return f"w_{n}^2 != {n} w_{n}"
        return None

    def complex_identity():
        for n in range(1, n_max + 1):
            c = fincat.cobar_differential(n).compose(fincat.cobar_differential(n + 1))
            if not c.is_zero():
                term = next(iter(c.terms))
                return f"f_{n} o f_{n + 1} != 0, term {term!r}"
        return None

    def leibniz_identity():
        for p in range(1, pq_max):
            for q in range(1, pq_max - p + 1):
                lhs = fincat.cobar_differential(p).disjoint_union(
                    fincat.DMorphism.identity(q)
                ) + fincat.DMorphism.identity(p).disjoint_union(
                    fincat.cobar_differential(q)
                ).scale(Fraction((-1) ** p))
                diff = lhs - fincat.cobar_differential(p + q)
                if not diff.is_zero():
                    return f"block sum identity fails at ({p}, {q})"
        return None

    def closure_diagram():
        for n in range(1, min(n_max, 4) + 1):
            try:
                fincat.phi(n)
            except ConventionFault as exc:
                return str(exc)
        return None

    def bracket_diagram():
        for p in range(1, min(pq_max, 5)):
            for q in range(1, min(pq_max, 5) - p + 1):
                try:
                    fincat.psi(p, q)
                except ConventionFault as exc:
                    return str(exc)
        return None

    def bracket_action():
        gens = freelie.GradedGenerators.of(["v", "w"], 1)
        v = freelie.generator(gens, 0)
        w = freelie.generator(gens, 1)
        lhs = freelie.right_action(
            fincat.w_element(2, flip_sign=flip), v.concat(w)
        )
        rhs = freelie.bracket(v, w)
        if lhs != rhs:
            return f"w_2 action {lhs!r} differs from the bracket {rhs!r}"
        for n in range(2, min(n_max, 5) + 1):
            for word in list(gens.words(n))[:8]:
                t = freelie.word_element(gens, word)
                acted = freelie.right_action(fincat.w_element(n, flip_sign=flip), t)
                expected = _iterated_bracket(gens, word)
                if acted != expected:
                    return f"w_{n} action differs from the bracket on {word}"
        return None

    def rank_oracles():
        for n in range(1, min(n_max, 5) + 1):
            for m in (1, 2, 3):
                try:
                    got = freelie.lie_rank(n, m, 0)
                except ConventionFault as exc:
                    return str(exc)
                expect = freelie.witt_rank(n, m)
                if got != expect:
                    return f"rank({n}, {m}) = {got}, necklace count {expect}"
        return None

    def quillen_inverse():
        gens = freelie.GradedGenerators.of(["v", "w"], 1)
        for n in range(1, min(n_max, 4) + 1):
            for word in list(gens.words(n))[:6]:
                l = freelie.right_action(
                    fincat.w_element(n), freelie.word_element(gens, word)
                )
                if freelie.quillen_rho(l) != l:
                    return f"rho is not a left inverse on {word}"
        return None

    def derivation_squares():
        gens = freelie.GradedGenerators.of(["v", "w"], 1)
        for n in range(1, min(n_max, 5)):
            for word in list(gens.words(n))[:6]:
                t = freelie.word_element(gens, word)
                if not freelie.derivation_d(freelie.derivation_d(t)).is_zero():
                    return f"d^2 != 0 on {word}"
        return None

    yield "s_n^2 = n s_n", ring_identities
    yield "w_n^2 = n w_n", ring_identities_w
    yield "f_n o f_{n+1} = 0", complex_identity
    yield "f_p + (-1)^p f_q block sum = f_{p+q}", leibniz_identity
    yield "projector closure diagram", closure_diagram
    yield "projector bracket diagram", bracket_diagram
    yield "projector acts as the iterated bracket", bracket_action
    yield "rank oracle vs necklace counts", rank_oracles
    yield "left inverse of the bracket inclusion", quillen_inverse
    yield "squaring derivation has square zero", derivation_squares


def _iterated_bracket(gens, word):
    acc = freelie.generator(gens, word[0])
    for g in word[1:]:
        acc = freelie.bracket(acc, freelie.generator(gens, g))
    return acc


def cmd_verify(config: RunConfig) -> int:
    results = []
    all_ok = True
    for name, fn in _identity_suites(config):
        try:
            counterexample = fn()
        except ConventionFault as exc:
            counterexample = str(exc)
        ok = counterexample is None
        all_ok = all_ok and ok
        results.append({"name": name, "ok": ok, "counterexample": counterexample})
        if config.verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}", file=sys.stderr)
    _emit(
        config,
        {
            "command": "verify",
            "n_max": config.n_max,
            "pq_max": config.pq_max,
            "flip_sign": config.debug_flip_sign,
            "identities": results,
            "all_ok": all_ok,
        },
    )
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# homotopy / bar / compare

def cmd_homotopy(config: RunConfig) -> int:
    if not config.space:
        raise InvalidInput("--space is required")
    space = load_space(_read_arg_or_file(config.space))
    dgl.check_window(config.N, config.q_max, config.T, space.connectivity())
    P = dgl.build_P(
        space, config.N, config.q_max, config.direct_limit, config.budget
    )
    report = dgl.homotopy_ranks(P, config.T, workers=config.workers)
    payload = report.to_json_dict()
    brackets = []
    for s in range(1, config.T + 1):
        for t in range(s, config.T + 1):
            if s + t > config.T and (s, t) != (1, 1):
                continue
            if report.ranks.get(s) and report.ranks.get(t):
                entry = dgl.whitehead_bracket(P, s, t, seed=config.seed)
                brackets.append(entry.to_json_dict())
    payload["brackets"] = brackets
    payload["command"] = "homotopy"
    _emit(config, payload)
    ok = all(report.certificates.values())
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bar(config: RunConfig) -> int:
    if not config.cdga:
        raise InvalidInput("--cdga is required")
    algebra = bar_mod.load_cdga(_read_arg_or_file(config.cdga))
    qb = bar_mod.qbar(algebra, config.N)
    ranks = qb.cohomology_ranks(range(1, config.T + 1))
    payload = {
        "command": "bar",
        "cdga": algebra.name,
        "N": config.N,
        "T": config.T,
        "ranks": {str(k): v for k, v in sorted(ranks.items())},
        "blocks": {
            f"{s},{t}": len(reps)
            for (s, t), reps in sorted(qb.quotient_reps.items())
        },
        "certificates": dict(sorted(qb.certificates.items())),
    }
    _emit(config, payload)
    return EXIT_OK if all(qb.certificates.values()) else EXIT_VERIFY


def cmd_compare(config: RunConfig) -> int:
    if not config.space or not config.cdga:
        raise InvalidInput("--space and --cdga are required")
    space = load_space(_read_arg_or_file(config.space))
    algebra = bar_mod.load_cdga(_read_arg_or_file(config.cdga))
    dgl.check_window(config.N, config.q_max, config.T, space.connectivity())
    report = bar_mod.compare(
        space, algebra, config.N, config.T,
        q_max=config.q_max, direct_limit=config.direct_limit,
    )
    payload = report.to_json_dict()
    payload["command"] = "compare"
    _emit(config, payload)
    if not all(report.certificates.values()):
        return EXIT_VERIFY
    return EXIT_OK if report.match else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cobarlie",
        description="Exact rational homotopy computations on the geometric cobar complex",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--space", help="space expression ('S2', 'S2 v S2') or @file.json")
        p.add_argument("--cdga", help="builtin CDGA label ('H(S2)') or @file.json")
        p.add_argument("-N", type=int, default=3, help="column truncation")
        p.add_argument("--qmax", dest="q_max", type=int, default=8, help="internal degree budget")
        p.add_argument("-T", type=int, default=2, help="top reported total degree")
        p.add_argument("--out", help="also write the JSON report to this path")
        p.add_argument("--seed", type=int, default=0, help="seed for perturbation probes")
        p.add_argument("--budget", type=int, default=dgl.DEFAULT_BUDGET,
                       help="hard cap on materialized basis elements per block")
        p.add_argument("--direct-limit", type=int, default=dgl.DEFAULT_DIRECT_LIMIT,
                       help="largest block handled by direct elimination")
        p.add_argument("--verbose", action="store_true")

    p_verify = sub.add_parser("verify", help="run the identity suites")
    common(p_verify)
    p_verify.add_argument("--nmax", dest="n_max", type=int, default=6)
    p_verify.add_argument("--pqmax", dest="pq_max", type=int, default=6)
    p_verify.add_argument(
        "--debug-flip-sign", action="store_true",
        help="mutation testing: flip the projector sign convention",
    )

    for name in ("homotopy", "bar", "compare"):
        common(sub.add_parser(name, help=f"run the {name} computation"))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        space=getattr(args, "space", None),
        cdga=getattr(args, "cdga", None),
        N=args.N,
        q_max=args.q_max,
        T=args.T,
        out=args.out,
        seed=args.seed,
        budget=args.budget,
        direct_limit=args.direct_limit,
        verbose=args.verbose,
        debug_flip_sign=getattr(args, "debug_flip_sign", False),
        n_max=getattr(args, "n_max", 6),
        pq_max=getattr(args, "pq_max", 6),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if config.command == "verify":
            return cmd_verify(config)
        if config.command == "homotopy":
            return cmd_homotopy(config)
        if config.command == "bar":
            return cmd_bar(config)
        if config.command == "compare":
            return cmd_compare(config)
        raise InvalidInput(f"unknown command {config.command!r}")
    except (WindowViolation, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConventionFault as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(main())
