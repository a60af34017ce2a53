"""Command line entry point ``rainbow``.

Exit codes:
    0  success (including ``solve`` runs whose target was unreachable because
       the instance has too few classes for the guarantee)
    1  ``solve``/``verify``: the guarantee failed on an instance that meets
       the class-count hypothesis; ``search``: a counterexample was found
    2  usage, parse, validation or I/O error
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from rainbow.constructive import InternalContradiction, find_rainbow
from rainbow.core import (
    Instance,
    RainbowError,
    guaranteed_k,
    matching_to_json,
    parse_instance,
    serialize_instance,
    theorem_bound,
    validate_instance,
)
from rainbow.exact import SolverConfig, max_rainbow
from rainbow.generators import (
    RandomModel,
    cyclic_factorization,
    drisko_instance,
    random_instance,
    remark_general_instance,
)
from rainbow.harness import (
    Mode,
    SearchJob,
    Strategy,
    TheoremViolation,
    VerifyJob,
    search_counterexample,
    verify_theorem,
)

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sides(raw: str | None, n: int) -> tuple[int, int]:
    if raw is None:
        return n, n
    parts = raw.replace("x", ",").split(",")
    try:
        if len(parts) == 1:
            return int(parts[0]), int(parts[0])
        a, b = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--sides expects A,B or AxB, got {raw!r}") from None
    return a, b


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(path: str) -> Instance:
    inst = parse_instance(Path(path).read_bytes())
    report = validate_instance(inst, strict=False)
    if not report.ok:
        raise UsageError(f"{path}: " + "; ".join(v.description for v in report.violations))
    return inst


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "drisko":
        inst = drisko_instance(args.n)
    elif args.family == "remark":
        inst = remark_general_instance(args.n)
    elif args.family == "cyclic":
        inst = cyclic_factorization(args.n)
    else:
        if args.N is None:
            raise UsageError("gen random needs --N")
        a, b = _sides(args.sides, args.n)
        inst = random_instance(RandomModel(args.n, args.N, a, b, args.seed))
    _emit(serialize_instance(inst).decode("utf-8"), args.out)
    _note(f"{args.family}: n={inst.n} N={inst.N} kind={inst.kind.value}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    res = find_rainbow(inst, args.target, trace=args.trace is not None)
    k_needed = inst.n - res.target
    hypothesis = inst.N >= theorem_bound(inst.n, k_needed)
    doc: dict[str, Any] = {
        "size": res.size,
        "target": res.target,
        "met_target": res.met_target,
        "steps": res.steps,
        "hypothesis_met": hypothesis,
        "matching": {"entries": matching_to_json(res.matching)},
    }
    if args.trace is not None:
        Path(args.trace).write_text(json.dumps(res.trace, indent=1) + "\n", encoding="utf-8")
    _emit(json.dumps(doc), args.out)
    _note(f"size {res.size}, target {res.target}, met={res.met_target}, "
          f"{res.steps} augmentations")
    if hypothesis and not res.met_target:
        _note("VIOLATION: class count meets the bound but the target was missed")
        return EXIT_FOUND
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    inst = _load(args.input)
    cfg = SolverConfig(node_budget=args.node_budget, time_budget_ms=args.time_budget_ms,
                       use_matching_bound=not args.no_matching_bound)
    res = max_rainbow(inst, cfg)
    doc = {
        "size": res.size,
        "optimal": res.optimal,
        "nodes_explored": res.nodes_explored,
        "witness": {"entries": matching_to_json(res.witness)},
    }
    _emit(json.dumps(doc), args.out)
    _note(f"max rainbow {res.size} ({'optimal' if res.optimal else 'budget hit'}), "
          f"{res.nodes_explored} nodes")
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    if (args.k is None) == (args.N is None):
        raise UsageError("bound needs exactly one of --k or --N")
    if args.k is not None:
        try:
            print(theorem_bound(args.n, args.k))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        k = guaranteed_k(args.n, args.N)
        print("none" if k is None else k)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    mode = Mode.CROSS_CHECK_EXACT if args.cross_check else Mode.CONSTRUCTIVE_ONLY
    if args.input:
        job = VerifyJob(k=args.k, corpus=[_load(p) for p in args.input], mode=mode)
    else:
        if args.n is None or args.N is None:
            raise UsageError("verify needs --in files or a model (--n and --N)")
        a, b = _sides(args.sides, args.n)
        job = VerifyJob(k=args.k, model=RandomModel(args.n, args.N, a, b, args.seed),
                        trials=args.trials, mode=mode)
    try:
        report = verify_theorem(job)
    except TheoremViolation as exc:
        Path(args.repro).write_text(json.dumps(exc.bundle, indent=1) + "\n", encoding="utf-8")
        _note(f"VIOLATION: {exc}; repro bundle written to {args.repro}")
        return EXIT_FOUND
    _emit(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    s = report.summary()
    _note(f"{s['instances']} instances, {s['hypothesis_met']} meet the hypothesis, "
          f"{s['violations']} violations, min size {s['min_constructive_size']}")
    return EXIT_FOUND if s["violations"] else EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    job = SearchJob(n=args.n, k=args.k, N=args.N, strategy=Strategy(args.strategy),
                    trials=args.trials, seed=args.seed)
    cfg = SolverConfig(node_budget=args.node_budget)
    found = search_counterexample(job, cfg)
    if found is None:
        _emit(json.dumps({"found": False}), args.out)
        _note(f"no instance without a rainbow matching of size {job.n - job.k} "
              f"in {job.trials} trials")
        return EXIT_OK
    doc = {
        "found": True,
        "trial": found.trial,
        "exact_size": found.exact_size,
        "instance": json.loads(serialize_instance(found.instance)),
    }
    _emit(json.dumps(doc), args.out)
    _note(f"counterexample at trial {found.trial}: max rainbow {found.exact_size} "
          f"< {job.n - job.k}")
    return EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rainbow", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("family", choices=["drisko", "remark", "cyclic", "random"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--N", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sides", help="side sizes A,B for random instances (default n,n)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="constructive rainbow matching")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--target", type=int)
    s.add_argument("--trace", help="write per-step layer states and paths here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("exact", help="exact maximum rainbow matching")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--node-budget", type=int)
    e.add_argument("--time-budget-ms", type=int)
    e.add_argument("--no-matching-bound", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bound", help="class count forcing size n-k (or k for a given N)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int)
    b.add_argument("--N", type=int)
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="check the guarantee over a corpus")
    v.add_argument("--in", dest="input", nargs="+")
    v.add_argument("--n", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--sides")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--cross-check", action="store_true")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--repro", default="rainbow-repro.json")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("search", help="search for instances without a large rainbow matching")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--strategy", choices=[m.value for m in Strategy], default="random")
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--node-budget", type=int, default=2_000_000)
    c.add_argument("--out")
    c.set_defaults(func=cmd_search)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InternalContradiction:
        raise
    except (UsageError, RainbowError, ValueError, OSError) as exc:
        _note(f"rainbow {args.command}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
