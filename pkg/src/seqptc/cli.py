"""Command-line front end.

Exit codes: 0 success, 1 a check or validation failed, 2 bad input
(regime violation, malformed document, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Sequence

import numpy as np

from .algebra import monomial_order
from .bounds import (
    UnsupportedRegimeError,
    WrongParityError,
    even_witness,
    odd_witness,
    worked_example_witness,
    tc_exact,
)
from .checks import CheckResult, selftest, spec_record
from .documents import (
    DocumentError,
    dumps,
    load_json,
    path_csv,
    path_from_dict,
    path_to_dict,
    scenario_from_dict,
)
from .param import ProblemSpec, SpecError, render_monomial
from .planner import GENERAL, ScenarioError, classify_cell, plan, projection_frame, validate
from .sampling import enumerate_specs, random_scenario


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


def parse_int_list(text: str) -> List[int]:
    """Parse ``2,3`` or a range ``1..3`` (also mixed: ``1..2,5``)."""
    out: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 2,3 or 1..3, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _spec(args) -> ProblemSpec:
    if args.m < 2:
        raise UsageError(f"m >= 2 required (got m={args.m})")
    try:
        return ProblemSpec.create(args.d, args.m, args.r)
    except SpecError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, text: str, doc) -> None:
    if args.format == "structured":
        print(dumps(doc))
    else:
        print(text)


def cmd_tc(args) -> int:
    spec = _spec(args)
    try:
        rep = tc_exact(spec)
    except UnsupportedRegimeError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, rep.to_line(), rep.to_dict())
    return 0


def _expansion(product) -> List[dict]:
    # same ordering as the text rendering
    monos = sorted(product.terms.items(), key=lambda kv: monomial_order(kv[0]))
    return [{"coeff": c, "monomial": render_monomial(m)} for m, c in monos]


def cmd_witness(args) -> int:
    spec = _spec(args)
    if args.variant == "worked":
        if (spec.d, spec.m, spec.r) != (3, 2, (2, 3)):
            raise UsageError("--variant worked is defined only for --d 3 --m 2 --r 2,3")
        w = worked_example_witness()
    else:
        try:
            w = odd_witness(spec) if spec.d % 2 else even_witness(spec)
        except (UnsupportedRegimeError, WrongParityError) as exc:
            raise UsageError(str(exc)) from None
    terms = _expansion(w.product)
    doc = {
        "spec": {"d": spec.d, "m": spec.m, "n": spec.n, "r": list(spec.r)},
        "variant": args.variant,
        "factors": list(w.labels),
        "count": w.count,
        "terms": len(terms),
        "nonzero": w.nonzero,
    }
    lines = [f"{spec.label()} variant={args.variant}"]
    lines += [f"  factor {k + 1}: {lab}" for k, lab in enumerate(w.labels)]
    lines.append(f"count={w.count} terms={len(terms)} nonzero={int(w.nonzero)}")
    if args.dump:
        doc["expansion"] = terms
        lines += [f"  {t['coeff']:+d} {t['monomial']}" for t in terms]
    _emit(args, "\n".join(lines), doc)
    return 0 if w.nonzero else 1


def _load_scenario(path: str):
    return scenario_from_dict(load_json(path))


def cmd_plan(args) -> int:
    sc = _load_scenario(args.scenario)
    p = plan(sc)
    doc = path_to_dict(p)
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(path_csv(p, args.samples))
    if args.format == "structured":
        if not args.out:
            print(text)
        return 0
    c = p.cell
    print(
        f"planned n={sc.spec.n} robots, nodes={len(p.schedule)}, "
        f"cell c={c.c} mu={c.mu} nu={c.nu}, delta_C={p.delta_C:.6g}"
    )
    if args.out:
        print(f"path written to {args.out}")
    else:
        print(text)
    return 0


def cmd_validate(args) -> int:
    sc = _load_scenario(args.scenario)
    path = path_from_dict(load_json(args.path))
    try:
        rep = validate(path, sc, args.samples)
    except ScenarioError as exc:
        raise DocumentError(str(exc)) from None
    doc = rep.to_dict()

    def fmt(x):
        return "n/a" if x is None else f"{x:.6g}"

    text = " ".join(
        f"{k}={fmt(doc[k])}"
        for k in ("min_robot_robot", "min_robot_obstacle", "max_node_error", "max_stopped_violation", "scene_scale")
    )
    _emit(args, f"{'PASS' if rep.passed else 'FAIL'} {text}", doc)
    return 0 if rep.passed else 1


def cmd_cells(args) -> int:
    sc = _load_scenario(args.scenario)
    cell = classify_cell(sc, projection_frame(sc))
    doc = cell.to_dict()
    sigma = " < ".join("{" + ",".join(cls) + "}" for cls in cell.sigma)
    _emit(args, f"c={cell.c} mu={cell.mu} nu={cell.nu} sigma={sigma}", doc)
    return 0


def _report(args, results: Sequence[CheckResult]) -> int:
    failed = [r for r in results if not r.ok]
    summary = f"{len(results) - len(failed)}/{len(results)} passed"
    if args.format == "structured":
        doc = {"results": [r.to_dict() for r in results], "passed": not failed, "summary": summary}
        if failed:
            doc["first_failure"] = failed[0].to_dict()
        print(dumps(doc))
    else:
        for r in results:
            print(r.line())
        print(summary)
        if failed:
            print(f"first counterexample: {failed[0].line()}")
    return 1 if failed else 0


def cmd_selftest(args) -> int:
    return _report(args, selftest(args.seed))


def cmd_sweep(args) -> int:
    for d in args.d:
        if d < 2:
            raise UsageError(f"d >= 2 required (got d={d})")
    if min(args.m) < 2:
        raise UsageError(f"m >= 2 required (got m={min(args.m)})")
    if min(args.n) < 1:
        raise UsageError("n >= 1 required")
    if args.rmax < 1:
        raise UsageError("--rmax must be >= 1")
    specs = list(enumerate_specs(args.d, args.m, args.n, args.rmax))
    if args.exclude_single_node:
        specs = [s for s in specs if s.r_max >= 2]
    results = [spec_record(s) for s in specs]
    if args.scenarios:
        rng = np.random.default_rng(args.seed)
        for k in range(args.scenarios):
            spec = specs[int(rng.integers(len(specs)))]
            mode = "even" if spec.d % 2 == 0 and k % 2 else GENERAL
            sc = random_scenario(rng, spec.d, spec.m, spec.r, mode, ties=2 if k % 3 == 0 else 0)
            rep = validate(plan(sc), sc)
            detail = f"report={json.dumps(rep.to_dict(), sort_keys=True)}"
            results.append(CheckResult(f"plan #{k} {mode} {spec.label()}", rep.passed, detail))
    return _report(args, results)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="seqptc", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.set_defaults(fn=fn)
        return p

    def spec_flags(p):
        p.add_argument("--d", type=int, required=True, help="ambient dimension")
        p.add_argument("--m", type=int, required=True, help="number of obstacles")
        p.add_argument("--r", type=parse_int_list, required=True, help="targets per robot, e.g. 2,3")

    spec_flags(add("tc", cmd_tc, "exact sequential parametrized TC"))
    p = add("witness", cmd_witness, "cup-length witness and its basis expansion")
    spec_flags(p)
    p.add_argument("--dump", action="store_true", help="list every basis monomial with its coefficient")
    p.add_argument("--variant", choices=("general", "worked"), default="general")

    p = add("plan", cmd_plan, "plan collision-free paths for a scenario file")
    p.add_argument("scenario")
    p.add_argument("--out", help="write the path document here")
    p.add_argument("--csv", help="write sampled trajectories (t, robot, x_1..x_d) here")
    p.add_argument("--samples", type=int, default=64, help="CSV samples per interval")

    p = add("validate", cmd_validate, "certify a path document against its scenario")
    p.add_argument("path")
    p.add_argument("scenario")
    p.add_argument("--samples", type=int, default=2048, help="samples per interval")

    p = add("cells", cmd_cells, "cell descriptor of a scenario")
    p.add_argument("scenario")

    p = add("selftest", cmd_selftest, "algebra and planner invariant suites")
    p.add_argument("--seed", type=int, default=0)

    p = add("sweep", cmd_sweep, "TC identities over a parameter grid")
    p.add_argument("--d", type=parse_int_list, required=True)
    p.add_argument("--m", type=parse_int_list, required=True)
    p.add_argument("--n", type=parse_int_list, required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenarios", type=int, default=0, help="also plan and validate this many random scenarios")
    p.add_argument("--exclude-single-node", action="store_true", help="skip specs with r_n = 1")
    return top


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 2) < 2:
        print("error: --samples must be >= 2", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (UsageError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
