"""Command-line interface.

    solenoid-homology validate  FILE...   pre-solenoid checks        (exit 0/1/2)
    solenoid-homology analyze   FILE...   full homology report
    solenoid-homology selfcheck FILE...   run the property suite on the input
    solenoid-homology cech      FILE...   Čech cohomology of the inverse limit
    solenoid-homology dimgroup  FILE...   dimension groups of the covering shift

Exit codes: 0 success, 1 validation or property failure, 2 usage, I/O or
parse error.  JSON is the machine format; text output renders the same data.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import __version__
from .homology import ValidationFailed, analyze, build_sft, cech, dimension_groups
from .normalform import normalize
from .rule_core import ParseError, WrappingRule, format_rule, parse_rule, power_rule
from .selfcheck import replay_checks, run_selfcheck
from .validator import validate

log = logging.getLogger("solenoid_homology")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    command: str
    paths: tuple[str, ...]
    fmt: str = "json"
    power: int | None = None
    quiet: bool = False
    verbosity: int = 0
    replay: str | None = None


@dataclass
class Outcome:
    code: int
    data: dict
    text: str


def load_rule(path: str, power: int | None) -> WrappingRule:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from exc
    try:
        rule = parse_rule(text)
    except ParseError as exc:
        raise UsageError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    if power is not None:
        rule = power_rule(rule, power)
    return rule


def _report_text(report) -> str:
    lines = []
    mark = lambda ok: "pass" if ok else "FAIL"
    if not report.nonempty:
        lines.append(f"  nonempty:    FAIL (empty words: {', '.join(report.empty_edges)})")
    mx = report.mixing
    lines.append(f"  mixing:      {mark(mx.passed)}" + (f" (primitive at power {mx.witness})" if mx.passed else ""))
    nf = report.nonfolding
    lines.append(f"  nonfolding:  {mark(nf.passed)}")
    for v in nf.violations:
        lines.append(f"    fold in word of {v.edge} at position {v.position} (merges after {v.depth} steps)")
    fl = report.flattening
    if fl.passed:
        lines.append(f"  flattening:  pass (d = {fl.d})")
    else:
        size = f" (germ image stabilizes at size {fl.image_size})" if fl.image_size else ""
        lines.append(f"  flattening:  FAIL{size}")
    lines.append(f"  expansion:   {mark(report.expansion_surrogate)} (combinatorial surrogate)")
    lines.append(f"  markov:      {mark(report.markov)}")
    lines.append("  => " + ("pre-solenoid" if report.ok else "not a pre-solenoid"))
    return "\n".join(lines)


def cmd_validate(rule: WrappingRule) -> Outcome:
    report = validate(rule)
    return Outcome(EXIT_OK if report.ok else EXIT_FAIL, report.to_json(), _report_text(report))


def _failed_validation(exc: ValidationFailed) -> Outcome:
    data = {"error": "validation failed", "validation": exc.report.to_json()}
    return Outcome(EXIT_FAIL, data, "not a pre-solenoid:\n" + _report_text(exc.report))


def _groups_text(label: str, groups: dict) -> list[str]:
    return [f"  {label}_{k} = {g}" for k, g in sorted(groups.items())] + [f"  {label}_N = 0 for N >= 2"]


def cmd_analyze(rule: WrappingRule) -> Outcome:
    try:
        res = analyze(rule)
    except ValidationFailed as exc:
        return _failed_validation(exc)
    names = rule.names
    norm = res.norm
    lines = [
        f"orientable: {'yes' if res.orientable else 'no'} ({res.orientation.describe(names)})",
        f"normalized: power {norm.power_used}, flips {{{', '.join(names[i] for i in sorted(norm.flips))}}}, "
        f"fixed germs Init {names[norm.a_edge]}, Term {names[norm.b_edge]}",
        "classes:    " + ", ".join(f"{n}: {c.value}" for n, c in zip(names, norm.classification)),
        f"w = {list(res.obstruction.w)}",
        f"D^s = {res.dim_s}    D^u = {res.dim_u}",
        *_groups_text("H^s", res.h_s),
        *_groups_text("H^u", res.h_u),
        f"Čech: H^0 = {res.cech.h0}, H^1 = {res.cech.h1}",
    ]
    return Outcome(EXIT_OK, res.to_json(), "\n".join(lines))


def cmd_cech(rule: WrappingRule) -> Outcome:
    report = validate(rule)
    if not report.ok:
        return _failed_validation(ValidationFailed(report))
    c = cech(rule, normalize(rule))
    cmp = {True: "equals H^u_0 data", None: "no comparison (non-orientable)"}[c.matches_h_u0]
    text = f"H^0 = {c.h0}\nH^1 = {c.h1}  [limit of {c.matrix.tolist()}]\n{cmp}"
    return Outcome(EXIT_OK, c.to_json(), text)


def cmd_dimgroup(rule: WrappingRule) -> Outcome:
    sft = build_sft(rule)
    ds, du = dimension_groups(sft)
    data = {
        "vertices": sft.vertices,
        "edges": len(sft.edges),
        "gamma_s": sft.gamma_s.tolist(),
        "gamma_u": sft.gamma_u.tolist(),
        "dim_s": ds.to_json(),
        "dim_u": du.to_json(),
    }
    text = (
        f"covering graph: {sft.vertices} vertices, {len(sft.edges)} edges\n"
        f"D^s = {ds}  (charpoly {data['dim_s'].get('charpoly')}, |det| {data['dim_s'].get('abs_det')})\n"
        f"D^u = {du}  (charpoly {data['dim_u'].get('charpoly')}, |det| {data['dim_u'].get('abs_det')})"
    )
    return Outcome(EXIT_OK, data, text)


def cmd_selfcheck(rule: WrappingRule, replay: dict | None = None) -> Outcome:
    report = validate(rule)
    if not report.ok:
        return _failed_validation(ValidationFailed(report))
    checks = replay_checks(rule, replay) if replay is not None else run_selfcheck(rule)
    ok = all(c.passed for c in checks)
    data = {
        "passed": ok,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }
    text = "\n".join(
        f"  {'pass' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "") for c in checks
    )
    return Outcome(EXIT_OK if ok else EXIT_FAIL, data, text)


def run_one(cfg: AnalysisConfig, path: str) -> Outcome:
    try:
        rule = load_rule(path, cfg.power)
        replay = None
        if cfg.replay is not None:
            try:
                with open(cfg.replay, encoding="utf-8") as fh:
                    replay = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"{cfg.replay}: cannot read replay file: {exc}") from exc
    except UsageError as exc:
        return Outcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
    log.debug("analyzing %s:\n%s", path, format_rule(rule))
    if cfg.command == "validate":
        return cmd_validate(rule)
    if cfg.command == "analyze":
        return cmd_analyze(rule)
    if cfg.command == "cech":
        return cmd_cech(rule)
    if cfg.command == "dimgroup":
        return cmd_dimgroup(rule)
    return cmd_selfcheck(rule, replay)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("paths", nargs="+", metavar="FILE", help="wrapping rule file(s)")
    common.add_argument("--format", choices=("json", "text"), default="text", dest="fmt")
    common.add_argument("--power", type=int, metavar="N", help="analyze the N-th iterate instead")
    common.add_argument("--quiet", action="store_true", help="print nothing; report through the exit code")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="solenoid-homology", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the pre-solenoid axioms")
    sub.add_parser("analyze", parents=[common], help="compute homology, dimension groups and Čech cohomology")
    sc = sub.add_parser("selfcheck", parents=[common], help="run the property suite on the input")
    sc.add_argument("--replay", metavar="JSON", help="re-verify w from a saved analyze output")
    sub.add_parser("cech", parents=[common], help="Čech cohomology of the inverse limit")
    sub.add_parser("dimgroup", parents=[common], help="dimension groups of the covering shift")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.power is not None and args.power < 1:
        parser.error("--power must be at least 1")
    cfg = AnalysisConfig(
        command=args.command,
        paths=tuple(args.paths),
        fmt=args.fmt,
        power=args.power,
        quiet=args.quiet,
        verbosity=args.verbose,
        replay=getattr(args, "replay", None),
    )
    logging.basicConfig(level=logging.DEBUG if cfg.verbosity > 1 else logging.INFO if cfg.verbosity else logging.WARNING)

    with ThreadPoolExecutor(max_workers=min(8, len(cfg.paths))) as pool:
        outcomes = list(pool.map(lambda p: run_one(cfg, p), cfg.paths))

    for path, out in zip(cfg.paths, outcomes):
        if out.code == EXIT_USAGE:
            print(out.text, file=sys.stderr)
    if not cfg.quiet:
        if cfg.fmt == "json":
            if len(outcomes) == 1:
                doc = outcomes[0].data
            else:
                doc = [{"path": p, **o.data} for p, o in zip(cfg.paths, outcomes)]
            print(json.dumps(doc, indent=2, ensure_ascii=False))
        else:
            blocks = []
            for path, out in zip(cfg.paths, outcomes):
                if out.code == EXIT_USAGE:
                    continue
                blocks.append(f"{path}:\n{out.text}" if len(cfg.paths) > 1 else out.text)
            if blocks:
                print("\n\n".join(blocks))
    return max(o.code for o in outcomes)


if __name__ == "__main__":
    sys.exit(main())
