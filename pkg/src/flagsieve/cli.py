"""Command line front end: sieve, eliminate, sweep, search, and verify.

Every subcommand prints a deterministic plain-text account to stdout and
can additionally write a machine-readable report (JSON or TSV).  Exit
status: 0 = completed, 1 = result differs from an expected claim,
2 = usage or budget error.
"""

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .designsearch import (
    DesignRecord,
    hypothesis_filter,
    korbit_designs,
    load_design,
    save_design,
    stabilizer_search,
    verify_design,
)
from .eliminator import CellReport, eliminate, survivors, sweep
from .grouporders import GroupSpec, SubgroupCase, case_label
from .permgroup import BUILTIN_NAMES, PermAction, builtin_action, load_action
from .sieve import DesignParams, admissible_tuples_explained

SCHEMA_VERSION = 1
OUTDIR_ENV = "FLAGSIEVE_OUTDIR"

EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_USAGE = 2

_FAMILIES = {
    "linear": "linear",
    "psl": "linear",
    "l": "linear",
    "unitary": "unitary",
    "psu": "unitary",
    "u": "unitary",
}

_KIND_TABLE = {
    "linear": (
        "C1_Pi",
        "C1_Pij",
        "C1_GLiGLni",
        "C2_GLwr",
        "C3",
        "C4",
        "C5_subfield",
        "C6",
        "C7",
        "C8_Sp",
        "C8_O",
        "C8_U",
        "S",
    ),
    "unitary": (
        "C1_Pi",
        "C1_Ni",
        "C2_GU1wr",
        "C2_GLwr",
        "C2_GLhalf",
        "C3",
        "C4",
        "C5_subfield",
        "C5_Sp",
        "C5_O",
        "C6",
        "C7",
        "S",
    ),
}

# short aliases for the common classes; exact kind names always work
_SHORT_CLASSES = {
    "c1": "C1_Pi",
    "c2": "C2_GLwr",
    "c3": "C3",
    "c4": "C4",
    "c5": "C5_subfield",
    "c6": "C6",
    "c7": "C7",
}

_PARAM_FLAGS = {
    "C1_Pi": ("i",),
    "C1_Pij": ("i",),
    "C1_GLiGLni": ("i",),
    "C1_Ni": ("i",),
    "C4": ("i",),
    "C8_U": ("i",),
    "C2_GLwr": ("m", "t"),
    "C3": ("m", "t"),
    "C5_subfield": ("m", "t"),
    "C6": ("m", "t"),
    "C7": ("m", "t"),
    "C8_O": ("sign",),
    "C5_O": ("sign",),
    "C8_Sp": (),
    "C5_Sp": (),
    "C2_GU1wr": (),
    "C2_GLhalf": (),
    "S": ("line",),
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: one subcommand plus its inputs and budgets."""

    subcommand: str
    family: str = ""
    n: int = 0
    q: int = 0
    n_min: int = 0
    n_max: int = 0
    q_max: int = 0
    case: Optional[SubgroupCase] = None
    kind_filter: str = ""
    group: str = ""
    action_file: str = ""
    v: int = 0
    r_divisor: int = 0
    g_max: Optional[int] = None
    rstar_divisor: Optional[int] = None
    k: int = 0
    tuple_params: Optional[DesignParams] = None
    design_file: str = ""
    out_dir: str = ""
    output: str = ""
    format: str = "json"
    run_searches: bool = True
    filter_records: bool = True
    expect: str = ""
    expect_survivors: str = ""
    expect_designs: Optional[int] = None
    element_cap: int = 10**6
    orbit_cap: int = 10**7
    subgroup_budget: int = 10**5
    tuple_budget: int = 10**7
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("element_cap", "orbit_cap", "subgroup_budget", "tuple_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget {name.replace('_', '-')} must be positive")
        if self.workers < 1:
            raise ValueError("worker count must be positive")


# ---------------------------------------------------------------------------
# argument handling


def _family(token: str) -> str:
    key = token.lower()
    if key not in _FAMILIES:
        raise ValueError(f"unknown family {token!r} (use psl/linear or psu/unitary)")
    return _FAMILIES[key]


def _resolve_case(family: str, token: str, args: argparse.Namespace) -> SubgroupCase:
    key = token.lower()
    kind = _SHORT_CLASSES.get(key)
    if kind is None:
        by_name = {k.lower(): k for k in _KIND_TABLE[family]}
        kind = by_name.get(key)
    if kind is None or kind not in _KIND_TABLE[family]:
        raise ValueError(f"unknown {family} class {token!r}")
    if args.params is not None:
        params = tuple(
            int(p) if p.lstrip("+-").isdigit() else p
            for p in args.params.split(",")
            if p != ""
        )
        return SubgroupCase(kind, params)
    values = []
    for flag in _PARAM_FLAGS[kind]:
        value = getattr(args, flag)
        if value is None:
            wanted = " and ".join("--" + f for f in _PARAM_FLAGS[kind])
            raise ValueError(f"class {kind} needs {wanted}")
        values.append(value)
    return SubgroupCase(kind, tuple(values))


def _kind_filter(family: str, token: str) -> str:
    key = token.lower()
    kind = _SHORT_CLASSES.get(key)
    if kind is None:
        by_name = {k.lower(): k for k in _KIND_TABLE[family]}
        kind = by_name.get(key)
    if kind is None:
        raise ValueError(f"unknown {family} class {token!r}")
    return kind


def _resolve_path(path: str) -> str:
    base = os.environ.get(OUTDIR_ENV, "")
    if path and base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _load_source(config: RunConfig) -> PermAction:
    if config.group:
        action = builtin_action(config.group)
    else:
        action = load_action(config.action_file)
    # fail early, under the configured budget, instead of deep in a search
    action.elements(limit=config.element_cap)
    return action


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="flagsieve",
        description="Arithmetic sieve and exhaustive searches for "
        "flag-transitive 2-design parameters.",
        epilog=f"Relative output paths are resolved inside ${OUTDIR_ENV} "
        "when that variable is set.",
    )
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", default="", help="write a report file")
        p.add_argument("--format", choices=("json", "tsv"), default="json")

    p = sub.add_parser("sieve", help="admissible parameter tuples for fixed v")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--r-divisor", type=int, required=True)
    p.add_argument("--g-max", type=int, default=None)
    p.add_argument("--rstar-divisor", type=int, default=None)
    p.add_argument("--tuple-budget", type=int, default=10**7)
    add_output(p)

    p = sub.add_parser("eliminate", help="run one socle/class cell")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--i", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--line", type=int, default=None)
    p.add_argument("--sign", default=None)
    p.add_argument("--params", default=None, help="comma-separated class parameters")
    p.add_argument("--no-search", action="store_true")
    p.add_argument("--expect", choices=("Eliminated", "Survives", "NeedsSearch"))
    add_output(p)

    p = sub.add_parser("sweep", help="eliminate every cell on a grid")
    p.add_argument("--family", required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--class", dest="klass", default="", help="restrict to one class")
    p.add_argument("--no-search", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument(
        "--expect-survivors",
        default="",
        help="file of expected survivor labels, one per line",
    )
    add_output(p)

    p = sub.add_parser("search", help="designs under one group action")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", choices=BUILTIN_NAMES)
    src.add_argument("--action-file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--out-dir", default="", help="where design files are written")
    p.add_argument("--no-filter", action="store_true")
    p.add_argument("--expect-designs", type=int, default=None)
    p.add_argument("--element-cap", type=int, default=10**6)
    p.add_argument("--orbit-cap", type=int, default=10**7)
    p.add_argument("--subgroup-budget", type=int, default=10**5)
    add_output(p)

    p = sub.add_parser("verify", help="re-check a design file from scratch")
    p.add_argument("--design", required=True)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--group", choices=BUILTIN_NAMES)
    src.add_argument("--action-file")
    p.add_argument("--element-cap", type=int, default=10**6)
    return top


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    sc = args.subcommand
    if sc == "sieve":
        return RunConfig(
            subcommand=sc,
            v=args.v,
            r_divisor=args.r_divisor,
            g_max=args.g_max,
            rstar_divisor=args.rstar_divisor,
            tuple_budget=args.tuple_budget,
            output=args.output,
            format=args.format,
        )
    if sc == "eliminate":
        family = _family(args.family)
        return RunConfig(
            subcommand=sc,
            family=family,
            n=args.n,
            q=args.q,
            case=_resolve_case(family, args.klass, args),
            run_searches=not args.no_search,
            expect=args.expect or "",
            output=args.output,
            format=args.format,
        )
    if sc == "sweep":
        family = _family(args.family)
        return RunConfig(
            subcommand=sc,
            family=family,
            n_min=args.n_min,
            n_max=args.n_max,
            q_max=args.q_max,
            kind_filter=_kind_filter(family, args.klass) if args.klass else "",
            run_searches=not args.no_search,
            workers=args.workers,
            expect_survivors=args.expect_survivors,
            output=args.output,
            format=args.format,
        )
    if sc == "search":
        tuple_params = None
        given = [x is not None for x in (args.b, args.r, args.lam)]
        if any(given):
            if not all(given):
                raise ValueError("a fixed tuple needs --b, --r, and --lambda together")
            v = args.v
            if v is None:
                raise ValueError("a fixed tuple needs --v as well")
            tuple_params = DesignParams(v, args.b, args.r, args.k, args.lam)
        return RunConfig(
            subcommand=sc,
            group=args.group or "",
            action_file=args.action_file or "",
            k=args.k,
            tuple_params=tuple_params,
            out_dir=args.out_dir,
            filter_records=not args.no_filter,
            expect_designs=args.expect_designs,
            element_cap=args.element_cap,
            orbit_cap=args.orbit_cap,
            subgroup_budget=args.subgroup_budget,
            output=args.output,
            format=args.format,
        )
    if sc == "verify":
        return RunConfig(
            subcommand=sc,
            design_file=args.design,
            group=args.group or "",
            action_file=args.action_file or "",
            element_cap=args.element_cap,
        )
    raise ValueError(f"unknown subcommand {sc!r}")


# ---------------------------------------------------------------------------
# report files


def _fmt_tuple(p: DesignParams) -> str:
    return f"2-({p.v},{p.k},{p.lam}) r={p.r} b={p.b}"


def report_document(reports: Sequence[CellReport], grid: Optional[Dict]) -> Dict:
    """JSON document for a list of cell reports; field order is fixed."""
    cells = []
    for rep in reports:
        cells.append(
            {
                "spec": {"family": rep.family, "n": rep.n, "q": rep.q},
                "case": {
                    "kind": rep.case.kind,
                    "params": list(rep.case.params),
                    "label": case_label(rep.case),
                },
                "steps": [
                    {
                        "name": s.name,
                        "citation": s.citation,
                        "witnesses": [[key, value] for key, value in s.witnesses],
                        "verdict": s.verdict,
                    }
                    for s in rep.steps
                ],
                "final": {
                    "kind": rep.final.kind,
                    "stepIndex": rep.final.step_index,
                    "tuples": [list(t.as_tuple()) for t in rep.final.tuples],
                    "note": rep.final.note,
                },
            }
        )
    kinds: Dict[str, int] = {}
    for rep in reports:
        kinds[rep.final.kind] = kinds.get(rep.final.kind, 0) + 1
    summary = {
        "cells": len(reports),
        "kinds": {k: kinds[k] for k in sorted(kinds)},
        "survivors": [r.label for r in reports if r.final.kind != "Eliminated"],
    }
    return {
        "schemaVersion": SCHEMA_VERSION,
        "grid": grid,
        "cells": cells,
        "summary": summary,
    }


def _tsv_cell_rows(reports: Sequence[CellReport]) -> str:
    lines = ["family\tn\tq\tcase\tfinal\tstep\tsteps\ttuples\tnote"]
    for rep in reports:
        decisive = ""
        if rep.final.step_index is not None:
            decisive = rep.steps[rep.final.step_index].name
        tuples = ";".join(
            ",".join(str(x) for x in t.as_tuple()) for t in rep.final.tuples
        )
        lines.append(
            "\t".join(
                (
                    rep.family,
                    str(rep.n),
                    str(rep.q),
                    case_label(rep.case),
                    rep.final.kind,
                    decisive,
                    str(len(rep.steps)),
                    tuples,
                    rep.final.note,
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_report(
    reports: Sequence[CellReport],
    path: str,
    format: str = "json",
    grid: Optional[Dict] = None,
) -> None:
    """Write cell reports to path; identical inputs give identical bytes."""
    if format == "tsv":
        text = _tsv_cell_rows(reports)
    elif format == "json":
        text = json.dumps(report_document(reports, grid), indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _run_sieve(config: RunConfig) -> int:
    tuples, rejections = admissible_tuples_explained(
        config.v,
        config.r_divisor,
        g_max=config.g_max,
        rstar_divisor=config.rstar_divisor,
        max_work=config.tuple_budget,
    )
    for t in tuples:
        print(_fmt_tuple(t))
    print(f"tuples {len(tuples)}")
    if config.output:
        codes: Dict[str, int] = {}
        for rej in rejections:
            codes[rej.code] = codes.get(rej.code, 0) + 1
        if config.format == "tsv":
            lines = ["v\tb\tr\tk\tlambda"]
            lines.extend("\t".join(str(x) for x in t.as_tuple()) for t in tuples)
            text = "\n".join(lines) + "\n"
        else:
            doc = {
                "schemaVersion": SCHEMA_VERSION,
                "query": {
                    "v": config.v,
                    "rDivisor": config.r_divisor,
                    "gMax": config.g_max,
                    "rstarDivisor": config.rstar_divisor,
                },
                "tuples": [list(t.as_tuple()) for t in tuples],
                "rejections": {k: codes[k] for k in sorted(codes)},
            }
            text = json.dumps(doc, indent=2) + "\n"
        path = _resolve_path(config.output)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return EXIT_OK


def _print_report(rep: CellReport) -> None:
    print(rep.label)
    for step in rep.steps:
        extras = "".join(f" {key}={value}" for key, value in step.witnesses)
        print(f"  {step.name} {step.verdict}{extras}")
    final = rep.final
    if final.kind == "Eliminated":
        print(f"final Eliminated at {rep.steps[final.step_index].name}")
    else:
        note = f": {final.note}" if final.note else ""
        print(f"final {final.kind}{note}")
    for t in final.tuples:
        print(f"  tuple {_fmt_tuple(t)}")


def _run_eliminate(config: RunConfig) -> int:
    rep = eliminate(
        GroupSpec(config.family, config.n, config.q),
        config.case,
        run_searches=config.run_searches,
    )
    _print_report(rep)
    if config.output:
        grid = {"family": config.family, "n": config.n, "q": config.q}
        emit_report([rep], _resolve_path(config.output), config.format, grid)
    if config.expect and rep.final.kind != config.expect:
        print(f"expected {config.expect}, got {rep.final.kind}")
        return EXIT_DISCREPANCY
    return EXIT_OK


def _merged_sweep(config: RunConfig) -> Tuple[CellReport, ...]:
    args = (config.family, config.n_min, config.n_max, config.q_max)
    if config.workers == 1:
        return sweep(*args, run_searches=config.run_searches)
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = [
            pool.submit(sweep, *args, config.run_searches, (i, config.workers))
            for i in range(config.workers)
        ]
        shards = [f.result() for f in futures]
    # shard i holds cells i, i+W, ...; round-robin restores sweep order
    merged: List[CellReport] = []
    for row in itertools.zip_longest(*shards):
        merged.extend(rep for rep in row if rep is not None)
    return tuple(merged)


def _run_sweep(config: RunConfig) -> int:
    reports = _merged_sweep(config)
    if config.kind_filter:
        reports = tuple(r for r in reports if r.case.kind == config.kind_filter)
    print(
        f"sweep {config.family} n={config.n_min}..{config.n_max} "
        f"q<={config.q_max} cells {len(reports)}"
    )
    kinds: Dict[str, int] = {}
    for rep in reports:
        kinds[rep.final.kind] = kinds.get(rep.final.kind, 0) + 1
    for kind in ("Eliminated", "Survives", "NeedsSearch"):
        print(f"{kind} {kinds.get(kind, 0)}")
    alive = survivors(reports)
    for rep in alive:
        print(f"survivor {rep.label} {rep.final.kind}")
    if config.output:
        grid = {
            "family": config.family,
            "nMin": config.n_min,
            "nMax": config.n_max,
            "qMax": config.q_max,
        }
        emit_report(reports, _resolve_path(config.output), config.format, grid)
    if config.expect_survivors:
        with open(config.expect_survivors, "r", encoding="utf-8") as handle:
            expected = {
                line.strip()
                for line in handle
                if line.strip() and not line.lstrip().startswith("#")
            }
        got = {rep.label for rep in alive}
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        for label in missing:
            print(f"missing {label}")
        for label in extra:
            print(f"extra {label}")
        if missing or extra:
            return EXIT_DISCREPANCY
        print("survivors match")
    return EXIT_OK


def _design_paths(records: Sequence[DesignRecord], out_dir: str) -> List[str]:
    paths = []
    used: Dict[str, int] = {}
    for rec in records:
        p = rec.params
        base = f"{rec.group}_{p.v}_{p.b}_{p.r}_{p.k}_{p.lam}"
        count = used.get(base, 0)
        used[base] = count + 1
        name = base if count == 0 else f"{base}_{count + 1}"
        paths.append(os.path.join(out_dir, name + ".design"))
    return paths


def _run_search(config: RunConfig) -> int:
    action = _load_source(config)
    print(f"group {action.label} degree {action.degree} order {action.order()}")
    exhaustive = True
    if config.tuple_params is not None:
        params = config.tuple_params
        print(f"strategy stabilizer {_fmt_tuple(params)}")
        flags = params.v * params.r
        if flags > 0 and action.order() % flags == 0:
            if action.order() // flags > config.subgroup_budget:
                raise ValueError(
                    f"flag stabilizer order {action.order() // flags} exceeds "
                    f"the subgroup budget {config.subgroup_budget}"
                )
        result = stabilizer_search(action, params)
        for name, text in result.certificate:
            print(f"certificate {name}: {text}")
        records = result.designs
        exhaustive = result.exhaustive
    else:
        print(f"strategy korbit k={config.k}")
        if math.comb(action.degree, config.k) > config.orbit_cap:
            raise ValueError(
                f"C({action.degree},{config.k}) exceeds the orbit budget "
                f"{config.orbit_cap}"
            )
        records = korbit_designs(action, config.k)
        if config.filter_records:
            records = hypothesis_filter(records)
    out_dir = _resolve_path(config.out_dir) or os.environ.get(OUTDIR_ENV, "") or "."
    os.makedirs(out_dir, exist_ok=True)
    for rec, path in zip(records, _design_paths(records, out_dir)):
        save_design(path, rec)
        ft = "flag-transitive" if rec.flag_transitive else "not-flag-transitive"
        print(f"design {_fmt_tuple(rec.params)} {ft} -> {path}")
    print(f"designs {len(records)}")
    print(f"exhaustive {'yes' if exhaustive else 'no'}")
    if config.expect_designs is not None and len(records) != config.expect_designs:
        print(f"expected {config.expect_designs} designs, found {len(records)}")
        return EXIT_DISCREPANCY
    return EXIT_OK


def _run_verify(config: RunConfig) -> int:
    group, params, blocks = load_design(config.design_file)
    source = config
    if not config.group and not config.action_file:
        if group not in BUILTIN_NAMES:
            raise ValueError(
                f"design file names group {group!r}, which is not built in; "
                "give --group or --action-file"
            )
        source = RunConfig(
            subcommand="verify", group=group, element_cap=config.element_cap
        )
    action = _load_source(source)
    print(f"group {action.label} degree {action.degree}")
    if params is not None:
        print(f"declared {_fmt_tuple(params)}")
    report = verify_design(action, blocks, expect=params)
    for problem in report.problems:
        print(f"problem {problem}")
    if report.ok:
        ft = "flag-transitive" if report.flag_transitive else "not-flag-transitive"
        print(f"ok {_fmt_tuple(report.params)} {ft}")
        return EXIT_OK
    print("FAIL")
    return EXIT_DISCREPANCY


# ---------------------------------------------------------------------------
# entry point


def run(config: RunConfig) -> int:
    handlers = {
        "sieve": _run_sieve,
        "eliminate": _run_eliminate,
        "sweep": _run_sweep,
        "search": _run_search,
        "verify": _run_verify,
    }
    return handlers[config.subcommand](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = _config_from_args(args)
        return run(config)
    except (ValueError, RuntimeError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
