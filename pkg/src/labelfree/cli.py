"""``labelfree`` command line: run scenario files and the invariant suite."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import LabelFreeError, NumericalContractError
from .runner import Row, Sci, format_value, run
from .scenario import parse
from .verification import pair_demonstrations, run_all, summarize

EXIT_OK, EXIT_SCENARIO, EXIT_NUMERIC = 0, 1, 2


def bundled_scenarios() -> list[str]:
    root = resources.files("labelfree") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".scn"))


def read_scenario(ref: str) -> str:
    """Text of a scenario file, or of a bundled scenario given by name."""
    path = Path(ref)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    name = ref if ref.endswith(".scn") else ref + ".scn"
    if name in bundled_scenarios():
        return (resources.files("labelfree") / "scenarios" / name).read_text(encoding="utf-8")
    raise LabelFreeError(f"no scenario file {ref!r} (bundled: {', '.join(bundled_scenarios())})")


def table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def write_csv(path: str, rows: list[Row]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["task", "name", "quantity", "value"])
    for r in rows:
        w.writerow([r.task, r.name, r.quantity, format_value(r.value)])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def cmd_run(args) -> int:
    rows: list[Row] = []
    try:
        scenario = parse(read_scenario(args.scenario))
        # overflow surfaces as a non-finite result and is reported below
        with np.errstate(over="ignore", invalid="ignore"):
            for row in run(scenario):
                rows.append(row)
    except NumericalContractError as exc:
        _flush(rows)
        print(f"error: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (LabelFreeError, OSError) as exc:
        _flush(rows)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    _flush(rows)
    if args.csv:
        write_csv(args.csv, rows)
    return EXIT_OK


def _flush(rows: list[Row]) -> None:
    if rows:
        print(table(["task", "name", "quantity", "value"], [[r.task, r.name, r.quantity, format_value(r.value)] for r in rows]))


def cmd_verify(args) -> int:
    etas = {"boson": (1,), "fermion": (-1,), "both": (1, -1)}[args.statistics]
    checks = summarize(run_all(max_n=args.levels, seed=args.seed, etas=etas, n_scenarios=args.scenarios))
    body = []
    rows: list[Row] = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        rel = "<=" if c.kind == "max" else ">"
        body.append([c.suite, c.name, f"{c.value:.3e}", f"{rel} {c.tol:.0e}", status])
        rows.append(Row(c.suite, c.name, "worst", Sci(c.value)))
    print(table(["suite", "check", "worst", "tolerance", "status"], body))
    if -1 in etas:
        demo = pair_demonstrations(-1)
        print()
        print("fermionic pair operators on explicit instances:")
        for k, v in demo.items():
            print(f"  {k}: {v:.3e}")
    failed = sum(not c.passed for c in checks)
    print(f"\n{len(checks) - failed}/{len(checks)} checks passed")
    if args.csv:
        write_csv(args.csv, rows)
    return EXIT_OK if failed == 0 else EXIT_SCENARIO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="labelfree", description=__doc__)
    p.add_argument("--version", action="version", version=f"labelfree {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file (or a bundled scenario by name)")
    r.add_argument("scenario")
    r.add_argument("--csv", metavar="PATH", help="also write results as CSV")
    r.set_defaults(func=cmd_run)
    v = sub.add_parser("verify", help="run the randomised invariant suite")
    v.add_argument("--levels", type=int, default=4, help="largest particle number (default 4)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--statistics", choices=("boson", "fermion", "both"), default="both")
    v.add_argument("--scenarios", type=int, default=200, help="random labeled-oracle scenarios")
    v.add_argument("--csv", metavar="PATH")
    v.set_defaults(func=cmd_verify)
    ls = sub.add_parser("list", help="list bundled scenarios")
    ls.set_defaults(func=lambda a: print("\n".join(bundled_scenarios())) or EXIT_OK)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
