"""Command-line front end: solve, converge, lebesgue, grid-dump, catalog.

Exit codes: 0 success (possibly with warnings), 1 usage error, 2 numerical
failure of a single requested solve.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis.convergence import (
    DEFAULT_NORM_RESOLUTION,
    EvaluationLattice,
    convergence_study,
    norms_from_errors,
)
from .analysis.interpolation import (
    NodeSet1D,
    cd_lebesgue_sweep,
    lebesgue_constant,
    theorem1_bound,
)
from .assembly import solve_problem
from .errors import ContractError, DomainError, SingularSystemError
from .geometry import CSV_HEADER, fit_to_curve, uniform_grid, write_grid_csv
from .problems import Problem, catalog, get_entry, problem_from_config

logger = logging.getLogger("stretched_eigenbasis")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
COMMANDS = ("solve", "converge", "lebesgue", "grid-dump", "catalog")


class UsageError(Exception):
    pass


def parse_int_list(text: str) -> list[int]:
    """``"10"``, ``"10,20"`` or an inclusive range ``"10:30:5"`` (step defaults to 1)."""
    return [int(round(v)) for v in parse_float_list(text, integer=True)]


def parse_float_list(text: str, integer: bool = False) -> list[float]:
    values: list[float] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = part.split(":")
            if len(bits) not in (2, 3):
                raise UsageError(f"bad range {part!r}; use start:stop[:step]")
            start, stop = float(bits[0]), float(bits[1])
            step = float(bits[2]) if len(bits) == 3 else 1.0
            if step <= 0 or stop < start:
                raise UsageError(f"bad range {part!r}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values.extend(start + step * np.arange(count))
        else:
            values.append(float(part))
    if not values:
        raise UsageError(f"empty list {text!r}")
    if integer and any(abs(v - round(v)) > 1e-9 for v in values):
        raise UsageError(f"expected integers in {text!r}")
    return [float(v) for v in values]


@dataclass
class RunConfig:
    command: str
    problem: str | None = None
    config_path: str | None = None
    n: list[int] = field(default_factory=list)
    delta: list[float] = field(default_factory=list)
    re: float | None = None
    params: dict = field(default_factory=dict)
    n_c: int | None = None
    output: str | None = None
    json_output: str | None = None
    resolution: int = DEFAULT_NORM_RESOLUTION
    region: str = "omega"
    exterior: str = "keep"
    method: str = "auto"
    timing: bool = False
    k: list[float] = field(default_factory=list)
    length: float = 1.0

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in ("solve", "converge", "grid-dump"):
            if (self.problem is None) == (self.config_path is None):
                raise UsageError("give exactly one of --problem or --config")
            if any(n < 4 for n in self.n):
                raise UsageError("n must be at least 4")
            if self.command != "converge" and len(self.n) != 1:
                raise UsageError(f"{self.command} takes a single n")
        if self.command == "lebesgue" and any(n < 2 for n in self.n):
            raise UsageError("N must be at least 2")
        if any(d < 0 for d in self.delta):
            raise UsageError("delta must be nonnegative")
        if self.n_c is not None and self.n_c < 8:
            raise UsageError("n_c must be at least 8")
        for path in (self.output, self.json_output):
            if path is not None and path != "-":
                parent = Path(path).resolve().parent
                if not parent.is_dir() or not os.access(parent, os.W_OK):
                    raise UsageError(f"cannot write to {path}")

    def build_problem(self) -> Problem:
        if self.config_path is not None:
            try:
                with open(self.config_path) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {self.config_path}: {exc}") from None
            try:
                return problem_from_config(data)
            except ContractError as exc:
                raise UsageError(str(exc)) from None
        try:
            entry = get_entry(self.problem)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        params = dict(self.params)
        if self.re is not None:
            if "re" not in entry.defaults:
                raise UsageError(f"{entry.id} has no Reynolds number")
            params["re"] = self.re
        try:
            return entry.build(**params)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None

    def deltas_for(self, problem: Problem) -> list[float]:
        return self.delta or [problem.default_delta]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _companion(cfg: RunConfig, suffix: str) -> str | None:
    """``--json`` if given, else the output path with ``suffix``; never the config file itself."""
    if cfg.json_output is not None:
        path = cfg.json_output
    elif cfg.output is None or cfg.output == "-":
        return None
    else:
        path = str(Path(cfg.output).with_suffix(suffix))
    if cfg.config_path is not None and Path(path).resolve() == Path(cfg.config_path).resolve():
        raise UsageError(f"refusing to overwrite the config file {cfg.config_path}; pass --json")
    return path


# ----------------------------------------------------------------------------
# solve


def solution_table(problem: Problem, solution, resolution: int, region: str) -> tuple[str, dict]:
    """Lattice CSV text and the norms computed from exactly those values."""
    rect = solution.basis.rect
    lattice = EvaluationLattice.build(rect, problem.curve, region, resolution)
    u = solution(lattice.points)
    columns = ["x", "y", "u"]
    exact = None
    if problem.exact is not None:
        exact = np.asarray(problem.exact(lattice.points), dtype=float)
        columns.append("u_exact")
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for i, p in enumerate(lattice.points):
        row = [repr(float(p[0])), repr(float(p[1])), repr(float(u[i]))]
        if exact is not None:
            row.append(repr(float(exact[i])))
        writer.writerow(row)
    norms = {"resolution": resolution, "region": region, "weight": lattice.weight}
    if exact is not None:
        l2, linf = norms_from_errors(u - exact, lattice.weight)
        norms.update(l2=l2, linf=linf)
    return buf.getvalue(), norms


def read_solution_table(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], np.array(rows[1:], dtype=float)
    return {name: body[:, i] for i, name in enumerate(header)}


def renorm(table: dict[str, np.ndarray], weight: float) -> tuple[float, float]:
    """Recompute (L2, max) errors from a re-read solution table."""
    return norms_from_errors(table["u"] - table["u_exact"], weight)


def run_solve(cfg: RunConfig) -> int:
    problem = cfg.build_problem()
    delta = cfg.deltas_for(problem)
    if len(delta) != 1:
        raise UsageError("solve takes a single delta")
    n = cfg.n[0]
    json_path = _companion(cfg, ".json")
    try:
        sol = solve_problem(problem.spec, problem.rect(delta[0]), n, problem.curve, cfg.n_c, cfg.exterior, cfg.method)
    except (SingularSystemError, np.linalg.LinAlgError) as exc:
        print(f"error: solve failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    table, norms = solution_table(problem, sol, cfg.resolution, cfg.region)
    diag = {"problem": problem.id, "schema": CSV_HEADER.lstrip("# "), **sol.diagnostics, **norms}
    if cfg.timing:
        diag["seconds"] = sol.seconds
    _write(cfg.output, table)
    text = json.dumps(diag, indent=2, sort_keys=True) + "\n"
    if json_path is None:
        sys.stderr.write(text)
    else:
        _write(json_path, text)
    return EXIT_OK


def run_converge(cfg: RunConfig) -> int:
    problem = cfg.build_problem()
    if not cfg.n:
        raise UsageError("converge needs --n")
    json_path = _companion(cfg, ".json")
    report = convergence_study(problem, cfg.n, cfg.deltas_for(problem), cfg.resolution, cfg.region,
                               cfg.n_c, cfg.exterior, cfg.method)
    _write(cfg.output, report.to_csv(cfg.timing))
    if json_path is not None:
        _write(json_path, report.to_json(cfg.timing))
    if report.failures:
        print(f"warning: {len(report.failures)} cell(s) failed", file=sys.stderr)
    return EXIT_OK


def run_lebesgue(cfg: RunConfig) -> int:
    """Sine-basis rows (k = 0) use the product formula; others the convection-diffusion cardinals."""
    ns = cfg.n or list(range(4, 41))
    ks = cfg.k or [0.0]
    deltas = cfg.delta or [2.0]
    resolution = cfg.resolution if cfg.resolution >= 1000 else 10_000
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "k", "delta", "L", "lebesgue", "theorem1_bound", "cofactor_bound", "method"])
    failures = 0
    for delta in deltas:
        for k in ks:
            if k == 0:
                for n in ns:
                    lam = lebesgue_constant(NodeSet1D.uniform(n, cfg.length, delta), resolution)
                    writer.writerow([n, repr(0.0), repr(delta), repr(cfg.length), repr(lam),
                                     repr(theorem1_bound(n, delta, cfg.length)), "", "product"])
                continue
            for cell in cd_lebesgue_sweep(ns, [k], delta, cfg.length, resolution):
                failures += cell.error is not None
                writer.writerow([cell.n, repr(cell.k), repr(delta), repr(cfg.length), repr(cell.lebesgue),
                                 repr(theorem1_bound(cell.n, delta, cfg.length)), repr(cell.cofactor_bound),
                                 cell.method if cell.error is None else "failed"])
    _write(cfg.output, buf.getvalue())
    if failures:
        print(f"warning: {failures} cell(s) failed", file=sys.stderr)
    return EXIT_OK


def run_grid_dump(cfg: RunConfig) -> int:
    problem = cfg.build_problem()
    if problem.curve is None:
        raise UsageError(f"{problem.id} has no boundary curve to fit")
    delta = cfg.deltas_for(problem)[0]
    grid = fit_to_curve(uniform_grid(problem.rect(delta), cfg.n[0]), problem.curve, cfg.n_c)
    if cfg.output is None or cfg.output == "-":
        buf = io.StringIO()
        write_grid_csv(grid, buf)
        sys.stdout.write(buf.getvalue())
    else:
        write_grid_csv(grid, cfg.output)
    return EXIT_OK


def run_catalog(cfg: RunConfig) -> int:
    lines = []
    for entry in catalog():
        params = ",".join(f"{k}={v}" for k, v in entry.defaults.items())
        lines.append(f"{entry.id}\t{entry.summary}\t{params or '-'}\tdelta={entry.default_delta}\n")
    _write(cfg.output, "".join(lines))
    return EXIT_OK


RUNNERS = {
    "solve": run_solve,
    "converge": run_converge,
    "lebesgue": run_lebesgue,
    "grid-dump": run_grid_dump,
    "catalog": run_catalog,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return RUNNERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


# ----------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stretched-eigenbasis", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def problem_args(p, multi_n: bool):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--problem", help="catalog id (see the catalog command)")
        src.add_argument("--config", dest="config_path", help="JSON file defining a problem")
        p.add_argument("--n", required=True, help="points per axis" + (" (list or a:b:step)" if multi_n else ""))
        p.add_argument("--delta", help="stretch margin(s); defaults to the problem's own")
        p.add_argument("--re", type=float, help="Reynolds number where the problem has one")
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="catalog parameter, e.g. b=0.9")
        p.add_argument("--n-c", dest="n_c", type=int, help="curve samples used for relocation")
        p.add_argument("--exterior", choices=("keep", "drop"), default="keep",
                       help="PDE rows at nodes outside the domain")
        p.add_argument("--method", choices=("auto", "lu", "qr"), default="auto")
        p.add_argument("--output", "-o", help="output CSV (stdout when omitted)")

    p = sub.add_parser("solve", help="solve once and write the solution on a lattice")
    problem_args(p, multi_n=False)
    p.add_argument("--json", dest="json_output", help="diagnostics JSON (defaults next to --output)")
    p.add_argument("--resolution", type=int, default=DEFAULT_NORM_RESOLUTION)
    p.add_argument("--region", choices=("omega", "rect"), default="omega")
    p.add_argument("--timing", action="store_true", help="record wall-clock seconds")

    p = sub.add_parser("converge", help="error table over n and delta")
    problem_args(p, multi_n=True)
    p.add_argument("--json", dest="json_output", help="JSON mirror (defaults next to --output)")
    p.add_argument("--resolution", type=int, default=DEFAULT_NORM_RESOLUTION)
    p.add_argument("--region", choices=("omega", "rect"), default="omega")
    p.add_argument("--timing", action="store_true", help="fill the seconds column")

    p = sub.add_parser("lebesgue", help="Lebesgue constants of the 1D interpolation problem")
    p.add_argument("--N", dest="n", default="4:40")
    p.add_argument("--delta", default="2")
    p.add_argument("--k", default="0", help="constant velocities; 0 means the pure sine basis")
    p.add_argument("--L", dest="length", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=10_000)
    p.add_argument("--output", "-o")

    p = sub.add_parser("grid-dump", help="write the curve-fitted collocation grid")
    problem_args(p, multi_n=False)

    p = sub.add_parser("catalog", help="list built-in problems")
    p.add_argument("--output", "-o")
    return parser


def _parse_params(items: list[str]) -> dict:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--param value must be a number, got {value!r}") from None
    return params


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(args.command)
    for name in ("problem", "config_path", "re", "n_c", "output", "json_output", "resolution", "region",
                 "exterior", "method", "timing", "length"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "n", None) is not None:
        cfg.n = parse_int_list(args.n)
    if getattr(args, "delta", None) is not None:
        cfg.delta = parse_float_list(args.delta)
    if getattr(args, "k", None) is not None:
        cfg.k = parse_float_list(args.k)
    cfg.params = _parse_params(getattr(args, "param", []))
    return cfg


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
