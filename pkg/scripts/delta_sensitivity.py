"""Error of the x^2 y^3 rectangle problem as the stretch delta varies at fixed n."""

from __future__ import annotations

import argparse

from _common import output_stream, write_reports
from stretched_eigenbasis.analysis.convergence import convergence_study
from stretched_eigenbasis.problems import get_problem

DELTAS = [0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--problem", default="rect_poisson_x2y3")
    parser.add_argument("--n", type=int, nargs="+", default=[12, 16, 20])
    parser.add_argument("--delta", type=float, nargs="+", default=DELTAS)
    parser.add_argument("-o", "--output")
    args = parser.parse_args()
    report = convergence_study(get_problem(args.problem), args.n, args.delta)
    with output_stream(args.output) as out:
        write_reports([report], out)


if __name__ == "__main__":
    main()
