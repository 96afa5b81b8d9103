"""Self-convergence of the fish and ninja problems, which have no closed-form solution."""

from __future__ import annotations

import argparse

from _common import output_stream, write_reports
from stretched_eigenbasis.analysis.convergence import convergence_study
from stretched_eigenbasis.problems import get_problem


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--problem", nargs="+", default=["fish_poisson", "ninja_poisson"])
    parser.add_argument("--n", type=int, nargs="+", default=[15, 25, 35])
    parser.add_argument("--delta", type=float, nargs="+", default=[0.1, 0.2, 0.3])
    parser.add_argument("--exterior", choices=["keep", "drop"], default="keep")
    parser.add_argument("-o", "--output")
    args = parser.parse_args()
    reports = [convergence_study(get_problem(pid), args.n, args.delta, exterior=args.exterior)
               for pid in args.problem]
    with output_stream(args.output) as out:
        write_reports(reports, out)


if __name__ == "__main__":
    main()
