"""Convergence in n of the convection-diffusion rectangle problem across Reynolds numbers."""

from __future__ import annotations

import argparse

from _common import output_stream, write_reports
from stretched_eigenbasis.analysis.convergence import convergence_study
from stretched_eigenbasis.problems import get_problem


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--re", type=float, nargs="+", default=[10.0, 100.0, 1e4, 1e5])
    parser.add_argument("--n", type=int, nargs="+", default=list(range(10, 31, 5)))
    parser.add_argument("--delta", type=float, nargs="+", default=[2.0])
    parser.add_argument("-o", "--output")
    args = parser.parse_args()
    reports = []
    for re in args.re:
        report = convergence_study(get_problem("rect_cd_chiu", re=re), args.n, args.delta)
        report.problem = f"rect_cd_chiu[re={re:g}]"
        reports.append(report)
    with output_stream(args.output) as out:
        write_reports(reports, out)


if __name__ == "__main__":
    main()
