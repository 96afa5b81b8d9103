"""Lebesgue constants of uniform and perturbed sine nodes against the cotangent bound.

With ``--k`` the convection-diffusion cardinals are swept instead.
"""

from __future__ import annotations

import argparse
import csv

import numpy as np

from _common import output_stream
from stretched_eigenbasis.analysis.interpolation import (
    NodeSet1D,
    cd_lebesgue_sweep,
    lebesgue_constant,
    theorem1_bound,
)


def sine_rows(ns, lengths, deltas, perturbations, resolution, seed):
    rng = np.random.default_rng(seed)
    for length in lengths:
        for delta in deltas:
            for n in ns:
                base = NodeSet1D.uniform(n, length, delta)
                perturbed = [lebesgue_constant(base.perturbed(rng), resolution) for _ in range(perturbations)]
                yield [n, length, delta, repr(lebesgue_constant(base, resolution)),
                       repr(max(perturbed)) if perturbed else "", repr(theorem1_bound(n, delta, length))]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--N", type=int, nargs="+", default=list(range(4, 41)))
    parser.add_argument("--L", type=float, nargs="+", default=[1.0, 2.0])
    parser.add_argument("--delta", type=float, nargs="+", default=[1.0, 2.0])
    parser.add_argument("--k", type=float, nargs="+", help="sweep convection-diffusion cardinals at these k")
    parser.add_argument("--perturbations", type=int, default=20)
    parser.add_argument("--resolution", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-o", "--output")
    args = parser.parse_args()
    with output_stream(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        if args.k:
            writer.writerow(["N", "k", "delta", "L", "lebesgue", "cofactor_bound", "method", "error"])
            for length in args.L:
                for delta in args.delta:
                    for cell in cd_lebesgue_sweep(args.N, args.k, delta, length, args.resolution):
                        writer.writerow([cell.n, cell.k, cell.delta, cell.length, repr(cell.lebesgue),
                                         repr(cell.cofactor_bound), cell.method, cell.error or ""])
        else:
            writer.writerow(["N", "L", "delta", "uniform", "perturbed_max", "bound"])
            writer.writerows(sine_rows(args.N, args.L, args.delta, args.perturbations, args.resolution, args.seed))


if __name__ == "__main__":
    main()
