"""Serve-probability convergence under vote-by-duplication.

Votes one tuple out of k singletons repeatedly and compares the
empirical serve frequency against the exact (1+v)/(k+v) law.

Usage: python scripts/vote_convergence.py [--k N] [--votes N] [--draws N] [--seed N]
"""

import argparse

from tswiki.lab import run_vote_convergence


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, default=10, help="distinct singleton tuples on the page")
    parser.add_argument("--votes", type=int, default=90)
    parser.add_argument("--draws", type=int, default=10_000, help="reads per checkpoint")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    result = run_vote_convergence(k=args.k, votes=args.votes, draws=args.draws, seed=args.seed)
    print(f"target tuple: {result.target}")
    print(f"{'votes':>6}  {'exact p':>9}")
    for votes, exact in result.trajectory:
        print(f"{votes:>6}  {exact:>9.4f}")
    print(f"\nafter all {args.votes} votes, over {args.draws} draws:")
    print(f"{'tuple':<60}  {'analytic':>9}  {'empirical':>9}")
    for key in sorted(result.analytic, key=lambda k: -result.analytic[k]):
        print(f"{key:<60}  {result.analytic[key]:>9.4f}  {result.empirical[key]:>9.4f}")
    print(f"max |empirical - analytic| = {result.max_abs_error:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
