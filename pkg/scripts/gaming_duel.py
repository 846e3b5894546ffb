"""Vote-gaming duel: an attacker duplicates a defaced tuple, a defender withdraws it.

Prints the contested tuple's multiplicity and serve probability after
each side's turn, round by round, with an optional administrative purge.

Usage: python scripts/gaming_duel.py [--attack N] [--defend N] [--rounds N]
                                     [--purge-at ROUND] [--draws N] [--seed N]
"""

import argparse

from tswiki.lab import run_gaming_duel


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--attack", type=int, default=3, help="votes per round for the defaced tuple")
    parser.add_argument("--defend", type=int, default=1, help="withdrawals per round against it")
    parser.add_argument("--rounds", type=int, default=6)
    parser.add_argument("--purge-at", type=int, default=None, help="purge all instances in this round")
    parser.add_argument("--draws", type=int, default=0, help="empirical reads per round (0 = skip)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    trace = run_gaming_duel(
        args.attack,
        args.defend,
        rounds=args.rounds,
        seed=args.seed,
        purge_at_round=args.purge_at,
        draws_per_round=args.draws,
    )
    header = f"{'round':>5}  {'after attack':>14}  {'after defense':>14}  {'serve p':>8}"
    if args.draws:
        header += f"  {'observed':>8}"
    print(f"contested tuple: {trace.contested}")
    print(header)
    for r in trace.rounds:
        line = (
            f"{r.round:>5}  {r.multiplicity_after_attack:>14}  "
            f"{r.multiplicity_after_defense:>14}  {r.serve_p_after_defense:>8.4f}"
        )
        if args.draws:
            line += f"  {r.empirical_p:>8.4f}"
        if r.purged:
            line += "  (purged)"
        print(line)
    print(f"final multiplicity: {trace.final_multiplicity}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
