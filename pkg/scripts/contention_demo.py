"""Contrast IN-editing, RD-editing, and a linear wiki under contention.

Runs three workloads and prints their metric tables:

  1. the 3-step fault fixture, IN-editing vs RD-editing
  2. a seeded crowd of rd-editors and readers on one page
  3. two concurrent editors on a linear baseline vs the tuple space

Usage: python scripts/contention_demo.py [--seed N] [--editors N] [--readers N]
"""

import argparse

from tswiki.lab import (
    LINEAR_BASELINE,
    AgentSpec,
    Schedule,
    ScenarioSpec,
    format_summary,
    run_linear_baseline,
    run_scenario,
)
from tswiki.space import WikiTuple

FRONT = WikiTuple("FrontPage", "founder", 1, "2005-03-20", "welcome")


def fault_fixture(kind: str) -> ScenarioSpec:
    return ScenarioSpec(
        agents=(
            AgentSpec(kind, count=1, pages=("FrontPage",), actions=1),
            AgentSpec("reader", count=1, pages=("FrontPage",), actions=1),
        ),
        schedule=Schedule.explicit([f"{kind}-1", "reader-1", f"{kind}-1"]),
        initial=(FRONT,),
    )


def crowd(editors: int, readers: int, schedule_seed: int) -> ScenarioSpec:
    return ScenarioSpec(
        agents=(
            AgentSpec("rd_editor", count=editors, pages=("FrontPage",), actions=1),
            AgentSpec("reader", count=readers, pages=("FrontPage",), actions=10),
        ),
        schedule=Schedule.seeded(schedule_seed),
        initial=(FRONT,),
    )


def concurrent_pair(kind: str, engine: str) -> ScenarioSpec:
    # Both editors read the base revision before either writes.
    return ScenarioSpec(
        agents=(AgentSpec(kind, count=2, pages=("FrontPage",), actions=1),),
        schedule=Schedule.explicit([f"{kind}-1", f"{kind}-2", f"{kind}-1", f"{kind}-2"]),
        engine=engine,
        initial=(FRONT,),
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--editors", type=int, default=100)
    parser.add_argument("--readers", type=int, default=10)
    args = parser.parse_args()

    print("== 3-step fixture: editor holds the tuple vs copies it ==")
    for kind in ("in_editor", "rd_editor"):
        report = run_scenario(fault_fixture(kind), seed=args.seed)
        print(f"-- {kind}")
        print(format_summary(report))

    print(f"== seeded crowd: {args.editors} rd-editors, {args.readers} readers ==")
    report = run_scenario(crowd(args.editors, args.readers, args.seed), seed=args.seed)
    print(format_summary(report))

    print("== two concurrent editors: linear baseline vs tuple space ==")
    linear = run_linear_baseline(concurrent_pair("linear_editor", LINEAR_BASELINE), seed=args.seed)
    print("-- linear (last write wins)")
    print(format_summary(linear))
    spaced = run_scenario(concurrent_pair("rd_editor", "tuple_space"), seed=args.seed)
    print("-- tuple space (both revisions kept)")
    print(format_summary(spaced))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
