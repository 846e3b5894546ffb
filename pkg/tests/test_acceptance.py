"""Acceptance gate: one test per release criterion, one PASS line each.

Each test prints ``PASS  <criterion>`` on success, so a verbose run
yields exactly one pass/fail line per criterion.  Timed criteria assert
their wall-clock budget around the measured section only.
"""

import threading
import time
from collections import Counter
from random import Random

from tswiki import Template, TupleSpace, WikiEngine, WikiTuple, replay
from tswiki.lab import (
    AgentSpec,
    Schedule,
    ScenarioSpec,
    interleavings,
    run_scenario,
    run_vote_convergence,
)
from tswiki.oplog import PersistentSpace, read_records

from sample_space import ALICE_TS, ED_PAGE, ED_TS, demo_space


def _pass(name: str, t0=None, budget=None) -> None:
    if t0 is not None:
        elapsed = time.perf_counter() - t0
        assert elapsed < budget, f"{name}: {elapsed:.2f}s exceeds {budget}s budget"
        print(f"PASS  {name}  ({elapsed:.2f}s < {budget}s)")
    else:
        print(f"PASS  {name}")


def test_01_worked_example_fidelity():
    t0 = time.perf_counter()
    space = demo_space()
    rng = Random(0)
    page = Template(wikiword="TupleSpace")
    for _ in range(1000):
        served = space.rdp(page, rng)
        assert served is not None
        assert served.tuple in (ED_TS, ALICE_TS)
        assert served.tuple != ED_PAGE
    by_alice = Template(author="Alice")
    for _ in range(1000):
        served = space.rdp(by_alice, rng)
        assert served is not None and served.tuple.author == "Alice"
    _pass("worked-example fidelity", t0, budget=1.0)


def test_02_selection_law_two_thirds():
    t0 = time.perf_counter()
    space = TupleSpace()
    t1 = WikiTuple("LawPage", "a", 1, "2005-03-20", "one instance")
    t2 = WikiTuple("LawPage", "b", 2, "2005-03-21", "two instances")
    space.out(t1)
    space.out(t2)
    space.out(t2)
    rng = Random(0)
    draws = 10_000
    hits = sum(space.rdp(Template(wikiword="LawPage"), rng).tuple == t2 for _ in range(draws))
    assert 0.647 <= hits / draws <= 0.687, f"freq(t2) = {hits / draws}"
    _pass("selection law p=2/3", t0, budget=1.0)


def test_03_concurrent_editing_conserves_and_never_faults():
    t0 = time.perf_counter()
    space = TupleSpace()
    space.out(WikiTuple("BusyPage", "founder", 1, "2005-03-20", "first"))
    page = Template(wikiword="BusyPage")

    editors, readers, reads_each = 100, 10, 100
    written: list[WikiTuple] = []
    faults: list[int] = []
    errors: list[str] = []
    lock = threading.Lock()
    start = threading.Barrier(editors + readers)

    def edit(i: int) -> None:
        rng = Random(1000 + i)
        start.wait()
        served = space.rdp(page, rng)
        if served is None:
            with lock:
                errors.append(f"editor {i} found no page")
            return
        t = WikiTuple("BusyPage", f"editor{i}", served.tuple.rev + 1, "2005-04-01", f"edit {i}")
        space.out(t)
        with lock:
            written.append(t)

    def read(i: int) -> None:
        rng = Random(2000 + i)
        start.wait()
        misses = sum(space.rdp(page, rng) is None for _ in range(reads_each))
        with lock:
            faults.append(misses)

    threads = [threading.Thread(target=edit, args=(i,)) for i in range(editors)]
    threads += [threading.Thread(target=read, args=(i,)) for i in range(readers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    assert errors == []
    assert space.count(page) == 1 + editors  # conservation
    assert sum(faults) == 0 and len(faults) == readers  # 1,000 reads, no faults
    present = {t for t, _ in space.snapshot()}
    lost = [t for t in written if t not in present]
    assert len(written) == editors and lost == []  # no acknowledged write vanished
    _pass("concurrent rd-modify-out conservation", t0, budget=10.0)


def test_04_in_editing_fault_fixture_is_deterministic():
    front = WikiTuple("FrontPage", "founder", 1, "2005-03-20", "welcome")

    def fixture(kind: str) -> ScenarioSpec:
        return ScenarioSpec(
            agents=(
                AgentSpec(kind, count=1, pages=("FrontPage",), actions=1),
                AgentSpec("reader", count=1, pages=("FrontPage",), actions=1),
            ),
            schedule=Schedule.explicit([f"{kind}-1", "reader-1", f"{kind}-1"]),
            initial=(front,),
        )

    in_report = run_scenario(fixture("in_editor"), seed=1)
    rd_report = run_scenario(fixture("rd_editor"), seed=1)
    assert in_report.reader_faults == 1
    assert rd_report.reader_faults == 0
    assert run_scenario(fixture("in_editor"), seed=1).to_json() == in_report.to_json()
    assert run_scenario(fixture("rd_editor"), seed=1).to_json() == rd_report.to_json()
    _pass("in-editing fault fixture (1 vs 0, deterministic)")


def test_05_vote_convergence_ninety_votes():
    t0 = time.perf_counter()
    result = run_vote_convergence(k=10, votes=90, draws=10_000, seed=3)
    assert result.analytic[result.target] == (1 + 90) / (10 + 90)  # exact arithmetic
    assert abs(result.empirical[result.target] - 0.91) <= 0.02
    _pass("vote convergence to 0.91", t0, budget=2.0)


def test_06_vote_unvote_inversion_and_purge():
    space = demo_space()
    engine = WikiEngine(space)
    before = space.snapshot()
    engine.vote(ALICE_TS)
    engine.unvote(ALICE_TS)
    assert space.snapshot() == before  # unvote inverts vote

    target = WikiTuple("HotPage", "fan", 1, "2005-03-25", "very popular")
    for _ in range(5):
        space.out(target)
    others = [(t, n) for t, n in space.snapshot() if t != target]
    assert engine.purge(target) == 5
    assert space.rdp(Template.exact(target), Random(0)) is None
    assert [(t, n) for t, n in space.snapshot() if t != target] == others
    _pass("vote/unvote inversion and purge")


def test_07_crash_restart_equivalence(tmp_path):
    t0 = time.perf_counter()
    # A 50-operation script: weighted toward out so in always has prey.
    log = tmp_path / "oplog.jsonl"
    space = PersistentSpace(log, fsync=False)
    rng = Random(99)
    alive: Counter = Counter()
    for step in range(50):
        if alive and rng.random() < 0.35:
            victim = rng.choice(sorted(alive))
            removed = space.inp(Template.exact(WikiTuple.from_list(list(victim))), rng)
            assert removed is not None
            alive[victim] -= 1
            alive += Counter()  # drop zeros
        else:
            t = WikiTuple(
                "ScriptPage",
                f"author{rng.randrange(4)}",
                rng.randrange(1, 4),
                "2005-04-01",
                f"body {rng.randrange(3)}",
            )
            space.out(t)
            alive[tuple(t.as_list())] += 1
    space.close()

    lines = log.read_bytes().splitlines(keepends=True)
    records = list(read_records(log))
    assert len(lines) == len(records) == 50
    fold: Counter = Counter()
    for boundary in range(51):
        prefix = tmp_path / f"cut{boundary}.jsonl"
        prefix.write_bytes(b"".join(lines[:boundary]))
        restored = replay(prefix)
        assert Counter({tuple(t.as_list()): n for t, n in restored.snapshot()}) == fold
        if boundary < 50:
            record = records[boundary]
            key = tuple(record.tuple.as_list())
            fold[key] += 1 if record.op == "out" else -1
            fold += Counter()
    _pass("crash-restart equivalence at all 51 boundaries", t0, budget=5.0)


def test_08_date_narrowing_failure_mode():
    space = demo_space()
    engine = WikiEngine(space)
    rng = Random(0)
    # TupleSpace was edited on 03-20 and 03-22, never on 03-21.
    assert engine.read_dated("TupleSpace", "2005-03-21", rng) is None
    page = engine.read_page("TupleSpace", rng)
    assert page is not None and page.served.tuple.wikiword == "TupleSpace"
    _pass("date-narrowing misses while undated read succeeds")


def test_09_exhaustive_small_schedules_never_fault():
    front = WikiTuple("FrontPage", "founder", 1, "2005-03-20", "welcome")
    schedules = 0
    for editor_actions in (1, 2):
        for reader_actions in range(1, 6 - 2 * editor_actions + 1):
            for steps in interleavings(
                {"rd_editor-1": 2 * editor_actions, "reader-1": reader_actions}
            ):
                spec = ScenarioSpec(
                    agents=(
                        AgentSpec("rd_editor", count=1, pages=("FrontPage",), actions=editor_actions),
                        AgentSpec("reader", count=1, pages=("FrontPage",), actions=reader_actions),
                    ),
                    schedule=Schedule.explicit(steps),
                    initial=(front,),
                )
                assert run_scenario(spec, seed=1).reader_faults == 0, f"{steps} faulted"
                schedules += 1
    assert schedules == 54  # every ≤6-step interleaving of the two agents
    _pass(f"exhaustive small schedules ({schedules} interleavings, 0 faults)")
