"""Contention laboratory: deterministic, seeded concurrency scenarios.

Concurrency is modeled as a step scheduler over agent action sequences,
not wall-clock threads, so every claim about interleavings becomes a
reproducible assertion.  An agent's action may span two scheduler steps
(read phase, then write phase); between its IN step and its OUT step an
in-editing agent holds the page's tuple outside the space, which is
exactly the window in which a reader faults.  rd-editing agents never
remove anything, so no interleaving can make a reader fault.

Two engines are available: the tuple-space wiki, and a linear baseline
with one current revision per page and last-write-wins, for contrast.

Metric definitions:
  reader_faults    reads by reader agents that returned nothing although
                   the page had held at least one instance by then
  lost_updates     tuple space: acknowledged editor/creator writes whose
                   tuple has fewer live instances at the end than times it
                   was written.  linear baseline: writes overwritten by an
                   editor whose base was a different revision (the classic
                   overwrite of an unseen revision)
  duplicate_pages  pages whose final state holds more than one distinct
                   rev-1 tuple
  serve_distribution  per page, the share of reader-agent reads that
                   served each tuple (successful reads only)
  vote_trajectory  after every step, the exact serve probability of the
                   scenario's contested tuple, when a gamer or unvoter
                   declares one

Identical (spec, seed) yields a byte-identical MetricsReport.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random
from typing import Iterator, Optional

from .space import Template, TupleSpace, WikiTuple
from .wiki import WikiEngine

TUPLE_SPACE = "tuple_space"
LINEAR_BASELINE = "linear_baseline"

SIM_DATE = "2005-04-01"

# Steps each agent kind spends per action: two-phase agents read on the
# first step and write on the second.
_STEPS_PER_ACTION = {
    "rd_editor": 2,
    "in_editor": 2,
    "creator": 2,
    "linear_editor": 2,
    "reader": 1,
    "voter": 1,
    "gamer": 1,
    "unvoter": 1,
}

_LINEAR_KINDS = {"reader", "creator", "linear_editor"}


class InvalidScenarioError(ValueError):
    """The scenario spec is self-contradictory or references unknown agents."""


def contested_tuple(page: str) -> WikiTuple:
    """The fixed tuple gamers vote for and unvoters remove on a page."""
    return WikiTuple(page, "vandal", 1, SIM_DATE, f"defaced {page}")


def tuple_key(fields: list) -> str:
    """Stable string key for a tuple's five fields, for report maps."""
    return json.dumps(fields, ensure_ascii=False)


@dataclass(frozen=True)
class AgentSpec:
    kind: str
    count: int = 1
    pages: tuple[str, ...] = ("FrontPage",)
    actions: int = 1

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "count": self.count,
            "pages": list(self.pages),
            "actions": self.actions,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "AgentSpec":
        return cls(
            kind=obj["kind"],
            count=obj.get("count", 1),
            pages=tuple(obj.get("pages", ("FrontPage",))),
            actions=obj.get("actions", 1),
        )


@dataclass(frozen=True)
class Schedule:
    """Either a seeded random interleaving or an explicit agent-id-per-step list."""

    kind: str  # "seeded" | "explicit"
    seed: int = 0
    steps: tuple[str, ...] = ()

    @classmethod
    def seeded(cls, seed: int) -> "Schedule":
        return cls("seeded", seed=seed)

    @classmethod
    def explicit(cls, steps) -> "Schedule":
        return cls("explicit", steps=tuple(steps))

    def to_dict(self) -> dict:
        if self.kind == "seeded":
            return {"seeded": self.seed}
        return {"steps": list(self.steps)}

    @classmethod
    def from_dict(cls, obj: dict) -> "Schedule":
        if "seeded" in obj:
            return cls.seeded(obj["seeded"])
        if "steps" in obj:
            return cls.explicit(obj["steps"])
        raise InvalidScenarioError(f"schedule needs 'seeded' or 'steps', got {obj!r}")


@dataclass(frozen=True)
class ScenarioSpec:
    agents: tuple[AgentSpec, ...]
    schedule: Schedule
    engine: str = TUPLE_SPACE
    initial: tuple[WikiTuple, ...] = ()

    def to_dict(self) -> dict:
        return {
            "engine": self.engine,
            "initial": [t.as_list() for t in self.initial],
            "agents": [a.to_dict() for a in self.agents],
            "schedule": self.schedule.to_dict(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScenarioSpec":
        return cls(
            agents=tuple(AgentSpec.from_dict(a) for a in obj.get("agents", [])),
            schedule=Schedule.from_dict(obj.get("schedule", {"seeded": 0})),
            engine=obj.get("engine", TUPLE_SPACE),
            initial=tuple(WikiTuple.from_list(t) for t in obj.get("initial", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "ScenarioSpec":
        return cls.from_dict(json.loads(text))


@dataclass
class MetricsReport:
    engine: str
    steps_run: int
    reader_faults: int
    lost_updates: int
    duplicate_pages: int
    serve_distribution: dict  # page -> tuple key -> frequency
    vote_trajectory: list  # [step, probability] pairs
    final_snapshot: list  # [[five fields], multiplicity] pairs

    def to_dict(self) -> dict:
        return {
            "engine": self.engine,
            "steps_run": self.steps_run,
            "reader_faults": self.reader_faults,
            "lost_updates": self.lost_updates,
            "duplicate_pages": self.duplicate_pages,
            "serve_distribution": self.serve_distribution,
            "vote_trajectory": self.vote_trajectory,
            "final_snapshot": self.final_snapshot,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def format_summary(report: MetricsReport) -> str:
    """Plain-text summary table for terminal output."""
    lines = [
        f"{'engine':<20} {report.engine}",
        f"{'steps run':<20} {report.steps_run}",
        f"{'reader faults':<20} {report.reader_faults}",
        f"{'lost updates':<20} {report.lost_updates}",
        f"{'duplicate pages':<20} {report.duplicate_pages}",
        f"{'final instances':<20} {sum(m for _, m in report.final_snapshot)}",
    ]
    for page, dist in sorted(report.serve_distribution.items()):
        lines.append(f"serve distribution for {page}:")
        for key, freq in sorted(dist.items(), key=lambda kv: -kv[1]):
            lines.append(f"  {freq:8.4f}  {key}")
    return "\n".join(lines)


class _Agent:
    """One scheduled actor; two-phase kinds stash state between their steps."""

    def __init__(self, agent_id: str, spec: AgentSpec):
        self.id = agent_id
        self.kind = spec.kind
        self.pages = spec.pages
        self.remaining = _STEPS_PER_ACTION[spec.kind] * spec.actions
        self.action_no = 0
        self.phase = 0  # 0 = read phase, 1 = write phase (two-phase kinds)
        self.stash: object = None

    @property
    def page(self) -> str:
        return self.pages[self.action_no % len(self.pages)]


class _LinearRevision:
    """Current revision of a linear-baseline page, tagged with its write id."""

    __slots__ = ("write_id", "fields")

    def __init__(self, write_id: int, fields: WikiTuple):
        self.write_id = write_id
        self.fields = fields


class _LinearWiki:
    """One current revision per page; a write unconditionally replaces it."""

    def __init__(self):
        self.pages: dict[str, _LinearRevision] = {}
        self.lost_updates = 0
        self._next_write_id = 1

    def read(self, page: str) -> Optional[_LinearRevision]:
        return self.pages.get(page)

    def write(self, page: str, fields: WikiTuple, base_write_id: Optional[int]) -> None:
        current = self.pages.get(page)
        if current is not None and current.write_id != base_write_id:
            # Overwrote a revision the writer never saw: that write is gone.
            self.lost_updates += 1
        self.pages[page] = _LinearRevision(self._next_write_id, fields)
        self._next_write_id += 1


def _validate(spec: ScenarioSpec) -> None:
    if spec.engine not in (TUPLE_SPACE, LINEAR_BASELINE):
        raise InvalidScenarioError(f"unknown engine {spec.engine!r}")
    if not spec.agents:
        raise InvalidScenarioError("scenario declares no agents")
    for a in spec.agents:
        if a.kind not in _STEPS_PER_ACTION:
            raise InvalidScenarioError(f"unknown agent kind {a.kind!r}")
        if spec.engine == LINEAR_BASELINE and a.kind not in _LINEAR_KINDS:
            raise InvalidScenarioError(
                f"agent kind {a.kind!r} is not meaningful on the linear baseline"
            )
        if spec.engine == TUPLE_SPACE and a.kind == "linear_editor":
            raise InvalidScenarioError("linear_editor requires engine=linear_baseline")
        if a.count < 1 or a.actions < 0:
            raise InvalidScenarioError("agent count must be >= 1 and actions >= 0")
        if not a.pages or any(not p for p in a.pages):
            raise InvalidScenarioError("agents need at least one non-empty target page")


def _build_agents(spec: ScenarioSpec) -> dict[str, _Agent]:
    agents: dict[str, _Agent] = {}
    per_kind: dict[str, int] = {}
    for a in spec.agents:
        for _ in range(a.count):
            per_kind[a.kind] = per_kind.get(a.kind, 0) + 1
            agent_id = f"{a.kind}-{per_kind[a.kind]}"
            agents[agent_id] = _Agent(agent_id, a)
    return agents


def _schedule_steps(spec: ScenarioSpec, agents: dict[str, _Agent]) -> Iterator[str]:
    if spec.schedule.kind == "explicit":
        live = {aid: agent.remaining for aid, agent in agents.items()}
        for i, aid in enumerate(spec.schedule.steps):
            if aid not in live:
                raise InvalidScenarioError(f"schedule step {i} names unknown agent {aid!r}")
            if live[aid] == 0:
                raise InvalidScenarioError(f"schedule step {i}: agent {aid!r} has no steps left")
            live[aid] -= 1
            yield aid
    else:
        rng = Random(f"sched:{spec.schedule.seed}")
        live_ids = [aid for aid, agent in agents.items() if agent.remaining > 0]
        while live_ids:
            aid = live_ids[rng.randrange(len(live_ids))]
            yield aid
            if agents[aid].remaining == 0:
                live_ids.remove(aid)


class _Run:
    """Mutable state of one scenario execution."""

    def __init__(self, spec: ScenarioSpec, seed: int):
        _validate(spec)
        self.spec = spec
        self.draw_rng = Random(f"draw:{seed}")
        self.agents = _build_agents(spec)
        self.established: set[str] = set()
        self.reader_faults = 0
        self.serve_counts: dict[str, dict[str, int]] = {}
        self.acked_writes: list[WikiTuple] = []
        self.trajectory: list = []
        self.steps_run = 0

        if spec.engine == TUPLE_SPACE:
            self.space = TupleSpace()
            self.engine = WikiEngine(self.space)
            for t in spec.initial:
                self.space.out(t)
                self.established.add(t.wikiword)
        else:
            self.linear = _LinearWiki()
            for t in spec.initial:
                current = self.linear.read(t.wikiword)
                base = current.write_id if current else None
                self.linear.write(t.wikiword, t, base)
                self.established.add(t.wikiword)

        # The contested tuple, if any gamer or unvoter plays.
        self.target: Optional[WikiTuple] = None
        for a in spec.agents:
            if a.kind in ("gamer", "unvoter"):
                self.target = contested_tuple(a.pages[0])
                break

    # -- step execution -------------------------------------------------

    def step(self, agent: _Agent) -> None:
        getattr(self, f"_step_{agent.kind}")(agent)
        agent.remaining -= 1
        self.steps_run += 1
        if self.target is not None:
            self._record_trajectory()

    def _finish_action(self, agent: _Agent) -> None:
        agent.phase = 0
        agent.stash = None
        agent.action_no += 1

    def _record_serve(self, page: str, fields: list) -> None:
        per_page = self.serve_counts.setdefault(page, {})
        key = tuple_key(fields)
        per_page[key] = per_page.get(key, 0) + 1

    def _record_trajectory(self) -> None:
        # Gamers and unvoters only exist on the tuple-space engine.
        total = self.space.count(Template(wikiword=self.target.wikiword))
        p = self.space.multiplicity(self.target) / total if total else 0.0
        self.trajectory.append([self.steps_run, p])

    def _ack_write(self, t: WikiTuple) -> None:
        self.acked_writes.append(t)
        self.established.add(t.wikiword)

    def _edit_body(self, agent: _Agent) -> str:
        return f"{agent.page} text {agent.action_no + 1} by {agent.id}"

    # Tuple-space agents.

    def _step_reader(self, agent: _Agent) -> None:
        page = agent.page
        if self.spec.engine == TUPLE_SPACE:
            served = self.space.rdp(Template(wikiword=page), self.draw_rng)
            fields = served.tuple.as_list() if served else None
        else:
            current = self.linear.read(page)
            fields = current.fields.as_list() if current else None
        if fields is None:
            if page in self.established:
                self.reader_faults += 1
        else:
            self._record_serve(page, fields)
        self._finish_action(agent)

    def _step_rd_editor(self, agent: _Agent) -> None:
        if agent.phase == 0:
            served = self.space.rdp(Template(wikiword=agent.page), self.draw_rng)
            agent.stash = served.tuple if served else None
            agent.phase = 1
            return
        base: Optional[WikiTuple] = agent.stash
        rev = base.rev + 1 if base is not None else 1
        t = WikiTuple(agent.page, agent.id, rev, SIM_DATE, self._edit_body(agent))
        self.space.out(t)
        self._ack_write(t)
        self._finish_action(agent)

    def _step_in_editor(self, agent: _Agent) -> None:
        if agent.phase == 0:
            # The withdrawn tuple lives only in the agent's hands now.
            agent.stash = self.space.inp(Template(wikiword=agent.page), self.draw_rng)
            agent.phase = 1
            return
        base: Optional[WikiTuple] = agent.stash
        rev = base.rev + 1 if base is not None else 1
        t = WikiTuple(agent.page, agent.id, rev, SIM_DATE, self._edit_body(agent))
        self.space.out(t)
        self._ack_write(t)
        self._finish_action(agent)

    def _step_creator(self, agent: _Agent) -> None:
        page = agent.page
        if agent.phase == 0:
            if self.spec.engine == TUPLE_SPACE:
                agent.stash = self.engine.page_exists(page)
            else:
                agent.stash = self.linear.read(page) is not None
            agent.phase = 1
            return
        if not agent.stash:  # looked missing at check time
            t = WikiTuple(page, agent.id, 1, SIM_DATE, f"{page} created by {agent.id}")
            if self.spec.engine == TUPLE_SPACE:
                self.space.out(t)
            else:
                self.linear.write(page, t, None)
            self._ack_write(t)
        self._finish_action(agent)

    def _step_voter(self, agent: _Agent) -> None:
        served = self.space.rdp(Template(wikiword=agent.page), self.draw_rng)
        if served is not None:
            self.space.out(served.tuple)  # vote for what was just seen
        self._finish_action(agent)

    def _step_gamer(self, agent: _Agent) -> None:
        t = contested_tuple(agent.page)
        self.space.out(t)
        self.established.add(agent.page)
        self._finish_action(agent)

    def _step_unvoter(self, agent: _Agent) -> None:
        self.space.discard_one(contested_tuple(agent.page))
        self._finish_action(agent)

    # Linear baseline editor.

    def _step_linear_editor(self, agent: _Agent) -> None:
        if agent.phase == 0:
            agent.stash = self.linear.read(agent.page)
            agent.phase = 1
            return
        base: Optional[_LinearRevision] = agent.stash
        rev = base.fields.rev + 1 if base is not None else 1
        t = WikiTuple(agent.page, agent.id, rev, SIM_DATE, self._edit_body(agent))
        self.linear.write(agent.page, t, base.write_id if base else None)
        self._ack_write(t)
        self._finish_action(agent)

    # -- reporting -------------------------------------------------------

    def report(self) -> MetricsReport:
        if self.spec.engine == TUPLE_SPACE:
            snapshot = [[t.as_list(), n] for t, n in self.space.snapshot()]
            writes: dict[WikiTuple, int] = {}
            for t in self.acked_writes:
                writes[t] = writes.get(t, 0) + 1
            lost = sum(
                max(0, n - self.space.multiplicity(t)) for t, n in writes.items()
            )
        else:
            revisions = sorted(
                (rev.fields for rev in self.linear.pages.values()),
                key=lambda t: t.sort_key(),
            )
            snapshot = [[t.as_list(), 1] for t in revisions]
            lost = self.linear.lost_updates

        creations: dict[str, set[WikiTuple]] = {}
        for fields, _n in snapshot:
            t = WikiTuple.from_list(fields)
            if t.rev == 1:
                creations.setdefault(t.wikiword, set()).add(t)
        duplicates = sum(1 for made in creations.values() if len(made) > 1)

        distribution = {}
        for page, counts in sorted(self.serve_counts.items()):
            total = sum(counts.values())
            distribution[page] = {key: n / total for key, n in sorted(counts.items())}

        return MetricsReport(
            engine=self.spec.engine,
            steps_run=self.steps_run,
            reader_faults=self.reader_faults,
            lost_updates=lost,
            duplicate_pages=duplicates,
            serve_distribution=distribution,
            vote_trajectory=self.trajectory,
            final_snapshot=snapshot,
        )


def run_scenario(spec: ScenarioSpec, seed: int = 0) -> MetricsReport:
    """Execute the scenario deterministically and measure the outcome."""
    run = _Run(spec, seed)
    for agent_id in _schedule_steps(spec, run.agents):
        run.step(run.agents[agent_id])
    return run.report()


def run_linear_baseline(spec: ScenarioSpec, seed: int = 0) -> MetricsReport:
    """run_scenario restricted to the last-write-wins baseline engine."""
    if spec.engine != LINEAR_BASELINE:
        raise InvalidScenarioError("run_linear_baseline needs engine=linear_baseline")
    return run_scenario(spec, seed)


def interleavings(step_counts: dict[str, int]) -> Iterator[tuple[str, ...]]:
    """All distinct merge orders of the given per-agent step counts."""
    total = sum(step_counts.values())
    if total == 0:
        yield ()
        return
    for aid, left in step_counts.items():
        if left == 0:
            continue
        rest = dict(step_counts)
        rest[aid] = left - 1
        for tail in interleavings(rest):
            yield (aid,) + tail


# -- vote convergence and gaming ------------------------------------------


@dataclass
class VoteConvergenceReport:
    k: int
    votes: int
    draws: int
    target: str  # tuple key of the voted-for tuple
    analytic: dict  # tuple key -> exact serve probability after all votes
    empirical: dict  # tuple key -> observed frequency over the draws
    trajectory: list  # [votes so far, exact probability] pairs
    max_abs_error: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "votes": self.votes,
            "draws": self.draws,
            "target": self.target,
            "analytic": self.analytic,
            "empirical": self.empirical,
            "trajectory": self.trajectory,
            "max_abs_error": self.max_abs_error,
        }


def run_vote_convergence(k: int, votes: int, draws: int, seed: int = 0) -> VoteConvergenceReport:
    """Vote `votes` times for one of k initially equal tuples, then sample.

    The exact serve probability of the voted tuple is (1+votes)/(k+votes);
    each unvoted tuple sits at 1/(k+votes).  The report carries those
    analytic values next to frequencies observed over `draws` seeded reads.
    """
    if k < 2:
        raise ValueError("need at least two competing tuples")
    if votes < 0 or draws < 1:
        raise ValueError("votes must be >= 0 and draws >= 1")

    page = "BallotPage"
    space = TupleSpace()
    engine = WikiEngine(space)
    tuples = [
        WikiTuple(page, f"author-{i}", 1, SIM_DATE, f"{page} candidate {i}")
        for i in range(1, k + 1)
    ]
    for t in tuples:
        space.out(t)
    target = tuples[0]
    for _ in range(votes):
        engine.vote(target)

    rng = Random(f"draw:{seed}")
    template = Template(wikiword=page)
    counts: dict[str, int] = {}
    for _ in range(draws):
        served = space.rdp(template, rng)
        key = tuple_key(served.tuple.as_list())
        counts[key] = counts.get(key, 0) + 1

    analytic = {
        tuple_key(t.as_list()): (1 + votes if t == target else 1) / (k + votes)
        for t in tuples
    }
    empirical = {key: counts.get(key, 0) / draws for key in analytic}
    trajectory = [[v, (1 + v) / (k + v)] for v in range(votes + 1)]
    max_err = max(abs(empirical[key] - analytic[key]) for key in analytic)
    return VoteConvergenceReport(
        k=k,
        votes=votes,
        draws=draws,
        target=tuple_key(target.as_list()),
        analytic=analytic,
        empirical=empirical,
        trajectory=trajectory,
        max_abs_error=max_err,
    )


@dataclass
class DuelRound:
    round: int
    votes_cast: int
    unvotes_applied: int
    purged: bool
    multiplicity_after_attack: int
    multiplicity_after_defense: int
    serve_p_after_attack: float
    serve_p_after_defense: float
    empirical_p: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "votes_cast": self.votes_cast,
            "unvotes_applied": self.unvotes_applied,
            "purged": self.purged,
            "multiplicity_after_attack": self.multiplicity_after_attack,
            "multiplicity_after_defense": self.multiplicity_after_defense,
            "serve_p_after_attack": self.serve_p_after_attack,
            "serve_p_after_defense": self.serve_p_after_defense,
            "empirical_p": self.empirical_p,
        }


@dataclass
class DuelTrace:
    attacker_votes_per_round: int
    defender_unvotes_per_round: int
    contested: list  # field list of the tuple under dispute
    rounds: list  # DuelRound items
    final_multiplicity: int

    def to_dict(self) -> dict:
        return {
            "attacker_votes_per_round": self.attacker_votes_per_round,
            "defender_unvotes_per_round": self.defender_unvotes_per_round,
            "contested": self.contested,
            "rounds": [r.to_dict() for r in self.rounds],
            "final_multiplicity": self.final_multiplicity,
        }


def run_gaming_duel(
    attacker_votes_per_round: int,
    defender_unvotes_per_round: int,
    rounds: int,
    seed: int = 0,
    purge_at_round: Optional[int] = None,
    draws_per_round: int = 0,
) -> DuelTrace:
    """Alternate voting and unvoting on a contested tuple, round by round.

    The page starts with one legitimate tuple and the contested tuple at
    multiplicity 1.  Each round the attacker votes, then the defender
    unvotes (and optionally purges).  Equal rates swing the contested
    tuple's serve probability up and back every round; a faster attacker
    grows it without bound.  With draws_per_round > 0 each round also
    samples an empirical serve probability.
    """
    if rounds < 1:
        raise ValueError("need at least one round")
    if attacker_votes_per_round < 0 or defender_unvotes_per_round < 0:
        raise ValueError("per-round rates must be non-negative")

    page = "DisputedPage"
    space = TupleSpace()
    engine = WikiEngine(space)
    legit = WikiTuple(page, "author-1", 1, SIM_DATE, f"{page} honest text")
    vandal = contested_tuple(page)
    space.out(legit)
    space.out(vandal)

    rng = Random(f"duel:{seed}")
    template = Template(wikiword=page)

    def serve_p() -> float:
        total = space.count(template)
        return space.multiplicity(vandal) / total if total else 0.0

    trace: list[DuelRound] = []
    for r in range(1, rounds + 1):
        for _ in range(attacker_votes_per_round):
            engine.vote(vandal)
        after_attack_mult = space.multiplicity(vandal)
        after_attack_p = serve_p()

        unvoted = 0
        for _ in range(defender_unvotes_per_round):
            if engine.unvote(vandal):
                unvoted += 1
        purged = purge_at_round == r
        if purged:
            engine.purge(vandal)

        empirical = None
        if draws_per_round > 0:
            hits = 0
            for _ in range(draws_per_round):
                served = space.rdp(template, rng)
                if served is not None and served.tuple == vandal:
                    hits += 1
            empirical = hits / draws_per_round

        trace.append(
            DuelRound(
                round=r,
                votes_cast=attacker_votes_per_round,
                unvotes_applied=unvoted,
                purged=purged,
                multiplicity_after_attack=after_attack_mult,
                multiplicity_after_defense=space.multiplicity(vandal),
                serve_p_after_attack=after_attack_p,
                serve_p_after_defense=serve_p(),
                empirical_p=empirical,
            )
        )

    return DuelTrace(
        attacker_votes_per_round=attacker_votes_per_round,
        defender_unvotes_per_round=defender_unvotes_per_round,
        contested=vandal.as_list(),
        rounds=trace,
        final_multiplicity=space.multiplicity(vandal),
    )
