"""Durable operation log for the tuple space.

The log is the only persistent state: one JSON object per line, UTF-8,
newline-delimited, holding {seq, op, tuple, ts}.  op is "out" or "in",
tuple is the 5-element array [wikiword, author, rev, date, body], seq is
gapless and strictly increasing from 1, ts is informational wall-clock
time.  Folding the records in order (out -> +1, in -> -1) reconstructs
the live multiset exactly, so restart equals replay.

PersistentSpace mirrors the TupleSpace operation surface but appends a
record durably *before* applying each mutation, under a single
write-ordering lock.  If the append raises, the mutation never happens.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from random import Random
from typing import Iterator, Optional, Union

from .space import MalformedTupleError, ServedTuple, Template, TupleSpace, WikiTuple

OUT = "out"
IN = "in"

LOG_FILENAME = "oplog.jsonl"


class CorruptLogError(Exception):
    """The log cannot be replayed; the message names the offending record."""


@dataclass(frozen=True)
class OpRecord:
    seq: int
    op: str  # OUT or IN
    tuple: WikiTuple
    ts: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "op": self.op, "tuple": self.tuple.as_list(), "ts": self.ts},
            ensure_ascii=False,
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def parse_record(line: str, lineno: int) -> OpRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorruptLogError(f"record {lineno}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise CorruptLogError(f"record {lineno}: expected an object")
    try:
        seq, op, fields = obj["seq"], obj["op"], obj["tuple"]
    except KeyError as exc:
        raise CorruptLogError(f"record {lineno}: missing key {exc}") from exc
    if not isinstance(seq, int) or op not in (OUT, IN):
        raise CorruptLogError(f"record {lineno}: bad seq or op")
    try:
        t = WikiTuple.from_list(fields)
    except MalformedTupleError as exc:
        raise CorruptLogError(f"record {lineno} (seq {seq}): bad tuple: {exc}") from exc
    return OpRecord(seq, op, t, obj.get("ts", ""))


def read_records(path: Union[str, Path]) -> Iterator[OpRecord]:
    """Yield records in file order, checking seq is gapless from 1."""
    expected = 1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_record(line, lineno)
            if record.seq != expected:
                raise CorruptLogError(
                    f"record {lineno}: seq {record.seq}, expected {expected} (gap or reorder)"
                )
            expected += 1
            yield record


def _apply(space: TupleSpace, record: OpRecord) -> None:
    if record.op == OUT:
        space.out(record.tuple)
    elif not space.discard_one(record.tuple):
        raise CorruptLogError(f"seq {record.seq}: 'in' of a tuple with no live instances")


def replay(path: Union[str, Path]) -> TupleSpace:
    """Fold the log into a fresh TupleSpace; missing file means empty space."""
    space = TupleSpace()
    if not Path(path).exists():
        return space
    for record in read_records(path):
        _apply(space, record)
    return space


class OpLog:
    """Append-only writer; append returns only after the record is on disk."""

    def __init__(self, path: Union[str, Path], last_seq: int = 0, fsync: bool = True):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        self._last_seq = last_seq
        self._fsync = fsync

    @property
    def last_seq(self) -> int:
        return self._last_seq

    def append(self, record: OpRecord) -> None:
        if record.seq != self._last_seq + 1:
            raise ValueError(f"seq {record.seq} leaves a gap after {self._last_seq}")
        self._fh.write(record.to_json() + "\n")
        self._fh.flush()
        if self._fsync:
            os.fsync(self._fh.fileno())
        self._last_seq = record.seq

    def close(self) -> None:
        self._fh.close()


def compact(path: Union[str, Path]) -> int:
    """Rewrite the log as one out per live instance; returns new record count.

    Replays first, so a corrupt log is refused rather than truncated.
    The rewrite goes through a temp file and an atomic rename.
    """
    path = Path(path)
    space = replay(path)
    tmp = path.with_suffix(path.suffix + ".compacting")
    seq = 0
    ts = _now()
    with open(tmp, "w", encoding="utf-8") as fh:
        for t, n in space.snapshot():
            for _ in range(n):
                seq += 1
                fh.write(OpRecord(seq, OUT, t, ts).to_json() + "\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
    return seq


class PersistentSpace:
    """TupleSpace operations backed by the op log.

    Reads delegate straight to the in-memory bag.  Mutations append
    durably first, then apply; the write lock makes (append, apply) one
    atomic unit so replay order equals apply order.
    """

    def __init__(self, path: Union[str, Path], fsync: bool = True):
        self.path = Path(path)
        self._space = TupleSpace()
        last_seq = 0
        if self.path.exists():
            for record in read_records(self.path):
                _apply(self._space, record)
                last_seq = record.seq
        self._log = OpLog(self.path, last_seq=last_seq, fsync=fsync)
        self._write_lock = threading.Lock()

    @property
    def total_instances(self) -> int:
        return self._space.total_instances

    def out(self, t: WikiTuple) -> None:
        if not isinstance(t, WikiTuple):
            raise MalformedTupleError(f"expected a WikiTuple, got {type(t).__name__}")
        with self._write_lock:
            self._log.append(OpRecord(self._log.last_seq + 1, OUT, t, _now()))
            self._space.out(t)

    def inp(self, template: Template, rng: Random) -> Optional[WikiTuple]:
        with self._write_lock:
            served = self._space.rdp(template, rng)
            if served is None:
                return None
            t = served.tuple
            self._log.append(OpRecord(self._log.last_seq + 1, IN, t, _now()))
            self._space.discard_one(t)
            return t

    def discard_one(self, t: WikiTuple) -> bool:
        with self._write_lock:
            if self._space.multiplicity(t) == 0:
                return False
            self._log.append(OpRecord(self._log.last_seq + 1, IN, t, _now()))
            self._space.discard_one(t)
            return True

    def rdp(self, template: Template, rng: Random) -> Optional[ServedTuple]:
        return self._space.rdp(template, rng)

    def count(self, template: Template) -> int:
        return self._space.count(template)

    def multiplicity(self, t: WikiTuple) -> int:
        return self._space.multiplicity(t)

    def snapshot(self) -> list[tuple[WikiTuple, int]]:
        return self._space.snapshot()

    def close(self) -> None:
        self._log.close()
