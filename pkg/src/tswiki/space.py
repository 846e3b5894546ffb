"""Counted-multiset tuple space holding wiki revisions.

Every stored value is a five-field tuple (wikiword, author, rev, date,
body).  The space is a bag: storing the same tuple twice yields a single
entry with multiplicity 2, and a read is twice as likely to serve it.
Three primitives operate on the bag:

  out  -- add one instance; always succeeds, never blocks
  rdp  -- return a copy of one matching instance, space unchanged
  inp  -- like rdp but removes the instance it returns

rdp/inp are non-blocking probes: "no match" is a normal None return, not
an error, so callers can report a missing page immediately.  Selection
among matches is uniform over *instances*, so a tuple's serve probability
is multiplicity / total matching instances.  All nondeterminism flows
through a caller-supplied random.Random, which makes every draw
reproducible from a seed.

All operations take an internal lock, so a single space may be shared
freely between threads; each call is atomic and linearizable.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from datetime import date as _calendar_date
from random import Random
from typing import Optional, Union


class MalformedTupleError(ValueError):
    """A tuple or template violates the five-field schema."""


class _Wildcard:
    """Marker for an unconstrained template position."""

    __slots__ = ()

    def __repr__(self):
        return "?"


ANY = _Wildcard()

_ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def _check_date(value: str) -> None:
    if not isinstance(value, str) or not _ISO_DATE_RE.match(value):
        raise MalformedTupleError(f"date must be a YYYY-MM-DD string, got {value!r}")
    try:
        _calendar_date.fromisoformat(value)
    except ValueError as exc:
        raise MalformedTupleError(f"date {value!r} is not a real calendar date") from exc


@dataclass(frozen=True)
class WikiTuple:
    """One wiki revision instance: (wikiword, author, rev, date, body).

    Equality is structural over all five fields (body byte-exact), so two
    editors producing identical tuples coalesce into one bag entry.
    """

    wikiword: str
    author: str
    rev: int
    date: str
    body: str

    def __post_init__(self):
        if not isinstance(self.wikiword, str) or not self.wikiword:
            raise MalformedTupleError("wikiword must be a non-empty string")
        if not isinstance(self.author, str) or not self.author:
            raise MalformedTupleError("author must be a non-empty string")
        if not isinstance(self.rev, int) or isinstance(self.rev, bool) or self.rev < 0:
            raise MalformedTupleError(f"rev must be a non-negative integer, got {self.rev!r}")
        _check_date(self.date)
        if not isinstance(self.body, str):
            raise MalformedTupleError("body must be a string")

    def as_list(self) -> list:
        """Wire form: [wikiword, author, rev, date, body]."""
        return [self.wikiword, self.author, self.rev, self.date, self.body]

    @classmethod
    def from_list(cls, fields) -> "WikiTuple":
        if not isinstance(fields, (list, tuple)) or len(fields) != 5:
            raise MalformedTupleError(f"expected 5 fields, got {fields!r}")
        return cls(*fields)

    def sort_key(self):
        return (self.wikiword, self.author, self.rev, self.date, self.body)


_Exact = Union[str, int, _Wildcard]


@dataclass(frozen=True)
class Template:
    """Per-field pattern: each position an exact value or the wildcard ANY.

    The all-wildcard Template() matches every tuple.  Exact positions use
    the same equality as tuple fields; there is no substring or regex
    matching.
    """

    wikiword: _Exact = ANY
    author: _Exact = ANY
    rev: _Exact = ANY
    date: _Exact = ANY
    body: _Exact = ANY

    def __post_init__(self):
        for name in ("wikiword", "author", "date", "body"):
            value = getattr(self, name)
            if value is not ANY and not isinstance(value, str):
                raise MalformedTupleError(f"template {name} must be a string or ANY")
        if self.rev is not ANY and (not isinstance(self.rev, int) or isinstance(self.rev, bool)):
            raise MalformedTupleError("template rev must be an integer or ANY")

    def matches(self, t: WikiTuple) -> bool:
        return (
            (self.wikiword is ANY or self.wikiword == t.wikiword)
            and (self.author is ANY or self.author == t.author)
            and (self.rev is ANY or self.rev == t.rev)
            and (self.date is ANY or self.date == t.date)
            and (self.body is ANY or self.body == t.body)
        )

    @classmethod
    def exact(cls, t: WikiTuple) -> "Template":
        """Template matching exactly one tuple value (all five fields pinned)."""
        return cls(t.wikiword, t.author, t.rev, t.date, t.body)

    @classmethod
    def for_page(cls, wikiword: str) -> "Template":
        return cls(wikiword=wikiword)

    def as_list(self) -> list:
        """Wire form: 5-element array with null for wildcard positions."""
        return [None if f is ANY else f for f in
                (self.wikiword, self.author, self.rev, self.date, self.body)]

    @classmethod
    def from_list(cls, fields) -> "Template":
        if not isinstance(fields, (list, tuple)) or len(fields) != 5:
            raise MalformedTupleError(f"expected 5 template positions, got {fields!r}")
        return cls(*(ANY if f is None else f for f in fields))


def matches(template: Template, t: WikiTuple) -> bool:
    """True iff every exact template position equals the tuple's field."""
    return template.matches(t)


@dataclass(frozen=True)
class ServedTuple:
    """A copy returned by a read, plus how many instances matched the query."""

    tuple: WikiTuple
    matching_instances: int


class TupleSpace:
    """The shared bag: map from tuple value to positive multiplicity."""

    def __init__(self):
        self._entries: dict[WikiTuple, int] = {}
        self._total = 0
        self._lock = threading.RLock()

    @property
    def total_instances(self) -> int:
        return self._total

    def out(self, t: WikiTuple) -> None:
        """Add one instance of t.  Always succeeds; never blocks."""
        if not isinstance(t, WikiTuple):
            raise MalformedTupleError(f"expected a WikiTuple, got {type(t).__name__}")
        with self._lock:
            self._entries[t] = self._entries.get(t, 0) + 1
            self._total += 1

    def _draw(self, template: Template, rng: Random):
        # Uniform over instances: a tuple with multiplicity m gets m slots.
        matched = [(t, n) for t, n in self._entries.items() if template.matches(t)]
        total = sum(n for _, n in matched)
        if total == 0:
            return None, 0
        pick = rng.randrange(total)
        for t, n in matched:
            if pick < n:
                return t, total
            pick -= n
        raise AssertionError("unreachable: pick exceeded matching instances")

    def rdp(self, template: Template, rng: Random) -> Optional[ServedTuple]:
        """Return a copy of one matching instance, or None; space unchanged."""
        with self._lock:
            t, total = self._draw(template, rng)
            if t is None:
                return None
            return ServedTuple(t, total)

    def inp(self, template: Template, rng: Random) -> Optional[WikiTuple]:
        """Remove and return one matching instance, or None if nothing matches."""
        with self._lock:
            t, _total = self._draw(template, rng)
            if t is None:
                return None
            self._decrement(t)
            return t

    def discard_one(self, t: WikiTuple) -> bool:
        """Remove one instance of exactly t; equivalent to inp(Template.exact(t)).

        Needs no randomness because every matching instance is the same value.
        """
        with self._lock:
            if self._entries.get(t, 0) == 0:
                return False
            self._decrement(t)
            return True

    def _decrement(self, t: WikiTuple) -> None:
        n = self._entries[t]
        if n == 1:
            del self._entries[t]
        else:
            self._entries[t] = n - 1
        self._total -= 1

    def count(self, template: Template) -> int:
        """Total multiplicity of all matching tuples."""
        with self._lock:
            return sum(n for t, n in self._entries.items() if template.matches(t))

    def multiplicity(self, t: WikiTuple) -> int:
        with self._lock:
            return self._entries.get(t, 0)

    def snapshot(self) -> list[tuple[WikiTuple, int]]:
        """Deterministic listing sorted by (wikiword, author, rev, date, body)."""
        with self._lock:
            return sorted(self._entries.items(), key=lambda item: item[0].sort_key())
