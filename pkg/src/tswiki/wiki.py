"""Wiki semantics over the tuple space.

A "page" is not a record anywhere: it is the set of all tuples sharing a
wikiword, found by template match.  Editing never replaces anything.
An editor reads a revision (rdp), modifies it, and outs the result, so
the original stays in the bag and the page only ever grows.  Voting is
outing an exact copy of a tuple you were served, which raises its chance
of being served next time; unvoting removes one copy; purge (admin)
removes every copy.

The engine works over any object with the TupleSpace operation surface,
so the same code runs against the in-memory bag and the durably logged
one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from random import Random
from typing import Optional

from .space import ANY, ServedTuple, Template, TupleSpace, WikiTuple

# A WikiWord is a maximal word of two or more Capitalized runs, e.g. FrontPage.
_WIKIWORD_RE = re.compile(r"\b(?:[A-Z][a-z]+){2,}\b")

PageName = str


def extract_links(body: str) -> list[PageName]:
    """WikiWord tokens in body, deduplicated, in first-appearance order."""
    return list(dict.fromkeys(_WIKIWORD_RE.findall(body)))


@dataclass(frozen=True)
class EditRequest:
    """An edit in flight: new content plus the revision the editor started from.

    base is the tuple the editor read before modifying, or None when
    creating a page from scratch.
    """

    wikiword: PageName
    author: str
    date: str
    body: str
    base: Optional[WikiTuple] = None

    def __post_init__(self):
        if not self.wikiword:
            raise ValueError("edit needs a non-empty wikiword")
        if self.base is not None and self.base.wikiword != self.wikiword:
            raise ValueError(
                f"base tuple is a {self.base.wikiword!r} revision, not {self.wikiword!r}"
            )


@dataclass(frozen=True)
class RenderedPage:
    served: ServedTuple
    links: list[tuple[PageName, bool]]  # (target, target exists)


class WikiEngine:
    """Pages, edits, votes and browsing, mapped onto bag operations."""

    def __init__(self, space: Optional[TupleSpace] = None):
        self.space = space if space is not None else TupleSpace()

    def read_page(self, name: PageName, rng: Random) -> Optional[RenderedPage]:
        """Serve one revision of the page, or None if the page does not exist.

        Repeated calls may serve different revisions; that is the point.
        """
        served = self.space.rdp(Template(wikiword=name), rng)
        if served is None:
            return None
        links = [(word, self.page_exists(word)) for word in extract_links(served.tuple.body)]
        return RenderedPage(served, links)

    def edit_page(self, req: EditRequest) -> WikiTuple:
        """Out the edited revision; never conflicts with concurrent edits.

        rev is base.rev + 1, or 1 when creating.  The base tuple (if any)
        stays in the space untouched.
        """
        rev = req.base.rev + 1 if req.base is not None else 1
        t = WikiTuple(req.wikiword, req.author, rev, req.date, req.body)
        self.space.out(t)
        return t

    def vote(self, t: WikiTuple) -> int:
        """Out an exact copy of t; returns its new multiplicity."""
        self.space.out(t)
        return self.space.multiplicity(t)

    def unvote(self, t: WikiTuple) -> bool:
        """Remove one instance of exactly t; False if none existed."""
        return self.space.discard_one(t)

    def purge(self, t: WikiTuple) -> int:
        """Admin tool: remove every instance of exactly t; returns how many.

        Not atomic as a whole; a concurrent vote can slip in between
        removals, in which case it gets removed too.
        """
        removed = 0
        while self.space.discard_one(t):
            removed += 1
        return removed

    def browse(self, template: Template, rng: Random) -> Optional[ServedTuple]:
        """General template read: author pages, date pages, any combination."""
        return self.space.rdp(template, rng)

    def read_dated(self, name: PageName, date: str, rng: Random) -> Optional[ServedTuple]:
        """Read narrowed to an exact date.

        Faithful to template semantics: a page not edited on that date
        appears not to exist, even though the undated read would succeed.
        """
        return self.space.rdp(Template(wikiword=name, date=date), rng)

    def page_exists(self, name: PageName) -> bool:
        return self.space.count(Template(wikiword=name)) > 0
