"""tswiki: a wiki whose pages are bags of revision tuples.

Pages live in a counted-multiset tuple space.  Editing adds tuples and
never replaces them; reading serves one matching tuple uniformly over
instances; voting duplicates a tuple to raise its serve probability.
"""

from .space import (
    ANY,
    MalformedTupleError,
    ServedTuple,
    Template,
    TupleSpace,
    WikiTuple,
    matches,
)
from .wiki import EditRequest, RenderedPage, WikiEngine, extract_links
from .oplog import (
    CorruptLogError,
    OpLog,
    OpRecord,
    PersistentSpace,
    compact,
    replay,
)
from .service import WikiService

__all__ = [
    "ANY",
    "MalformedTupleError",
    "ServedTuple",
    "Template",
    "TupleSpace",
    "WikiTuple",
    "matches",
    "EditRequest",
    "RenderedPage",
    "WikiEngine",
    "extract_links",
    "CorruptLogError",
    "OpLog",
    "OpRecord",
    "PersistentSpace",
    "compact",
    "replay",
    "WikiService",
]
