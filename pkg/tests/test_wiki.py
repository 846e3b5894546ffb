from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from tswiki import EditRequest, Template, TupleSpace, WikiEngine, WikiTuple, extract_links

from sample_space import ALICE_TS, ED_PAGE, ED_TS, demo_space


@pytest.fixture
def engine(space):
    return WikiEngine(space)


# -- link extraction ----------------------------------------------------------


@pytest.mark.parametrize(
    "body,expected",
    [
        ("Tuples are great!", []),
        ("", []),
        ("See TupleSpace and TupleSpace or WikiWord.", ["TupleSpace", "WikiWord"]),
        ("FrontPage, frontPage, FRONTPAGE, Front", ["FrontPage"]),
        ("inside aTupleSpace or TupleSpace2 nothing links", []),
        ("EdPage then WikiWord then EdPage again", ["EdPage", "WikiWord"]),
    ],
)
def test_extract_links(body, expected):
    assert extract_links(body) == expected


# -- read_page ----------------------------------------------------------------


def test_read_page_serves_one_revision(engine):
    for seed in range(30):
        page = engine.read_page("TupleSpace", Random(seed))
        assert page.served.tuple in (ED_TS, ALICE_TS)
        assert page.served.matching_instances == 2


def test_read_page_missing_is_none():
    engine = WikiEngine(TupleSpace())
    assert engine.read_page("Anything", Random(0)) is None


def test_read_page_single_revision_is_stable(engine):
    for seed in range(20):
        page = engine.read_page("Ed", Random(seed))
        assert page.served.tuple == ED_PAGE


def test_read_page_marks_link_existence():
    engine = WikiEngine(TupleSpace())
    engine.edit_page(EditRequest("HomePage", "Ed", "2005-03-20", "see OtherPage"))
    engine.edit_page(EditRequest("OtherPage", "Ed", "2005-03-20", "see HomePage and NoPage"))
    page = engine.read_page("OtherPage", Random(1))
    assert page.links == [("HomePage", True), ("NoPage", False)]


# -- edit_page ----------------------------------------------------------------


def test_create_missing_page(engine):
    assert not engine.page_exists("NewPage")
    t = engine.edit_page(EditRequest("NewPage", "Ed", "2005-03-25", "fresh text"))
    assert t == WikiTuple("NewPage", "Ed", 1, "2005-03-25", "fresh text")
    assert engine.space.count(Template(wikiword="NewPage")) == 1


def test_edit_with_base_increments_rev_and_keeps_base(engine):
    base = ED_TS
    before = engine.space.multiplicity(base)
    t = engine.edit_page(
        EditRequest("TupleSpace", "Robert", "2005-03-26", "revised text", base=base)
    )
    assert t.rev == base.rev + 1
    assert engine.space.multiplicity(base) == before
    assert engine.space.count(Template(wikiword="TupleSpace")) == 3


def test_concurrent_creates_leave_duplicate_page():
    engine = WikiEngine(TupleSpace())
    engine.edit_page(EditRequest("NewPage", "Ed", "2005-03-25", "Ed's take"))
    engine.edit_page(EditRequest("NewPage", "Alice", "2005-03-25", "Alice's take"))
    assert engine.space.count(Template(wikiword="NewPage")) == 2


def test_edit_request_rejects_foreign_base():
    with pytest.raises(ValueError):
        EditRequest("TupleSpace", "Ed", "2005-03-25", "x", base=ED_PAGE)


def test_edit_request_rejects_empty_wikiword():
    with pytest.raises(ValueError):
        EditRequest("", "Ed", "2005-03-25", "x")


# -- vote / unvote / purge ----------------------------------------------------


def test_vote_doubles_serve_probability(engine):
    assert engine.vote(ALICE_TS) == 2
    template = Template(wikiword="TupleSpace")
    assert engine.space.count(template) == 3
    # Exact arithmetic: 2 of the 3 matching instances are Alice's.
    assert engine.space.multiplicity(ALICE_TS) / engine.space.count(template) == 2 / 3


def test_vote_for_absent_tuple_reinserts_it():
    engine = WikiEngine(TupleSpace())
    assert engine.vote(ED_TS) == 1


def test_votes_crowd_out_unpopular_tuples(engine):
    for _ in range(97):
        engine.vote(ALICE_TS)
    template = Template(wikiword="TupleSpace")
    total = engine.space.count(template)
    assert total == 99  # page had 2 instances; Ed page tuple is a different page
    engine.vote(ED_TS)  # bring the page to a round 100
    total = engine.space.count(template)
    others = total - engine.space.multiplicity(ALICE_TS)
    assert others / total == 2 / 100


def test_unvote_decrements(engine):
    engine.vote(ALICE_TS)
    assert engine.unvote(ALICE_TS) is True
    assert engine.space.multiplicity(ALICE_TS) == 1


def test_unvote_absent_tuple_is_false(engine):
    absent = WikiTuple("TupleSpace", "Nobody", 9, "2005-03-20", "never stored")
    before = engine.space.snapshot()
    assert engine.unvote(absent) is False
    assert engine.space.snapshot() == before


def test_vote_then_unvote_restores_multiset(engine):
    before = engine.space.snapshot()
    engine.vote(ED_TS)
    engine.unvote(ED_TS)
    assert engine.space.snapshot() == before


def test_purge_removes_all_instances(engine):
    for _ in range(4):
        engine.vote(ED_TS)  # multiplicity 5
    others = [(t, n) for t, n in engine.space.snapshot() if t != ED_TS]
    assert engine.purge(ED_TS) == 5
    assert engine.space.multiplicity(ED_TS) == 0
    assert [(t, n) for t, n in engine.space.snapshot() if t != ED_TS] == others


def test_purge_absent_tuple_returns_zero(engine):
    absent = WikiTuple("Ghost", "Nobody", 1, "2005-03-20", "")
    assert engine.purge(absent) == 0


# -- browse and dated reads ---------------------------------------------------


def test_browse_by_author(engine):
    for seed in range(30):
        served = engine.browse(Template(author="Alice"), Random(seed))
        assert served.tuple in (ALICE_TS, ED_PAGE)
        assert served.matching_instances == 2


def test_browse_author_and_page_is_unique(engine):
    served = engine.browse(Template(wikiword="TupleSpace", author="Alice"), Random(0))
    assert served.tuple == ALICE_TS
    assert served.matching_instances == 1


def test_browse_no_match(engine):
    assert engine.browse(Template(author="Zelda"), Random(0)) is None


def test_read_dated_exact_match(engine):
    for seed in range(20):
        served = engine.read_dated("TupleSpace", "2005-03-22", Random(seed))
        assert served.tuple == ALICE_TS


def test_read_dated_wrong_day_hides_existing_page(engine):
    assert engine.read_dated("TupleSpace", "2005-01-01", Random(0)) is None
    assert engine.page_exists("TupleSpace")


def test_dropping_the_date_widens_the_match(engine):
    dated = engine.space.count(Template(wikiword="TupleSpace", date="2005-03-22"))
    undated = engine.space.count(Template(wikiword="TupleSpace"))
    assert (dated, undated) == (1, 2)


# -- page_exists --------------------------------------------------------------


def test_page_exists(engine):
    assert engine.page_exists("TupleSpace")
    assert not engine.page_exists("Missing")


def test_page_exists_after_first_create():
    engine = WikiEngine(TupleSpace())
    assert not engine.page_exists("NewPage")
    engine.edit_page(EditRequest("NewPage", "Ed", "2005-03-25", "text"))
    assert engine.page_exists("NewPage")


# -- invariants ---------------------------------------------------------------


edit_ops_st = st.lists(
    st.one_of(
        st.tuples(st.just("edit"), st.sampled_from(["Ed", "Alice", "Robert"])),
        st.tuples(st.just("vote"), st.none()),
    ),
    max_size=25,
)


@given(ops=edit_ops_st, seed=st.integers(0, 2**32))
@settings(max_examples=60)
def test_edits_and_votes_never_shrink_a_page(ops, seed):
    engine = WikiEngine(demo_space())
    rng = Random(seed)
    template = Template(wikiword="TupleSpace")
    last = engine.space.count(template)
    for i, (op, author) in enumerate(ops):
        if op == "edit":
            served = engine.read_page("TupleSpace", rng)
            engine.edit_page(
                EditRequest(
                    "TupleSpace", author, "2005-04-01", f"body {i}", base=served.served.tuple
                )
            )
        else:
            served = engine.read_page("TupleSpace", rng)
            engine.vote(served.served.tuple)
        current = engine.space.count(template)
        assert current >= last
        last = current


@given(ops=edit_ops_st, seed=st.integers(0, 2**32))
@settings(max_examples=60)
def test_reads_interleaved_with_edits_never_fault(ops, seed):
    engine = WikiEngine(demo_space())
    rng = Random(seed)
    for i, (op, author) in enumerate(ops):
        page = engine.read_page("TupleSpace", rng)
        assert page is not None  # rd-editing never empties the page
        if op == "edit":
            engine.edit_page(
                EditRequest(
                    "TupleSpace", author, "2005-04-01", f"body {i}", base=page.served.tuple
                )
            )
        else:
            engine.vote(page.served.tuple)
        assert engine.read_page("TupleSpace", rng) is not None


@given(t=st.sampled_from([ED_TS, ALICE_TS, ED_PAGE]))
def test_vote_unvote_inverse_property(t):
    engine = WikiEngine(demo_space())
    before = engine.space.snapshot()
    engine.vote(t)
    assert engine.unvote(t)
    assert engine.space.snapshot() == before


@given(seed=st.integers(0, 2**32), date=st.sampled_from(["2005-03-20", "2005-03-22", "2005-12-31"]))
def test_read_dated_only_returns_that_date(seed, date):
    engine = WikiEngine(demo_space())
    served = engine.read_dated("TupleSpace", date, Random(seed))
    if served is not None:
        assert served.tuple.date == date


@pytest.mark.parametrize("k,votes", [(2, 0), (2, 1), (5, 20), (10, 90)])
def test_vote_dominance(k, votes):
    engine = WikiEngine(TupleSpace())
    tuples = [
        WikiTuple("PollPage", f"author-{i}", 1, "2005-04-01", f"option {i}")
        for i in range(k)
    ]
    for t in tuples:
        engine.space.out(t)
    for _ in range(votes):
        engine.vote(tuples[0])

    template = Template(wikiword="PollPage")
    assert engine.space.multiplicity(tuples[0]) / engine.space.count(template) == (
        (1 + votes) / (k + votes)
    )

    rng = Random(f"dominance:{k}:{votes}")
    hits = sum(
        engine.space.rdp(template, rng).tuple == tuples[0] for _ in range(10_000)
    )
    assert abs(hits / 10_000 - (1 + votes) / (k + votes)) <= 0.02
