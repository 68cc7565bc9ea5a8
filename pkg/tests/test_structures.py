import json

import pytest

from teamsem.structures import (
    EnumerationBoundExceeded,
    Structure,
    Team,
    all_teams,
    covers,
    dump_document,
    extend_existential,
    extend_universal,
)


def test_structure_validation():
    with pytest.raises(ValueError):
        Structure(0)
    with pytest.raises(ValueError):
        Structure(2, {"R": (1, [(2,)])})
    with pytest.raises(ValueError):
        Structure(2, {"R": (2, [(0,)])})
    M = Structure(2, {"R": (1, [(1,)])})
    assert M.holds("R", (1,)) and not M.holds("R", (0,))
    with pytest.raises(ValueError):
        M.holds("P", (0,))


def test_extend_universal_examples():
    M2, M3 = Structure(2), Structure(3)
    assert extend_universal(Team.unit(), "x", M2) == Team.of(["x"], [(0,), (1,)])
    assert extend_universal(Team.empty(["y"]), "x", M2) == Team.empty(["x", "y"])
    out = extend_universal(Team.of(["y"], [(0,)]), "x", M3)
    assert len(out) == 3 and out.project(["y"]) == {(0,)}


def test_extend_universal_size():
    S = Team.of(["y", "z"], [(0, 1), (1, 1), (2, 0)])
    assert len(extend_universal(S, "x", Structure(3))) == len(S) * 3


def test_extend_universal_overwrites_existing_variable():
    S = Team.of(["x"], [(0,)])
    assert extend_universal(S, "x", Structure(2)) == Team.of(["x"], [(0,), (1,)])


def test_extend_existential_examples():
    S = Team.of(["y"], [(0,), (1,)])
    assert extend_existential(S, "x", lambda s: {0}) == Team.of(["y", "x"], [(0, 0), (1, 0)])
    dup = extend_existential(S, "x", lambda s: {s["y"]})
    assert all(a["x"] == a["y"] for a in dup.assignments())
    assert extend_existential(Team.empty(["y"]), "x", lambda s: {0}) == Team.empty(["x", "y"])
    with pytest.raises(ValueError):
        extend_existential(S, "x", lambda s: set())
    assert len(extend_existential(S, "x", {(0,): 1, (1,): 0})) == len(S)


def test_covers_counts():
    s = Team.of(["x"], [(0,)])
    assert sorted((len(a), len(b)) for a, b in covers(s)) == [(0, 1), (1, 0), (1, 1)]
    assert list(covers(Team.empty(["x"]))) == [(Team.empty(["x"]), Team.empty(["x"]))]
    two = Team.of(["x"], [(0,), (1,)])
    assert len(list(covers(two))) == 9
    assert len(list(covers(two, partitions=True))) == 4
    for a, b in covers(two):
        assert a.union(b) == two
    for a, b in covers(two, partitions=True):
        assert not (a.rows & b.rows)


def test_all_teams_examples():
    M = Structure(2)
    assert len(list(all_teams(["x"], M))) == 4
    assert list(all_teams([], M)) == [Team.empty(), Team.unit()]
    assert len(list(all_teams(["x", "y"], M))) == 16
    with pytest.raises(EnumerationBoundExceeded):
        list(all_teams(["x", "y", "z"], Structure(3)))


def test_team_invariants():
    with pytest.raises(ValueError):
        Team(("y", "x"), frozenset())
    with pytest.raises(ValueError):
        Team.from_assignments([{"x": 0}, {"y": 1}])
    assert Team.of(["y", "x"], [(1, 0)]) == Team.of(["x", "y"], [(0, 1)])
    with pytest.raises(ValueError):
        Team.of(["x"], [(0,)]).index("y")


def test_json_round_trip():
    M = Structure(3, {"R": (2, [(0, 1), (2, 2)]), "Q": (1, [])})
    S = Team.of(["x", "y"], [(0, 1), (2, 0)])
    doc = json.loads(dump_document(M, S))
    assert doc["format"] == 1
    assert Structure.from_json(doc) == M
    assert Team.from_json(doc) == S


def test_json_bare_tuple_lists():
    M = Structure.from_json({"domain_size": 2, "relations": {"R": [[0, 1]]}})
    assert M.relations["R"] == (2, frozenset({(0, 1)}))
    with pytest.raises(ValueError):
        Structure.from_json({"domain_size": 2, "relations": {"R": []}})
