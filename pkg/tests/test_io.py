import json
from fractions import Fraction

import numpy as np
import pytest

from sumrank import io, linalg
from sumrank.code import SumRankCode, classify_flags, same_code
from sumrank.constructions import dim2_profile, simplex_rank
from sumrank.errors import FormatError
from sumrank.geometry import System, code_from_system
from sumrank.gf import build_tower
from sumrank.subspace import FqSubspace


def test_stable_dumps():
    text = io.dumps({"b": 1, "a": [1, 2], "c": {"z": True, "y": None}})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b", "c"]
    assert text == io.dumps({"c": {"y": None, "z": True}, "a": [1, 2], "b": 1})


def test_big_ints_and_rationals():
    d = json.loads(io.dumps({"x": 2**53, "y": 2**53 + 1, "z": -(2**60), "r": Fraction(2**70, 3)}))
    assert d["x"] == 2**53 and d["y"] == str(2**53 + 1) and d["z"] == str(-(2**60))
    assert d["r"] == {"num": str(2**70), "den": 3}
    assert io.to_jsonable(np.int64(5)) == 5
    assert io.to_jsonable({3, 1, 2}) == [1, 2, 3]
    with pytest.raises(TypeError):
        io.to_jsonable(object())


def test_digest():
    assert io.digest("abc") == io.digest(b"abc")
    assert len(io.digest("")) == 64


def test_code_round_trip():
    for C in (simplex_rank(2, 2, 2), simplex_rank(3, 2, 2), code_from_system(dim2_profile(2, 2, 1)),
              simplex_rank(2, 3, 2)):
        D = io.load_object(io.loads(io.dumps(C)))
        assert same_code(C, D)
        assert np.array_equal(C.G, D.G)


def test_code_round_trip_nontrivial_base():
    T = build_tower(2, 2, 2)
    C = SumRankCode(T, (2, 1), [[1, 5, 15], [0, 1, 3]])
    D = io.load_object(io.loads(io.dumps(C)))
    assert same_code(C, D) and D.tower is T


def test_system_round_trip(rng):
    S = dim2_profile(2, 2, 1)
    assert io.load_object(io.loads(io.dumps(S))) == S
    # plain basis matrices are accepted
    d = {"field": S.tower.describe(), "k": 2,
         "subspaces": [U.to_dict()["basis"] for U in S.subspaces]}
    assert io.system_from_json(d) == S


def test_parity_check_input(F4):
    C = simplex_rank(2, 2, 2)
    H = linalg.nullspace(F4.F, C.G)
    d = {"field": F4.describe(), "shape": [4], "H": [[F4.to_nested(int(x)) for x in r] for r in H]}
    D = io.code_from_json(d)
    assert same_code(C, D)
    assert classify_flags(D).to_dict() == classify_flags(C).to_dict()


@pytest.mark.parametrize("text", ["", "{", "[1, 2]", "null", '"x"'])
def test_malformed_json(text):
    with pytest.raises(FormatError):
        io.loads(text)


def test_malformed_objects(F4):
    field = F4.describe()
    bad = [
        {},
        {"field": field},
        {"field": field, "shape": [2], "G": [[1, 0], [0]]},
        {"field": field, "shape": [2], "G": [[[1], [0]], [[5], [0]]]},
        {"field": field, "shape": [2], "G": [[[1, 0], [0, 0]]], "k": 3},
        {"field": field, "shape": [], "G": [[1]]},
        {"field": field, "shape": [2], "G": [[[1, 0], [1, 0]], [[1, 0], [1, 0]]]},
        {"field": {"p": 4, "e": 1, "m": 2}, "shape": [1], "G": [[[1], [0]]]},
        {"field": {"p": 2}, "shape": [1], "G": [[1]]},
        {"field": field, "k": 2, "subspaces": "nope"},
        {"field": field, "k": 2, "subspaces": [{"dim": 1, "basis": [[1, 0, 0]]}]},
    ]
    for d in bad:
        with pytest.raises(FormatError):
            io.load_object(d)


def test_read_missing_file(tmp_path):
    with pytest.raises(FormatError):
        io.read_file(str(tmp_path / "missing.json"))


def test_points(F4):
    T, P = io.points_from_json({"field": F4.describe(), "points": [[F4.to_nested(1)] * 3]})
    assert T is F4 and P.tolist() == [[1, 1, 1]]


def test_report_serializes():
    text = io.dumps(classify_flags(simplex_rank(2, 2, 2)))
    d = json.loads(text)
    assert d["weight_distribution"] == {"2": 5}
    assert list(d) == sorted(d)


def test_subspace_dict_entries_are_digit_lists():
    T = build_tower(2, 2, 2)
    U = FqSubspace.full(T, 1)
    d = U.to_dict()
    assert all(isinstance(x, list) for row in d["basis"] for x in row)
    assert System(T, 1, (FqSubspace.from_dict(T, d),)).dims == (2,)
