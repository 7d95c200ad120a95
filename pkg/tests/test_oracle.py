import pytest

from wonder.errors import InputError
from wonder.fixtures import fm_p1_3_oracle, keel_2_oracle, keel_3_oracle, oracle_fixture
from wonder.io import ring_payload
from wonder.models import _PowerAlg
from wonder.oracle import run_oracle


def test_fm3_fixture():
    run = run_oracle(fm_p1_3_oracle())
    assert run.dims == [1, 4, 4, 1]
    assert run.verdict.is_pd


def test_keel2_fixture():
    run = run_oracle(keel_2_oracle())
    assert run.dims == [1, 5, 1]
    assert run.verdict.is_pd


def test_keel3_fixture_step_count():
    payload = keel_3_oracle()
    assert len(payload["steps"]) == 13  # three points, then ten disjoint curves
    run = run_oracle(payload)
    assert run.dims == [1, 16, 16, 1]
    assert run.verdict.is_pd


def test_bundle_step():
    line = _PowerAlg(["x"], 1).alg
    payload = {
        "kind": "oracle",
        "base": ring_payload(line, 1),
        "steps": [
            {"op": "projective_bundle", "name": "xi", "rank": 2, "chern": [[], []]}
        ],
    }
    run = run_oracle(payload)
    assert run.dims == [1, 2, 1]
    assert run.socle_degree == 2
    assert run.verdict.is_pd


def test_unknown_step_rejected():
    line = _PowerAlg(["x"], 1).alg
    payload = {
        "kind": "oracle",
        "base": ring_payload(line, 1),
        "steps": [{"op": "warp"}],
    }
    with pytest.raises(InputError, match="unknown oracle step"):
        run_oracle(payload)


def test_fixture_registry():
    assert oracle_fixture("keel", 2)["kind"] == "oracle"
    with pytest.raises(InputError):
        oracle_fixture("keel", 5)
