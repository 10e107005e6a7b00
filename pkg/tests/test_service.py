import json

import pytest
from fastapi.testclient import TestClient

from provwb import serialize_bundle
from provwb.core import bundle_to_obj
from provwb.service import create_app, restore_session, snapshot_session


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def session(client, micro):
    bundle, tree, _ = micro
    sid = client.post("/api/sessions").json()["id"]
    assert client.put(f"/api/sessions/{sid}/provenance", json=bundle_to_obj(bundle)).status_code == 200
    assert client.put(f"/api/sessions/{sid}/tree", json=tree.to_obj()).status_code == 200
    return sid


def error_code(resp):
    return resp.json()["error"]["code"]


class TestSessionLifecycle:
    def test_unknown_session_is_404(self, client):
        resp = client.get("/api/sessions/nope/baseline-results")
        assert resp.status_code == 404
        assert error_code(resp) == "unknown_session"

    def test_baseline_results_default_all_ones(self, client, session):
        resp = client.get(f"/api/sessions/{session}/baseline-results")
        values = resp.json()["values"]
        assert values["10001"] == pytest.approx(905.25)
        assert values["10002"] == pytest.approx(437.45)

    def test_invalid_payload_is_422(self, client, session):
        bad_tree = {"name": "F", "children": [{"name": "F"}]}
        resp = client.put(f"/api/sessions/{session}/tree", json=bad_tree)
        assert resp.status_code == 422
        assert "duplicate" in resp.json()["error"]["message"]

    def test_replacing_provenance_clears_result(self, client, session, micro):
        bundle = micro[0]
        client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        assert client.get(f"/api/sessions/{session}/metavars").status_code == 200
        client.put(f"/api/sessions/{session}/provenance", json=bundle_to_obj(bundle))
        assert client.get(f"/api/sessions/{session}/metavars").status_code == 409

    def test_session_isolation(self, client, session, micro):
        other = client.post("/api/sessions").json()["id"]
        assert client.get(f"/api/sessions/{other}/baseline-results").status_code == 409
        assert client.get(f"/api/sessions/{session}/baseline-results").status_code == 200

    def test_state_round_trip(self, client, session):
        state = client.get(f"/api/sessions/{session}").json()
        assert state["size"] == 14
        assert state["tree"]["name"] == "Plans"


class TestCompress:
    def test_bound_six(self, client, session):
        resp = client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        body = resp.json()
        assert body["cut"] == ["Business", "Special", "p1", "p2"]
        assert body["size"] == 6 and body["expressiveness"] == 4
        assert body["original_size"] == 14 and body["min_size"] == 4
        groups = {g["meta"]: g for g in body["groups"]}
        assert len(groups) == 4
        assert groups["Business"]["default"] == pytest.approx(1.0)
        assert [l["name"] for l in groups["Business"]["leaves"]] == ["b1", "b2", "e"]

    def test_bound_three_infeasible(self, client, session):
        body = client.post(f"/api/sessions/{session}/compress", json={"bound": 3}).json()
        assert body["feasible"] is False
        assert body["size"] == 4

    def test_leaf_cut_groups_are_singletons(self, client, session):
        body = client.post(f"/api/sessions/{session}/compress", json={"bound": 14}).json()
        assert all(len(g["leaves"]) == 1 for g in body["groups"])
        assert all(g["default"] == g["leaves"][0]["baseline"] for g in body["groups"])

    def test_missing_tree_is_409(self, client, micro):
        sid = client.post("/api/sessions").json()["id"]
        client.put(f"/api/sessions/{sid}/provenance", json=bundle_to_obj(micro[0]))
        resp = client.post(f"/api/sessions/{sid}/compress", json={"bound": 6})
        assert resp.status_code == 409

    def test_bad_bound_is_422(self, client, session):
        for bound in (0, "six", None, 1.5):
            resp = client.post(f"/api/sessions/{session}/compress", json={"bound": bound})
            assert resp.status_code == 422


class TestEvaluate:
    def test_full_and_compressed_agree(self, client, session):
        client.post(f"/api/sessions/{session}/compress", json={"bound": 4})  # cut {Plans}
        resp = client.post(
            f"/api/sessions/{session}/evaluate",
            json={"assignments": {"Plans": 1.0, "m1": 1.0, "m3": 0.8}, "target": "both"},
        )
        body = resp.json()
        assert body["full"]["values"]["10001"] == pytest.approx(815.02)
        assert body["compressed"]["values"]["10001"] == pytest.approx(815.02, rel=1e-6)
        assert body["full"]["size"] == 14 and body["compressed"]["size"] == 4
        assert "speedup_pct" in body

    def test_baseline_assignment_gives_zero_deltas(self, client, session):
        client.post(f"/api/sessions/{session}/compress", json={"bound": 14})
        body = client.post(
            f"/api/sessions/{session}/evaluate", json={"assignments": {}, "target": "both"}
        ).json()
        for section in ("full", "compressed"):
            assert all(abs(d) < 1e-9 for d in body[section]["deltas"].values())

    def test_unknown_variables_listed(self, client, session):
        client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        resp = client.post(
            f"/api/sessions/{session}/evaluate",
            json={"assignments": {"Bogus": 1.0, "Nope": 2.0}},
        )
        assert resp.status_code == 422
        assert resp.json()["error"]["details"] == ["Bogus", "Nope"]

    def test_compressed_without_compression_is_409(self, client, session):
        resp = client.post(
            f"/api/sessions/{session}/evaluate", json={"assignments": {}, "target": "compressed"}
        )
        assert resp.status_code == 409

    def test_full_only_without_compression(self, client, session):
        resp = client.post(
            f"/api/sessions/{session}/evaluate",
            json={"assignments": {"m3": 0.8}, "target": "full"},
        )
        assert resp.json()["full"]["values"]["10001"] == pytest.approx(815.02)

    def test_meta_defaults_fill_unassigned_groups(self, client, session):
        # baseline m3=0.8; compress; evaluating with no assignments must use
        # the group averages, i.e. reproduce the baseline values
        client.put(
            f"/api/sessions/{session}/baseline",
            json={"assignments": {"m3": 0.8}, "default": 1.0},
        )
        client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        body = client.post(
            f"/api/sessions/{session}/evaluate", json={"assignments": {}, "target": "both"}
        ).json()
        assert body["full"]["deltas"]["10001"] == pytest.approx(0.0, abs=1e-9)
        assert body["compressed"]["deltas"]["10001"] == pytest.approx(0.0, abs=1e-9)


class TestDiagnosticsEndpoint:
    def test_frontiers_exposed(self, client, session):
        client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        diag = client.get(f"/api/sessions/{session}/diagnostics").json()
        assert dict(map(tuple, diag["frontiers"]["Plans"]))[1] == 4
        assert diag["counts"]["p1"] == 2

    def test_409_before_compression(self, client, session):
        assert client.get(f"/api/sessions/{session}/diagnostics").status_code == 409

    def test_idempotent_reads(self, client, session):
        client.post(f"/api/sessions/{session}/compress", json={"bound": 6})
        a = client.get(f"/api/sessions/{session}/diagnostics").json()
        b = client.get(f"/api/sessions/{session}/diagnostics").json()
        assert a == b


class TestSnapshot:
    def test_snapshot_round_trip(self, client, session, micro):
        from provwb.service import Session

        bundle, tree, _ = micro
        s = Session(id="snap")
        s.bundle, s.tree = bundle, tree
        s.refresh_baseline()
        restored = restore_session(json.loads(json.dumps(snapshot_session(s))))
        assert serialize_bundle(restored.bundle) == serialize_bundle(bundle)
        assert restored.tree.to_obj() == tree.to_obj()
        assert restored.baseline_values == s.baseline_values
