import json

import pytest
from fastapi.testclient import TestClient

from spamlab.fixtures import fixture_text
from spamlab.service import create_app

SAMPLE10_CSV = fixture_text("sample10.csv")
SHINY_FEATURES = json.loads(fixture_text("shiny_features.json"))
FIG6_TREE_DESC = {
    "split": "dear_or_bless",
    "true": {"leaf": "spam"},
    "false": {"split": "contains_re", "true": {"leaf": "non-spam"}, "false": {"leaf": "spam"}},
}
DOB_FEATURES = [
    {"name": "dear_or_bless", "kind": "word_list", "words": ["dear", "bless", "almighty", "urgent"]},
    {"name": "contains_re", "kind": "substring", "pattern": "Re", "case_sensitive": True},
]


@pytest.fixture()
def client():
    return TestClient(create_app())


def upload_sample10(client) -> int:
    response = client.post("/corpora", json={"csv": SAMPLE10_CSV, "name": "sample10"})
    assert response.status_code == 200
    return response.json()["id"]


class TestCorpora:
    def test_upload_summary(self, client):
        response = client.post("/corpora", json={"csv": SAMPLE10_CSV, "name": "sample10"})
        assert response.status_code == 200
        assert response.json() == {"id": 1, "size": 10, "class_balance": 0.5}

    def test_header_only_400(self, client):
        response = client.post("/corpora", json={"csv": "subject,label\n"})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_corpus"

    def test_ids_monotone(self, client):
        assert upload_sample10(client) == 1
        assert upload_sample10(client) == 2

    def test_multipart_upload(self, client):
        response = client.post(
            "/corpora", files={"file": ("sample10.csv", SAMPLE10_CSV.encode(), "text/csv")}
        )
        assert response.status_code == 200
        assert response.json()["size"] == 10

    def test_bad_label_code(self, client):
        response = client.post("/corpora", json={"csv": "subject,label\nx,ham\n"})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "bad_label"
        assert body["row"] == 2

    def test_listing(self, client):
        upload_sample10(client)
        response = client.get("/corpora")
        assert response.status_code == 200
        assert response.json()[0]["name"] == "sample10"


class TestVocabulary:
    def test_constructed_threshold(self, client):
        lines = [f"urgent filler{i},spam" for i in range(4)]
        csv = "subject,label\n" + "\n".join(lines) + "\ngoods one,non-spam\ngoods two,non-spam\ngoods three,non-spam\n"
        cid = client.post("/corpora", json={"csv": csv}).json()["id"]
        words = client.get(f"/corpora/{cid}/vocabulary?min_freq=4").json()
        assert words == [{"word": "urgent", "count": 4}]

    def test_min_freq_one_returns_all_tokens(self, client):
        cid = upload_sample10(client)
        words = client.get(f"/corpora/{cid}/vocabulary?min_freq=1").json()
        assert {"word": "re", "count": 2} in words

    def test_unknown_corpus_404(self, client):
        response = client.get("/corpora/99/vocabulary")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_corpus"

    def test_bad_min_freq_400(self, client):
        cid = upload_sample10(client)
        response = client.get(f"/corpora/{cid}/vocabulary?min_freq=0")
        assert response.status_code == 400
        assert response.json()["code"] == "bad_min_freq"


class TestFeatureSets:
    def test_shiny_preset_names(self, client):
        response = client.post("/feature-sets", json=SHINY_FEATURES)
        assert response.status_code == 200
        assert response.json()["feature_names"] == [
            "all_caps", "dollar", "multi_punct", "dear_or_mister", "religious",
        ]

    def test_empty_set_stores_fine(self, client):
        response = client.post("/feature-sets", json=[])
        assert response.status_code == 200
        assert response.json()["feature_names"] == []

    def test_duplicate_name_400(self, client):
        response = client.post(
            "/feature-sets",
            json=[{"name": "x", "kind": "all_caps"}, {"name": "x", "kind": "contains_dollar"}],
        )
        assert response.status_code == 400
        assert response.json()["code"] == "duplicate_feature_name"

    def test_bad_regex_400(self, client):
        response = client.post("/feature-sets", json=[{"name": "r", "kind": "regex", "pattern": "(["}])
        assert response.status_code == 400
        assert response.json()["code"] == "bad_regex"

    def test_bag_of_words_expansion(self, client):
        cid = upload_sample10(client)
        response = client.post(
            "/feature-sets",
            json={"features": DOB_FEATURES, "expand_bag_of_words": cid, "min_freq": 2},
        )
        assert response.status_code == 200
        names = response.json()["feature_names"]
        assert names[:2] == ["dear_or_bless", "contains_re"]
        assert "bag_your" in names and "bag_re" in names


class TestRulesParse:
    def test_valid_rule_ast(self, client):
        response = client.post("/rules/parse", json={"source": "a OR b"})
        assert response.status_code == 200
        assert response.json()["ast"] == {
            "op": "or",
            "left": {"op": "pred", "name": "a"},
            "right": {"op": "pred", "name": "b"},
        }

    def test_syntax_error_position(self, client):
        response = client.post("/rules/parse", json={"source": "a AND"})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "syntax_error"
        assert body["position"] == 5

    def test_round_trip_through_canonical(self, client):
        first = client.post("/rules/parse", json={"source": "NOT (a OR b) AND punct_count >= 2"}).json()
        second = client.post("/rules/parse", json={"source": first["canonical"]}).json()
        assert first["ast"] == second["ast"]


def make_model(client, kind="manual_tree", **overrides):
    cid = upload_sample10(client)
    fid = client.post("/feature-sets", json=DOB_FEATURES).json()["id"]
    body = {"kind": kind, "feature_set": fid, "train_corpus": cid, "test_corpus": cid}
    if kind == "manual_tree":
        body["tree"] = overrides.pop("tree", {"leaf": "non-spam"})
    if kind == "ruleset":
        body["rules"] = overrides.pop("rules", "default => non-spam\n")
    body.update(overrides)
    return client.post("/models", json=body)


class TestModels:
    def test_null_manual_tree_half_accuracy(self, client):
        response = make_model(client, tree={"leaf": "non-spam"})
        assert response.status_code == 200
        body = response.json()
        assert body["test_metrics"]["accuracy"] == 0.5
        assert body["train_metrics"]["mcr"] == 0.5

    def test_metrics_fields_complete(self, client):
        mid = make_model(client, tree=FIG6_TREE_DESC).json()["id"]
        body = client.get(f"/models/{mid}/metrics").json()
        for side in ("train", "test"):
            block = body[side]
            assert set(block["confusion"]) == {"tp", "fn", "fp", "tn"}
            for key in ("accuracy", "mcr", "sensitivity", "specificity"):
                assert key in block

    def test_zero_features_logreg_400(self, client):
        cid = upload_sample10(client)
        fid = client.post("/feature-sets", json=[]).json()["id"]
        response = client.post(
            "/models",
            json={"kind": "logreg", "feature_set": fid, "train_corpus": cid, "test_corpus": cid},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "zero_features"

    def test_unknown_ids_400(self, client):
        response = client.post(
            "/models", json={"kind": "nb", "feature_set": 9, "train_corpus": 9, "test_corpus": 9}
        )
        assert response.status_code == 400
        assert response.json()["code"] in ("unknown_feature_set", "unknown_corpus")

    def test_same_seed_same_payload_distinct_ids(self, client):
        cid = upload_sample10(client)
        fid = client.post("/feature-sets", json=DOB_FEATURES).json()["id"]
        body = {"kind": "forest", "feature_set": fid, "train_corpus": cid,
                "test_corpus": cid, "seed": 7, "n_trees": 10}
        first = client.post("/models", json=body).json()
        second = client.post("/models", json=body).json()
        assert first["id"] != second["id"]
        assert first["payload"] == second["payload"]
        assert first["train_metrics"] == second["train_metrics"]

    @pytest.mark.parametrize("kind", ["nb", "logreg", "tree", "forest"])
    def test_statistical_kinds_train(self, client, kind):
        response = make_model(client, kind=kind, n_trees=10)
        assert response.status_code == 200, response.text
        body = response.json()
        assert body["kind"] == kind
        assert 0.0 <= body["train_metrics"]["accuracy"] <= 1.0

    def test_logreg_payload_has_coefficients(self, client):
        body = make_model(client, kind="logreg").json()
        assert len(body["payload"]["weights"]) == 2
        assert body["payload"]["converged"] is True

    def test_ruleset_kind(self, client):
        response = make_model(
            client, kind="ruleset",
            rules="dear_or_bless => spam\nNOT contains_re => spam\ndefault => non-spam\n",
        )
        assert response.status_code == 200
        body = response.json()
        assert body["payload"]["clauses"][0] == {"condition": "dear_or_bless", "verdict": "spam"}
        assert body["train_metrics"]["accuracy"] == 0.6

    def test_ruleset_unknown_feature_400(self, client):
        response = make_model(client, kind="ruleset", rules="no_such => spam\ndefault => spam\n")
        assert response.status_code == 400
        assert response.json()["code"] == "unknown_feature"

    def test_single_class_corpus_400(self, client):
        csv = "subject,label\nonly spam here,spam\nmore spam,spam\n"
        cid = client.post("/corpora", json={"csv": csv}).json()["id"]
        fid = client.post("/feature-sets", json=DOB_FEATURES).json()["id"]
        response = client.post(
            "/models", json={"kind": "nb", "feature_set": fid, "train_corpus": cid, "test_corpus": cid}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "single_class_corpus"

    def test_unknown_kind_400(self, client):
        response = make_model(client, kind="svm")
        assert response.status_code == 400
        assert response.json()["code"] == "unknown_model_kind"


class TestPredictEndpoint:
    def test_fig6_examples(self, client):
        mid = make_model(client, tree=FIG6_TREE_DESC).json()["id"]
        body = client.post(f"/models/{mid}/predict", json={"subject": "Dear trusted one"}).json()
        assert body["label"] == "spam"
        assert body["score"] == 1.0
        assert body["feature_vector"]["dear_or_bless"] is True
        body = client.post(
            f"/models/{mid}/predict", json={"subject": "Re: Classifier software design"}
        ).json()
        assert body["label"] == "non-spam"

    def test_null_tree_always_non_spam(self, client):
        mid = make_model(client, tree={"leaf": "non-spam"}).json()["id"]
        for subject in ("anything", "Dear me", "BUY NOW!!!"):
            body = client.post(f"/models/{mid}/predict", json={"subject": subject}).json()
            assert body["label"] == "non-spam"

    def test_unknown_model_404(self, client):
        response = client.post("/models/42/predict", json={"subject": "x"})
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_model"

    def test_empty_subject_400(self, client):
        mid = make_model(client).json()["id"]
        response = client.post(f"/models/{mid}/predict", json={"subject": "   "})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_subject"


class TestStoreConsistency:
    def test_delete_in_use_corpus_rejected(self, client):
        mid_response = make_model(client)
        assert mid_response.status_code == 200
        response = client.delete("/corpora/1")
        assert response.status_code == 409
        assert response.json()["code"] == "in_use"

    def test_delete_after_model_removed(self, client):
        mid = make_model(client).json()["id"]
        assert client.delete(f"/models/{mid}").status_code == 200
        assert client.delete("/corpora/1").status_code == 200
        assert client.delete("/feature-sets/1").status_code == 200

    def test_get_does_not_mutate(self, client):
        upload_sample10(client)
        before = client.get("/corpora").json()
        client.get("/corpora/1/vocabulary")
        client.get("/healthz")
        assert client.get("/corpora").json() == before

    def test_deleted_ids_not_reused(self, client):
        first = upload_sample10(client)
        client.delete(f"/corpora/{first}")
        second = upload_sample10(client)
        assert second == first + 1


class TestRandomSequences:
    def test_store_stays_referentially_intact(self, client):
        import random as random_mod

        rng = random_mod.Random(20260808)
        for _ in range(120):
            action = rng.choice(["corpus", "features", "model", "delete_c", "delete_f", "delete_m"])
            if action == "corpus":
                client.post("/corpora", json={"csv": SAMPLE10_CSV})
            elif action == "features":
                client.post("/feature-sets", json=DOB_FEATURES)
            elif action == "model":
                corpora = [c["id"] for c in client.get("/corpora").json()]
                sets = [f["id"] for f in client.get("/feature-sets").json()]
                if corpora and sets:
                    client.post(
                        "/models",
                        json={
                            "kind": rng.choice(["nb", "tree", "manual_tree"]),
                            "feature_set": rng.choice(sets),
                            "train_corpus": rng.choice(corpora),
                            "test_corpus": rng.choice(corpora),
                            "tree": {"leaf": "non-spam"},
                        },
                    )
            elif action == "delete_c":
                client.delete(f"/corpora/{rng.randrange(1, 12)}")
            elif action == "delete_f":
                client.delete(f"/feature-sets/{rng.randrange(1, 12)}")
            else:
                client.delete(f"/models/{rng.randrange(1, 12)}")

        # Sweep: every model's references must still resolve.
        corpora = {c["id"] for c in client.get("/corpora").json()}
        sets = {f["id"] for f in client.get("/feature-sets").json()}
        for row in client.get("/models").json():
            assert row["feature_set"] in sets
            assert row["train_corpus"] in corpora
            assert row["test_corpus"] in corpora
            assert client.get(f"/models/{row['id']}/metrics").status_code == 200


class TestMisc:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.text == "ok"

    def test_api_spec_is_openapi(self, client):
        body = client.get("/api-spec").json()
        assert "openapi" in body
        assert "/models" in body["paths"]

    def test_index_lists_endpoints(self, client):
        body = client.get("/").json()
        assert body["service"] == "spamlab"

    def test_validation_errors_are_stable_codes(self, client):
        response = client.post("/rules/parse", json={"nope": 1})
        assert response.status_code == 400
        assert response.json()["code"] in ("bad_request",)


class TestPersistence:
    def test_snapshot_round_trip(self, tmp_path):
        data_dir = str(tmp_path / "store")
        app = create_app(data_dir=data_dir)
        with TestClient(app) as client:
            cid = upload_sample10(client)
            fid = client.post("/feature-sets", json=DOB_FEATURES).json()["id"]
            mid = client.post(
                "/models",
                json={"kind": "manual_tree", "feature_set": fid, "train_corpus": cid,
                      "test_corpus": cid, "tree": FIG6_TREE_DESC},
            ).json()["id"]
            metrics_before = client.get(f"/models/{mid}/metrics").json()

        app2 = create_app(data_dir=data_dir)
        with TestClient(app2) as client:
            assert client.get("/corpora").json()[0]["size"] == 10
            assert client.get(f"/models/{mid}/metrics").json() == metrics_before
            predicted = client.post(f"/models/{mid}/predict", json={"subject": "Dear trusted one"}).json()
            assert predicted["label"] == "spam"
            # ids continue monotonically after reload
            assert upload_sample10(client) == cid + 1
