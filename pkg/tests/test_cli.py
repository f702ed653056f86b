import json

import pytest

from spamlab.cli import run
from spamlab.fixtures import fixture_path, fixture_text

SAMPLE10 = str(fixture_path("sample10.csv"))
FIG6_TREE = str(fixture_path("fig6_tree.json"))
NULL_RULES = str(fixture_path("null.rules"))
FIG6_RULES = str(fixture_path("fig6.rules"))


@pytest.fixture()
def features_file(tmp_path):
    path = tmp_path / "features.json"
    path.write_text(
        json.dumps(
            [
                {"name": "dear_or_bless", "kind": "word_list",
                 "words": ["dear", "bless", "almighty", "urgent"]},
                {"name": "all_caps", "kind": "all_caps"},
                {"name": "multi_punct", "kind": "multi_punct", "min_count": 2},
            ]
        )
    )
    return str(path)


class TestIngest:
    def test_sample10_summary(self):
        code, out, err = run(["ingest", "--in", SAMPLE10])
        assert code == 0
        assert out == "10 subjects, 5 spam (50.0%), 5 non-spam\n"
        assert err == ""

    def test_missing_file(self):
        code, out, err = run(["ingest", "--in", "/nonexistent.csv"])
        assert code == 1
        assert "error" in err

    def test_bad_label_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("subject,label\nhello,ham\n")
        code, _, err = run(["ingest", "--in", str(bad)])
        assert code == 1
        assert "ham" in err

    def test_dedupe_flag(self, tmp_path):
        dup = tmp_path / "dup.csv"
        dup.write_text("subject,label\nsame line,spam\nsame line,spam\nother,non-spam\n")
        code, out, _ = run(["ingest", "--in", str(dup), "--dedupe"])
        assert code == 0
        assert out.startswith("2 subjects")

    def test_dedupe_with_out_file(self, tmp_path):
        dup = tmp_path / "dup.csv"
        dup.write_text("subject,label\nsame line,spam\nsame line,spam\nother,non-spam\n")
        cleaned = tmp_path / "clean.csv"
        code, _, _ = run(["ingest", "--in", str(dup), "--dedupe", "--out", str(cleaned)])
        assert code == 0
        assert cleaned.read_text() == "subject,label\nsame line,spam\nother,non-spam\n"


class TestUsageErrors:
    def test_unknown_subcommand(self):
        code, _, err = run(["bogus"])
        assert code == 1
        assert "usage:" in err

    def test_train_missing_required_flag(self):
        code, _, err = run(["train", "--model", "logreg"])
        assert code == 1
        assert "usage:" in err

    def test_no_subcommand(self):
        code, _, err = run([])
        assert code == 1

    def test_unknown_flag(self):
        code, _, err = run(["ingest", "--in", SAMPLE10, "--frobnicate"])
        assert code == 1


class TestRules:
    def test_null_rules_accuracy_half(self):
        code, out, _ = run(["rules", "--rules", NULL_RULES, "--in", SAMPLE10])
        assert code == 0
        assert "0.500" in out

    def test_fig6_rules_json(self):
        code, out, _ = run(["rules", "--rules", FIG6_RULES, "--in", SAMPLE10, "--json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["model"] == "fig6"
        assert doc["accuracy"] == 0.6
        assert doc["confusion"] == {"tp": 4, "fn": 1, "fp": 3, "tn": 2}

    def test_bad_ruleset_reports_line(self, tmp_path):
        bad = tmp_path / "bad.rules"
        bad.write_text("all_caps AND => spam\ndefault => spam\n")
        code, _, err = run(["rules", "--rules", str(bad), "--in", SAMPLE10])
        assert code == 1
        assert "line 1" in err


class TestFeaturize:
    def test_header_and_shape(self, features_file):
        code, out, _ = run(["featurize", "--in", SAMPLE10, "--features", features_file])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "dear_or_bless,all_caps,multi_punct,label"
        assert len(lines) == 11
        assert lines[1] == "1,0,0,spam"  # Dear trusted one

    def test_bag_of_words_expansion(self):
        code, out, _ = run(["featurize", "--in", SAMPLE10, "--bag-of-words", "--min-freq", "2"])
        assert code == 0
        header = out.splitlines()[0]
        assert "bag_your" in header and "bag_re" in header

    def test_no_features_is_user_error(self):
        code, _, err = run(["featurize", "--in", SAMPLE10])
        assert code == 1
        assert "features" in err


class TestTrainEvaluatePredict:
    @pytest.mark.parametrize("kind", ["nb", "logreg", "tree", "forest"])
    def test_round_trip_each_kind(self, kind, tmp_path, features_file):
        model_path = str(tmp_path / f"{kind}.json")
        code, out, err = run(
            ["train", "--model", kind, "--in", SAMPLE10, "--features", features_file,
             "--out", model_path, "--seed", "0"]
        )
        assert code == 0, err
        assert f"kind={kind}" in out

        code, out, err = run(["evaluate", "--model", model_path, "--in", SAMPLE10])
        assert code == 0, err
        assert "accuracy" in out

        code, out, err = run(["predict", "--model", model_path, "--subject", "Dear trusted one"])
        assert code == 0, err
        assert out.split()[0] in ("spam", "non-spam")
        assert "score=" in out

    def test_predict_fig6_tree_examples(self):
        code, out, _ = run(["predict", "--model", FIG6_TREE, "--subject", "Dear trusted one"])
        assert code == 0
        assert out == "spam score=1.000\n"
        code, out, _ = run(["predict", "--model", FIG6_TREE, "--subject", "Re: Classifier software design"])
        assert code == 0
        assert out.startswith("non-spam ")

    def test_predict_json_echoes_features(self):
        code, out, _ = run(["predict", "--model", FIG6_TREE, "--subject", "Dear trusted one", "--json"])
        doc = json.loads(out)
        assert doc["label"] == "spam"
        assert doc["score"] == 1.0
        assert doc["feature_vector"]["dear_or_bless"] is True

    def test_train_then_evaluate_deterministic(self, tmp_path, features_file):
        outputs = []
        for attempt in ("a", "b"):
            model_path = str(tmp_path / f"m{attempt}.json")
            run(["train", "--model", "forest", "--in", SAMPLE10, "--features", features_file,
                 "--out", model_path, "--seed", "0"])
            code, out, _ = run(["evaluate", "--model", model_path, "--in", SAMPLE10, "--json"])
            assert code == 0
            outputs.append(out.replace(f"m{attempt}", "m"))
        assert outputs[0] == outputs[1]


class TestReport:
    def test_two_model_comparison(self, tmp_path, features_file):
        nb_path = str(tmp_path / "nb.json")
        tree_path = str(tmp_path / "tree.json")
        run(["train", "--model", "nb", "--in", SAMPLE10, "--features", features_file, "--out", nb_path])
        run(["train", "--model", "tree", "--in", SAMPLE10, "--features", features_file, "--out", tree_path])
        code, out, _ = run(["report", "--models", f"{nb_path},{tree_path}",
                            "--train", SAMPLE10, "--test", SAMPLE10])
        assert code == 0
        assert out.startswith("train:")
        assert "nb" in out and "tree" in out

    def test_json_report(self, tmp_path, features_file):
        nb_path = str(tmp_path / "nb.json")
        run(["train", "--model", "nb", "--in", SAMPLE10, "--features", features_file, "--out", nb_path])
        code, out, _ = run(["report", "--models", nb_path, "--train", SAMPLE10,
                            "--test", SAMPLE10, "--json"])
        doc = json.loads(out)
        assert doc["models"][0]["model"] == "nb"
        assert "train" in doc["models"][0] and "test" in doc["models"][0]
