"""Command-line front door: ingest, featurize, rules, train, evaluate,
predict, report, serve.

Exit codes: 0 success, 1 user error (bad flags, bad files), 2 internal error.
All randomness is seeded (--seed, default 0), so identical invocations on
identical inputs print identical bytes.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from typing import Optional, Sequence

from . import corpus as corpus_mod
from . import evalkit, modelio, presets, ruledsl, textfeat
from .classifiers import TrainConfig
from .errors import SpamLabError


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str):
        self.parser = parser
        self.message = message
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise _UsageError(self, message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="spamlab", description="Spam subject-line classification workbench.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", parents=[], help="validate and summarize a corpus CSV")
    p.add_argument("--in", dest="in_file", required=True, metavar="FILE")
    p.add_argument("--dedupe", action="store_true", help="drop duplicate (subject, label) rows")
    p.add_argument("--out", metavar="FILE", help="write the validated (and deduped) corpus")

    p = sub.add_parser("featurize", help="emit the feature matrix as CSV")
    p.add_argument("--in", dest="in_file", required=True, metavar="FILE")
    p.add_argument("--features", metavar="FEATS.json")
    p.add_argument("--bag-of-words", action="store_true")
    p.add_argument("--min-freq", type=int, default=4)

    p = sub.add_parser("rules", help="apply a ruleset file and print its metrics")
    p.add_argument("--rules", required=True, metavar="RULES.txt")
    p.add_argument("--in", dest="in_file", required=True, metavar="FILE")
    p.add_argument("--features", metavar="FEATS.json",
                   help="feature definitions (default: the built-in presets)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("train", help="train a model and write it to a JSON file")
    p.add_argument("--model", required=True, choices=["nb", "logreg", "tree", "forest"])
    p.add_argument("--in", dest="in_file", required=True, metavar="TRAIN")
    p.add_argument("--features", metavar="FEATS.json")
    p.add_argument("--bag-of-words", action="store_true")
    p.add_argument("--min-freq", type=int, default=4)
    p.add_argument("--out", required=True, metavar="MODEL.json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lambda_", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--min-leaf", type=int, default=2)
    p.add_argument("--impurity", choices=["gini", "entropy"], default="gini")
    p.add_argument("--n-trees", type=int, default=100)
    p.add_argument("--mtry", type=int, default=None)
    p.add_argument("--no-bootstrap", action="store_true")
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub.add_parser("evaluate", help="score a saved model against a labeled corpus")
    p.add_argument("--model", required=True, metavar="MODEL.json")
    p.add_argument("--in", dest="in_file", required=True, metavar="FILE")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("predict", help="classify one subject line")
    p.add_argument("--model", required=True, metavar="MODEL.json")
    p.add_argument("--subject", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="compare saved models on train and test corpora")
    p.add_argument("--models", required=True, metavar="M1,M2,...")
    p.add_argument("--train", required=True, metavar="TRAIN")
    p.add_argument("--test", required=True, metavar="TEST")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", metavar="DIR", default=None,
                   help="persist the session store to DIR across restarts")
    p.add_argument("--webui", metavar="DIR", default=None,
                   help="serve a built web UI from DIR at /")

    return parser


def _load_corpus(path: str, dedupe: bool = False) -> corpus_mod.Corpus:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SpamLabError(f"cannot read {path}: {exc.strerror}")
    loaded = corpus_mod.load_csv(raw, name=Path(path).stem)
    return corpus_mod.dedupe(loaded) if dedupe else loaded


def _load_features(args) -> list[textfeat.FeatureDef]:
    defs: list[textfeat.FeatureDef] = []
    if getattr(args, "features", None):
        try:
            raw = Path(args.features).read_text(encoding="utf-8")
        except OSError as exc:
            raise SpamLabError(f"cannot read {args.features}: {exc.strerror}")
        defs.extend(textfeat.features_from_json(raw))
    return defs


def _expand_bag(defs, args, corpus):
    if getattr(args, "bag_of_words", False):
        vocab = textfeat.build_vocabulary(corpus, min_freq=args.min_freq)
        defs = list(defs) + textfeat.bag_features(vocab)
        textfeat.check_unique_names(defs)
    return defs


def _cmd_ingest(args, out) -> int:
    loaded = _load_corpus(args.in_file, dedupe=args.dedupe)
    balance = corpus_mod.class_balance(loaded)
    spam = sum(1 for item in loaded if item.label is corpus_mod.Label.SPAM)
    print(
        f"{len(loaded)} subjects, {spam} spam ({float(balance) * 100:.1f}%), "
        f"{len(loaded) - spam} non-spam",
        file=out,
    )
    if args.out:
        Path(args.out).write_text(corpus_mod.dump_csv(loaded), encoding="utf-8")
    return 0


def _cmd_featurize(args, out) -> int:
    loaded = _load_corpus(args.in_file)
    defs = _expand_bag(_load_features(args), args, loaded)
    if not defs:
        raise SpamLabError("no features: pass --features and/or --bag-of-words")
    matrix = textfeat.featurize(loaded, defs)
    print(",".join(list(matrix.feature_names) + ["label"]), file=out)
    for row, label in zip(matrix.rows, matrix.labels):
        cells = ["1" if v else "0" for v in row.values] + [label.value]
        print(",".join(cells), file=out)
    return 0


def _cmd_rules(args, out) -> int:
    loaded = _load_corpus(args.in_file)
    defs = _load_features(args) or presets.preset_list()
    try:
        source = Path(args.rules).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpamLabError(f"cannot read {args.rules}: {exc.strerror}")
    rules = ruledsl.parse_ruleset(source)
    predicted = ruledsl.apply_ruleset(rules, loaded, defs)
    cm = evalkit.confusion(predicted, loaded.labels())
    evaluation = evalkit.Evaluation(cm, evalkit.metrics(cm))
    name = Path(args.rules).stem
    if args.json:
        print(json.dumps({"model": name, **evalkit.metrics_to_json(evaluation)}, indent=2), file=out)
    else:
        print(evalkit.render_table([(name, evaluation)]), file=out)
    return 0


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        lambda_=args.lambda_,
        max_iter=args.max_iter,
        tol=args.tol,
        alpha=args.alpha,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        impurity=args.impurity,
        n_trees=args.n_trees,
        mtry=args.mtry,
        bootstrap=not args.no_bootstrap,
        seed=args.seed,
        threshold=args.threshold,
    )


def _cmd_train(args, out) -> int:
    loaded = _load_corpus(args.in_file)
    defs = _expand_bag(_load_features(args), args, loaded)
    if not defs:
        raise SpamLabError("no features: pass --features and/or --bag-of-words")
    bundle = modelio.train_model(args.model, loaded, defs, _train_config(args))
    Path(args.out).write_text(modelio.model_to_json(bundle), encoding="utf-8")
    print(f"wrote {args.out} (kind={bundle.kind}, features={len(bundle.features)})", file=out)
    return 0


def _load_model(path: str) -> modelio.TrainedModel:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpamLabError(f"cannot read {path}: {exc.strerror}")
    return modelio.model_from_json(raw)


def _cmd_evaluate(args, out) -> int:
    bundle = _load_model(args.model)
    loaded = _load_corpus(args.in_file)
    evaluation = evalkit.evaluate_on(bundle, loaded)
    name = Path(args.model).stem
    if args.json:
        print(json.dumps({"model": name, **evalkit.metrics_to_json(evaluation)}, indent=2), file=out)
    else:
        print(evalkit.render_table([(name, evaluation)]), file=out)
    return 0


def _cmd_predict(args, out) -> int:
    bundle = _load_model(args.model)
    label, score, vector = bundle.predict_subject(args.subject)
    if args.json:
        doc = {
            "label": label.value,
            "score": score,
            "feature_vector": dict(zip(vector.feature_names, vector.values)),
        }
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(f"{label.value} score={score:.3f}", file=out)
    return 0


def _cmd_report(args, out) -> int:
    train = _load_corpus(args.train)
    test = _load_corpus(args.test)
    named = []
    for path in args.models.split(","):
        path = path.strip()
        if path:
            named.append((Path(path).stem, _load_model(path)))
    table = evalkit.compare(named, train, test)
    if args.json:
        print(json.dumps(evalkit.comparison_to_json(table), indent=2), file=out)
    else:
        print(evalkit.render_comparison(table), file=out)
    return 0


def _cmd_serve(args, out) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data, webui_dir=args.webui)
    print(f"serving on http://{args.host}:{args.port}", file=out)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "featurize": _cmd_featurize,
    "rules": _cmd_rules,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def _dispatch(argv: Sequence[str], out, err) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(exc.parser.format_usage(), end="", file=err)
        print(f"spamlab: error: {exc.message}", file=err)
        return 1
    except SystemExit as exc:  # -h/--help
        return int(exc.code or 0)
    if args.command is None:
        print(parser.format_usage(), end="", file=err)
        print("spamlab: error: a subcommand is required", file=err)
        return 1
    try:
        return _COMMANDS[args.command](args, out)
    except SpamLabError as exc:
        print(f"spamlab: error: {exc}", file=err)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # noqa: BLE001 - contract: internal errors exit 2
        print(f"spamlab: internal error: {exc!r}", file=err)
        return 2


def run(argv: Sequence[str], stdin: Optional[bytes] = None) -> tuple[int, str, str]:
    """In-process invocation; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = _dispatch(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def main() -> None:
    sys.exit(_dispatch(sys.argv[1:], out=sys.stdout, err=sys.stderr))


if __name__ == "__main__":
    main()
