import io
import json
from dataclasses import replace

import pytest

from histoclass.config import PipelineConfig
from histoclass.errors import BundleFormatError, DataError
from histoclass.pipeline import evaluate_bundle, run_experiment
from histoclass.store import dumps, load_bundle, loads, save_bundle

CREATED = "2024-01-01T00:00:00Z"


@pytest.fixture(scope="module", params=[False, True], ids=["plain", "cluster"])
def experiment(request, wdbc):
    cfg = PipelineConfig(seed=7, created=CREATED, with_cluster_feature=request.param)
    return run_experiment(cfg, wdbc)


def test_round_trip_equal(experiment):
    b = experiment.bundle
    assert loads(dumps(b)) == b


def test_file_and_stream_round_trip(experiment, tmp_path):
    path = tmp_path / "model.json"
    save_bundle(experiment.bundle, path)
    assert load_bundle(path) == experiment.bundle
    buf = io.StringIO()
    save_bundle(experiment.bundle, buf)
    buf.seek(0)
    assert load_bundle(buf) == experiment.bundle
    assert path.read_bytes() == buf.getvalue().encode()


def test_identical_config_gives_identical_bytes(experiment, wdbc):
    again = run_experiment(experiment.config, wdbc)
    assert dumps(again.bundle).encode() == dumps(experiment.bundle).encode()


def test_reloaded_bundle_same_confusion(experiment):
    reloaded = loads(dumps(experiment.bundle))
    evals = evaluate_bundle(reloaded, experiment.pre.split.test)
    for name, ev in experiment.evaluations.items():
        assert evals[name].confusion == ev.confusion
        assert [p.prediction for p in evals[name].predictions] == [
            p.prediction for p in ev.predictions
        ]


def test_floats_are_decimal_strings(experiment):
    doc = json.loads(dumps(experiment.bundle))
    assert all(isinstance(v, str) for v in doc["logistic"]["weights"].values())
    assert isinstance(doc["cart"]["root"]["threshold"], str)


def test_truncated_document_reports_position(experiment):
    text = dumps(experiment.bundle)
    with pytest.raises(BundleFormatError, match=r"line \d+ column \d+ \(char \d+\)"):
        loads(text[: len(text) // 2])


def _mutated(bundle, fn):
    doc = json.loads(dumps(bundle))
    fn(doc)
    return json.dumps(doc)


def test_unknown_version(experiment):
    text = _mutated(experiment.bundle, lambda d: d.update(version=99))
    with pytest.raises(BundleFormatError, match="version 99"):
        loads(text)


def test_not_a_bundle():
    with pytest.raises(BundleFormatError):
        loads('{"hello": 1}')
    with pytest.raises(BundleFormatError):
        loads("[]")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["logistic"]["weights"].pop(next(iter(d["logistic"]["weights"]))),
        lambda d: d["logistic"].update(intercept=1.5),
        lambda d: d["logistic"].update(intercept="abc"),
        lambda d: d.pop("scaler"),
        lambda d: d["cart"]["root"].update(counts=[0, 0]),
        lambda d: d.update(schema=["radius"]),
    ],
    ids=["missing-weight", "bare-float", "bad-decimal", "missing-scaler", "bad-counts", "bad-schema"],
)
def test_malformed_documents(experiment, mutate):
    with pytest.raises((BundleFormatError, DataError)):
        loads(_mutated(experiment.bundle, mutate))


def test_prepare_rejects_wrong_schema(experiment, wdbc):
    from histoclass.data import select_features

    with pytest.raises(DataError, match="schema mismatch"):
        experiment.bundle.prepare(select_features(wdbc, wdbc.schema[:5]))


def test_unknown_model_name(experiment):
    with pytest.raises(DataError):
        experiment.bundle.model("forest")


def test_provenance_recorded(experiment):
    p = loads(dumps(experiment.bundle)).provenance
    assert (p.seed, p.train_count, p.created) == (7, 448, CREATED)


def test_created_falls_back_to_source_date_epoch(wdbc, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    exp = run_experiment(PipelineConfig(seed=1), wdbc)
    assert exp.bundle.provenance.created.startswith("1970-01-01")
    exp2 = run_experiment(replace(exp.config), wdbc)
    assert dumps(exp.bundle) == dumps(exp2.bundle)


def test_document_has_only_json_native_scalars(experiment):
    def walk(node):
        if isinstance(node, dict):
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)
        else:
            assert type(node) in (str, int, bool, type(None)), type(node)

    from histoclass.store import bundle_to_doc

    walk(bundle_to_doc(experiment.bundle))
