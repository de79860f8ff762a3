"""Model artifact serialization: self-describing JSON that round-trips
exactly (floats survive via repr-based JSON encoding)."""

from __future__ import annotations

import json
from pathlib import Path

from geomove.learners.forest import ForestHyper, RandomForestModel, train_random_forest
from geomove.learners.gbdt import GBDTHyper, GBDTModel, train_gbdt
from geomove.learners.logreg import LogRegHyper, LogRegModel, train_logreg
from geomove.learners.mlp import MLP1Model, MLPHyper, train_mlp1
from geomove.learners.svm import LinearSVMModel, SVMHyper, train_linear_svm

MODEL_CLASSES = {
    "logreg": LogRegModel,
    "linear_svm": LinearSVMModel,
    "random_forest": RandomForestModel,
    "gbdt": GBDTModel,
    "mlp1": MLP1Model,
}

HYPER_CLASSES = {
    "logreg": LogRegHyper,
    "linear_svm": SVMHyper,
    "random_forest": ForestHyper,
    "gbdt": GBDTHyper,
    "mlp1": MLPHyper,
}

TRAINERS = {
    "logreg": train_logreg,
    "linear_svm": train_linear_svm,
    "random_forest": train_random_forest,
    "gbdt": train_gbdt,
    "mlp1": train_mlp1,
}


def train_model(kind: str, train, hyper_overrides: dict | None = None):
    """Train a model by kind name with optional hyperparameter overrides."""
    if kind not in TRAINERS:
        raise ValueError(f"unknown model kind {kind!r}; known: {sorted(TRAINERS)}")
    hyper_cls = HYPER_CLASSES[kind]
    hyper = hyper_cls(**(hyper_overrides or {}))
    return TRAINERS[kind](train, hyper)


def model_to_dict(model, feature_spec_id: str) -> dict:
    return {"kind": model.kind, "feature_spec_id": feature_spec_id, "state": model.get_state()}


def model_from_dict(d: dict):
    cls = MODEL_CLASSES[d["kind"]]
    return cls.from_state(d["state"]), d["feature_spec_id"]


def save_model_artifact(path: str | Path, model, feature_spec_id: str) -> None:
    Path(path).write_text(
        json.dumps(model_to_dict(model, feature_spec_id)), encoding="utf-8"
    )


def load_model_artifact(path: str | Path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
