"""Binary classifiers with probability outputs, oversampling, splits,
and evaluation metrics."""

from geomove.learners.artifacts import (
    HYPER_CLASSES,
    MODEL_CLASSES,
    TRAINERS,
    load_model_artifact,
    model_from_dict,
    model_to_dict,
    save_model_artifact,
    train_model,
)
from geomove.learners.common import TrainedModel, log_loss, sigmoid
from geomove.learners.data import Dataset, split_train_test, stratified_split_indices
from geomove.learners.forest import ForestHyper, RandomForestModel, train_random_forest
from geomove.learners.gbdt import GBDTHyper, GBDTModel, train_gbdt
from geomove.learners.logreg import LogRegHyper, LogRegModel, logreg_loss_and_grad, train_logreg
from geomove.learners.metrics import (
    EvalMetrics,
    evaluate,
    evaluate_predictions,
    metrics_from_confusion,
)
from geomove.learners.mlp import MLP1Model, MLPHyper, init_params, mlp_loss_and_grad, train_mlp1
from geomove.learners.oversample import oversample_random, oversample_smote, smote_neighbors
from geomove.learners.svm import (
    LinearSVMModel,
    SVMHyper,
    hinge_loss_and_subgrad,
    train_linear_svm,
)
from geomove.learners.tree import DecisionTree

__all__ = [
    "Dataset",
    "DecisionTree",
    "EvalMetrics",
    "ForestHyper",
    "GBDTHyper",
    "GBDTModel",
    "HYPER_CLASSES",
    "LinearSVMModel",
    "LogRegHyper",
    "LogRegModel",
    "MLP1Model",
    "MLPHyper",
    "MODEL_CLASSES",
    "RandomForestModel",
    "SVMHyper",
    "TRAINERS",
    "TrainedModel",
    "evaluate",
    "evaluate_predictions",
    "hinge_loss_and_subgrad",
    "init_params",
    "load_model_artifact",
    "log_loss",
    "logreg_loss_and_grad",
    "metrics_from_confusion",
    "mlp_loss_and_grad",
    "model_from_dict",
    "model_to_dict",
    "oversample_random",
    "oversample_smote",
    "save_model_artifact",
    "sigmoid",
    "smote_neighbors",
    "split_train_test",
    "stratified_split_indices",
    "train_gbdt",
    "train_linear_svm",
    "train_logreg",
    "train_mlp1",
    "train_model",
    "train_random_forest",
]
