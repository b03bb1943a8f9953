"""Model zoo: gradient boosting, random forest, and an MLP.

Hyperparameters are each library's documented defaults with the seed pinned;
whatever ``get_params`` reports is recorded verbatim in the evaluation
report. Tree models consume raw integer features; the MLP gets z-scored
features via a pipeline step, since neural nets are scale-sensitive.
"""

from __future__ import annotations

from sklearn.ensemble import HistGradientBoostingClassifier, RandomForestClassifier
from sklearn.neural_network import MLPClassifier
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import StandardScaler

MODEL_KINDS = ("gbdt", "random-forest", "mlp")

MODEL_TITLES = {
    "gbdt": "Gradient Boosting",
    "random-forest": "Random Forest",
    "mlp": "MLP",
}

PREPROCESSING = {
    "gbdt": "raw",
    "random-forest": "raw",
    "mlp": "zscore",
}


def build_model(kind: str, seed: int):
    if kind == "gbdt":
        return HistGradientBoostingClassifier(random_state=seed)
    if kind == "random-forest":
        return RandomForestClassifier(random_state=seed)
    if kind == "mlp":
        return Pipeline(
            [
                ("scale", StandardScaler()),
                ("mlp", MLPClassifier(random_state=seed)),
            ]
        )
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def recorded_params(model) -> dict:
    """JSON-safe dump of the estimator's effective hyperparameters."""
    if isinstance(model, Pipeline):
        params = model.named_steps["mlp"].get_params()
    else:
        params = model.get_params()
    safe = {}
    for key, value in sorted(params.items()):
        if isinstance(value, (str, int, float, bool)) or value is None:
            safe[key] = value
        else:
            safe[key] = repr(value)
    return safe
