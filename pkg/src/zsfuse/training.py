"""Classification head training: softmax head, hand-rolled AdamW, per-seed
runs with best-validation-UAR model selection.

All arithmetic is float64 so the finite-difference gradient check has a
meaningful tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionError, TrainError
from .fusion import FusedVector
from .manifest import SplitAssignment
from .metrics import AggregateResult, aggregate, uar


@dataclass
class HeadModel:
    W: np.ndarray  # (D_in, C)
    b: np.ndarray  # (C,)

    @property
    def C(self) -> int:
        return self.b.shape[0]

    @property
    def d_in(self) -> int:
        return self.W.shape[0]

    def copy(self) -> "HeadModel":
        return HeadModel(W=self.W.copy(), b=self.b.copy())


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 2e-5
    batch_size: int = 32
    epochs: int = 30
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    weight_decay: float = 0.01
    seeds: tuple[int, ...] = (0, 1, 2)

    def __post_init__(self):
        if self.lr <= 0:
            raise TrainError("lr must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise TrainError("betas must be in [0, 1)")
        if self.epochs < 1 or self.batch_size < 1:
            raise TrainError("epochs and batch_size must be >= 1")
        if not self.seeds:
            raise TrainError("at least one seed required")


@dataclass(frozen=True)
class TrainRecord:
    seed: int
    per_epoch_val_uar: tuple[float, ...]
    per_epoch_train_loss: tuple[float, ...]
    best_epoch: int
    test_uar: float


@dataclass(frozen=True)
class TrainResult:
    records: tuple[TrainRecord, ...]
    test_uar: AggregateResult


def init_model(d_in: int, C: int, rng: np.random.Generator) -> HeadModel:
    lim = np.sqrt(6.0 / (d_in + C))
    W = rng.uniform(-lim, lim, size=(d_in, C))
    return HeadModel(W=W, b=np.zeros(C))


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def forward(model: HeadModel, z: FusedVector | np.ndarray) -> np.ndarray:
    vec = z.z if isinstance(z, FusedVector) else np.asarray(z, dtype=np.float64)
    if vec.shape[-1] != model.d_in:
        raise DimensionError(
            f"feature length {vec.shape[-1]} != model input {model.d_in}")
    return _softmax(vec @ model.W + model.b)


def loss_and_grad(model: HeadModel, Z: np.ndarray, y: np.ndarray):
    """Mean cross-entropy over the batch and analytic gradients (dW, db).

    Weight decay is the optimizer's job and is not part of the loss.
    """
    Z = np.asarray(Z, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if Z.ndim != 2 or Z.shape[0] == 0:
        raise TrainError("batch must be a non-empty 2-d array")
    if y.min() < 0 or y.max() >= model.C:
        raise TrainError(f"label index out of range for C={model.C}")
    n = Z.shape[0]
    probs = _softmax(Z @ model.W + model.b)
    loss = float(-np.log(probs[np.arange(n), y]).mean())
    dlogits = probs
    dlogits[np.arange(n), y] -= 1.0
    dlogits /= n
    dW = Z.T @ dlogits
    db = dlogits.sum(axis=0)
    return loss, dW, db


@dataclass
class AdamWState:
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def adamw_step(state: AdamWState, params: dict, grads: dict, config: TrainConfig,
               step_index: int):
    """One decoupled-weight-decay Adam update.

    p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + wd * p), with weight decay
    applied only to keys in DECAYED_PARAMS (the bias is excluded).
    """
    if step_index < 1:
        raise TrainError("step_index must be >= 1")
    new_params = {}
    for key, p in params.items():
        g = grads[key]
        m = state.m.get(key, np.zeros_like(p))
        v = state.v.get(key, np.zeros_like(p))
        m = config.beta1 * m + (1 - config.beta1) * g
        v = config.beta2 * v + (1 - config.beta2) * g * g
        m_hat = m / (1 - config.beta1 ** step_index)
        v_hat = v / (1 - config.beta2 ** step_index)
        update = m_hat / (np.sqrt(v_hat) + config.adam_eps)
        if key in DECAYED_PARAMS:
            update = update + config.weight_decay * p
        new_params[key] = p - config.lr * update
        state.m[key] = m
        state.v[key] = v
    state.step = step_index
    return state, new_params


DECAYED_PARAMS = frozenset({"W"})


def _gather(features: dict[str, FusedVector], labels: dict[str, int],
            ids: list[str]):
    Z = np.stack([features[uid].z for uid in ids])
    y = np.asarray([labels[uid] for uid in ids], dtype=np.int64)
    return Z, y


def _predict(model: HeadModel, Z: np.ndarray) -> np.ndarray:
    return np.argmax(Z @ model.W + model.b, axis=1)


def train(features: dict[str, FusedVector], labels: dict[str, int],
          split: SplitAssignment, config: TrainConfig, n_classes: int) -> TrainResult:
    """Train the head once per seed; report test UAR from the best-val epoch."""
    for part in ("train", "val", "test"):
        if not split.ids_in(part):
            raise TrainError(f"empty {part} partition")
    missing = [uid for uid in split.mapping
               if uid not in features or uid not in labels]
    if missing:
        raise TrainError(f"no feature/label for ids: {sorted(missing)[:10]}")

    train_ids = split.ids_in("train")
    Z_train, y_train = _gather(features, labels, train_ids)
    Z_val, y_val = _gather(features, labels, split.ids_in("val"))
    Z_test, y_test = _gather(features, labels, split.ids_in("test"))

    records = []
    for seed in config.seeds:
        rng = np.random.default_rng(seed)
        model = init_model(Z_train.shape[1], n_classes, rng)
        state = AdamWState()
        step = 0

        val_uars = []
        train_losses = []
        best_epoch = -1
        best_uar = -np.inf
        best_model = model.copy()
        n = Z_train.shape[0]
        for epoch in range(config.epochs):
            perm = rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, config.batch_size):
                idx = perm[start:start + config.batch_size]
                loss, dW, db = loss_and_grad(model, Z_train[idx], y_train[idx])
                epoch_loss += loss * idx.size
                step += 1
                params = {"W": model.W, "b": model.b}
                grads = {"W": dW, "b": db}
                state, params = adamw_step(state, params, grads, config, step)
                model = HeadModel(W=params["W"], b=params["b"])
            train_losses.append(epoch_loss / n)
            val_uar = uar(_predict(model, Z_val), y_val, n_classes, strict=False)
            val_uars.append(val_uar)
            if val_uar > best_uar:  # strict: earliest epoch wins ties
                best_uar = val_uar
                best_epoch = epoch
                best_model = model.copy()

        test_uar = uar(_predict(best_model, Z_test), y_test, n_classes, strict=False)
        records.append(TrainRecord(
            seed=seed,
            per_epoch_val_uar=tuple(val_uars),
            per_epoch_train_loss=tuple(train_losses),
            best_epoch=best_epoch,
            test_uar=test_uar,
        ))

    return TrainResult(records=tuple(records),
                       test_uar=aggregate([r.test_uar for r in records]))
