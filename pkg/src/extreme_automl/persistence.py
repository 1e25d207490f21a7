"""Versioned JSON model files with lossless binary weight payloads.

Arrays are stored as base64-encoded little-endian 64-bit floats with explicit
shapes, so a save/load round trip reproduces predictions bit for bit. The
metadata stays human-readable JSON.
"""

import base64
import binascii
import json
import math

import numpy as np

from .data import FeatureEncoder, LabelCodec, ScalerStats
from .elm import ElmConfig, ElmModel
from .ensemble import EnsembleModel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """The file is not a readable model of any supported version."""


class UnsupportedVersionError(ModelFormatError):
    """The file declares a format version this build does not read."""


def encode_array(arr):
    arr = np.ascontiguousarray(np.asarray(arr, dtype=np.float64))
    payload = base64.b64encode(arr.astype("<f8", copy=False).tobytes()).decode("ascii")
    return {"shape": list(arr.shape), "data": payload}


def decode_array(obj, name):
    try:
        shape = tuple(int(d) for d in obj["shape"])
        raw = base64.b64decode(obj["data"], validate=True)
    except (KeyError, TypeError, ValueError, binascii.Error) as exc:
        raise ModelFormatError(f"{name}: malformed array payload: {exc}") from None
    expected = 8 * math.prod(shape)
    if len(raw) != expected:
        raise ModelFormatError(
            f"{name}: payload holds {len(raw)} bytes but shape {shape} needs {expected}"
        )
    return np.frombuffer(raw, dtype="<f8").reshape(shape).copy()


def model_to_dict(model):
    doc = {
        "format_version": FORMAT_VERSION,
        "task": model.task,
        "mode": model.mode,
        "base_seed": model.base_seed,
        "ensemble_size": model.ensemble_size,
        "chosen_config": {
            "neurons": model.chosen_config.neurons,
            "alpha": model.chosen_config.alpha,
            "activation": model.chosen_config.activation,
            "weight_scale": model.chosen_config.weight_scale,
        },
        "scaler": {
            "means": encode_array(model.scaler.means),
            "stds": encode_array(model.scaler.stds),
            "provenance": model.scaler.provenance,
        },
        "codec": {"classes": list(model.codec.classes)} if model.codec else None,
        "features": model.feature_encoder.to_dict() if model.feature_encoder else None,
        "members": [
            {
                "weights": encode_array(m.weights),
                "biases": encode_array(m.biases),
                "beta": encode_array(m.beta),
            }
            for m in model.members
        ],
    }
    return doc


def model_from_dict(doc):
    try:
        version = doc["format_version"]
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"missing format_version: {exc}") from None
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"model file declares format_version {version}; this build reads {FORMAT_VERSION}"
        )
    try:
        cfg = doc["chosen_config"]
        config = ElmConfig(
            neurons=int(cfg["neurons"]),
            alpha=float(cfg["alpha"]),
            activation=str(cfg["activation"]),
            weight_scale=float(cfg["weight_scale"]),
            seed=int(doc["base_seed"]),
        )
        scaler = ScalerStats(
            means=decode_array(doc["scaler"]["means"], "scaler.means"),
            stds=decode_array(doc["scaler"]["stds"], "scaler.stds"),
            provenance=str(doc["scaler"].get("provenance", "unspecified")),
        )
        codec = None
        if doc.get("codec") is not None:
            codec = LabelCodec(tuple(str(c) for c in doc["codec"]["classes"]))
        encoder = None
        if doc.get("features") is not None:
            encoder = FeatureEncoder.from_dict(doc["features"])
        members = [
            ElmModel(
                weights=decode_array(m["weights"], f"members[{i}].weights"),
                biases=decode_array(m["biases"], f"members[{i}].biases"),
                beta=decode_array(m["beta"], f"members[{i}].beta"),
                activation=config.activation,
            )
            for i, m in enumerate(doc["members"])
        ]
        return EnsembleModel(
            members=members,
            scaler=scaler,
            task=str(doc["task"]),
            codec=codec,
            chosen_config=config,
            base_seed=int(doc["base_seed"]),
            mode=str(doc["mode"]),
            feature_encoder=encoder,
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None


def save_model(model, path):
    """Write the model as deterministic JSON (same model -> same bytes)."""
    doc = model_to_dict(model)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not a valid model file: {exc}") from None
    return model_from_dict(doc)


def _to_jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def write_json_report(path, report):
    """Human-inspectable JSON report (indented, numpy-safe)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=_to_jsonable)
        fh.write("\n")
