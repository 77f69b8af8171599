"""File formats and canonical JSON for the CLI.

Vector files:   {"coords": [[index, value], ...]}, indices strictly increasing.
Family files:   {"pairs": [[m, E], ...]} with E either [lo, hi] (a closed
                interval) or {"set": [i1, i2, ...]} (an explicit list).
Matrix files:   {"rows": [[...], ...]}.
Config files:   {"preset": "small" | "paper" | {"custom": {...}}}.
Witness files:  the JSON tree mirroring the witness dataclasses.

Reports are serialized with sorted keys and a fixed separator so identical
inputs produce byte-identical output; wall-clock timings live under a single
"timings" key that comparisons are expected to strip.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .admissible import AdmissibleFamily
from .core import FiniteVector
from .qsum_engine import QSumConfig
from .witness import Witness, witness_from_json, witness_to_json


class InputError(ValueError):
    """Malformed input file or option (CLI exit code 2)."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def load_vector(path: str) -> FiniteVector:
    try:
        return FiniteVector.from_json(_load(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a vector file ({exc})") from exc


def save_vector(x: FiniteVector, path: str) -> None:
    Path(path).write_text(canonical_json(x.to_json()) + "\n")


def load_family(path: str) -> AdmissibleFamily:
    try:
        return AdmissibleFamily.from_json(_load(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a family file ({exc})") from exc


def save_family(fam: AdmissibleFamily, path: str) -> None:
    Path(path).write_text(canonical_json(fam.to_json()) + "\n")


def load_matrix(path: str) -> np.ndarray:
    obj = _load(path)
    try:
        return np.asarray(obj["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a matrix file ({exc})") from exc


def load_config(path: str | None) -> QSumConfig:
    if path is None:
        return QSumConfig.small()
    if path in ("small", "paper"):
        return QSumConfig.from_json({"preset": path})
    try:
        return QSumConfig.from_json(_load(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a config file ({exc})") from exc


def save_witness(w: Witness, path: str) -> None:
    Path(path).write_text(canonical_json(witness_to_json(w)) + "\n")


def load_witness(path: str) -> Witness:
    try:
        return witness_from_json(_load(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a witness file ({exc})") from exc
