"""JSON encodings for states and detector sets.

State files:

    {"dims": [2, 2], "amplitudes": [[re, im], [re, im], ...]}

Amplitudes are row-major with party A most significant, matching
``StateVector.amplitudes``.

Detector files, either explicit bases

    {"parties": ["B", "C"], "n": 2,
     "bases": [[[[re, im], ...vector...], ...basis...], ...party...]}

or the qubit shorthand (one Bloch pair per party, starting at B)

    {"angles": [{"theta": 1.0, "phi": 0.0}, ...]}
"""

from __future__ import annotations

import json
import string
from typing import Any

import numpy as np

from .errors import ParamError, ShapeError
from .states import (
    DetectorSet,
    LocalBasis,
    StateVector,
    bloch_detectors,
    detector_set,
    make_state,
)


def party_letter(index: int) -> str:
    if not (0 <= index < len(string.ascii_uppercase)):
        raise ParamError(f"party index {index} out of range")
    return string.ascii_uppercase[index]


def party_index(letter: str) -> int:
    if not (isinstance(letter, str) and len(letter) == 1
            and letter in string.ascii_uppercase):
        raise ParamError(f"party label must be a single letter A-Z, "
                         f"got {letter!r}")
    return string.ascii_uppercase.index(letter)


def _complex_to_pairs(values: np.ndarray) -> list:
    """Nested [re, im] pairs with the array's leading axes preserved."""
    stacked = np.stack([values.real, values.imag], axis=-1)
    return stacked.tolist()


def _pairs_to_complex(pairs: Any, what: str) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ShapeError(f"{what} must be nested [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state: StateVector) -> dict:
    return {
        "dims": list(state.dims),
        "amplitudes": _complex_to_pairs(state.amplitudes),
    }


def state_from_json(obj: dict) -> StateVector:
    if not isinstance(obj, dict) or "dims" not in obj or "amplitudes" not in obj:
        raise ShapeError("state JSON needs 'dims' and 'amplitudes' keys")
    amps = _pairs_to_complex(obj["amplitudes"], "amplitudes")
    if amps.ndim != 1:
        raise ShapeError("amplitudes must be a flat list of [re, im] pairs")
    return make_state(amps, obj["dims"])


def detectors_to_json(detectors: DetectorSet) -> dict:
    return {
        "parties": [party_letter(p) for p in detectors.parties],
        "n": detectors.n,
        "bases": [_complex_to_pairs(b.vectors) for b in detectors.bases],
    }


def detectors_from_json(obj: dict) -> DetectorSet:
    if not isinstance(obj, dict):
        raise ShapeError("detector JSON must be an object")
    if "angles" in obj:
        pairs = []
        for entry in obj["angles"]:
            if not isinstance(entry, dict) or "theta" not in entry:
                raise ParamError(
                    "each angles entry needs 'theta' (and optional 'phi')")
            pairs.append((float(entry["theta"]),
                          float(entry.get("phi", 0.0))))
        if not pairs:
            raise ParamError("angles list is empty")
        return bloch_detectors(pairs)
    if "parties" not in obj or "bases" not in obj:
        raise ShapeError(
            "detector JSON needs 'parties' and 'bases' (or 'angles')")
    parties = [party_index(s) for s in obj["parties"]]
    if len(parties) != len(obj["bases"]):
        raise ShapeError("one basis per listed party required")
    bases = []
    for p, raw in zip(parties, obj["bases"]):
        vectors = _pairs_to_complex(raw, "basis vectors")
        if vectors.ndim != 2:
            raise ShapeError("each basis must be a list of vectors of "
                             "[re, im] pairs")
        bases.append(LocalBasis(vectors=vectors, party=p))
    det = detector_set(bases, parties)
    if "n" in obj and int(obj["n"]) != det.n:
        raise ShapeError(f"declared n={obj['n']} but bases carry {det.n} "
                         f"vectors")
    return det


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj: Any) -> str:
    """Canonical pretty encoding used for all machine output."""
    return json.dumps(obj, indent=2)
