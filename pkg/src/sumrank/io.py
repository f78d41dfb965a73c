"""Stable JSON serialization of fields, codes, systems and reports.

Output uses sorted keys, two-space indentation and a trailing newline.
Integers above 2^53 become decimal strings and rationals become
``{"num": ..., "den": ...}``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from fractions import Fraction
from typing import Any, Union

import numpy as np

from . import linalg
from .code import SumRankCode
from .errors import FieldError, FormatError, PreconditionError
from .geometry import System
from .gf import FieldTower, tower_from_dict
from .subspace import FqSubspace, span

SAFE_INT = 2**53


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return v if abs(v) <= SAFE_INT else str(v)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return {"num": to_jsonable(obj.numerator), "den": to_jsonable(obj.denominator)}
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def digest(data: Union[str, bytes]) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


def loads(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError("top-level JSON value must be an object")
    return obj


def read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _require(d: dict, *keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise FormatError(f"missing key(s) {missing}")


def _int(x, what: str) -> int:
    if isinstance(x, bool):
        raise FormatError(f"{what} must be an integer")
    try:
        return int(x)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what} must be an integer") from exc


def tower_from_json(d: Any) -> FieldTower:
    if not isinstance(d, dict):
        raise FormatError("field must be an object")
    _require(d, "p", "e", "m")
    try:
        return tower_from_dict({"p": _int(d["p"], "p"), "e": _int(d["e"], "e"), "m": _int(d["m"], "m"),
                                "base_modulus": d.get("base_modulus"),
                                "ext_modulus": d.get("ext_modulus")})
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad field description: {exc}") from exc


def _matrix(T: FieldTower, rows: Any, what: str) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{what} must be a list of rows")
    if len({len(r) for r in rows}) > 1:
        raise FormatError(f"{what} rows have different lengths")
    try:
        return np.array([[T.from_nested(x) for x in r] for r in rows], dtype=np.int64)
    except (FieldError, TypeError, ValueError) as exc:
        raise FormatError(f"bad entry in {what}: {exc}") from exc


def code_from_json(d: dict) -> SumRankCode:
    """Code from ``{field, shape, k, G}``; a parity-check ``H`` may replace ``G``."""
    _require(d, "field", "shape")
    T = tower_from_json(d["field"])
    shape = d["shape"]
    if not isinstance(shape, list) or not shape:
        raise FormatError("shape must be a nonempty list")
    shape = tuple(_int(x, "block length") for x in shape)
    if "G" in d:
        G = _matrix(T, d["G"], "G")
    elif "H" in d:
        H = _matrix(T, d["H"], "H")
        G = linalg.nullspace(T.F, H, cols=sum(shape))
    else:
        raise FormatError("code needs a generator G or parity-check H")
    if G.size == 0:
        raise FormatError("code has dimension 0")
    if "k" in d and _int(d["k"], "k") != G.shape[0]:
        raise FormatError(f"declared k={d['k']} but the generator has {G.shape[0]} rows")
    try:
        return SumRankCode(T, shape, G)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from exc


def system_from_json(d: dict) -> System:
    _require(d, "field", "k", "subspaces")
    T = tower_from_json(d["field"])
    k = _int(d["k"], "k")
    subs = d["subspaces"]
    if not isinstance(subs, list):
        raise FormatError("subspaces must be a list")
    out = []
    for s in subs:
        if isinstance(s, list):
            s = {"k": k, "basis": s}
        if not isinstance(s, dict):
            raise FormatError("each subspace must be an object or a basis matrix")
        try:
            if "vectors" in s:
                # F_q-spanning vectors given as elements of F_{q^m}^k
                V = _matrix(T, s["vectors"], "vectors")
                if V.size and V.shape[1] != k:
                    raise FormatError(f"subspace vectors must have length k={k}")
                U = span(T, V.reshape(-1, k), k)
            else:
                U = FqSubspace.from_dict(T, {**s, "k": k})
        except (FieldError, PreconditionError, TypeError, ValueError) as exc:
            raise FormatError(f"bad subspace: {exc}") from exc
        out.append(U)
    return System(T, k, tuple(out))


def points_from_json(d: dict):
    _require(d, "field", "points")
    T = tower_from_json(d["field"])
    return T, _matrix(T, d["points"], "points")


def load_object(d: dict):
    """A SumRankCode or System, depending on the keys present."""
    if "subspaces" in d:
        return system_from_json(d)
    if "G" in d or "H" in d:
        return code_from_json(d)
    raise FormatError("input is neither a code nor a system")
