"""Canonical JSON: sorted keys, compact separators, integers only.

Certificates and reports must be byte-identical across runs and thread
counts, so every number is an exact integer (or an integer pair) and
serialization is deterministic.
"""

import hashlib
import json


def _reject_floats(obj, path="$"):
    if isinstance(obj, bool) or obj is None:
        return
    if isinstance(obj, float):
        raise ValueError(f"float at {path} breaks canonical serialization")
    if isinstance(obj, int) or isinstance(obj, str):
        return
    if isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _reject_floats(v, f"{path}[{i}]")
        return
    if isinstance(obj, dict):
        for k, v in obj.items():
            if not isinstance(k, str):
                raise ValueError(f"non-string key at {path}: {k!r}")
            _reject_floats(v, f"{path}.{k}")
        return
    raise ValueError(f"unserializable value at {path}: {type(obj).__name__}")


def canonical_dumps(obj) -> str:
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def input_hash(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode("ascii")).hexdigest()


def first_difference(a, b, path="$"):
    """Path of the first structural difference between two JSON documents."""
    if type(a) is not type(b):
        return path
    if isinstance(a, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                return f"{path}.{k}"
            d = first_difference(a[k], b[k], f"{path}.{k}")
            if d is not None:
                return d
        return None
    if isinstance(a, list):
        if len(a) != len(b):
            return path
        for i, (x, y) in enumerate(zip(a, b)):
            d = first_difference(x, y, f"{path}[{i}]")
            if d is not None:
                return d
        return None
    return None if a == b else path
