"""Deterministic, exact JSON encoding of engine objects.

Rationals are written as ``"p/q"`` strings.  Containers keep their Python
type through small tagged objects so that ``decode(encode(x)) == x`` holds
for fans, divisors, traces, slices and chains.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import re
from fractions import Fraction
from typing import Any

from . import divisors, fan, geography, mmp, polyhedra, sarkisov
from .fan import Fan, FanError

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def _registry() -> dict[str, type]:
    out = {}
    for mod in (fan, polyhedra, divisors, mmp, geography, sarkisov):
        for name, obj in vars(mod).items():
            if isinstance(obj, type) and obj.__module__ == mod.__name__ and (
                    dataclasses.is_dataclass(obj) or issubclass(obj, enum.Enum)):
                out[name] = obj
    return out


_TYPES = _registry()


def _sort_key(x) -> str:
    return json.dumps(x, sort_keys=True)


def encode(x: Any) -> Any:
    """Map an engine object to a JSON-compatible value."""
    if x is None or isinstance(x, (bool, int)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, str):
        return {"$str": x} if _RATIONAL.match(x) else x
    if isinstance(x, enum.Enum):
        return {"$enum": type(x).__name__, "value": x.value}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        out = {"$type": type(x).__name__}
        for f in dataclasses.fields(x):
            if f.init:
                out[f.name] = encode(getattr(x, f.name))
        return out
    if isinstance(x, tuple):
        return [encode(v) for v in x]
    if isinstance(x, list):
        return {"$list": [encode(v) for v in x]}
    if isinstance(x, (set, frozenset)):
        tag = "$frozenset" if isinstance(x, frozenset) else "$set"
        return {tag: sorted((encode(v) for v in x), key=_sort_key)}
    if isinstance(x, dict):
        if all(isinstance(k, str) and not k.startswith("$") and not _RATIONAL.match(k) for k in x):
            return {k: encode(v) for k, v in x.items()}
        return {"$dict": [[encode(k), encode(v)] for k, v in x.items()]}
    if isinstance(x, float):
        raise TypeError("floating point values are not serialized")
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode(x: Any) -> Any:
    """Inverse of ``encode``."""
    if x is None or isinstance(x, (bool, int)):
        return x
    if isinstance(x, str):
        return Fraction(x) if _RATIONAL.match(x) else x
    if isinstance(x, list):
        return tuple(decode(v) for v in x)
    if isinstance(x, dict):
        if "$type" in x:
            cls = _TYPES[x["$type"]]
            return cls(**{k: decode(v) for k, v in x.items() if k != "$type"})
        if "$enum" in x:
            return _TYPES[x["$enum"]](x["value"])
        if "$str" in x:
            return x["$str"]
        if "$list" in x:
            return [decode(v) for v in x["$list"]]
        if "$frozenset" in x:
            return frozenset(decode(v) for v in x["$frozenset"])
        if "$set" in x:
            return {decode(v) for v in x["$set"]}
        if "$dict" in x:
            return {decode(k): decode(v) for k, v in x["$dict"]}
        return {k: decode(v) for k, v in x.items()}
    raise TypeError(f"cannot decode {type(x).__name__}")


def plain(x: Any) -> Any:
    """Readable one-way JSON form: rationals as strings, every container as a list or object."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (set, frozenset)):
        return sorted((plain(v) for v in x), key=_sort_key)
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: plain(v) for k, v in x.items()}
        return [[plain(k), plain(v)] for k, v in x.items()]
    return encode(x)


def dumps(x: Any) -> str:
    return json.dumps(encode(x), indent=1, separators=(",", ": ")) + "\n"


def loads(s: str) -> Any:
    return decode(json.loads(s))


# plain input formats

def fan_to_input(f: Fan) -> dict:
    return {"rank": f.rank, "rays": [list(r) for r in f.rays], "max_cones": [list(c) for c in f.cones]}


def fan_from_input(data: Any) -> Fan:
    """Read ``{"rank": n, "rays": [[...]], "max_cones": [[...]]}``."""
    if not isinstance(data, dict):
        raise FanError("fan input must be a JSON object")
    missing = {"rank", "rays", "max_cones"} - set(data)
    if missing:
        raise FanError(f"fan input lacks {', '.join(sorted(missing))}")
    rank, rays, cones = data["rank"], data["rays"], data["max_cones"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise FanError("rank must be a nonnegative integer")
    for r in rays:
        if not isinstance(r, list) or len(r) != rank or not all(isinstance(v, int) and not isinstance(v, bool) for v in r):
            raise FanError(f"ray {r!r} is not a list of {rank} integers")
    for c in cones:
        if not isinstance(c, list) or not all(isinstance(i, int) and 0 <= i < len(rays) for i in c):
            raise FanError(f"cone {c!r} does not index the ray list")
    return Fan.make(rays, cones, rank)


def divisor_to_input(d) -> dict:
    return {"coeffs": [str(Fraction(c)) for c in d]}


def divisor_from_input(data: Any, f: Fan) -> tuple[Fraction, ...]:
    """Read ``{"coeffs": ["p/q", ...]}`` aligned with the rays of ``f``."""
    if not isinstance(data, dict) or "coeffs" not in data:
        raise ValueError('divisor input must be an object with a "coeffs" list')
    raw = data["coeffs"]
    if not isinstance(raw, list) or len(raw) != len(f.rays):
        raise ValueError(f"divisor needs {len(f.rays)} coefficients")
    out = []
    for c in raw:
        if isinstance(c, bool) or not isinstance(c, (str, int)):
            raise ValueError(f"coefficient {c!r} must be an integer or a 'p/q' string")
        try:
            out.append(Fraction(c))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient {c!r}") from exc
    return tuple(out)
