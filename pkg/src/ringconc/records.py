"""Result records, deterministic JSON and the content-addressed result cache."""
from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .errors import DomainError

METHODS = ("ow", "exact", "lagrange", "oracle", "stability", "qneighbor")
CACHE_ENV = "RINGCONC_CACHE_DIR"
C_SLACK = 1e-12


def tool_version() -> str:
    from . import __version__
    return __version__


@dataclass
class ResultRecord:
    n: int
    p: int
    method: str
    c: float
    q: int = 1
    s_opt: float | None = None
    amplitudes: list[dict[str, Any]] | None = None
    lhs: float | None = None
    rhs: float | None = None
    seed: int | None = None
    runtime_ms: float = 0.0
    tool_version: str = field(default_factory=tool_version)
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not -C_SLACK <= self.c <= 1 + C_SLACK:
            raise DomainError(f"concurrence {self.c!r} outside [0, 1]")
        self.c = min(max(float(self.c), 0.0), 1.0)
        if self.method == "stability" and (self.lhs is None or self.rhs is None):
            raise DomainError("stability records need lhs and rhs")
        if self.method == "oracle" and self.seed is None:
            raise DomainError("oracle records need a seed")

    def to_dict(self, with_runtime: bool = True) -> dict[str, Any]:
        d = asdict(self)
        if not with_runtime:
            d.pop("runtime_ms")
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ResultRecord":
        d = dict(d)
        if d.get("s_opt") is None and d.pop("s_opt_infinite", False):
            d["s_opt"] = math.inf
        return cls(**d)


def amplitude_entries(amps) -> list[dict[str, Any]]:
    """Amplitudes keyed by gap signature, in basis order."""
    return [{"gaps": list(g), "value": _real(v)} for g, v in zip(amps.basis.gap_signatures, amps.values)]


def _real(v):
    if isinstance(v, complex) or hasattr(v, "imag") and v.imag != 0:
        return [float(v.real), float(v.imag)]
    return float(v.real if hasattr(v, "real") else v)


def _jsonable(obj):
    # JSON has no infinity: s_opt = inf (the no-adjacent-ups limit) is written as null
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def record_payload(rec: ResultRecord, with_runtime: bool = True) -> dict[str, Any]:
    d = rec.to_dict(with_runtime)
    if rec.s_opt is not None and math.isinf(rec.s_opt):
        d["s_opt_infinite"] = True
    return _jsonable(d)


def dumps(obj, indent: int | None = 2) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, trailing newline."""
    if isinstance(obj, ResultRecord):
        obj = record_payload(obj)
    elif isinstance(obj, list):
        obj = [record_payload(r) if isinstance(r, ResultRecord) else _jsonable(r) for r in obj]
    else:
        obj = _jsonable(obj)
    return json.dumps(obj, sort_keys=True, indent=indent, allow_nan=False) + "\n"


def cache_key(method: str, n: int, p: int, q: int = 1, grid: str | None = None, seed: int | None = None) -> str:
    text = json.dumps({"method": method, "n": n, "p": p, "q": q, "grid": grid, "seed": seed,
                       "version": tool_version()}, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()


class ResultCache:
    """One JSON file per record under ``root``, named by the sha256 of its inputs."""

    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        if root is None:
            root = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "ringconc"
        self.root = Path(root)
        self.enabled = enabled

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> ResultRecord | None:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        return ResultRecord.from_dict(data)

    def put(self, key: str, rec: ResultRecord) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(dumps(rec))
        os.replace(tmp, path)
