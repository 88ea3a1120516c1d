"""On-disk cache of series coefficients.

One JSON file per key. Entries store coefficients as decimal strings, the
order they were computed to, and the engine version; a stored prefix serves
any request up to its order.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__

log = logging.getLogger(__name__)

ENV_VAR = "MIRRORMAP_CACHE"


def default_cache_dir(configured: Optional[str] = None) -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    if configured:
        return Path(configured)
    return Path.home() / ".cache" / "mirrormap"


def encode(coeffs: Sequence) -> list[str]:
    out = []
    for c in coeffs:
        c = Fraction(c)
        out.append(str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
    return out


def decode(items: Sequence[str]) -> list[Fraction]:
    return [Fraction(s) for s in items]


@dataclass
class CacheEntry:
    key: str
    coeffs: list
    order: int
    engine_version: str = __version__

    def to_json(self) -> str:
        return json.dumps({"key": self.key, "coeffs": encode(self.coeffs),
                           "order": self.order, "engine_version": self.engine_version})

    @classmethod
    def from_json(cls, text: str) -> "CacheEntry":
        d = json.loads(text)
        coeffs = decode(d["coeffs"])
        if len(coeffs) != d["order"] + 1:
            raise ValueError("coefficient count does not match order")
        return cls(d["key"], coeffs, int(d["order"]), d["engine_version"])


class SeriesCache:
    def __init__(self, directory, engine_version: str = __version__):
        self.dir = Path(directory)
        self.engine_version = engine_version
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode()).hexdigest()[:32]
        return self.dir / f"{digest}.json"

    def load(self, key: str) -> Optional[CacheEntry]:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            entry = CacheEntry.from_json(path.read_text())
            if entry.key != key:
                raise ValueError("key collision")
        except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
            return None
        if entry.engine_version != self.engine_version:
            return None
        return entry

    def store(self, entry: CacheEntry):
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(entry.to_json())
            os.replace(tmp, self.path(entry.key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, key: str, producer: Callable[[int], Sequence], order: int) -> list:
        """Coefficients 0..order for ``key``; ``producer(order)`` on a miss."""
        entry = self.load(key)
        if entry is not None and entry.order >= order:
            self.hits += 1
            return entry.coeffs[: order + 1]
        self.misses += 1
        coeffs = [Fraction(c) for c in producer(order)]
        if len(coeffs) != order + 1:
            raise ValueError("producer returned the wrong number of coefficients")
        self.store(CacheEntry(key, coeffs, order, self.engine_version))
        return coeffs


def cache_get_or_compute(cache: SeriesCache, key: str, producer, order: int) -> list:
    return cache.get_or_compute(key, producer, order)
