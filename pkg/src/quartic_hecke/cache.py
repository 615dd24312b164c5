"""Persistent on-disk caches with a checksummed manifest.

Three cache kinds live in one directory next to a ``manifest.json``:

* ``primes`` — the primary prime table to a norm limit, one ``re im norm``
  line per prime, ascending norm.
* ``gauss`` — prime Gauss-sum atoms ``c_re c_im k_re k_im l variant
  value_re value_im precision``, feeding the in-memory atom cache that the
  root-number and series machinery draws from.
* ``lvalues`` — L-values as JSON lines ``(generator, s, method, value,
  error_bound)``, appended to by the CLI evaluator.

``cache_roundtrip`` is build-or-load: a cache is rebuilt (with a warning,
never silently) when the manifest version or limit differs, the checksum
does not match the file, the file fails to parse, or a random one-percent
spot-check against fresh recomputation disagrees.  Rebuilds are atomic
(write to a temp file, then rename), so a reader never sees a half-written
table.  The directory is chosen by explicit argument, the
``QUARTIC_HECKE_CACHE`` environment variable, or a per-user default, in
that order.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError
from .gauss_sums import evict_atoms, gauss_atom, preload_atoms
from .zi import GInt, is_prime, is_primary, primary_primes_upto

__all__ = [
    "CACHE_VERSION",
    "CacheManifest",
    "LValueCache",
    "resolve_cache_dir",
    "cache_roundtrip",
    "refresh_manifest_entry",
]

CACHE_VERSION = "1"
_ENV_VAR = "QUARTIC_HECKE_CACHE"
_MANIFEST_NAME = "manifest.json"
_KINDS = ("primes", "gauss", "lvalues")
_FILE_NAMES = {
    "primes": "primes-v1.txt",
    "gauss": "gauss-atoms-v1.txt",
    "lvalues": "lvalues-v1.jsonl",
}
_SPOT_CHECK_TOL = 1e-9


def resolve_cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "quartic-hecke"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


@dataclass
class CacheManifest:
    """Version tag plus per-cache (kind, path, limit, checksum) records."""

    version: str
    entries: dict  # kind -> {"path": str, "limit": int, "checksum": str}

    @classmethod
    def load(cls, directory: Path) -> "CacheManifest":
        path = directory / _MANIFEST_NAME
        if not path.is_file():
            return cls(version=CACHE_VERSION, entries={})
        try:
            raw = json.loads(path.read_text())
            version = str(raw["version"])
            entries = dict(raw["entries"])
        except (json.JSONDecodeError, KeyError, TypeError):
            warnings.warn(f"unreadable cache manifest at {path}; starting fresh")
            return cls(version=CACHE_VERSION, entries={})
        if version != CACHE_VERSION:
            # a version bump invalidates every cache the manifest describes
            return cls(version=CACHE_VERSION, entries={})
        return cls(version=version, entries=entries)

    def save(self, directory: Path) -> None:
        body = json.dumps(
            {"version": self.version, "entries": self.entries},
            sort_keys=True,
            indent=2,
        )
        _atomic_write_text(directory / _MANIFEST_NAME, body + "\n")

    def record(self, kind: str, path: Path, limit: int) -> None:
        self.entries[kind] = {
            "path": path.name,
            "limit": int(limit),
            "checksum": _sha256(path),
        }


def _spot_indices(count: int, seed: int) -> list[int]:
    if count == 0:
        return []
    take = max(1, count // 100)
    return random.Random(seed).sample(range(count), min(take, count))


# ---------------------------------------------------------------------------
# primes


def _build_primes(path: Path, limit: int) -> tuple[GInt, ...]:
    primes = primary_primes_upto(limit)
    lines = [f"{p.re} {p.im} {p.norm}" for p in primes]
    _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
    return primes


def _load_primes(path: Path, limit: int) -> tuple[GInt, ...]:
    out: list[GInt] = []
    last_norm = 0
    for ln, line in enumerate(path.read_text().splitlines(), start=1):
        re_, im_, norm_ = line.split()
        z = GInt(int(re_), int(im_))
        if z.norm != int(norm_) or z.norm < last_norm or z.norm > limit:
            raise ValueError(f"prime table broken at line {ln}")
        last_norm = z.norm
        out.append(z)
    for idx in _spot_indices(len(out), seed=limit):
        z = out[idx]
        if not (is_primary(z) and is_prime(z)):
            raise ValueError(f"prime table entry {z} fails recomputation")
    return tuple(out)


# ---------------------------------------------------------------------------
# gauss atoms


def _gauss_jobs(limit: int):
    for pi in primary_primes_upto(limit):
        yield pi, 4, "K"
        yield pi, 2, "K"
        if pi.im != 0:
            yield pi, 4, "rational"


def _build_gauss(path: Path, limit: int) -> dict:
    entries: dict[tuple[int, int, int, str], complex] = {}
    lines = []
    for pi, l, variant in _gauss_jobs(limit):
        val = gauss_atom(pi, l, variant)
        entries[(pi.re, pi.im, l, variant)] = val
        lines.append(f"{pi.re} {pi.im} 1 0 {l} {variant} {val.real!r} {val.imag!r} float64")
    _atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
    preload_atoms(entries)
    return entries


def _load_gauss(path: Path, limit: int) -> dict:
    entries: dict[tuple[int, int, int, str], complex] = {}
    for ln, line in enumerate(path.read_text().splitlines(), start=1):
        c_re, c_im, k_re, k_im, l, variant, v_re, v_im, tag = line.split()
        if (int(k_re), int(k_im)) != (1, 0) or tag != "float64":
            raise ValueError(f"gauss table broken at line {ln}")
        key = (int(c_re), int(c_im), int(l), variant)
        entries[key] = complex(float(v_re), float(v_im))
    keys = list(entries)
    for idx in _spot_indices(len(keys), seed=limit):
        c_re, c_im, l, variant = keys[idx]
        key = keys[idx]
        evict_atoms([key])
        fresh = gauss_atom(GInt(c_re, c_im), l, variant)
        if abs(fresh - entries[key]) > _SPOT_CHECK_TOL:
            raise ValueError(
                f"gauss atom ({c_re}+{c_im}i, l={l}, {variant}) drifted: "
                f"stored {entries[key]}, recomputed {fresh}"
            )
    preload_atoms(entries)
    return entries


# ---------------------------------------------------------------------------
# L-values


class LValueCache:
    """Append-friendly store of computed L-values keyed by (generator, s,
    method); persisted as JSON lines."""

    def __init__(self, path: Path):
        self.path = path
        self._data: dict[tuple[str, str, str], tuple[complex, object]] = {}

    @staticmethod
    def _key(pi: GInt, s: complex, method: str) -> tuple[str, str, str]:
        s = complex(s)
        return (str(pi), f"{s.real!r}:{s.imag!r}", method)

    def get(self, pi: GInt, s: complex, method: str):
        hit = self._data.get(self._key(pi, s, method))
        return None if hit is None else hit[0]

    def put(self, pi: GInt, s: complex, method: str, value: complex, error_bound) -> None:
        self._data[self._key(pi, s, method)] = (complex(value), error_bound)

    def __len__(self) -> int:
        return len(self._data)

    def save(self) -> None:
        rows = []
        for (gen, s_key, method), (value, err) in sorted(self._data.items()):
            rows.append(
                json.dumps(
                    {
                        "generator": gen,
                        "s": s_key,
                        "method": method,
                        "value": {"re": value.real, "im": value.imag},
                        "error_bound": err,
                    },
                    sort_keys=True,
                )
            )
        _atomic_write_text(self.path, "\n".join(rows) + ("\n" if rows else ""))

    @classmethod
    def load(cls, path: Path) -> "LValueCache":
        cache = cls(path)
        if not path.is_file():
            return cache
        for ln, line in enumerate(path.read_text().splitlines(), start=1):
            row = json.loads(line)
            key = (str(row["generator"]), str(row["s"]), str(row["method"]))
            value = complex(row["value"]["re"], row["value"]["im"])
            cache._data[key] = (value, row["error_bound"])
        return cache


def _build_lvalues(path: Path, limit: int) -> LValueCache:
    cache = LValueCache(path)
    cache.save()
    return cache


def _load_lvalues(path: Path, limit: int) -> LValueCache:
    return LValueCache.load(path)


# ---------------------------------------------------------------------------
# build-or-load


_BUILDERS = {
    "primes": (_build_primes, _load_primes),
    "gauss": (_build_gauss, _load_gauss),
    "lvalues": (_build_lvalues, _load_lvalues),
}


def cache_roundtrip(kind: str, limit: int, directory: str | os.PathLike | None = None):
    """Load the requested cache if the manifest, checksum, and spot-check
    all agree; otherwise rebuild it, record it in the manifest, and return
    the fresh data."""
    if kind not in _KINDS:
        raise DomainError(f"unknown cache kind {kind!r}; expected one of {_KINDS}")
    if kind != "lvalues" and limit < 2:
        raise DomainError("cache limit must be at least 2")
    cdir = resolve_cache_dir(directory)
    cdir.mkdir(parents=True, exist_ok=True)
    build, load = _BUILDERS[kind]
    manifest = CacheManifest.load(cdir)
    path = cdir / _FILE_NAMES[kind]
    entry = manifest.entries.get(kind)
    if entry is not None and path.is_file():
        stale = None
        if int(entry.get("limit", -1)) != int(limit):
            stale = f"limit {entry.get('limit')} != requested {limit}"
        elif entry.get("path") != path.name:
            stale = "unexpected file name"
        elif _sha256(path) != entry.get("checksum"):
            stale = "checksum mismatch"
        if stale is None:
            try:
                return load(path, limit)
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                stale = str(exc)
        warnings.warn(f"{kind} cache at {path} is stale ({stale}); regenerating")
    data = build(path, limit)
    manifest.record(kind, path, limit)
    manifest.save(cdir)
    return data


def refresh_manifest_entry(kind: str, limit: int, directory: str | os.PathLike | None = None) -> None:
    """Re-checksum a cache file after external appends (the L-value store
    grows as the CLI computes) so the next load does not flag it stale."""
    if kind not in _KINDS:
        raise DomainError(f"unknown cache kind {kind!r}; expected one of {_KINDS}")
    cdir = resolve_cache_dir(directory)
    path = cdir / _FILE_NAMES[kind]
    if not path.is_file():
        raise DomainError(f"no {kind} cache file at {path}")
    manifest = CacheManifest.load(cdir)
    manifest.record(kind, path, limit)
    manifest.save(cdir)
