"""On-disk JSON cache for coefficient tables.

One file per ``(operation, parameters, version)`` key, named by the SHA-256 of
the canonical key.  Writes go to a temporary file in the same directory and are
moved into place with :func:`os.replace`, so readers only ever see complete
files.  A version mismatch makes an entry invisible; entries are never edited.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any

ENV_VAR = "SIEGEL_PULLBACK_CACHE"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "siegel_pullback"


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class CacheEntry:
    key_hash: str
    operation: str
    params: dict
    version: str
    path: Path
    created: str
    size: int


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    @staticmethod
    def key_hash(operation: str, params: dict, version: str) -> str:
        key = {"operation": operation, "params": params, "version": version}
        return hashlib.sha256(_canonical(key).encode()).hexdigest()

    def _path(self, key_hash: str) -> Path:
        return self.directory / f"{key_hash}.json"

    def load(self, operation: str, params: dict, version: str) -> Any | None:
        path = self._path(self.key_hash(operation, params, version))
        try:
            data = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if (
            data.get("operation") != operation
            or data.get("params") != params
            or data.get("version") != version
            or data.get("payloadSha256") != hashlib.sha256(_canonical(data.get("payload")).encode()).hexdigest()
        ):
            return None
        return data["payload"]

    def store(self, operation: str, params: dict, version: str, payload: Any) -> Path:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create cache directory {self.directory}: {exc}") from exc
        h = self.key_hash(operation, params, version)
        path = self._path(h)
        record = {
            "operation": operation,
            "params": params,
            "version": version,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "payload": payload,
            "payloadSha256": hashlib.sha256(_canonical(payload).encode()).hexdigest(),
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(_canonical(record))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def _files(self) -> list[Path]:
        if not self.directory.exists():
            return []
        return sorted(p for p in self.directory.glob("*.json") if not p.name.startswith(".tmp-"))

    def list(self) -> list[CacheEntry]:
        out = []
        for path in self._files():
            try:
                data = json.loads(path.read_text())
                out.append(CacheEntry(
                    path.stem, data.get("operation", "?"), data.get("params", {}),
                    data.get("version", "?"), path, data.get("created", "?"), path.stat().st_size,
                ))
            except (OSError, ValueError):
                out.append(CacheEntry(path.stem, "?", {}, "?", path, "?", path.stat().st_size))
        return out

    def clear(self) -> int:
        n = 0
        for path in self._files():
            try:
                path.unlink()
            except OSError as exc:
                raise OSError(f"cannot remove cache entry {path}: {exc}") from exc
            n += 1
        return n

    def verify(self) -> list[dict]:
        """Re-parse every entry; one report row per file with ``ok`` and ``problem``."""
        rows = []
        for path in self._files():
            problem = None
            try:
                data = json.loads(path.read_text())
                expect = self.key_hash(data["operation"], data["params"], data["version"])
                digest = hashlib.sha256(_canonical(data["payload"]).encode()).hexdigest()
                if expect != path.stem:
                    problem = "key hash does not match file name"
                elif digest != data.get("payloadSha256"):
                    problem = "payload checksum mismatch"
            except (OSError, ValueError, KeyError, TypeError) as exc:
                problem = f"unreadable: {exc.__class__.__name__}"
            rows.append({"file": str(path), "ok": problem is None, "problem": problem})
        return rows
