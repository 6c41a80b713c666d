"""CSV output and the JSON run manifest."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

__all__ = ["Assertion", "RunManifest", "write_csv", "fmt"]


def fmt(x) -> str:
    """Shortest round-trip text for a number; keeps CSVs byte-stable."""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
            n += 1
    return n


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)


@dataclass
class RunManifest:
    config: dict[str, Any]
    out_dir: Path
    files: list[dict[str, Any]] = field(default_factory=list)
    assertions: list[Assertion] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)
    wall_clock_seconds: float = 0.0

    def add_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        if any(f["path"] == name for f in self.files):
            raise ValueError(f"{name} written twice in one run")
        path = self.out_dir / name
        count = write_csv(path, header, rows)
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        self.files.append({"path": name, "sha256": digest, "rows": count})
        return path

    def check(self, name: str, passed: bool, **detail) -> bool:
        self.assertions.append(Assertion(name, bool(passed), _jsonable(detail)))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config,
            "files": self.files,
            "assertions": [
                {"name": a.name, "passed": a.passed, "detail": a.detail} for a in self.assertions
            ],
            "summary": {
                "passed": sum(a.passed for a in self.assertions),
                "failed": sum(not a.passed for a in self.assertions),
                "all_passed": self.passed,
            },
            "results": _jsonable(self.results),
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def write(self) -> Path:
        """Write ``manifest.json`` atomically; it marks the run as complete."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        target = self.out_dir / "manifest.json"
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=".manifest", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.chmod(tmp, 0o644)
        os.replace(tmp, target)
        return target


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj
