"""Verification report assembly and serialization.

Reports are JSON objects with a published schema (``report_schema.json``);
``--format csv`` flattens the checks array instead. Writes are atomic
(temp file + rename in the target directory).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from typing import List, Optional

SCHEMA_VERSION = 1


@dataclass
class CheckRecord:
    check: str
    suite: str
    identity: str
    point: List[float]
    residual: Optional[float]  # None when the check errored out
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class VerificationReport:
    config: dict
    checks: List[CheckRecord]
    summary: dict
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def assemble(cls, config, records: List[CheckRecord], wall_time: float) -> "VerificationReport":
        max_residual: dict = {}
        passed = failed = 0
        for rec in records:
            if rec.passed:
                passed += 1
            else:
                failed += 1
            if rec.residual is not None:
                prev = max_residual.get(rec.suite)
                if prev is None or rec.residual > prev:
                    max_residual[rec.suite] = rec.residual
        summary = {
            "passed": passed,
            "failed": failed,
            "max_residual": {k: float(v) for k, v in sorted(max_residual.items())},
            "wall_time_s": float(wall_time),
        }
        cfg = {k: v for k, v in vars(config).items() if v is not None}
        cfg.pop("report", None)
        cfg.pop("dump_fields", None)
        return cls(config=cfg, checks=records, summary=summary)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.checks)

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "config": self.config,
            "checks": [r.as_dict() for r in self.checks],
            "summary": self.summary,
        }
        return json.dumps(payload, indent=2, allow_nan=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["check", "suite", "identity", "point", "residual", "tolerance", "pass", "note"])
        for r in self.checks:
            writer.writerow([
                r.check, r.suite, r.identity,
                ";".join(f"{x:.12g}" for x in r.point),
                "" if r.residual is None else f"{r.residual:.6e}",
                f"{r.tolerance:.6e}", str(r.passed).lower(), r.note,
            ])
        return buf.getvalue()

    def write(self, path: str, fmt: str = "json") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-", text=True)
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
