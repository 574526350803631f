"""Verification reports with a deterministic canonical payload."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field


@dataclass
class Check:
    check: str
    status: str
    witness: str | None = None
    degree_bound: int | None = None
    millis: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self, timing=True):
        out = {"check": self.check, "status": self.status, "degree_bound": self.degree_bound}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        if timing:
            out["millis"] = round(self.millis, 3)
        return out


class Report:
    """An ordered collection of named checks."""

    def __init__(self, title, degree_bound=None):
        self.title = title
        self.degree_bound = degree_bound
        self.checks = []
        self.info = {}

    def add(self, name, ok, witness=None, millis=0.0, detail=None, degree_bound=None):
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        if status == "fail" and witness is None:
            witness = "(no witness recorded)"
        c = Check(name, status, None if status == "pass" else witness,
                  self.degree_bound if degree_bound is None else degree_bound,
                  millis, detail or {})
        self.checks.append(c)
        return c

    def run(self, name, fn, detail=None):
        """
        Run ``fn()``, which returns None on success or a witness string on
        failure.  Exceptions become failures with the message as witness.
        """
        t0 = time.perf_counter()
        try:
            witness = fn()
        except Exception as exc:  # a crashing check is a failing check
            witness = f"{type(exc).__name__}: {exc}"
        ms = (time.perf_counter() - t0) * 1000
        return self.add(name, witness is None, witness, ms, detail)

    def extend(self, other, prefix=""):
        for c in other.checks:
            c2 = Check(prefix + c.check, c.status, c.witness, c.degree_bound, c.millis, c.detail)
            self.checks.append(c2)
        self.info.update(other.info)

    @property
    def ok(self):
        return all(c.status != "fail" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == "fail"]

    def get(self, name):
        for c in self.checks:
            if c.check == name:
                return c
        raise KeyError(name)

    def to_dict(self, timing=True):
        return {
            "title": self.title,
            "ok": self.ok,
            "info": self.info,
            "checks": [c.to_dict(timing) for c in sorted(self.checks, key=lambda c: c.check)],
        }

    def canonical_payload(self):
        """JSON text without timing fields; byte-identical across runs."""
        return json.dumps(self.to_dict(timing=False), sort_keys=True, ensure_ascii=False,
                          separators=(",", ":"))

    def digest(self):
        return hashlib.sha256(self.canonical_payload().encode()).hexdigest()

    def render_text(self):
        lines = [f"== {self.title}"]
        for k in sorted(self.info):
            lines.append(f"   {k}: {self.info[k]}")
        width = max((len(c.check) for c in self.checks), default=0)
        for c in self.checks:
            line = f"   {c.status.upper():4}  {c.check.ljust(width)}  {c.millis:9.1f} ms"
            if c.witness:
                line += f"\n         witness: {c.witness}"
            lines.append(line)
        lines.append(f"   overall: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)
