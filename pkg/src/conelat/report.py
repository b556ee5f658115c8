"""Per-clause pass/fail records produced by the property checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["ClauseRecord", "PropertyReport", "jsonable"]

MAX_STORED_COUNTEREXAMPLES = 10


def jsonable(obj):
    """Recursively convert numpy values into plain Python containers."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


@dataclass
class ClauseRecord:
    """Outcome of one identity clause over a batch of samples.

    ``asserted`` clauses count toward :attr:`PropertyReport.passed`;
    the others are instruments whose failures are only recorded.
    """

    clause: str
    description: str
    asserted: bool = True
    samples: int = 0
    failures: int = 0
    worst_residual: float = 0.0
    counterexamples: list = field(default_factory=list)
    note: str = ""

    @property
    def counterexample(self):
        return self.counterexamples[0] if self.counterexamples else None

    @property
    def passed(self):
        return self.failures == 0

    def check(self, residual, bound, **example):
        """Record one sample; it fails when ``residual > bound``."""
        return self.check_bool(residual <= bound, residual, **example)

    def check_bool(self, ok, residual=0.0, **example):
        self.samples += 1
        residual = float(residual)
        if np.isfinite(residual):
            self.worst_residual = max(self.worst_residual, residual)
        if not ok:
            self.failures += 1
            if len(self.counterexamples) < MAX_STORED_COUNTEREXAMPLES:
                example = {k: np.array(v, dtype=float) if isinstance(v, (list, np.ndarray)) else v
                           for k, v in example.items()}
                example["residual"] = residual
                self.counterexamples.append(example)
        return ok

    def merge(self, other):
        if other.clause != self.clause:
            raise ValueError("cannot merge records of different clauses")
        room = MAX_STORED_COUNTEREXAMPLES - len(self.counterexamples)
        return ClauseRecord(
            self.clause, self.description, self.asserted and other.asserted,
            self.samples + other.samples, self.failures + other.failures,
            max(self.worst_residual, other.worst_residual),
            self.counterexamples + other.counterexamples[:max(room, 0)],
            self.note or other.note)

    def to_dict(self):
        d = {
            "clause": self.clause,
            "description": self.description,
            "asserted": self.asserted,
            "samples": self.samples,
            "failures": self.failures,
            "worst_residual": self.worst_residual,
            "passed": self.passed,
        }
        if self.counterexamples:
            d["counterexample"] = jsonable(self.counterexamples[0])
            d["counterexamples"] = jsonable(self.counterexamples)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class PropertyReport:
    title: str
    context: str
    clauses: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add(self, clause, description, asserted=True, note=""):
        rec = ClauseRecord(clause, description, asserted, note=note)
        self.clauses[clause] = rec
        return rec

    def __getitem__(self, clause):
        return self.clauses[clause]

    def __iter__(self):
        return iter(self.clauses.values())

    @property
    def passed(self):
        """True when every asserted clause has zero failures."""
        return all(r.passed for r in self.clauses.values() if r.asserted)

    @property
    def total_failures(self):
        return sum(r.failures for r in self.clauses.values())

    def failed_clauses(self, asserted_only=True):
        return [r.clause for r in self.clauses.values()
                if not r.passed and (r.asserted or not asserted_only)]

    def merge(self, other):
        out = PropertyReport(self.title, self.context, dict(self.clauses), dict(self.meta))
        for key, rec in other.clauses.items():
            out.clauses[key] = out.clauses[key].merge(rec) if key in out.clauses else rec
        return out

    def to_dict(self):
        return {
            "title": self.title,
            "context": self.context,
            "passed": self.passed,
            "clauses": [r.to_dict() for r in self.clauses.values()],
            **({"meta": jsonable(self.meta)} if self.meta else {}),
        }

    def summary_lines(self):
        lines = []
        for r in self.clauses.values():
            tag = "PASS" if r.passed else ("FAIL" if r.asserted else "RECORDED")
            lines.append(f"[{tag}] ({r.clause}) {r.description}: {r.failures}/{r.samples} "
                         f"failures, worst residual {r.worst_residual:.2e}")
        return lines
