"""Verification reports rendered as diff-friendly ``key = value`` text."""
from dataclasses import dataclass, field

import numpy as np


def format_value(value):
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.6e}"
    if isinstance(value, complex):
        return f"{value.real:.6e}{value.imag:+.6e}j"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    return str(value)


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<"


@dataclass
class VerificationReport:
    """Named residuals, fitted constants, and pass/fail verdicts."""

    name: str
    values: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def record(self, key, value):
        self.values[key] = value
        return value

    def check_below(self, name, value, tolerance):
        ok = bool(np.isfinite(value) and value < tolerance)
        self.checks.append(Check(name, float(value), float(tolerance), ok, "<"))
        return ok

    def check_at_most(self, name, value, bound):
        ok = bool(np.isfinite(value) and value <= bound)
        self.checks.append(Check(name, float(value), float(bound), ok, "<="))
        return ok

    def check_true(self, name, condition):
        ok = bool(condition)
        self.checks.append(Check(name, float(ok), 1.0, ok, "is"))
        return ok

    def note(self, text):
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def merge(self, other, prefix=None):
        prefix = prefix or other.name
        for k, v in other.values.items():
            self.values[f"{prefix}.{k}"] = v
        for c in other.checks:
            self.checks.append(Check(f"{prefix}.{c.name}", c.value, c.tolerance, c.passed, c.relation))
        self.notes.extend(f"{prefix}: {n}" for n in other.notes)

    def lines(self):
        out = [f"[{self.name}]"]
        for k, v in self.values.items():
            out.append(f"{k} = {format_value(v)}")
        for c in self.checks:
            verdict = "pass" if c.passed else "FAIL"
            if c.relation == "is":
                out.append(f"check.{c.name} = {verdict}")
            else:
                out.append(
                    f"check.{c.name} = {verdict} ({format_value(c.value)} {c.relation} {format_value(c.tolerance)})"
                )
        for i, n in enumerate(self.notes):
            out.append(f"note.{i} = {n}")
        out.append(f"verdict = {'pass' if self.passed else 'FAIL'}")
        return out

    def to_text(self):
        return "\n".join(self.lines()) + "\n"
