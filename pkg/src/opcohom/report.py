"""Check results shared by all verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field


class StructureError(Exception):
    """Input does not satisfy an operation's precondition."""


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None

    def as_dict(self):
        d = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, passed, witness=None):
        self.checks.append(Check(name, bool(passed), witness))
        return self.checks[-1]

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def require(self, context=""):
        if not self.ok:
            bad = self.failures()[0]
            msg = "%s: check %r failed" % (context or self.title, bad.name)
            if bad.witness:
                msg += " (witness: %s)" % bad.witness
            raise StructureError(msg)
        return self

    def as_dict(self):
        return {"title": self.title, "checks": [c.as_dict() for c in self.checks]}
