"""Safe ladder-shortening pipeline with an audit trail.

Per ladder (canonical order) the first applicable rule fires:

1. disconnecting ladder -> length 1
2. ladder with a degree-2 cornerpoint, tw >= 3 certified -> length 1
3. tw >= 4 certified and aggressive mode on -> length ``aggressive_target`` (>= 3)
4. otherwise -> length ``general_target`` (>= 4)

Ladders are re-detected after every rewrite. Every step strictly removes
vertices, so the loop ends after at most |V| steps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .decomposition import Budget, bound_evidence, exact_treewidth
from .errors import PolicyError, PreconditionError, TreewidthUnknown
from .graph import Graph, suppress_degree2, vkey
from .ladder import Ladder, classify, find_ladders, shorten

log = logging.getLogger(__name__)

GENERAL_FLOOR = 4
AGGRESSIVE_FLOOR = 3


@dataclass(frozen=True)
class ReductionPolicy:
    general_target: int = 4
    aggressive_target: int = 3
    allow_aggressive: bool = False
    suppress_degree2: bool = False
    iterate_to_fixpoint: bool = True

    def __post_init__(self):
        if self.general_target < GENERAL_FLOOR:
            raise PolicyError(f"general_target {self.general_target} below the safe floor {GENERAL_FLOOR}")
        if self.aggressive_target < AGGRESSIVE_FLOOR:
            raise PolicyError(f"aggressive_target {self.aggressive_target} below the safe floor {AGGRESSIVE_FLOOR}")

    @classmethod
    def length5(cls) -> "ReductionPolicy":
        """Weaker preset that stops at length 5; handy as a regression baseline."""
        return cls(general_target=5)


@dataclass(frozen=True)
class Certificate:
    """Proof that tw >= ``k``: a named lower bound with its witness, or an exact width."""

    k: int
    method: str
    value: int
    witness: object = None

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Ladder):
            w = w.to_json()
        elif isinstance(w, tuple):
            w = list(w)
        return {"k": self.k, "method": self.method, "value": self.value, "witness": w}


@dataclass(frozen=True)
class Step:
    rule: str
    ladder: Optional[Ladder]
    length_before: int
    length_after: int
    note: str = ""
    vertex: object = None

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "ladder": self.ladder.to_json() if self.ladder else None,
            "length_before": self.length_before,
            "length_after": self.length_after,
            "note": self.note,
            "vertex": self.vertex,
        }


@dataclass
class ReductionReport:
    steps: list = field(default_factory=list)
    vertices_before: int = 0
    vertices_after: int = 0
    tw_certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def rules_used(self) -> list:
        return [s.rule for s in self.steps]

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "vertices_before": self.vertices_before,
            "vertices_after": self.vertices_after,
            "tw_certificates": [c.to_json() for c in self.tw_certificates],
            "notes": list(self.notes),
        }


def certify_tw_at_least(g: Graph, k: int, budget: Optional[Budget] = None, exact: bool = True) -> Optional[Certificate]:
    """Evidence that tw(g) >= k, or None. Never returns a false certificate.

    Cheap bounds are tried first (degeneracy, MMD+, clique, non-disconnecting
    ladder); with ``exact`` the exact engine is the fallback.
    """
    for name, value, witness in bound_evidence(g):
        if value >= k:
            return Certificate(k, name, value, witness)
    if not exact:
        return None
    try:
        width, _ = exact_treewidth(g, budget)
    except TreewidthUnknown as unknown:
        if unknown.lower >= k:
            return Certificate(k, "exact-lower-bound", unknown.lower)
        return None
    if width >= k:
        return Certificate(k, "exact", width)
    return None


class _Certifier:
    """Caches tw certificates for one reduction run (tw never changes across safe steps)."""

    def __init__(self, g: Graph, budget: Optional[Budget], report: ReductionReport):
        self.origin = g
        self.budget = budget
        self.report = report
        self.cache: dict = {}

    def at_least(self, g: Graph, k: int) -> Optional[Certificate]:
        if k in self.cache:
            return self.cache[k]
        cert = certify_tw_at_least(g, k, exact=False)
        if cert is None and k >= 4:
            # exact fallback on the graph with every ladder already at the general floor
            base, _ = reduce(g, ReductionPolicy(), budget=self.budget)
            cert = certify_tw_at_least(base, k, budget=self.budget)
            if cert is not None:
                cert = Certificate(k, cert.method + " (general-reduced graph)", cert.value, cert.witness)
        self.cache[k] = cert
        if cert is not None:
            self.report.tw_certificates.append(cert)
        return cert


def _choose(g: Graph, L: Ladder, policy: ReductionPolicy, cert: _Certifier, report: ReductionReport):
    cls = classify(g, L)
    if cls.disconnecting and L.length > 1:
        return "disconnecting->1", 1, "edge cut across every square"
    if cls.degree2_cornerpoints and L.length > 1:
        c3 = cert.at_least(g, 3)
        if c3 is not None:
            corner = sorted(cls.degree2_cornerpoints, key=vkey)[0]
            return "degree2-cornerpoint->1", 1, f"corner {corner!r} has degree 2; tw>=3 by {c3.method}"
    if policy.allow_aggressive and L.length > policy.aggressive_target:
        c4 = cert.at_least(g, 4)
        if c4 is not None:
            t = policy.aggressive_target
            return f"aggressive->{t}", t, f"tw>=4 by {c4.method}"
        note = "policy-error: aggressive rule skipped, no tw>=4 certificate"
        if note not in report.notes:
            report.notes.append(note)
    if L.length > policy.general_target:
        t = policy.general_target
        return f"general->{t}", t, ""
    return None


def reduce(g: Graph, policy: Optional[ReductionPolicy] = None, budget: Optional[Budget] = None) -> tuple:
    """Shorten every ladder as far as the safe rules allow; returns (graph, report)."""
    policy = policy or ReductionPolicy()
    report = ReductionReport(vertices_before=g.n)
    cert = _Certifier(g, budget, report)
    while True:
        step = None
        for L in find_ladders(g, 1):
            choice = _choose(g, L, policy, cert, report)
            if choice is None:
                continue
            rule, target, note = choice
            g, _ = shorten(g, L, target)
            step = Step(rule, L, L.length, target, note)
            break
        if step is None and policy.suppress_degree2:
            step, g = _suppress_one(g, cert)
        if step is None:
            break
        log.debug("applied %s", step.rule)
        report.steps.append(step)
        if not policy.iterate_to_fixpoint:
            break
    report.vertices_after = g.n
    return g, report


def _suppress_one(g: Graph, cert: _Certifier):
    for v in g.vertices():
        if g.degree(v) != 2:
            continue
        c3 = cert.at_least(g, 3)
        if c3 is None:
            return None, g
        return Step("suppress-deg2", None, 0, 0, f"tw>=3 by {c3.method}", vertex=v), suppress_degree2(g, v)
    return None, g


def replay(g: Graph, report: ReductionReport) -> Graph:
    """Re-apply the recorded steps to the input graph."""
    for step in report.steps:
        if step.rule == "suppress-deg2":
            g = suppress_degree2(g, step.vertex)
        else:
            g, _ = shorten(g, step.ladder, step.length_after)
    return g


def report_from_json(data: dict) -> ReductionReport:
    steps = []
    for s in data["steps"]:
        lad = s.get("ladder")
        ladder = Ladder(lad["top"], lad["bottom"]) if lad else None
        steps.append(Step(s["rule"], ladder, s["length_before"], s["length_after"], s.get("note", ""), s.get("vertex")))
    if any(s.rule not in ("suppress-deg2",) and s.ladder is None for s in steps):
        raise PreconditionError("ladder step without a ladder")
    certs = [Certificate(c["k"], c["method"], c["value"], c.get("witness")) for c in data.get("tw_certificates", [])]
    return ReductionReport(steps, data.get("vertices_before", 0), data.get("vertices_after", 0), certs, list(data.get("notes", [])))
