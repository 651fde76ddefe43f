"""Verification reports: per-node PASS/FAIL with witnesses, text and JSON output."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class NodeCheck:
    label: str
    passed: bool
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class VerificationReport:
    title: str
    nodes: list[NodeCheck] = field(default_factory=list)
    seed: int | None = None
    samples: int | None = None
    fixture_hash: str = ""

    @property
    def passed(self) -> bool:
        return all(n.passed for n in self.nodes)

    def add(self, label: str, passed: bool, details: dict | None = None, witnesses=None) -> NodeCheck:
        node = NodeCheck(label, bool(passed), details or {}, list(witnesses or []))
        self.nodes.append(node)
        return node

    def failures(self) -> list[NodeCheck]:
        return [n for n in self.nodes if not n.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "fixture_hash": self.fixture_hash,
            "seed": self.seed,
            "samples": self.samples,
            "status": "PASS" if self.passed else "FAIL",
            "nodes": [
                {"label": n.label, "status": n.status, "details": _plain(n.details), "witnesses": _plain(n.witnesses)}
                for n in self.nodes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, ensure_ascii=False)

    def to_text(self, witnesses: bool = False) -> str:
        head = f"== {self.title} [{'PASS' if self.passed else 'FAIL'}]"
        meta = []
        if self.fixture_hash:
            meta.append(f"fixture {self.fixture_hash}")
        if self.seed is not None:
            meta.append(f"seed {self.seed}")
        if self.samples is not None:
            meta.append(f"samples {self.samples}")
        lines = [head + (f" ({', '.join(meta)})" if meta else "")]
        for n in self.nodes:
            info = " ".join(f"{k}={_plain(v)}" for k, v in sorted(n.details.items()))
            lines.append(f"  {n.status}  {n.label}" + (f"  {info}" if info else ""))
            if witnesses:
                for w in n.witnesses:
                    lines.append(f"        witness: {json.dumps(_plain(w), ensure_ascii=False)}")
        return "\n".join(lines)


def map_fingerprint(f) -> str:
    """Short stable hash of a simplicial map and its complexes."""
    payload = json.dumps(
        {
            "X": [[list(map(str, s)) for s in level] for level in f.target.simplices],
            "Y": [[list(map(str, s)) for s in level] for level in f.source.simplices],
            "f": sorted([str(k), str(v)] for k, v in f.vertex_map.items()),
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]
