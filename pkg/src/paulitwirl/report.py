"""JSON-ready reports for plans, tables and verification runs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .builder import (
    CommutatorTable,
    TwirlPlan,
    ceil_log2,
    full_pauli_baseline,
    in_stabiliser_group,
    substitute_stabilisers,
    verify_condition,
    verify_generators,
)
from .channels import NoiseChannel, PauliSum
from .pauli import PauliString
from . import sim

DIGITS = 12


def num(x: float) -> float:
    return float(f"{x:.{DIGITS}g}")


def cnum(z: complex) -> List[float]:
    return [num(z.real), num(z.imag)]


def labels(paulis: Sequence[PauliString]) -> List[str]:
    return [p.label for p in paulis]


def table_dict(table: CommutatorTable) -> Dict[str, object]:
    return {
        "rows": [str(r) for r in table.row_labels],
        "cols": [str(c) for c in table.col_labels],
        "entries": table.entries.astype(int).tolist(),
    }


def pauli_sum_dict(s: PauliSum) -> Dict[str, object]:
    return {"n": s.n, "terms": [{"pauli": p.label, "coefficient": cnum(c)} for p, c in s.terms.items()]}


def plan_dict(
    plan: TwirlPlan,
    stabilisers: Optional[Sequence[PauliString]] = None,
    baseline: bool = False,
) -> Dict[str, object]:
    check = verify_condition(plan.twirling_set(), plan.basis) if plan.size <= 16 else verify_generators(
        plan.twirl_generators, plan.basis
    )
    out: Dict[str, object] = {
        "V": labels(plan.basis),
        "V_tilde": labels(plan.generating),
        "V_S": labels(plan.used),
        "N": plan.size,
        "mapping": [
            {"pauli": v.label, "image": plan.mapping.image[v].label, "mask": plan.mapping.image[v].mask}
            for v in plan.basis
        ],
        "target_table": table_dict(plan.target),
        "W_tilde": labels(plan.twirl_generators),
        "achieved_table": table_dict(plan.achieved_table()),
        "diagnostics": plan.diagnostics(),
        "condition": {
            "ok": check.ok,
            "violations": [[a.label, b.label, s] for a, b, s in check.violations],
        },
    }
    if plan.size <= 6:
        out["W"] = labels(plan.twirling_set())
    if stabilisers is not None:
        sub = substitute_stabilisers(plan, stabilisers)
        out["substitution"] = {
            "stabilisers": labels(stabilisers),
            "active": labels(sub.active),
            "absorbed": labels(sub.absorbed),
            "in_stabiliser_group": labels(in_stabiliser_group(sub.active, stabilisers)),
        }
    if baseline:
        base = full_pauli_baseline(plan.n_qubits)
        out["baseline"] = {
            "W_tilde": labels(base),
            "size_W_tilde": len(base),
            "size_W": 4**plan.n_qubits,
        }
    return out


@dataclass
class Check:
    name: str
    tolerance: float
    residual: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "tolerance": num(self.tolerance),
            "residual": num(self.residual),
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)
    skipped: List[Dict[str, str]] = field(default_factory=list)

    def add(self, name: str, tolerance: float, residual: float, detail: str = "") -> Check:
        c = Check(name, tolerance, float(residual), bool(residual <= tolerance), detail)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> None:
        self.skipped.append({"name": name, "reason": reason})

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "skipped": self.skipped,
        }

    def render(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"{'check'.ljust(width)}  {'tolerance':>10}  {'residual':>12}  result"]
        for c in self.checks:
            lines.append(
                f"{c.name.ljust(width)}  {c.tolerance:10.1e}  {c.residual:12.4e}  {'PASS' if c.passed else 'FAIL'}"
            )
        for s in self.skipped:
            lines.append(f"{s['name'].ljust(width)}  skipped: {s['reason']}")
        return "\n".join(lines)


def twirled_state(W: Sequence[PauliString], channel: NoiseChannel, rho: np.ndarray) -> np.ndarray:
    return sum(w * sim.exact_twirl(W, k, rho) for w, k in channel.branches())


def verify_plan(
    plan: TwirlPlan,
    channel: NoiseChannel,
    tol: float = 1e-10,
    seed: int = 0,
    states: int = 5,
    state_limit: int = sim.STATE_LIMIT,
    choi_limit: int = sim.CHOI_LIMIT,
    baseline: bool = False,
) -> VerificationReport:
    """Combinatorial and dense-simulation checks of a constructed plan."""
    report = VerificationReport()
    V = plan.basis
    if plan.size <= 16:
        check = verify_condition(plan.twirling_set(), V)
    else:
        check = verify_generators(plan.twirl_generators, V)
    worst = max((abs(s) for _, _, s in check.violations), default=0)
    report.add("twirling_condition", 0.0, worst, f"{len(V) * (len(V) - 1) // 2} pairs")

    mismatches = int(np.sum(plan.achieved_table().entries != plan.target.entries))
    report.add("target_table_match", 0.0, mismatches, "entries differing from the target table")

    k = len(plan.twirl_generators)
    within = ceil_log2(len(V)) <= k <= len(plan.generating)
    report.add("size_bounds", 0.0, 0.0 if within else 1.0, f"{ceil_log2(len(V))} <= {k} <= {len(plan.generating)}")

    if baseline:
        base = verify_generators(full_pauli_baseline(plan.n_qubits), V)
        report.add("baseline_condition", 0.0, 0.0 if base.ok else 1.0, f"{2 * plan.n_qubits} generators")

    n = plan.n_qubits
    predicted = sim.predicted_channel(channel)
    if n <= state_limit:
        rng = np.random.default_rng(seed)
        W = plan.twirling_set()
        residual = 0.0
        for _ in range(states):
            rho = sim.random_density_matrix(n, rng)
            residual = max(residual, float(np.max(np.abs(twirled_state(W, channel, rho) - predicted.apply(rho)))))
        report.add("state_twirl_matches_prediction", tol, residual, f"{states} random states, seed {seed}")
    else:
        report.skip("state_twirl_matches_prediction", f"n={n} above state limit {state_limit}")

    if n <= choi_limit:
        twirled = sim.choi(lambda rho: twirled_state(plan.twirling_set(), channel, rho), n)
        report.add("choi_offdiagonal", tol, twirled.offdiagonal_max(), "twirled channel in the Pauli basis")
        diag = twirled.diagonal()
        residual = max(abs(diag[g] - predicted.probs.get(g, 0.0)) for g in twirled.paulis)
        report.add("choi_diagonal_matches_prediction", tol, residual)
    else:
        report.skip("choi_offdiagonal", f"n={n} above Choi limit {choi_limit}")
    return report


def dumps(obj: object) -> str:
    return json.dumps(obj, indent=2) + "\n"
