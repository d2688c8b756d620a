"""Construction of a small Pauli twirling generating set for a noise channel.

Pipeline: Pauli basis V -> generating set of V and the generators used in
composition relations -> number of twirling generators N -> map V into the
abstract group H = <h1..hN> -> target commutator table -> solve one Pauli
per table row over GF(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from . import gf2
from .channels import NoiseChannel, Operator, pauli_basis
from .pauli import (
    GeneratingSetResult,
    PauliString,
    generating_set,
    is_independent,
    span,
    star,
    zeta,
)

# largest solution-space dimension searched exhaustively for a minimum-weight generator
MAX_COSET_DIM = 16
# largest span enumerated explicitly by build_twirl_plan's self-check
MAX_EXPLICIT_SPAN = 16


class ConstructionError(RuntimeError):
    """An internal sizing or solvability invariant was violated."""


@dataclass(frozen=True)
class AbstractGroupElement:
    """Product of abstract generators selected by the bits of ``mask``.

    Bit i stands for generator i + 1, so mask 0b101 is h1*h3.
    """

    mask: int
    size: int
    prefix: str = "h"

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.size):
            raise ValueError(f"mask {self.mask} does not fit {self.size} generators")

    @property
    def weight(self) -> int:
        return self.mask.bit_count()

    def indices(self) -> List[int]:
        return [i + 1 for i in range(self.size) if (self.mask >> i) & 1]

    def sort_key(self):
        return (self.weight, self.indices())

    @property
    def label(self) -> str:
        idx = self.indices()
        if not idx:
            return "I"
        return "*".join(f"{self.prefix}{i}" for i in idx)

    def __mul__(self, other: "AbstractGroupElement") -> "AbstractGroupElement":
        if not isinstance(other, AbstractGroupElement):
            return NotImplemented
        if other.size != self.size or other.prefix != self.prefix:
            raise ValueError("elements belong to different groups")
        return AbstractGroupElement(self.mask ^ other.mask, self.size, self.prefix)

    def __str__(self) -> str:
        return self.label


def sign_parity(a: int, b: int) -> int:
    """(-1)^(a . b) for masks a, b."""
    return -1 if gf2.parity(a & b) else 1


def _bit_matrix(paulis: Sequence[PauliString]) -> Tuple[np.ndarray, np.ndarray]:
    n = paulis[0].n
    xs = np.array([[int(c) for c in format(p.x, f"0{n}b")] for p in paulis], dtype=np.int64)
    zs = np.array([[int(c) for c in format(p.z, f"0{n}b")] for p in paulis], dtype=np.int64)
    return xs, zs


def commutation_matrix(rows: Sequence[PauliString], cols: Sequence[PauliString]) -> np.ndarray:
    """Matrix of zeta(rows[i], cols[j]) as int8 +/-1."""
    if not rows or not cols:
        return np.ones((len(rows), len(cols)), dtype=np.int8)
    rx, rz = _bit_matrix(rows)
    cx, cz = _bit_matrix(cols)
    if rx.shape[1] != cx.shape[1]:
        raise ValueError("qubit count mismatch")
    odd = (rx @ cz.T + rz @ cx.T) & 1
    return (1 - 2 * odd).astype(np.int8)


Label = Union[PauliString, AbstractGroupElement]


@dataclass
class CommutatorTable:
    """A +/-1 table zeta(row_i, col_j) with its row and column labels."""

    row_labels: List[Label]
    col_labels: List[Label]
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int8).reshape(len(self.row_labels), len(self.col_labels))
        if not np.all(np.abs(self.entries) == 1):
            raise ValueError("commutator table entries must be +1 or -1")

    @classmethod
    def from_paulis(cls, rows: Sequence[PauliString], cols: Sequence[PauliString]) -> "CommutatorTable":
        return cls(list(rows), list(cols), commutation_matrix(rows, cols))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def composition_violations(self) -> List[Tuple[str, int, int, int]]:
        """Row/column composition laws that fail for labels present in the table.

        Each violation is ``(kind, i, j, k)``: label i * label j == label k but
        entry products disagree.
        """
        out = []
        for kind, labels, table in (("row", self.row_labels, self.entries), ("col", self.col_labels, self.entries.T)):
            where = {lab: k for k, lab in enumerate(labels)}
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    try:
                        k = where.get(labels[i] * labels[j])
                    except (TypeError, ValueError):
                        k = None
                    if k is not None and not np.array_equal(table[i] * table[j], table[k]):
                        out.append((kind, i, j, k))
        return out

    def render(self) -> str:
        heads = [str(c) for c in self.col_labels]
        rows = [str(r) for r in self.row_labels]
        width = max([len(h) for h in heads] + [2])
        lead = max([len(r) for r in rows] + [1])
        lines = [" " * lead + " | " + " ".join(h.rjust(width) for h in heads)]
        lines.append("-" * len(lines[0]))
        for r, row in zip(rows, self.entries):
            lines.append(r.ljust(lead) + " | " + " ".join(str(int(v)).rjust(width) for v in row))
        return "\n".join(lines)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CommutatorTable):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and np.array_equal(self.entries, other.entries)
        )


@dataclass
class VtoHMapping:
    """Images of the Pauli basis in the abstract group H of ``size`` generators."""

    image: Dict[PauliString, AbstractGroupElement]
    size: int
    generators: List[PauliString] = field(default_factory=list)

    def mask(self, v: PauliString) -> int:
        return self.image[v].mask

    def is_injective(self) -> bool:
        masks = [h.mask for h in self.image.values()]
        return len(set(masks)) == len(masks)


@dataclass
class TwirlPlan:
    basis: List[PauliString]  # V
    generating: List[PauliString]  # Ṽ
    used: List[PauliString]  # Ṽ_S
    size: int  # N
    mapping: VtoHMapping
    twirl_generators: List[PauliString]  # W̃
    target: CommutatorTable
    n_qubits: int
    branches: int = 1
    generating_set_result: Optional[GeneratingSetResult] = None

    def twirling_set(self) -> List[PauliString]:
        return span(self.twirl_generators, self.n_qubits)

    def achieved_table(self) -> CommutatorTable:
        return CommutatorTable.from_paulis(self.twirl_generators, self.target.col_labels)

    def diagnostics(self) -> Dict[str, object]:
        k = len(self.twirl_generators)
        return {
            "n_qubits": self.n_qubits,
            "size_V": len(self.basis),
            "size_V_tilde": len(self.generating),
            "size_V_S": len(self.used),
            "N": self.size,
            "size_W_tilde": k,
            "size_W": 2 ** k,
            "baseline_generators": 2 * self.n_qubits,
            "lower_bound": ceil_log2(len(self.basis)),
            "union_basis": self.branches > 1,
        }


def ceil_log2(count: int) -> int:
    if count < 1:
        raise ValueError("count must be positive")
    return (count - 1).bit_length()


def find_vs(V: Sequence[PauliString], gs: GeneratingSetResult) -> List[PauliString]:
    """Generators that appear as factors of some element of V outside the basis."""
    basis = set(gs.basis)
    used_mask = 0
    for i, v in enumerate(V):
        if v not in basis:
            used_mask |= gs.coords[i]
    return sorted(b for j, b in enumerate(gs.basis) if (used_mask >> j) & 1)


def choose_N(size_v: int, size_vs: int) -> int:
    return max(ceil_log2(size_v), size_vs)


def build_mapping(
    V: Sequence[PauliString], gs: GeneratingSetResult, vs: Sequence[PauliString], N: int
) -> VtoHMapping:
    if N < len(vs) or (1 << N) < len(V):
        raise ConstructionError(f"N={N} too small for |V|={len(V)}, |V_S|={len(vs)}")
    basis_index = {b: j for j, b in enumerate(gs.basis)}
    unit: Dict[int, int] = {}  # basis index -> mask
    for i, v in enumerate(sorted(vs)):
        unit[basis_index[v]] = 1 << i
    image: Dict[PauliString, int] = {}
    for v, c in zip(gs.elements, gs.coords):
        if v in basis_index:
            if basis_index[v] in unit:
                image[v] = unit[basis_index[v]]
            continue
        mask = 0
        for j in range(len(gs.basis)):
            if (c >> j) & 1:
                if j not in unit:
                    raise ConstructionError(f"factor {gs.basis[j]} of {v} is not in V_S")
                mask ^= unit[j]
        image[v] = mask
    used = set(image.values())
    free = (m for m in range(1 << N) if m not in used)
    for b in sorted(b for b in gs.basis if b not in image):
        image[b] = next(free)
    mapping = VtoHMapping(
        {v: AbstractGroupElement(image[v], N) for v in V}, N, list(gs.basis)
    )
    if not mapping.is_injective():
        raise ConstructionError("mapping of V into H is not injective")
    return mapping


def generator_table(N: int) -> CommutatorTable:
    rows = [AbstractGroupElement(1 << i, N, "q") for i in range(N)]
    cols = [AbstractGroupElement(1 << j, N) for j in range(N)]
    return CommutatorTable(rows, cols, 1 - 2 * np.eye(N, dtype=np.int8))


def target_table(mapping: VtoHMapping, N: Optional[int] = None, columns: Optional[Sequence[PauliString]] = None) -> CommutatorTable:
    """Generator table columns composed per the images of ``columns``.

    Columns default to the generating set, ordered by image (identity,
    single generators, pairs, ...).
    """
    N = mapping.size if N is None else N
    if columns is None:
        columns = mapping.generators
    columns = sorted(columns, key=lambda v: (mapping.image[v].sort_key(), v.sort_key()))
    rows = [AbstractGroupElement(1 << i, N, "q") for i in range(N)]
    entries = np.array(
        [[-1 if (mapping.mask(v) >> i) & 1 else 1 for v in columns] for i in range(N)],
        dtype=np.int8,
    )
    return CommutatorTable(rows, list(columns), entries)


def _gray_coset(particular: int, nullspace: List[int]) -> Iterable[int]:
    v = particular
    yield v
    for k in range(1, 1 << len(nullspace)):
        v ^= nullspace[(k & -k).bit_length() - 1]
        yield v


def solve_generator(constraints: Sequence[Tuple[PauliString, int]], n: int) -> PauliString:
    """A Pauli w with zeta(w, v) == sign for every (v, sign) constraint.

    Among all solutions the minimum-weight one is returned (ties broken by
    canonical order) when the solution space has dimension <= 16; otherwise
    the elimination's particular solution.
    """
    rows, rhs = [], []
    for v, sign in constraints:
        if v.n != n:
            raise ValueError(f"constraint {v} has {v.n} qubits, expected {n}")
        if sign not in (1, -1):
            raise ValueError(f"target sign must be +1 or -1, got {sign!r}")
        # zeta exponent is w.x . v.z + w.z . v.x against w = (x << n) | z
        rows.append((v.z << n) | v.x)
        rhs.append(1 if sign == -1 else 0)
    try:
        particular, nullspace, rk = gf2.solve(rows, rhs, 2 * n)
    except gf2.InconsistentSystem as exc:
        raise ConstructionError(f"constraints have no solution: {exc}") from exc
    if rk != len(rows):
        raise ConstructionError("constraint Paulis are not independent")
    if len(nullspace) > MAX_COSET_DIM:
        return PauliString.from_symplectic(n, particular)
    best = min(
        (PauliString.from_symplectic(n, v) for v in _gray_coset(particular, nullspace)),
        key=lambda p: (p.weight, p.sort_key()),
    )
    return best


@dataclass
class ConditionCheck:
    """Outcome of the twirling condition: every pair sum must vanish."""

    ok: bool
    violations: List[Tuple[PauliString, PauliString, int]]

    def __bool__(self) -> bool:
        return self.ok


def verify_condition(W: Sequence[PauliString], V: Sequence[PauliString]) -> ConditionCheck:
    """Check sum_{w in W} zeta(w, v * v') == 0 for every pair v != v' in V."""
    W, V = list(W), list(V)
    if len(V) < 2:
        return ConditionCheck(True, [])
    if not W:
        raise ValueError("twirling set is empty")
    S = commutation_matrix(W, V).astype(np.int64)
    # zeta(w, v * v') = zeta(w, v) zeta(w, v'), so pair sums are a Gram matrix
    gram = S.T @ S
    bad = []
    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            if gram[i, j] != 0:
                bad.append((V[i], V[j], int(gram[i, j])))
    return ConditionCheck(not bad, bad)


def verify_generators(generators: Sequence[PauliString], V: Sequence[PauliString]) -> ConditionCheck:
    """Twirling condition for W = span(generators) without enumerating W.

    For independent generators the sum over the span factorises as
    prod_i (1 + zeta(g_i, v * v')).
    """
    generators, V = list(generators), list(V)
    if not is_independent(generators):
        raise ValueError("generators are not independent")
    bad = []
    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            u = star(V[i], V[j])
            total = 1
            for g in generators:
                total *= 1 + zeta(g, u)
            if total:
                bad.append((V[i], V[j], total))
    return ConditionCheck(not bad, bad)


def full_pauli_baseline(n: int) -> List[PauliString]:
    """Generators X_k, Z_k of the full Pauli set."""
    out = []
    for k in range(1, n + 1):
        out.append(PauliString.single(n, k, "X"))
        out.append(PauliString.single(n, k, "Z"))
    return out


def quotient_table(N: int) -> CommutatorTable:
    """All row and column compositions of the size-N generator table.

    Rows count in binary with q1 as the most significant generator; columns
    run I, single generators, pairs, ... .
    """
    def reverse(m: int) -> int:
        return int(format(m, f"0{N}b")[::-1], 2) if N else 0

    rows = [AbstractGroupElement(reverse(m), N, "q") for m in range(1 << N)]
    cols = sorted((AbstractGroupElement(m, N) for m in range(1 << N)), key=AbstractGroupElement.sort_key)
    entries = np.array([[sign_parity(q.mask, h.mask) for h in cols] for q in rows], dtype=np.int8)
    return CommutatorTable(rows, cols, entries)


def build_twirl_plan(channel: Union[NoiseChannel, Operator], threshold: Optional[float] = None) -> TwirlPlan:
    if not isinstance(channel, NoiseChannel):
        channel = NoiseChannel.single(channel)
    V = pauli_basis(channel, threshold)
    if not V:
        raise ValueError("noise operator is zero; nothing to twirl")
    n = channel.n
    gs = generating_set(V)
    vs = find_vs(V, gs)
    N = choose_N(len(V), len(vs))
    mapping = build_mapping(V, gs, vs, N)
    target = target_table(mapping, N)
    generators = []
    for i in range(N):
        constraints = [(v, int(target.entries[i, j])) for j, v in enumerate(target.col_labels)]
        generators.append(solve_generator(constraints, n))
    plan = TwirlPlan(
        basis=V,
        generating=list(gs.basis),
        used=vs,
        size=N,
        mapping=mapping,
        twirl_generators=generators,
        target=target,
        n_qubits=n,
        branches=len(channel.kraus),
        generating_set_result=gs,
    )
    if not np.array_equal(plan.achieved_table().entries, target.entries):
        raise ConstructionError("solved generators do not reproduce the target table")
    if N <= MAX_EXPLICIT_SPAN:
        check = verify_condition(plan.twirling_set(), V)
    else:
        check = verify_generators(generators, V)
    if not check:
        raise ConstructionError(f"twirling condition fails on {len(check.violations)} pairs")
    return plan


class Substitution(NamedTuple):
    active: List[PauliString]
    absorbed: List[PauliString]


def substitute_stabilisers(
    plan: Union[TwirlPlan, Sequence[PauliString]], stabilisers: Sequence[PauliString]
) -> Substitution:
    """Drop twirling generators that coincide with a measured stabiliser.

    A stabiliser check with its outcome discarded acts like a one-gate twirl
    with that stabiliser, so matching generators need no twirling gate.
    """
    generators = plan.twirl_generators if isinstance(plan, TwirlPlan) else list(plan)
    stabilisers = list(stabilisers)
    for i, a in enumerate(stabilisers):
        for b in stabilisers[i + 1:]:
            if zeta(a, b) != 1:
                raise ValueError(f"stabilisers {a} and {b} do not commute")
    measured = set(stabilisers)
    active = [g for g in generators if g not in measured]
    absorbed = [g for g in generators if g in measured]
    return Substitution(active, absorbed)


def in_stabiliser_group(generators: Sequence[PauliString], stabilisers: Sequence[PauliString]) -> List[PauliString]:
    """Generators that are products of the stabilisers (reported, never dropped)."""
    if not stabilisers:
        return []
    base = [s.symplectic for s in stabilisers]
    r = gf2.rank(base)
    return [g for g in generators if gf2.rank(base + [g.symplectic]) == r]
