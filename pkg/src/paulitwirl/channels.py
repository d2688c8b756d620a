"""Noise operators in the Pauli basis and Kraus-list noise channels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .pauli import DENSE_LIMIT, PauliString, parse_pauli, to_matrix, zeta

# relative to the largest coefficient magnitude
ZERO_RTOL = 1e-12
COMPLETENESS_TOL = 1e-10


def _prune(terms: Mapping[PauliString, complex], threshold: Optional[float]) -> Dict[PauliString, complex]:
    if not terms:
        return {}
    if threshold is None:
        threshold = ZERO_RTOL * max(abs(c) for c in terms.values())
    return {p: complex(c) for p, c in sorted(terms.items()) if abs(c) > threshold}


class PauliSum:
    """Complex combination of PauliStrings, e.g. a noise operator.

    Coefficients at or below ``threshold`` (default: 1e-12 times the
    largest magnitude) are dropped on construction.
    """

    def __init__(
        self,
        n: int,
        terms: Optional[Mapping[PauliString, complex]] = None,
        threshold: Optional[float] = None,
    ):
        self.n = n
        terms = dict(terms or {})
        for p in terms:
            if p.n != n:
                raise ValueError(f"term {p} has {p.n} qubits, expected {n}")
        self.terms: Dict[PauliString, complex] = _prune(terms, threshold)

    @classmethod
    def from_list(cls, items: Iterable[Tuple[complex, Union[str, PauliString]]], n: Optional[int] = None) -> "PauliSum":
        """Build from ``(coefficient, literal)`` pairs, summing repeats."""
        terms: Dict[PauliString, complex] = {}
        for coef, lit in items:
            p = lit if isinstance(lit, PauliString) else parse_pauli(lit, n)
            if n is None:
                n = p.n
            terms[p] = terms.get(p, 0) + coef
        if n is None:
            raise ValueError("qubit count unknown for an empty PauliSum")
        return cls(n, terms)

    @classmethod
    def from_pauli(cls, p: PauliString, coef: complex = 1.0) -> "PauliSum":
        return cls(p.n, {p: coef})

    def basis(self) -> List[PauliString]:
        return list(self.terms)

    def coefficient(self, p: PauliString) -> complex:
        return self.terms.get(p, 0j)

    def squared_norm(self) -> float:
        """Sum of |c|^2, equal to Tr(M^dag M) / 2^n."""
        return float(sum(abs(c) ** 2 for c in self.terms.values()))

    def normalised(self) -> "PauliSum":
        norm = np.sqrt(self.squared_norm())
        if norm == 0:
            raise ValueError("cannot normalise a zero operator")
        return self * (1 / norm)

    def split(self, w: PauliString) -> Tuple["PauliSum", "PauliSum"]:
        """Parts commuting and anticommuting with ``w``."""
        plus = {p: c for p, c in self.terms.items() if zeta(p, w) == 1}
        minus = {p: c for p, c in self.terms.items() if zeta(p, w) == -1}
        return PauliSum(self.n, plus, 0.0), PauliSum(self.n, minus, 0.0)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("qubit count mismatch")
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, 0) + c
        return PauliSum(self.n, terms)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.n, {p: c * scalar for p, c in self.terms.items()}, 0.0)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def allclose(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return self.n == other.n and all(
            abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys
        )

    def __repr__(self) -> str:
        inner = " + ".join(f"({c:.6g})*{p.label}" for p, c in self.terms.items())
        return f"PauliSum(n={self.n}, {inner or '0'})"


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"dimension {dim} is not a power of two >= 2")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


Operator = Union[PauliSum, DenseOperator, np.ndarray]


def _walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalised transform along axis 0: out[b] = sum_c (-1)^{b.c} a[c]."""
    a = a.copy()
    h = 1
    size = a.shape[0]
    while h < size:
        a = a.reshape(size // (2 * h), 2, h, *a.shape[1:])
        top = a[:, 0] + a[:, 1]
        bot = a[:, 0] - a[:, 1]
        a = np.stack([top, bot], axis=1).reshape(size, *a.shape[3:])
        h *= 2
    return a


def decompose(M: Union[DenseOperator, np.ndarray], threshold: Optional[float] = None) -> PauliSum:
    """Pauli-basis expansion with coefficients Tr(g M) / 2^n.

    Uses a Walsh-Hadamard transform per x-pattern, so the cost is
    O(n 4^n) rather than one trace per Pauli.
    """
    op = M if isinstance(M, DenseOperator) else DenseOperator(M)
    n = op.n
    if n > DENSE_LIMIT:
        raise ValueError(f"{n} qubits exceeds the dense limit of {DENSE_LIMIT}")
    if threshold is not None and threshold < 0:
        raise ValueError("threshold must be non-negative")
    dim = 1 << n
    m = op.matrix
    idx = np.arange(dim)
    # f[c, a] = M[c, c ^ a]
    f = m[idx[:, None], idx[:, None] ^ idx[None, :]]
    # t[b, a] = sum_c (-1)^{b.c} M[c, c ^ a] = Tr(X^a Z^b M)
    t = _walsh_hadamard(f)
    a = idx[None, :]
    b = idx[:, None]
    both = a & b
    ybits = sum((both >> k) & 1 for k in range(n))
    # g = i^{|a & b|} X^a Z^b
    coeffs = np.array([1, 1j, -1, -1j])[ybits % 4] * t / dim
    zs, xs = np.nonzero(coeffs)
    terms = {PauliString(n, int(x), int(z)): coeffs[z, x] for z, x in zip(zs, xs)}
    return PauliSum(n, terms, threshold)


def reconstruct(s: PauliSum, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    if s.n > dense_limit:
        raise ValueError(f"{s.n} qubits exceeds the dense limit of {dense_limit}")
    out = np.zeros((1 << s.n, 1 << s.n), dtype=complex)
    for p, c in s.terms.items():
        out += c * to_matrix(p, dense_limit)
    return out


def as_matrix(op: Operator) -> np.ndarray:
    if isinstance(op, PauliSum):
        return reconstruct(op)
    if isinstance(op, DenseOperator):
        return op.matrix
    return DenseOperator(op).matrix


def as_pauli_sum(op: Operator, threshold: Optional[float] = None) -> PauliSum:
    if isinstance(op, PauliSum):
        if threshold is None:
            return op
        return PauliSum(op.n, op.terms, threshold)
    return decompose(op, threshold)


def operator_qubits(op: Operator) -> int:
    if isinstance(op, (PauliSum, DenseOperator)):
        return op.n
    return DenseOperator(op).n


@dataclass
class NoiseChannel:
    """rho -> sum_b weight_b K_b rho K_b^dag.

    ``weights`` defaults to all ones. Completeness (sum K^dag K = I) is only
    enforced when ``check_completeness`` is set, since single un-normalised
    noise operators are the common input.
    """

    kraus: List[Operator]
    weights: Optional[List[float]] = None
    check_completeness: bool = False
    _n: int = field(init=False, repr=False)

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        self.kraus = [k if isinstance(k, (PauliSum, DenseOperator)) else DenseOperator(k) for k in self.kraus]
        sizes = {operator_qubits(k) for k in self.kraus}
        if len(sizes) != 1:
            raise ValueError(f"Kraus operators act on different qubit counts: {sorted(sizes)}")
        self._n = sizes.pop()
        if self.weights is not None:
            if len(self.weights) != len(self.kraus):
                raise ValueError("one weight per Kraus operator is required")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            self.weights = [float(w) for w in self.weights]
        if self.check_completeness:
            residual = self.completeness_residual()
            if residual > COMPLETENESS_TOL:
                raise ValueError(f"Kraus operators are not complete (residual {residual:.3e})")

    @classmethod
    def single(cls, op: Operator) -> "NoiseChannel":
        return cls([op])

    @property
    def n(self) -> int:
        return self._n

    def branch_weights(self) -> List[float]:
        return self.weights if self.weights is not None else [1.0] * len(self.kraus)

    def branches(self) -> List[Tuple[float, Operator]]:
        return list(zip(self.branch_weights(), self.kraus))

    def completeness_residual(self) -> float:
        total = sum(w * (as_matrix(k).conj().T @ as_matrix(k)) for w, k in self.branches())
        return float(np.max(np.abs(total - np.eye(1 << self.n))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NoiseChannel):
            return NotImplemented
        if len(self.kraus) != len(other.kraus) or self.branch_weights() != other.branch_weights():
            return False
        for a, b in zip(self.kraus, other.kraus):
            if type(a) is not type(b):
                return False
            if isinstance(a, PauliSum):
                if a != b:
                    return False
            elif not np.array_equal(a.matrix, b.matrix):
                return False
        return True


def pauli_basis(channel: Union[NoiseChannel, Operator], threshold: Optional[float] = None) -> List[PauliString]:
    """Union of the Pauli bases of all Kraus branches, canonical order."""
    if not isinstance(channel, NoiseChannel):
        channel = NoiseChannel.single(channel)
    found = set()
    for w, k in channel.branches():
        if w == 0:
            continue
        found.update(as_pauli_sum(k, threshold).terms)
    return sorted(found)
