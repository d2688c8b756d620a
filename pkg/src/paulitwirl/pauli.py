"""Phase-free n-qubit Pauli operators in symplectic (x, z) bit form.

Bit strings are stored as Python ints with qubit 1 in the most significant
position, so the integer index of a computational basis state lines up with
the Kronecker ordering used by :func:`to_matrix`.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence

import numpy as np

from . import gf2

MAX_QUBITS = 1024
DENSE_LIMIT = 10

_SYMBOLS = "IXZY"  # indexed by x + 2 z
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_SPARSE_TOKEN = re.compile(r"^([IXYZ])_?(\d+)$")

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_MATRICES = {"I": _I2, "X": _X2, "Y": _Y2, "Z": _Z2}


@functools.total_ordering
@dataclass(frozen=True)
class PauliString:
    """A Pauli operator with its phase discarded.

    ``x`` and ``z`` are n-bit integers; qubit k (1-based) sits at bit
    ``n - k``. Equality and hashing depend on the bits only.
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n!r}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bit strings do not fit in {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Dense label such as ``"IZXY"``; the first character is qubit 1."""
        label = label.strip()
        if not label or any(c not in _BITS for c in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        x = z = 0
        for c in label:
            bx, bz = _BITS[c]
            x = (x << 1) | bx
            z = (z << 1) | bz
        return cls(len(label), x, z)

    @classmethod
    def single(cls, n: int, qubit: int, symbol: str) -> "PauliString":
        """``symbol`` acting on ``qubit`` (1-based), identity elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit index {qubit} outside 1..{n}")
        bx, bz = _BITS[symbol]
        shift = n - qubit
        return cls(n, bx << shift, bz << shift)

    @classmethod
    def from_symplectic(cls, n: int, vec: int) -> "PauliString":
        return cls(n, vec >> n, vec & ((1 << n) - 1))

    @property
    def symplectic(self) -> int:
        """Concatenated ``x | z`` vector as a 2n-bit integer."""
        return (self.x << self.n) | self.z

    def symbol(self, qubit: int) -> str:
        shift = self.n - qubit
        return _SYMBOLS[((self.x >> shift) & 1) + 2 * ((self.z >> shift) & 1)]

    @property
    def label(self) -> str:
        return "".join(self.symbol(k) for k in range(1, self.n + 1))

    @property
    def sparse_label(self) -> str:
        """e.g. ``"X2 X5"``; the identity renders as ``"I"``."""
        parts = [f"{self.symbol(k)}{k}" for k in range(1, self.n + 1) if self.symbol(k) != "I"]
        return " ".join(parts) if parts else "I"

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def sort_key(self):
        # lexicographic on z bits then x bits, qubit 1 first
        return (self.n, self.z, self.x)

    def __lt__(self, other: "PauliString") -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        return star(self, other)

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"


def _check_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def star(a: PauliString, b: PauliString) -> PauliString:
    """Pauli product with the phase dropped (bitwise XOR)."""
    _check_same_n(a, b)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z)


def zeta(a: PauliString, b: PauliString) -> int:
    """+1 if ``a`` and ``b`` commute, -1 if they anticommute."""
    _check_same_n(a, b)
    return -1 if gf2.parity((a.x & b.z) ^ (a.z & b.x)) else 1


def parse_pauli(text: str, n: Optional[int] = None) -> PauliString:
    """Parse a dense (``"IZXY"``) or sparse 1-based (``"X2 X5 X6 X8"``) literal.

    Sparse literals need ``n``; without it the highest index mentioned is used.
    """
    tokens = text.split()
    if not tokens:
        raise ValueError("empty Pauli literal")
    if len(tokens) == 1 and _SPARSE_TOKEN.match(tokens[0]) is None:
        p = PauliString.from_label(tokens[0])
        if n is not None and p.n != n:
            raise ValueError(f"literal {text!r} has {p.n} qubits, expected {n}")
        return p
    parsed = []
    for tok in tokens:
        m = _SPARSE_TOKEN.match(tok)
        if m is None:
            raise ValueError(f"invalid sparse Pauli token {tok!r} in {text!r}")
        parsed.append((m.group(1), int(m.group(2))))
    top = max(q for _, q in parsed)
    if n is None:
        n = top
    elif top > n:
        raise ValueError(f"qubit index {top} exceeds qubit count {n}")
    x = z = 0
    seen = set()
    for symbol, q in parsed:
        if q < 1:
            raise ValueError(f"qubit indices are 1-based, got {q}")
        if q in seen:
            raise ValueError(f"qubit {q} appears twice in {text!r}")
        seen.add(q)
        bx, bz = _BITS[symbol]
        x |= bx << (n - q)
        z |= bz << (n - q)
    return PauliString(n, x, z)


def to_matrix(p: PauliString, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    if p.n > dense_limit:
        raise ValueError(f"{p.n} qubits exceeds the dense limit of {dense_limit}")
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, p.n + 1):
        out = np.kron(out, _MATRICES[p.symbol(k)])
    return out


def all_paulis(n: int) -> List[PauliString]:
    """Every element of the n-qubit Pauli set, in canonical order."""
    size = 1 << n
    return [PauliString(n, x, z) for z in range(size) for x in range(size)]


@dataclass
class GeneratingSetResult:
    """Independent generators chosen from ``elements``.

    ``coords[i]`` is a bit mask over ``basis``: bit j set means ``basis[j]``
    is a factor of ``elements[i]``.
    """

    elements: List[PauliString]
    basis: List[PauliString]
    coords: List[int] = field(default_factory=list)

    def factors(self, i: int) -> List[PauliString]:
        mask = self.coords[i]
        return [b for j, b in enumerate(self.basis) if (mask >> j) & 1]

    def product(self, mask: int) -> PauliString:
        n = self.elements[0].n if self.elements else 1
        out = PauliString.identity(n)
        for j, b in enumerate(self.basis):
            if (mask >> j) & 1:
                out = star(out, b)
        return out


def generating_set(elements: Sequence[PauliString]) -> GeneratingSetResult:
    """Pick independent generators by elimination, scanning in input order."""
    elements = list(elements)
    if elements:
        n = elements[0].n
        if any(e.n != n for e in elements):
            raise ValueError("all elements must share the qubit count")
    basis: List[PauliString] = []
    reduced = []  # (pivot_bit, reduced_vector, combination_mask)
    coords = []
    for e in elements:
        v = e.symplectic
        combo = 0
        for p, r, c in reduced:
            if (v >> p) & 1:
                v ^= r
                combo ^= c
        if v:
            combo ^= 1 << len(basis)
            reduced.append((gf2.lowest_bit(v), v, combo))
            basis.append(e)
            coords.append(1 << (len(basis) - 1))
        else:
            coords.append(combo)
    return GeneratingSetResult(elements, basis, coords)


def is_independent(elements: Sequence[PauliString]) -> bool:
    return gf2.rank([e.symplectic for e in elements]) == len(elements)


def iter_span(generators: Sequence[PauliString], n: Optional[int] = None) -> Iterator[PauliString]:
    generators = list(generators)
    if n is None:
        if not generators:
            raise ValueError("n is required for an empty generator list")
        n = generators[0].n
    for mask in range(1 << len(generators)):
        out = PauliString.identity(n)
        for j, g in enumerate(generators):
            if (mask >> j) & 1:
                out = star(out, g)
        yield out


def span(generators: Iterable[PauliString], n: Optional[int] = None) -> List[PauliString]:
    """All 2^k products of k independent generators, identity first.

    Element ``m`` of the result is the product of the generators selected by
    the bits of ``m``.
    """
    return list(iter_span(list(generators), n))
