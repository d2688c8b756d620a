"""Dense-matrix simulation of twirled noise, used to check constructed plans.

States and operators are plain complex numpy arrays. Everything here is
exponential in the qubit count and meant for small instances only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from .channels import NoiseChannel, Operator, PauliSum, as_matrix, as_pauli_sum, operator_qubits
from .pauli import PauliString, all_paulis, span, to_matrix

STATE_LIMIT = 8
CHOI_LIMIT = 4
PAULI_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10
UNITARY_TOL = 1e-10


def check_density_matrix(rho: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape != (dim, dim) or dim & (dim - 1):
        raise ValueError(f"density matrix must be square with power-of-two size, got {rho.shape}")
    if n is not None and dim != 1 << n:
        raise ValueError(f"density matrix has dimension {dim}, expected {1 << n}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.3g}, expected 1")
    if np.min(np.linalg.eigvalsh(rho)) < PSD_FLOOR:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def random_density_matrix(n: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Ginibre-distributed mixed state of the given rank (full rank by default)."""
    dim = 1 << n
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    diff = (diff + diff.conj().T) / 2
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def _dense(M: Operator, rho: Optional[np.ndarray] = None) -> np.ndarray:
    m = as_matrix(M)
    if rho is not None and m.shape != rho.shape:
        raise ValueError(f"operator shape {m.shape} does not match state shape {rho.shape}")
    return m


def apply_kraus(M: Operator, rho: np.ndarray) -> np.ndarray:
    """M rho M^dag, without renormalisation."""
    m = _dense(M, rho)
    return m @ rho @ m.conj().T


def conjugate(w: PauliString, M: Operator) -> np.ndarray:
    """w M w for a Pauli w (Paulis are Hermitian)."""
    m = _dense(M)
    if w.n != operator_qubits(M):
        raise ValueError("twirling gate and noise act on different qubit counts")
    p = to_matrix(w)
    return p @ m @ p


def exact_twirl(W: Sequence[PauliString], M: Operator, rho: np.ndarray) -> np.ndarray:
    """Average of (wMw) rho (wMw)^dag over every w in W."""
    W = list(W)
    if not W:
        raise ValueError("twirling set is empty")
    m = _dense(M, rho)
    out = np.zeros_like(rho, dtype=complex)
    for w in W:
        k = conjugate(w, m)
        out += k @ rho @ k.conj().T
    return out / len(W)


def random_twirl(
    W: Sequence[PauliString], M: Operator, rho: np.ndarray, samples: int, seed: int = 0
) -> np.ndarray:
    """Monte-Carlo twirl: ``samples`` uniform draws from W with numpy's PCG64."""
    W = list(W)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    counts = np.bincount(rng.integers(len(W), size=samples), minlength=len(W))
    m = _dense(M, rho)
    out = np.zeros_like(rho, dtype=complex)
    for w, c in zip(W, counts):
        if c:
            k = conjugate(w, m)
            out += c * (k @ rho @ k.conj().T)
    return out / samples


def twirled_channel(W: Sequence[PauliString], channel: Union[NoiseChannel, Operator]) -> NoiseChannel:
    """Kraus form of the exact twirl of every branch over W."""
    if not isinstance(channel, NoiseChannel):
        channel = NoiseChannel.single(channel)
    W = list(W)
    kraus, weights = [], []
    for weight, k in channel.branches():
        for w in W:
            kraus.append(conjugate(w, k))
            weights.append(weight / len(W))
    return NoiseChannel(kraus, weights)


@dataclass
class PauliChannel:
    """rho -> sum_g probs[g] g rho g."""

    n: int
    probs: Dict[PauliString, float]

    def __post_init__(self):
        if any(p < 0 for p in self.probs.values()):
            raise ValueError("Pauli channel probabilities must be non-negative")

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for g, p in self.probs.items():
            m = to_matrix(g)
            out += p * (m @ rho @ m)
        return out

    def ratios(self, reference: PauliString) -> Dict[PauliString, float]:
        base = self.probs[reference]
        return {g: p / base for g, p in self.probs.items()}


def predicted_channel(channel: Union[NoiseChannel, Operator], normalise: bool = False) -> PauliChannel:
    """Pauli channel left after a full twirl: p_v = sum_b weight_b |Tr(v M_b)|^2 / 4^n.

    With ``normalise`` the probabilities are rescaled to sum to one, which
    only matters for un-normalised noise operators.
    """
    if not isinstance(channel, NoiseChannel):
        channel = NoiseChannel.single(channel)
    probs: Dict[PauliString, float] = {}
    for weight, k in channel.branches():
        # Tr(vM) / 2^n is exactly the Pauli coefficient
        for v, c in as_pauli_sum(k).terms.items():
            probs[v] = probs.get(v, 0.0) + weight * abs(c) ** 2
    if normalise:
        total = sum(probs.values())
        probs = {v: p / total for v, p in probs.items()}
    return PauliChannel(channel.n, dict(sorted(probs.items())))


@dataclass
class ChoiMatrix:
    """Process matrix alpha with E(rho) = sum alpha[g, g'] g rho g'.

    Rows and columns follow ``paulis`` (canonical order of all 4^n Paulis).
    """

    n: int
    paulis: List[PauliString]
    entries: np.ndarray

    def index(self, g: PauliString) -> int:
        return self.paulis.index(g)

    def entry(self, g: PauliString, h: PauliString) -> complex:
        return complex(self.entries[self.index(g), self.index(h)])

    def diagonal(self) -> Dict[PauliString, float]:
        return {g: float(self.entries[i, i].real) for i, g in enumerate(self.paulis)}

    def offdiagonal_max(self) -> float:
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off))) if off.size else 0.0


ChannelMap = Callable[[np.ndarray], np.ndarray]


def _superoperator(channel: Union[NoiseChannel, ChannelMap], dim: int) -> np.ndarray:
    """Row-major vectorised superoperator: vec(E(rho)) = S vec(rho)."""
    if isinstance(channel, NoiseChannel):
        S = np.zeros((dim * dim, dim * dim), dtype=complex)
        for weight, k in channel.branches():
            m = as_matrix(k)
            S += weight * np.kron(m, m.conj())
        return S
    S = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1
            S[:, i * dim + j] = np.asarray(channel(unit)).reshape(-1)
    return S


def choi(channel: Union[NoiseChannel, ChannelMap], n: Optional[int] = None) -> ChoiMatrix:
    """Process matrix of a channel in the Pauli basis.

    ``channel`` is a NoiseChannel or any linear map on density matrices
    (then ``n`` is required).
    """
    if isinstance(channel, NoiseChannel):
        n = channel.n
    elif n is None:
        raise ValueError("n is required when the channel is given as a map")
    if n > CHOI_LIMIT:
        raise ValueError(f"{n} qubits exceeds the Choi limit of {CHOI_LIMIT}")
    dim = 1 << n
    S = _superoperator(channel, dim)
    # S[(i,j),(k,l)] = sum alpha g[i,k] g'[l,j]; regroup to U alpha U^T
    R = S.reshape(dim, dim, dim, dim).transpose(0, 2, 3, 1).reshape(dim * dim, dim * dim)
    paulis = all_paulis(n)
    U = np.stack([to_matrix(g).reshape(-1) for g in paulis], axis=1)
    alpha = U.conj().T @ R @ U.conj() / dim**2
    return ChoiMatrix(n, paulis, alpha)


def is_pauli_channel(c: ChoiMatrix, tol: float = PAULI_TOL) -> bool:
    return c.offdiagonal_max() <= tol


def one_gate_twirl(w: PauliString, M: Operator, rho: np.ndarray) -> np.ndarray:
    """Twirl over {I, w}: the average of M rho M^dag and (wMw) rho (wMw)^dag.

    This equals M+ rho M+^dag + M- rho M-^dag, where M+ (M-) collects the
    Pauli components of M that commute (anticommute) with w.
    """
    return exact_twirl([PauliString.identity(w.n), w], M, rho)


def nested_one_gate_twirl(generators: Sequence[PauliString], M: Operator, rho: np.ndarray) -> np.ndarray:
    """One-gate twirls applied in sequence, one per generator."""
    kraus = [_dense(M, rho)]
    for w in generators:
        p = to_matrix(w)
        kraus = [k2 for k in kraus for k2 in (k / np.sqrt(2), p @ k @ p / np.sqrt(2))]
    return sum(k @ rho @ k.conj().T for k in kraus)


def split_by_commutation(M: Operator, w: PauliString):
    """(M+, M-) as PauliSums; see :func:`one_gate_twirl`."""
    return as_pauli_sum(M).split(w)


def stabiliser_check_channel(
    s: PauliString, M: Operator, rho: np.ndarray, tol: float = 1e-10
) -> np.ndarray:
    """Noise M followed by a measurement of s whose outcome is discarded.

    ``rho`` must lie in one eigenspace of s (a code state, possibly hit by a
    Pauli error that flips the outcome).
    """
    m = _dense(M, rho)
    S = to_matrix(s)
    eye = np.eye(S.shape[0])
    projectors = [(eye + S) / 2, (eye - S) / 2]
    if not any(np.max(np.abs(P @ rho @ P - rho)) <= tol for P in projectors):
        raise ValueError(f"state is not inside an eigenspace of {s}")
    after = m @ rho @ m.conj().T
    return sum(P @ after @ P for P in projectors)


def gate_noise_twirl(
    C: np.ndarray,
    M: Operator,
    p: float,
    generators: Sequence[PauliString],
    rho: np.ndarray,
) -> np.ndarray:
    """Gate C followed by noise M with probability p, bracketed by twirl gates.

    Each w in span(generators) is realised as (C^dag w C) before the gate and
    w after the noise; the returned state is the average over all w.
    """
    C = np.asarray(C, dtype=complex)
    if C.shape != rho.shape:
        raise ValueError("gate and state dimensions differ")
    if np.max(np.abs(C.conj().T @ C - np.eye(C.shape[0]))) > UNITARY_TOL:
        raise ValueError("gate is not unitary")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    m = _dense(M, rho)
    n = C.shape[0].bit_length() - 1
    W = span(generators, n)
    out = np.zeros_like(rho, dtype=complex)
    for w in W:
        P = to_matrix(w)
        pre = C.conj().T @ P @ C
        state = pre @ rho @ pre.conj().T
        state = C @ state @ C.conj().T
        state = (1 - p) * state + p * (m @ state @ m.conj().T)
        out += P @ state @ P
    return out / len(W)
