"""Plain-text noise specification format.

Grammar (``#`` starts a comment, blank lines separate Kraus blocks)::

    qubits 8                # optional; fixes n for sparse literals
    weight 0.5              # optional first line of a block
    0.70710678 0.0 ZX       # re im PAULI, dense literal (qubit 1 first)
    1 0 X2 X5 X6 X8         # re im PAULI, sparse 1-based literal

    dense 1                 # dense block: 2 * 4^n numbers follow,
    0 0  1 0                # re/im pairs in row-major order
    1 0  0 0

Without a ``qubits`` line the qubit count comes from dense literals or
``dense`` headers, else from the highest sparse index in the file. Repeated
literals in one block are summed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .channels import DenseOperator, NoiseChannel, PauliSum
from .pauli import MAX_QUBITS, PauliString, parse_pauli


class NoiseSpecError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class _Block:
    start: int
    weight: Optional[float] = None
    dense_n: Optional[int] = None
    terms: List[Tuple[int, complex, str]] = field(default_factory=list)
    numbers: List[Tuple[int, float]] = field(default_factory=list)


def _number(tok: str, line: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise NoiseSpecError(f"expected a number, got {tok!r}", line) from None


def _split_blocks(text: str) -> Tuple[List[_Block], Optional[Tuple[int, int]]]:
    blocks: List[_Block] = []
    current: Optional[_Block] = None
    qubits: Optional[Tuple[int, int]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            current = None
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if head == "qubits":
            if blocks or current is not None:
                raise NoiseSpecError("'qubits' must precede all Kraus blocks", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise NoiseSpecError("expected 'qubits <n>'", lineno)
            qubits = (int(tokens[1]), lineno)
            continue
        if head in ("weight", "dense"):
            if current is not None and (current.terms or current.numbers or current.dense_n is not None):
                raise NoiseSpecError(f"'{head}' must start a block; separate blocks with a blank line", lineno)
            if current is None:
                current = _Block(lineno)
                blocks.append(current)
            if len(tokens) != 2:
                raise NoiseSpecError(f"expected '{head} <value>'", lineno)
            if head == "weight":
                if current.weight is not None:
                    raise NoiseSpecError("duplicate weight line", lineno)
                current.weight = _number(tokens[1], lineno)
                if current.weight < 0:
                    raise NoiseSpecError("weight must be non-negative", lineno)
            else:
                if not tokens[1].isdigit() or int(tokens[1]) < 1:
                    raise NoiseSpecError("expected 'dense <n>' with n >= 1", lineno)
                current.dense_n = int(tokens[1])
            continue
        if current is None:
            current = _Block(lineno)
            blocks.append(current)
        if current.dense_n is not None:
            current.numbers.extend((lineno, _number(t, lineno)) for t in tokens)
            continue
        if len(tokens) < 3:
            raise NoiseSpecError("expected 're im PAULI'", lineno)
        coef = complex(_number(tokens[0], lineno), _number(tokens[1], lineno))
        current.terms.append((lineno, coef, " ".join(tokens[2:])))
    return blocks, qubits


def parse_noise_spec(text: str) -> NoiseChannel:
    blocks, qubits = _split_blocks(text)
    if not blocks:
        raise NoiseSpecError("noise specification contains no Kraus operators")

    # every source that fixes n, with the line it came from
    fixed: Optional[Tuple[int, int]] = qubits
    sparse_top: Optional[Tuple[int, int]] = None

    def pin(n: int, line: int) -> None:
        nonlocal fixed
        if fixed is None:
            fixed = (n, line)
        elif fixed[0] != n:
            raise NoiseSpecError(
                f"{n} qubits conflicts with {fixed[0]} qubits on line {fixed[1]}", line
            )

    for b in blocks:
        if b.dense_n is not None:
            pin(b.dense_n, b.start)
        for line, _, lit in b.terms:
            toks = lit.split()
            if len(toks) == 1 and not any(ch.isdigit() for ch in toks[0]):
                pin(len(toks[0]), line)
            else:
                try:
                    top = parse_pauli(lit).n
                except ValueError as exc:
                    raise NoiseSpecError(str(exc), line) from None
                if sparse_top is None or top > sparse_top[0]:
                    sparse_top = (top, line)
    if fixed is None:
        fixed = sparse_top
    n, n_line = fixed
    if not 1 <= n <= MAX_QUBITS:
        raise NoiseSpecError(f"qubit count {n} out of range", n_line)
    if sparse_top is not None and sparse_top[0] > n:
        raise NoiseSpecError(
            f"qubit index {sparse_top[0]} exceeds the {n} qubits fixed on line {n_line}", sparse_top[1]
        )

    kraus = []
    for b in blocks:
        if b.dense_n is not None:
            dim = 1 << n
            if len(b.numbers) != 2 * dim * dim:
                raise NoiseSpecError(
                    f"dense block needs {2 * dim * dim} numbers, found {len(b.numbers)}", b.start
                )
            vals = np.array([v for _, v in b.numbers])
            kraus.append(DenseOperator((vals[0::2] + 1j * vals[1::2]).reshape(dim, dim)))
            continue
        if not b.terms:
            raise NoiseSpecError("block has no terms", b.start)
        items = []
        for line, coef, lit in b.terms:
            try:
                items.append((coef, parse_pauli(lit, n)))
            except ValueError as exc:
                raise NoiseSpecError(str(exc), line) from None
        kraus.append(PauliSum.from_list(items, n))
    weights = None
    if any(b.weight is not None for b in blocks):
        weights = [1.0 if b.weight is None else b.weight for b in blocks]
    return NoiseChannel(kraus, weights)


def render_noise_spec(channel: NoiseChannel) -> str:
    """Text form that :func:`parse_noise_spec` reads back exactly."""
    lines = [f"qubits {channel.n}"]
    for i, k in enumerate(channel.kraus):
        lines.append("")
        if channel.weights is not None:
            lines.append(f"weight {float(channel.weights[i])!r}")
        if isinstance(k, PauliSum):
            for p, c in k.terms.items():
                lines.append(f"{float(c.real)!r} {float(c.imag)!r} {p.label}")
            if not k.terms:
                lines.append(f"0.0 0.0 {PauliString.identity(channel.n).label}")
        else:
            lines.append(f"dense {channel.n}")
            for row in k.matrix:
                lines.append(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row))
    return "\n".join(lines) + "\n"
