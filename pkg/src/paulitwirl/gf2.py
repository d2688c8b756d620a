"""GF(2) linear algebra on Python ints used as bit vectors."""

from __future__ import annotations

from typing import List, Sequence, Tuple


class InconsistentSystem(ValueError):
    """Raised when a GF(2) linear system has no solution."""


def lowest_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def parity(v: int) -> int:
    return v.bit_count() & 1


def rank(rows: Sequence[int]) -> int:
    pivots: List[Tuple[int, int]] = []
    for r in rows:
        for p, pr in pivots:
            if (r >> p) & 1:
                r ^= pr
        if r:
            pivots.append((lowest_bit(r), r))
    return len(pivots)


def solve(
    rows: Sequence[int], rhs: Sequence[int], nbits: int
) -> Tuple[int, List[int], int]:
    """Solve ``parity(row & x) == b`` for every (row, b) pair.

    Rows are processed in order and each pivot is the lowest set bit of the
    reduced row, so the particular solution (free variables set to zero) is
    deterministic.

    Returns ``(particular, nullspace_basis, rank)``.
    """
    if len(rows) != len(rhs):
        raise ValueError("rows and rhs differ in length")
    pivots: List[List[int]] = []  # [pivot_bit, row, rhs_bit]
    for r, b in zip(rows, rhs):
        b &= 1
        for p, pr, pb in pivots:
            if (r >> p) & 1:
                r ^= pr
                b ^= pb
        if r == 0:
            if b:
                raise InconsistentSystem("contradictory GF(2) constraints")
            continue
        p = lowest_bit(r)
        for entry in pivots:
            if (entry[1] >> p) & 1:
                entry[1] ^= r
                entry[2] ^= b
        pivots.append([p, r, b])

    particular = 0
    for p, _, b in pivots:
        if b:
            particular |= 1 << p
    pivot_bits = {p for p, _, _ in pivots}
    nullspace = []
    for f in range(nbits):
        if f in pivot_bits:
            continue
        v = 1 << f
        for p, pr, _ in pivots:
            if (pr >> f) & 1:
                v |= 1 << p
        nullspace.append(v)
    return particular, nullspace, len(pivots)
