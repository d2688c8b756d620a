import itertools

import pytest

from paulitwirl import gf2


def brute_solutions(rows, rhs, nbits):
    return {
        x for x in range(1 << nbits)
        if all(gf2.parity(r & x) == b for r, b in zip(rows, rhs))
    }


def test_solve_matches_enumeration(rng):
    for _ in range(300):
        nbits = int(rng.integers(1, 7))
        k = int(rng.integers(0, nbits + 2))
        rows = [int(rng.integers(1 << nbits)) for _ in range(k)]
        rhs = [int(rng.integers(2)) for _ in range(k)]
        expected = brute_solutions(rows, rhs, nbits)
        if not expected:
            with pytest.raises(gf2.InconsistentSystem):
                gf2.solve(rows, rhs, nbits)
            continue
        particular, null, rank = gf2.solve(rows, rhs, nbits)
        coset = {
            particular ^ _xor(combo)
            for r in range(len(null) + 1)
            for combo in itertools.combinations(null, r)
        }
        assert coset == expected
        assert rank == gf2.rank(rows)
        assert len(expected) == 2 ** (nbits - rank)


def _xor(values):
    out = 0
    for v in values:
        out ^= v
    return out


def test_rank_small():
    assert gf2.rank([]) == 0
    assert gf2.rank([0b11, 0b01, 0b10]) == 2
    assert gf2.rank([0]) == 0


def test_particular_solution_sets_free_bits_to_zero():
    particular, null, rank = gf2.solve([0b011], [1], 2)
    assert particular == 0b001
    assert null == [0b011]
