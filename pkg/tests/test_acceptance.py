"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints a
PASS/FAIL line for every criterion.
"""

import itertools
import math

import numpy as np
import pytest

from paulitwirl.builder import (
    build_twirl_plan,
    full_pauli_baseline,
    generator_table,
    quotient_table,
    substitute_stabilisers,
    verify_condition,
)
from paulitwirl.channels import NoiseChannel, PauliSum
from paulitwirl.pauli import PauliString, all_paulis, span, star, to_matrix, zeta
from paulitwirl.sim import (
    choi,
    exact_twirl,
    gate_noise_twirl,
    nested_one_gate_twirl,
    one_gate_twirl,
    predicted_channel,
    random_density_matrix,
    random_twirl,
    stabiliser_check_channel,
    trace_distance,
    twirled_channel,
)

from conftest import P, random_pauli_sum

acceptance = pytest.mark.acceptance


def max_abs(a, b):
    return float(np.max(np.abs(a - b)))


@acceptance(1, "two-qubit example end to end")
def test_two_qubit_example(two_qubit_noise):
    plan = build_twirl_plan(two_qubit_noise)
    W = plan.twirling_set()
    assert len(plan.twirl_generators) == 3
    assert len(W) == 8

    achieved = plan.achieved_table()
    assert [c.label for c in achieved.col_labels] == ["IX", "IZ", "YX", "ZX"]
    assert achieved.entries.tolist() == [[1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]]

    pred = predicted_channel(two_qubit_noise)
    ratios = pred.ratios(P("IX"))
    expected = dict(zip(["IX", "IZ", "YX", "ZX", "YY"], [1, 1, 1, 0.5, 1]))
    assert set(ratios) == {P(s) for s in expected}
    for s, r in expected.items():
        assert abs(ratios[P(s)] - r) < 1e-10

    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(20):
        rho = random_density_matrix(2, rng)
        worst = max(worst, max_abs(exact_twirl(W, two_qubit_noise, rho), pred.apply(rho)))
    print(f"two-qubit state residual {worst:.2e}")
    assert worst < 1e-10


@acceptance(2, "eight-qubit global field end to end")
def test_global_field_example(global_field_noise):
    plan = build_twirl_plan(global_field_noise)
    diag = plan.diagnostics()
    assert diag["size_W_tilde"] == 3
    assert len(full_pauli_baseline(8)) == diag["baseline_generators"] == 16
    assert len(plan.twirl_generators) == math.log2(8)

    V, W = plan.basis, plan.twirling_set()
    pairs = list(itertools.combinations(V, 2))
    assert len(pairs) == 28
    for a, b in pairs:
        assert sum(zeta(w, star(a, b)) for w in W) == 0
    assert verify_condition(W, V)

    pred = predicted_channel(global_field_noise)
    assert all(abs(p - 1 / 8) < 1e-15 for p in pred.probs.values())
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(5):
        rho = random_density_matrix(8, rng)
        worst = max(worst, max_abs(exact_twirl(W, global_field_noise, rho), pred.apply(rho)))
    print(f"eight-qubit state residual {worst:.2e}")
    assert worst < 1e-8


@acceptance(3, "random single-operator property suite")
def test_random_property_suite():
    rng = np.random.default_rng(303)
    worst_off = worst_diag = 0.0
    for _ in range(200):
        n = int(rng.choice([1, 2, 3]))
        terms = int(rng.integers(2, min(10, 4**n) + 1))
        M = random_pauli_sum(rng, n, terms)
        plan = build_twirl_plan(M)
        V, k = plan.basis, len(plan.twirl_generators)
        assert verify_condition(plan.twirling_set(), V).ok
        assert math.ceil(math.log2(len(V))) <= k <= len(plan.generating)

        c = choi(twirled_channel(plan.twirling_set(), M))
        pred = predicted_channel(M)
        worst_off = max(worst_off, c.offdiagonal_max())
        worst_diag = max(worst_diag, max(abs(v - pred.probs.get(g, 0.0)) for g, v in c.diagonal().items()))
    print(f"off-diagonal {worst_off:.2e}, diagonal {worst_diag:.2e}")
    assert worst_off < 1e-10
    assert worst_diag < 1e-10


@acceptance(4, "symplectic algebra agrees with dense matrices")
def test_symplectic_oracle():
    G = all_paulis(2)
    count = 0
    for a, b in itertools.product(G, repeat=2):
        ma, mb = to_matrix(a), to_matrix(b)
        commute = np.array_equal(ma @ mb, mb @ ma)
        anticommute = np.array_equal(ma @ mb, -(mb @ ma))
        assert commute != anticommute
        assert zeta(a, b) == (1 if commute else -1)
        prod, target = ma @ mb, to_matrix(star(a, b))
        assert any(np.array_equal(prod, ph * target) for ph in (1, -1, 1j, -1j))
        count += 1
    assert count == 256


@acceptance(5, "nested one-gate twirls equal the exact twirl")
def test_nested_equals_exact():
    rng = np.random.default_rng(505)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 3))
        M = random_pauli_sum(rng, n, int(rng.integers(2, 4**n + 1)))
        plan = build_twirl_plan(M)
        rho = random_density_matrix(n, rng)
        a = nested_one_gate_twirl(plan.twirl_generators, M, rho)
        b = exact_twirl(span(plan.twirl_generators, n), M, rho)
        worst = max(worst, max_abs(a, b))
    print(f"nested vs exact residual {worst:.2e}")
    assert worst < 1e-12


@acceptance(6, "stabiliser check acts as a one-gate twirl")
def test_stabiliser_check_equivalence():
    M = PauliSum.from_list([(1, "I"), (1, "X"), (1, "Y"), (1, "Z")]).normalised()
    ket0 = np.array([[1, 0], [0, 0]], dtype=complex)
    X = to_matrix(P("X"))
    for rho in (ket0, X @ ket0 @ X):
        residual = max_abs(stabiliser_check_channel(P("Z"), M, rho), one_gate_twirl(P("Z"), M, rho))
        assert residual < 1e-12
    plan = build_twirl_plan(M)
    assert set(plan.twirl_generators) == {P("X"), P("Z")}
    assert substitute_stabilisers([P("X"), P("Z")], [P("Z")]).active == [P("X")]
    assert substitute_stabilisers(plan, [P("Z")]).active == [P("X")]


@acceptance(7, "twirling around a noisy CNOT")
def test_gate_noise_twirl(two_qubit_noise):
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    p = 0.1
    plan = build_twirl_plan(two_qubit_noise)
    pred = predicted_channel(two_qubit_noise)
    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(10):
        rho = random_density_matrix(2, rng)
        ideal = cnot @ rho @ cnot.conj().T
        expected = (1 - p) * ideal + p * pred.apply(ideal)
        got = gate_noise_twirl(cnot, two_qubit_noise, p, plan.twirl_generators, rho)
        worst = max(worst, max_abs(got, expected))
    print(f"gate twirl residual {worst:.2e}")
    assert worst < 1e-10


@acceptance(8, "generator and quotient table identities")
def test_table_identities():
    for N in range(0, 5):
        gen = generator_table(N)
        assert gen.entries.tolist() == [[1 - 2 * (i == j) for j in range(N)] for i in range(N)]

        quo = quotient_table(N)
        index = {h: j for j, h in enumerate(quo.col_labels)}
        col_sum = quo.entries.sum(axis=0)
        for h, j in index.items():
            assert int(col_sum[j]) == (2**N if h.mask == 0 else 0)
        for a, b in itertools.permutations(quo.col_labels, 2):
            assert int(col_sum[index[a * b]]) == 0
            # composition: the column of a*b is the elementwise product
            assert np.array_equal(quo.entries[:, index[a * b]], quo.entries[:, index[a]] * quo.entries[:, index[b]])


@acceptance(9, "random twirl converges to the exact twirl")
def test_random_twirl_convergence(two_qubit_noise):
    plan = build_twirl_plan(two_qubit_noise)
    W = plan.twirling_set()
    rho = random_density_matrix(2, np.random.default_rng(909))
    exact = exact_twirl(W, two_qubit_noise, rho)

    def mean_distance(samples):
        return float(np.mean([trace_distance(random_twirl(W, two_qubit_noise, rho, samples, seed=s), exact) for s in range(5)]))

    large, small = mean_distance(10_000), mean_distance(100)
    print(f"mean trace distance: 1e4 samples {large:.4f}, 1e2 samples {small:.4f}")
    assert large < 0.05
    assert small > large
