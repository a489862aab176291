import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labelfree import (
    CollectiveBasis,
    ManyParticleState,
    ModeBasis,
    SpesSpec,
    amplitude,
    amplitude_naive,
    build_spes,
    dot,
    outcome_probability,
    partial_trace,
    states_equal,
    von_neumann_entropy,
)
from labelfree.errors import LabelFreeError, NumericalContractError, ParticleNumberError
from labelfree.reduction import DensityMatrix, identity_expectation, projection_outcomes
from labelfree.standard import reduced_spectrum, to_labeled
from labelfree.verification import random_single, random_state

SPES3_ENTROPY = math.log2(3) - 2 / 3


def kets(basis, eta, *labels):
    return ManyParticleState.from_slots([basis.ket(m, s) for m, s in labels], eta)


def spes3(basis, eta):
    return build_spes(SpesSpec(basis, ("L", "C", "R"), ("↑", "↓", "↓"), eta))


def test_dot_single_extraction(lcr):
    for eta in (1, -1):
        s = kets(lcr, eta, ("L", "↑"), ("R", "↓"))
        assert states_equal(dot([lcr.ket("L", "↑")], s), kets(lcr, eta, ("R", "↓")))
        assert states_equal(dot([lcr.ket("R", "↓")], s), eta * kets(lcr, eta, ("L", "↑")))


def test_dot_full_equals_amplitude(lcr, rng):
    for eta in (1, -1):
        for n in range(1, 5):
            bra = random_state(lcr, eta, n, rng, n_terms=1)
            ket = random_state(lcr, eta, n, rng)
            scalar = np.conj(bra.terms[0].coeff) * dot(list(bra.terms[0].slots), ket).scalar()
            assert abs(scalar - amplitude_naive(bra, ket)) <= 1e-12
            assert abs(dot(bra, ket).scalar() - amplitude(bra, ket)) <= 1e-12


def test_dot_pair_is_sequential(lcr, rng):
    # <j,k|.s removes j first, then k
    for eta in (1, -1):
        j, k = random_single(lcr, rng), random_single(lcr, rng)
        s = random_state(lcr, eta, 4, rng)
        assert states_equal(dot([j, k], s), dot([k], dot([j], s)), tol=1e-12)


def test_dot_too_many(lcr):
    with pytest.raises(ParticleNumberError):
        dot([lcr.ket("L", "↑")] * 2, kets(lcr, 1, ("L", "↑")))


def test_collective_basis(lcr):
    for eta, size in ((1, 21), (-1, 15)):
        cb = CollectiveBasis.computational(lcr, 2, eta)
        assert len(cb) == size
        ks = cb.kets()
        gram = np.array([[amplitude(a, b) for b in ks] for a in ks])
        assert np.allclose(gram, np.eye(size), atol=1e-10)
    cb = CollectiveBasis.computational(lcr, 3, 1)
    i = cb.patterns.index((0, 0, 1))
    assert cb.norms[i] == pytest.approx(math.sqrt(2))


def test_collective_basis_needs_orthonormal(lcr, rng):
    with pytest.raises(LabelFreeError):
        CollectiveBasis([random_single(lcr, rng), random_single(lcr, rng)], 1, 1)


def test_probability_two_particles(lcr):
    for eta in (1, -1):
        s = kets(lcr, eta, ("L", "↑"), ("R", "↓"))
        out = outcome_probability([lcr.ket("L", "↑")], s)
        assert out.probability == pytest.approx(0.5)
        assert out.identity_expectation == pytest.approx(2)
        assert states_equal(out.reduced, kets(lcr, eta, ("R", "↓")))
        total = sum(outcome_probability([k], s).probability for k in lcr.computational_basis())
        assert total == pytest.approx(1, abs=1e-9)


def test_probability_spes3(lcr):
    # relative to the particle found in L: 1/3; relative to all three particles: 1/9
    for eta in (1, -1):
        s = spes3(lcr, eta)
        loc = outcome_probability([lcr.ket("L", "↑")], s, sp_basis=lcr.localized_basis("L"))
        assert loc.probability == pytest.approx(1 / 3, abs=1e-12)
        full = outcome_probability([lcr.ket("L", "↑")], s)
        assert full.probability == pytest.approx(1 / 9, abs=1e-12)
        assert loc.reduced.self_amplitude() == pytest.approx(1)


def test_unnormalized_rejected(lcr):
    s = 2 * kets(lcr, 1, ("L", "↑"), ("R", "↓"))
    with pytest.raises(LabelFreeError):
        partial_trace(s, 1)
    with pytest.raises(ParticleNumberError):
        partial_trace(s / 2, 2)


def test_trace_of_product(lcr):
    for eta in (1, -1):
        rho = partial_trace(kets(lcr, eta, ("L", "↑"), ("R", "↓")), 1)
        labels, sub = rho.support()
        assert sorted(labels) == ["|L↑>", "|R↓>"]
        assert np.allclose(sub, np.eye(2) / 2, atol=1e-12)
        assert von_neumann_entropy(rho) == pytest.approx(1)


def test_spes3_entropy(lcr):
    for eta in (1, -1):
        rho = partial_trace(spes3(lcr, eta), 1, sp_basis=lcr.localized_basis("L"))
        assert abs(von_neumann_entropy(rho) - SPES3_ENTROPY) <= 1e-9
        assert np.allclose(sorted(rho.eigenvalues())[-2:], [1 / 3, 2 / 3])


def test_entropy_of_pure_state(lcr):
    cb = CollectiveBasis.computational(lcr, 1, 1)
    m = np.zeros((6, 6))
    m[2, 2] = 1
    assert von_neumann_entropy(DensityMatrix(cb, m)) == 0


def test_entropy_rejects_non_psd():
    with pytest.raises(NumericalContractError):
        von_neumann_entropy(np.diag([1.5, -0.5]))
    with pytest.raises(NumericalContractError):
        DensityMatrix(None, np.diag([1.5, -0.5])).validate()


def test_identity_expectation_counts_particles(lcr, rng):
    for eta in (1, -1):
        s = random_state(lcr, eta, 3, rng)
        assert identity_expectation(s, 1) == pytest.approx(3)
        # (1/2!) times the C(3,2) = 3 collective-basis projector weights
        assert identity_expectation(s, 2) == pytest.approx(1.5)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, -1]), st.integers(2, 5), st.sampled_from([1, 2]))
def test_partial_trace_contract(seed, eta, n, m):
    if m >= n:
        m = 1
    rng = np.random.default_rng(seed)
    basis = ModeBasis(("A", "B", "C"))
    s = random_state(basis, eta, n, rng)
    rho = partial_trace(s, m)
    assert abs(rho.trace() - 1) <= 1e-9
    assert rho.hermiticity_error() <= 1e-10
    assert rho.eigenvalues().min() >= -1e-9
    _, _, probs = projection_outcomes(s, m)
    assert abs(probs.sum() - 1) <= 1e-9


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, -1]))
def test_iterated_trace_matches_labeled(seed, eta):
    rng = np.random.default_rng(seed)
    basis = ModeBasis(("A", "B"))
    s = random_state(basis, eta, 3, rng)
    nsa = np.sort(partial_trace(s, 2).eigenvalues())[::-1]
    sa = reduced_spectrum(to_labeled(s), 2)
    assert np.allclose(nsa, sa[: len(nsa)], atol=1e-10)


def test_complementary_entropies_reported(lcr, rng):
    # not asserted as a law: record S(rho^(N-M)) against S(rho^(M)) for a few states
    rows = []
    for eta in (1, -1):
        for _ in range(3):
            s = random_state(lcr, eta, 3, rng)
            a = von_neumann_entropy(partial_trace(s, 1))
            b = von_neumann_entropy(partial_trace(s, 2))
            rows.append((eta, a, b))
    for eta, a, b in rows:
        print(f"eta={eta:+d}  S(rho^(2))={a:.6f}  S(rho^(1))={b:.6f}  diff={a - b:+.3e}")
    assert all(np.isfinite([a, b]).all() for _, a, b in rows)
