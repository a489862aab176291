import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from labelfree import ModeBasis, SingleParticleState, gram_matrix, inner1, make_state
from labelfree.errors import BasisMismatchError, DegenerateStateError, LabelError
from labelfree.hilbert import check_orthonormal

BASIS = ModeBasis(("L", "C", "R"))

cplx = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
vectors = st.lists(cplx, min_size=BASIS.dimension, max_size=BASIS.dimension).map(
    lambda v: SingleParticleState(BASIS, np.array(v))
)


def test_basis_layout(lcr):
    assert lcr.dimension == 6
    assert lcr.index("C", "↓") == 3
    assert lcr.label(3) == "C↓"
    check_orthonormal(lcr.computational_basis())


def test_duplicate_labels_rejected():
    with pytest.raises(LabelError):
        ModeBasis(("A", "A"))
    with pytest.raises(LabelError):
        ModeBasis(())


def test_basis_overlaps(lcr):
    assert inner1(lcr.ket("L", "↑"), lcr.ket("L", "↑")) == 1
    assert inner1(lcr.ket("L", "↑"), lcr.ket("R", "↓")) == 0


def test_superposition_overlap(lcr):
    psi = make_state(lcr, {"L": 1 / math.sqrt(2), "R": 1 / math.sqrt(2)}, "↑")
    assert inner1(lcr.ket("L", "↑"), psi) == pytest.approx(1 / math.sqrt(2))
    assert inner1(lcr.ket("L", "↓"), psi) == 0


def test_make_state_product(lcr):
    s = make_state(lcr, {"L": 0.6, "C": 0.8}, {"↑": 1})
    assert s.norm() == pytest.approx(1.0)
    assert s.coeffs[lcr.index("C", "↑")] == pytest.approx(0.8)
    assert np.array_equal(make_state(lcr, "L", "↑").coeffs, lcr.ket("L", "↑").coeffs)


def test_make_state_errors(lcr):
    with pytest.raises(DegenerateStateError):
        make_state(lcr, {"L": 0}, "↑")
    with pytest.raises(LabelError):
        make_state(lcr, {"X": 1}, "↑")
    with pytest.raises(LabelError):
        make_state(lcr, "L", "up")


def test_basis_mismatch(lcr, lr):
    with pytest.raises(BasisMismatchError):
        inner1(lcr.ket("L", "↑"), lr.ket("L", "↑"))


def test_immutable(lcr):
    s = lcr.ket("L", "↑")
    with pytest.raises(ValueError):
        s.coeffs[0] = 2


def test_factor_recovers_spatial_and_spin(lcr):
    s = make_state(lcr, {"L": 0.6j, "R": 0.8}, {"↑": 1, "↓": 1j})
    spatial, spin = s.factor()
    assert np.allclose(np.outer(spatial, spin).reshape(-1), s.coeffs)
    assert make_state(lcr, "L", "↑").factor() is not None
    entangled = lcr.ket("L", "↑") + lcr.ket("R", "↓")
    assert entangled.factor() is None


@given(vectors, vectors)
def test_conjugate_symmetry(a, b):
    assert abs(inner1(a, b) - np.conj(inner1(b, a))) <= 1e-12 * (1 + a.norm() * b.norm())


@given(vectors, vectors, vectors, cplx, cplx)
def test_linearity_in_ket(a, b, c, x, y):
    lhs = inner1(a, b * x + c * y)
    rhs = x * inner1(a, b) + y * inner1(a, c)
    assert abs(lhs - rhs) <= 1e-12 * (1 + a.norm() * (abs(x) * b.norm() + abs(y) * c.norm()))


@settings(max_examples=50)
@given(st.lists(vectors, min_size=1, max_size=6))
def test_gram_psd(states):
    g = gram_matrix(states)
    assert np.allclose(g, g.conj().T, atol=1e-12)
    scale = max(1.0, float(np.max(np.abs(g))))
    assert np.linalg.eigvalsh(g).min() >= -1e-10 * scale
