"""Spatially localized projections (sLOCC) and CHSH-Bell analysis.

Two particles are post-selected on one being found in region L and one in
region R. The conditional state is a two-qubit pseudospin state on the basis
``|L↑,R↑>, |L↑,R↓>, |L↓,R↑>, |L↓,R↓>`` (L is the first tensor factor).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .amplitude import amplitude
from .errors import LabelFreeError, NoCoincidenceError, NumericalContractError
from .hilbert import Amplitudes, SingleParticleState, make_state
from .reduction import CollectiveBasis
from .states import ManyParticleState, normalize

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@dataclass(frozen=True, eq=False)
class SloccResult:
    state: np.ndarray
    probability: float
    overlaps: dict[str, complex] | None
    p_same_region: float

    @property
    def rho(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())


def _region(basis, region: Amplitudes) -> np.ndarray:
    v = basis.spatial_vector(region)
    n = np.linalg.norm(v)
    if n <= 1e-12:
        raise LabelFreeError("empty region")
    return v / n


def slocc_project(state: ManyParticleState, left: Amplitudes, right: Amplitudes) -> SloccResult:
    """Project a two-particle state with ``Pi_LR = sum |L s, R t><L s, R t|``.

    ``left``/``right`` name the localized spatial modes (a mode label or a
    normalized spatial amplitude map); they must be orthogonal.
    """
    basis = state.basis
    if state.n != 2:
        raise LabelFreeError(f"sLOCC projection needs two particles, got {state.n}")
    if basis.n_spins != 2:
        raise LabelFreeError("sLOCC projection needs a two-valued pseudospin")
    lv, rv = _region(basis, left), _region(basis, right)
    if abs(np.vdot(lv, rv)) > 1e-12:
        raise LabelFreeError("regions L and R overlap")
    psi = normalize(state)
    up, down = basis.spin_labels
    loc = {
        (side, s): make_state(basis, vec, s)
        for side, vec in (("L", lv), ("R", rv))
        for s in (up, down)
    }
    coeffs = np.array(
        [
            amplitude(ManyParticleState.from_slots([loc["L", s], loc["R", t]], state.eta), psi)
            for s in (up, down)
            for t in (up, down)
        ]
    )
    p = float(np.sum(np.abs(coeffs) ** 2))

    sp = [loc["L", up], loc["L", down], loc["R", up], loc["R", down]]
    coll = CollectiveBasis(sp, 2, state.eta)
    amps = coll.coordinates(psi)
    same = sum(
        abs(a) ** 2 for a, pat in zip(amps, coll.patterns) if all(i < 2 for i in pat) or all(i >= 2 for i in pat)
    )
    if p <= 1e-12:
        raise NoCoincidenceError(f"no coincidence in L and R (P_LR = {p:.3g})")
    return SloccResult(coeffs / math.sqrt(p), p, _overlaps(state, lv, rv), float(same))


def _overlaps(state: ManyParticleState, lv, rv) -> dict[str, complex] | None:
    # only for a single product ket |psi s, psi' t>
    if len(state.terms) != 1:
        return None
    fs = [slot.factor() for slot in state.terms[0].slots]
    if any(f is None for f in fs):
        return None
    (u, _), (w, _) = fs
    return {
        "l": complex(np.vdot(lv, u)),
        "l'": complex(np.vdot(lv, w)),
        "r": complex(np.vdot(rv, u)),
        "r'": complex(np.vdot(rv, w)),
    }


def _pure(state) -> np.ndarray:
    v = np.asarray(state, dtype=complex)
    if v.shape != (4,):
        raise LabelFreeError(f"expected a two-qubit 4-vector, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise LabelFreeError("two-qubit state is not normalized")
    return v


def _density(state) -> np.ndarray:
    a = np.asarray(state, dtype=complex)
    if a.shape == (4,):
        v = _pure(a)
        return np.outer(v, v.conj())
    if a.shape != (4, 4):
        raise LabelFreeError(f"expected a 4-vector or 4x4 matrix, got shape {a.shape}")
    if abs(np.trace(a) - 1.0) > 1e-9:
        raise LabelFreeError("density matrix is not normalized")
    return a


def concurrence(state) -> float:
    """``C = 2|ad - bc|`` for a normalized pure state ``(a, b, c, d)``."""
    a, b, c, d = _pure(state)
    return float(2 * abs(a * d - b * c))


@dataclass(frozen=True)
class MeasurementSetting:
    """Two unit measurement directions per side: ``(O_L, O'_L)`` and ``(O_R, O'_R)``."""

    left: tuple[np.ndarray, np.ndarray]
    right: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        for v in (*self.left, *self.right):
            v = np.asarray(v, dtype=float)
            if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise LabelFreeError(f"setting {v} is not a unit 3-vector")

    @classmethod
    def from_angles(cls, left, right) -> MeasurementSetting:
        """Directions from ``(theta, phi)`` pairs (polar angle from z)."""
        return cls(tuple(_direction(*a) for a in left), tuple(_direction(*a) for a in right))

    @classmethod
    def xz_plane(cls, left, right) -> MeasurementSetting:
        """Directions in the x-z plane from polar angles only."""
        return cls.from_angles([(t, 0.0) for t in left], [(t, 0.0) for t in right])


def _direction(theta: float, phi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def _spin_op(n) -> np.ndarray:
    return np.tensordot(np.asarray(n, dtype=float), PAULI, axes=1)


def correlation(rho: np.ndarray, a, b) -> float:
    """``<(a.σ) ⊗ (b.σ)>``."""
    return float(np.real(np.trace(rho @ np.kron(_spin_op(a), _spin_op(b)))))


def bell_value(state, settings: MeasurementSetting) -> float:
    """CHSH function ``|E(a,b) + E(a,b') + E(a',b) - E(a',b')|``."""
    rho = _density(state)
    (a, a2), (b, b2) = settings.left, settings.right
    return abs(
        correlation(rho, a, b) + correlation(rho, a, b2) + correlation(rho, a2, b) - correlation(rho, a2, b2)
    )


def correlation_tensor(state) -> np.ndarray:
    rho = _density(state)
    return np.array([[np.real(np.trace(rho @ np.kron(si, sj))) for sj in PAULI] for si in PAULI])


def horodecki_bound(state) -> float:
    """``2 sqrt(t1 + t2)`` from the two largest eigenvalues of ``T^T T``."""
    t = correlation_tensor(state)
    ev = np.sort(np.linalg.eigvalsh(t.T @ t))[::-1]
    return float(2 * math.sqrt(max(ev[0] + ev[1], 0.0)))


def bell_max(state) -> float:
    """Maximal CHSH value ``2 sqrt(1 + C^2)`` of a pure two-qubit state.

    Cross-checked against the Horodecki bound; a disagreement above 1e-8
    raises :class:`NumericalContractError`.
    """
    c = concurrence(state)
    value = 2 * math.sqrt(1 + c * c)
    h = horodecki_bound(state)
    if abs(h - value) > 1e-8:
        raise NumericalContractError(f"concurrence route {value} disagrees with Horodecki bound {h}")
    return value


def _random_unit(rng, size) -> np.ndarray:
    v = rng.normal(size=(size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def bell_max_search(state, n_samples: int = 10_000, seed: int = 0, refine: bool = True) -> float:
    """Numerical CHSH maximum: random setting quadruples, then local refinement.

    Works directly with :func:`bell_value`, independent of the correlation
    tensor used by the analytic routes.
    """
    rho = _density(state)
    rng = np.random.default_rng(seed)
    dirs = _random_unit(rng, 4 * n_samples).reshape(n_samples, 4, 3)
    # vectorised <(a.σ)⊗(b.σ)> over samples
    ops = np.einsum("skc,cij->skij", dirs, PAULI)
    def corr(i, j):
        kr = np.einsum("sab,scd->sacbd", ops[:, i], ops[:, j]).reshape(n_samples, 4, 4)
        return np.real(np.einsum("ij,sji->s", rho, kr))
    vals = np.abs(corr(0, 2) + corr(0, 3) + corr(1, 2) - corr(1, 3))
    best = int(np.argmax(vals))
    if not refine:
        return float(vals[best])

    def to_angles(v):
        return [math.acos(max(-1.0, min(1.0, v[2]))), math.atan2(v[1], v[0])]

    x0 = np.concatenate([to_angles(v) for v in dirs[best]])

    def neg(x):
        a = [_direction(x[2 * i], x[2 * i + 1]) for i in range(4)]
        return -bell_value(rho, MeasurementSetting((a[0], a[1]), (a[2], a[3])))

    res = minimize(neg, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000})
    return float(max(-res.fun, vals[best]))


def eq_state_of(basis, psi: Amplitudes, psi_prime: Amplitudes, eta) -> ManyParticleState:
    """Two independently prepared particles ``|psi ↑, psi' ↓>``."""
    up, down = basis.spin_labels[:2]
    return ManyParticleState.from_slots([make_state(basis, psi, up), make_state(basis, psi_prime, down)], eta)
