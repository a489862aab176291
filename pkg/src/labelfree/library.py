"""Named states: spin-exchanged states (SPES), the naive W superposition,
Bell-type two-particle states, and the spatial/spin factorisation test."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import LabelFreeError, NotApplicableError, NullStateError
from .hilbert import Amplitudes, ModeBasis, make_state
from .states import NULL_TOL, ManyParticleState, Statistics, normalize


@dataclass(frozen=True)
class SpesSpec:
    """Spatial modes and pseudospin pattern of a spin-exchanged state."""

    basis: ModeBasis
    modes: tuple[Amplitudes, ...]
    spins: tuple[str, ...]
    eta: Statistics

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "spins", tuple(self.spins))
        object.__setattr__(self, "eta", Statistics.parse(self.eta))
        if len(self.modes) < 2:
            raise LabelFreeError("a SPES needs at least two particles")
        if len(self.spins) != len(self.modes):
            raise LabelFreeError(f"{len(self.modes)} modes but {len(self.spins)} spins")


def _ket(basis, modes, spins, eta) -> ManyParticleState:
    return ManyParticleState.from_slots([make_state(basis, m, s) for m, s in zip(modes, spins)], eta)


def spes_terms(spec: SpesSpec) -> list[tuple[int, complex, ManyParticleState]]:
    """``(shift, weight, bare_ket)`` for every cyclic pseudospin shift.

    Shift ``s`` moves the spin in slot ``i`` to slot ``i + s``; its weight is
    ``eta**s / norm`` and null kets get weight 0.
    """
    n = len(spec.spins)
    out = []
    for s in range(n):
        spins = [spec.spins[(i - s) % n] for i in range(n)]
        ket = _ket(spec.basis, spec.modes, spins, spec.eta)
        sa = ket.self_amplitude()
        w = 0.0 if sa <= NULL_TOL else int(spec.eta) ** s / math.sqrt(sa)
        out.append((s, w, ket))
    return out


def build_spes(spec: SpesSpec) -> ManyParticleState:
    """Normalized sum over the N cyclic pseudospin shifts, each term normalized first.

    With spins ``(↑, ↓, ..., ↓)`` on separated modes this is the W state of
    identical particles; coincident modes are allowed and Pauli-forbidden
    terms simply drop out.
    """
    kept = [w * ket for _, w, ket in spes_terms(spec) if w != 0.0]
    if not kept:
        raise NullStateError("every spin-exchanged term is null; the SPES does not exist")
    total = kept[0]
    for k in kept[1:]:
        total = total + k
    return normalize(total)


def build_naive_w(
    basis: ModeBasis, modes: Sequence[Amplitudes], eta, up: str | None = None, down: str | None = None
) -> ManyParticleState:
    """Plain sum of kets with a single ``up`` walked across the slots.

    No per-term normalization and no exchange signs, so the result may be null.
    """
    up = basis.spin_labels[0] if up is None else up
    down = basis.spin_labels[1] if down is None else down
    n = len(modes)
    if n < 2:
        raise LabelFreeError("a W state needs at least two particles")
    total = None
    for i in range(n):
        spins = [up if j == i else down for j in range(n)]
        ket = _ket(basis, modes, spins, eta)
        total = ket if total is None else total + ket
    return total


def bell_pair(basis, phi1, phi2, sigma, tau, eta, alpha=1.0, beta=1.0) -> ManyParticleState:
    """``alpha|phi1 sigma, phi2 tau> + beta|phi1 tau, phi2 sigma>`` (unnormalized)."""
    return alpha * _ket(basis, (phi1, phi2), (sigma, tau), eta) + beta * _ket(basis, (phi1, phi2), (tau, sigma), eta)


def psi_pair(basis, phi1, phi2, sigma, tau, eta, alpha=1.0, beta=1.0) -> ManyParticleState:
    """``alpha|phi1 sigma, phi2 sigma> + beta|phi1 tau, phi2 tau>`` (unnormalized)."""
    return alpha * _ket(basis, (phi1, phi2), (sigma, sigma), eta) + beta * _ket(basis, (phi1, phi2), (tau, tau), eta)


def overlap_spes3_entropy(eta: int) -> float:
    """Closed-form L-region entropy of the three-particle SPES with C = L.

    ``kappa = (1 + eta)^2 / (2 sqrt 2)``; the reduced state has eigenvalues
    ``4/(8+kappa^2)`` and ``(4+kappa^2)/(8+kappa^2)``.
    """
    kappa2 = ((1 + eta) ** 2 / (2 * math.sqrt(2))) ** 2
    out = 0.0
    for p in (4 / (8 + kappa2), (4 + kappa2) / (8 + kappa2)):
        if p > 0:
            out -= p * math.log2(p)
    return out


# --- spatial / spin factorisation -------------------------------------------


@dataclass(frozen=True, eq=False)
class PairState:
    """Two-slot state evaluated with exchange sign ``gamma``.

    ``amplitude(u', v') = sum_c c (<u'|u><v'|v> + gamma <u'|v><v'|u>)``;
    ``gamma = 0`` is the plain product form.
    """

    terms: tuple[tuple[complex, np.ndarray, np.ndarray], ...]
    gamma: int

    def amplitude(self, bra_u: np.ndarray, bra_v: np.ndarray) -> complex:
        total = 0.0 + 0.0j
        for c, u, v in self.terms:
            direct = np.vdot(bra_u, u) * np.vdot(bra_v, v)
            exchange = np.vdot(bra_u, v) * np.vdot(bra_v, u)
            total += c * (direct + self.gamma * exchange)
        return complex(total)


@dataclass(frozen=True, eq=False)
class SpatialSpinFactors:
    """``coeff * spatial ⊗ spin``; ``symmetry`` is beta (+1 or -1) for Phi-type
    states and ``None`` for the always-separable Psi-type states."""

    coeff: complex
    spatial: PairState
    spin: PairState
    template: str
    symmetry: int | None

    def amplitude(self, bra: ManyParticleState) -> complex:
        """Amplitude against a product bra ``<phi1' s1', phi2' s2'|``."""
        if bra.n != 2 or len(bra.terms) != 1:
            raise NotApplicableError("expected a single-term two-particle product bra")
        t = bra.terms[0]
        f = [s.factor() for s in t.slots]
        if any(x is None for x in f):
            raise NotApplicableError("bra slots are not spatial-spin products")
        (u1, s1), (u2, s2) = f
        return complex(np.conj(t.coeff) * self.coeff * self.spatial.amplitude(u1, u2) * self.spin.amplitude(s1, s2))


def _unit_phase(v: np.ndarray, tol: float) -> tuple[complex, np.ndarray]:
    n = np.linalg.norm(v)
    k = int(np.argmax(np.abs(v) > tol * n))
    phase = v[k] / abs(v[k])
    return n * phase, v / (n * phase)


def _split_term(t, tol):
    scale = t.coeff
    spatial, spin = [], []
    for slot in t.slots:
        f = slot.factor(tol)
        if f is None:
            raise NotApplicableError("slot is not a spatial-spin product")
        a, u = _unit_phase(f[0], tol)
        scale *= a
        spatial.append(u)
        spin.append(f[1])
    return scale, spatial, spin


def _same(a, b, tol):
    return np.allclose(a, b, atol=tol, rtol=0)


def _parallel(a, b, tol):
    return abs(abs(np.vdot(a, b)) - 1.0) <= tol


def factor_spatial_spin(state: ManyParticleState, tol: float = 1e-9) -> SpatialSpinFactors | None:
    """Separate spatial and pseudospin parts of a two-particle state.

    Accepts ``alpha|phi1 s, phi2 t> + beta|phi1 t, phi2 s>`` (Phi template) and
    ``alpha|phi1 s, phi2 s> + beta|phi1 t, phi2 t>`` (Psi template), with
    ``phi1 != phi2`` and ``s != t``. Phi-type states factor only when
    ``beta/alpha = ±1`` and ``None`` is returned otherwise; Psi-type states
    always factor. Anything else raises :class:`NotApplicableError`.
    """
    terms = [t for t in state.terms if abs(t.coeff) > tol]
    if state.n != 2 or len(terms) != 2:
        raise NotApplicableError("expected a two-particle state with exactly two terms")
    eta = int(state.eta)
    ca, ua, sa = _split_term(terms[0], tol)
    cb, ub, sb = _split_term(terms[1], tol)
    if _same(ua[0], ub[1], tol) and _same(ua[1], ub[0], tol) and not _same(ua[0], ua[1], tol):
        # bring the second term to the same slot order
        ub, sb, cb = ub[::-1], sb[::-1], cb * eta
    if not (_same(ua[0], ub[0], tol) and _same(ua[1], ub[1], tol)):
        raise NotApplicableError("the two terms do not share the spatial modes")
    if _parallel(ua[0], ua[1], tol):
        raise NotApplicableError("spatial modes must differ")
    spatial_modes = (ua[0], ua[1])

    if _same(sa[0], sb[1], tol) and _same(sa[1], sb[0], tol) and not _parallel(sa[0], sa[1], tol):
        ratio = cb / ca
        for beta in (1, -1):
            if abs(ratio - beta) <= tol:
                return SpatialSpinFactors(
                    ca,
                    PairState(((1.0, *spatial_modes),), eta * beta),
                    PairState(((1.0, sa[0], sa[1]),), beta),
                    "phi",
                    beta,
                )
        return None
    if _same(sa[0], sa[1], tol) and _same(sb[0], sb[1], tol) and not _parallel(sa[0], sb[0], tol):
        spin = PairState(((ca, sa[0], sa[0]), (cb, sb[0], sb[0])), 0)
        return SpatialSpinFactors(1.0, PairState(((1.0, *spatial_modes),), eta), spin, "psi", None)
    raise NotApplicableError("pseudospins match neither the Phi nor the Psi template")
