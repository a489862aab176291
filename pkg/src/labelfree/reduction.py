"""Generalised dot products, projective measurements and partial traces.

``dot(<b_1..b_M|, |1..N>)`` removes M particles from an N-particle ket. For a
selection of positions ``p_1 < ... < p_M`` the removed block is brought to the
front (sign ``eta^(sum p_i - sum i)``) and contracted with the bra through the
M-particle amplitude. For M = 1 and M = 2 this is the familiar single and pair
extraction; for M = N it is the full amplitude.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .amplitude import amplitude, overlap_kernel, overlap_kernel_batch, overlap_matrix
from .errors import (
    BasisMismatchError,
    LabelFreeError,
    NullStateError,
    NumericalContractError,
    ParticleNumberError,
)
from .hilbert import SingleParticleState, check_orthonormal
from .states import ElementaryKet, ManyParticleState, Statistics

PROB_TOL = 1e-12
NORM_TOL = 1e-9


def _bra_terms(bra, ket: ManyParticleState) -> tuple[int, list[tuple[complex, np.ndarray]]]:
    if isinstance(bra, ManyParticleState):
        if bra.eta != ket.eta:
            raise LabelFreeError("dot product between different statistics")
        if bra.basis != ket.basis:
            raise BasisMismatchError("dot product across different bases")
        return bra.n, [(np.conj(c), m) for c, m in bra.arrays]
    slots = list(bra)
    for s in slots:
        if s.basis != ket.basis:
            raise BasisMismatchError("dot product across different bases")
    m = np.array([s.coeffs for s in slots]) if slots else np.zeros((0, ket.basis.dimension))
    return len(slots), [(1.0 + 0.0j, m)]


def dot(bra, ket: ManyParticleState) -> ManyParticleState:
    """Project ``ket`` (N particles) on an M-particle bra, giving N - M particles.

    ``bra`` is a list of single-particle states ``<b_1, ..., b_M|`` or an
    M-particle :class:`ManyParticleState` (its coefficients are conjugated).
    Equivalent to applying ``a(b_1)`` first, then ``a(b_2)``, ... ``a(b_M)``.
    """
    m, bra_terms = _bra_terms(bra, ket)
    n = ket.n
    if m > n:
        raise ParticleNumberError(f"cannot project a {n}-particle ket on {m} particles")
    eta = int(ket.eta)
    base = m * (m - 1) // 2
    selections = list(itertools.combinations(range(n), m))
    terms = []
    for cb, mb in bra_terms:
        for t, (ck, mk) in zip(ket.terms, ket.arrays):
            o = overlap_matrix(mb, mk)
            for sel in selections:
                amp = overlap_kernel(o[:, sel], eta)
                if amp == 0:
                    continue
                sign = 1 if eta == 1 or (sum(sel) - base) % 2 == 0 else -1
                rest = tuple(s for i, s in enumerate(t.slots) if i not in sel)
                terms.append(ElementaryKet(cb * ck * sign * amp, rest))
    return ManyParticleState(ket.basis, ket.eta, n - m, tuple(terms))


@dataclass(frozen=True, eq=False)
class CollectiveBasis:
    """Orthonormal M-particle basis built from occupation patterns.

    ``patterns[i]`` lists indices into ``sp_basis`` (sorted, repetitions only
    for bosons); ``norms[i]`` is the constant dividing the bare ket.
    """

    sp_basis: tuple[SingleParticleState, ...]
    m: int
    eta: Statistics
    patterns: tuple[tuple[int, ...], ...] = field(init=False)
    norms: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sp_basis", tuple(self.sp_basis))
        object.__setattr__(self, "eta", Statistics.parse(self.eta))
        if not self.sp_basis:
            raise LabelFreeError("empty single-particle basis")
        check_orthonormal(self.sp_basis)
        d = len(self.sp_basis)
        if self.eta == Statistics.FERMION:
            pats = tuple(itertools.combinations(range(d), self.m))
            norms = tuple(1.0 for _ in pats)
        else:
            pats = tuple(itertools.combinations_with_replacement(range(d), self.m))
            norms = tuple(
                math.sqrt(math.prod(math.factorial(p.count(i)) for i in set(p))) for p in pats
            )
        object.__setattr__(self, "patterns", pats)
        object.__setattr__(self, "norms", norms)

    @classmethod
    def computational(cls, basis, m: int, eta) -> CollectiveBasis:
        return cls(tuple(basis.computational_basis()), m, eta)

    @property
    def basis(self):
        return self.sp_basis[0].basis

    def __len__(self) -> int:
        return len(self.patterns)

    def ket(self, i: int) -> ManyParticleState:
        slots = tuple(self.sp_basis[j] for j in self.patterns[i])
        return ManyParticleState(self.basis, self.eta, self.m, (ElementaryKet(1.0 / self.norms[i], slots),))

    def kets(self) -> list[ManyParticleState]:
        return [self.ket(i) for i in range(len(self))]

    def label(self, i: int) -> str:
        names = []
        for j in self.patterns[i]:
            c = self.sp_basis[j].coeffs
            nz = np.flatnonzero(np.abs(c) > 1e-12)
            if len(nz) == 1 and abs(abs(c[nz[0]]) - 1) < 1e-12:
                names.append(self.basis.label(int(nz[0])))
            else:
                names.append(f"e{j}")
        return "|" + ",".join(names) + ">"

    @cached_property
    def _index(self) -> tuple[np.ndarray, np.ndarray]:
        pats = np.array(self.patterns, dtype=int).reshape(len(self.patterns), self.m)
        return pats, np.array(self.norms)

    def coordinates(self, state: ManyParticleState) -> np.ndarray:
        """Expansion coefficients ``<b_i|state>``."""
        if state.n != self.m:
            raise ParticleNumberError(f"{state.n}-particle state on an {self.m}-particle basis")
        sp = np.array([s.coeffs for s in self.sp_basis])
        pats, norms = self._index
        out = np.zeros(len(self), dtype=complex)
        for c, mk in state.arrays:
            o = sp.conj() @ mk.T  # rows: sp basis, cols: slots
            out += c * overlap_kernel_batch(o[pats], int(self.eta))
        return out / norms


@dataclass(frozen=True)
class Outcome:
    """Result of projecting a state onto one collective basis element."""

    probability: float
    projector_expectation: float
    identity_expectation: float
    reduced: ManyParticleState | None


def _check_normalized(state: ManyParticleState) -> None:
    sa = state.self_amplitude()
    if not np.isfinite(sa):
        raise NumericalContractError("state self-amplitude is not finite")
    if abs(sa - 1.0) > NORM_TOL:
        raise LabelFreeError(f"state must be normalized (self-amplitude {sa:.12g})")


def _projector_expectations(state: ManyParticleState, coll: CollectiveBasis):
    residues = [dot(k, state) for k in coll.kets()]
    return residues, np.array([r.self_amplitude() for r in residues])


def identity_expectation(state: ManyParticleState, m: int, sp_basis=None) -> float:
    """``<I^(M)> = (1/M!) sum_k <Pi_k>`` over the collective basis of ``sp_basis``."""
    sp = tuple(sp_basis) if sp_basis is not None else tuple(state.basis.computational_basis())
    _, expect = _projector_expectations(state, CollectiveBasis(sp, m, state.eta))
    return float(expect.sum()) / math.factorial(m)


def outcome_probability(
    proj_slots: Sequence[SingleParticleState],
    state: ManyParticleState,
    sp_basis: Sequence[SingleParticleState] | None = None,
) -> Outcome:
    """Probability of finding M particles in ``|proj_slots>`` and the conditional state.

    ``p = (1/M!) <Pi> / <I^(M)>`` where the identity expectation is summed over
    the collective basis built from ``sp_basis`` (default: the complete
    computational basis). ``reduced`` is ``None`` when ``p`` is below 1e-12.
    """
    _check_normalized(state)
    proj_slots = list(proj_slots)
    m = len(proj_slots)
    if not 1 <= m <= state.n:
        raise ParticleNumberError(f"cannot project {m} particles out of {state.n}")
    bare = ManyParticleState.from_slots(proj_slots, state.eta)
    nk2 = bare.self_amplitude()
    if nk2 <= PROB_TOL:
        raise NullStateError("projection ket is null (repeated fermionic state)")
    k = bare / math.sqrt(nk2)
    residue = dot(k, state)
    pi = residue.self_amplitude()
    ident = identity_expectation(state, m, sp_basis)
    if ident <= PROB_TOL:
        raise NullStateError("no weight in the span of the measured basis")
    p = pi / math.factorial(m) / ident
    reduced = residue / math.sqrt(pi) if p > PROB_TOL else None
    return Outcome(p, pi, ident, reduced)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian matrix expressed on an explicit :class:`CollectiveBasis`."""

    basis: CollectiveBasis
    matrix: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def validate(self, trace_tol=1e-9, herm_tol=1e-10, psd_tol=1e-9) -> DensityMatrix:
        if not np.all(np.isfinite(self.matrix)):
            raise NumericalContractError("density matrix has non-finite entries")
        if self.hermiticity_error() > herm_tol:
            raise NumericalContractError(f"density matrix not Hermitian ({self.hermiticity_error():.3g})")
        if abs(self.trace() - 1.0) > trace_tol:
            raise NumericalContractError(f"density matrix trace {self.trace():.12g} != 1")
        lo = float(self.eigenvalues().min(initial=0.0))
        if lo < -psd_tol:
            raise NumericalContractError(f"density matrix not PSD (min eigenvalue {lo:.3g})")
        return self

    def support(self, tol: float = 1e-12) -> tuple[list[str], np.ndarray]:
        """Labels and sub-matrix restricted to basis elements with non-zero weight."""
        keep = np.flatnonzero(np.abs(np.diag(self.matrix)) > tol)
        labels = [self.basis.label(int(i)) for i in keep]
        return labels, self.matrix[np.ix_(keep, keep)]


def projection_outcomes(state: ManyParticleState, m: int, sp_basis=None):
    """All ``(p_k, reduced_k)`` over the collective M-particle basis of ``sp_basis``."""
    _check_normalized(state)
    if not 1 <= m < state.n:
        raise ParticleNumberError(f"partial trace needs 1 <= M < N, got M={m}, N={state.n}")
    sp = tuple(sp_basis) if sp_basis is not None else tuple(state.basis.computational_basis())
    coll = CollectiveBasis(sp, m, state.eta)
    residues, expect = _projector_expectations(state, coll)
    total = float(expect.sum())
    if total <= PROB_TOL:
        raise NullStateError("no particle weight in the traced single-particle subspace")
    return coll, residues, expect / total


def partial_trace(state: ManyParticleState, m: int, sp_basis=None, out_basis=None) -> DensityMatrix:
    """M-particle partial trace of a normalized pure state.

    Traces over the collective basis generated by ``sp_basis`` (default: the
    full computational basis; pass e.g. ``basis.localized_basis("L")`` to trace
    over the particles found in region L). The result lives on the
    (N - M)-particle collective basis of ``out_basis`` and has unit trace.
    """
    _, residues, probs = projection_outcomes(state, m, sp_basis)
    out_sp = tuple(out_basis) if out_basis is not None else tuple(state.basis.computational_basis())
    out = CollectiveBasis(out_sp, state.n - m, state.eta)
    rho = np.zeros((len(out), len(out)), dtype=complex)
    weight = 0.0
    for r, p in zip(residues, probs):
        if p <= 0:
            continue
        v = out.coordinates(r)
        rho += np.outer(v, v.conj())
        weight += r.self_amplitude()
    if weight <= PROB_TOL:
        raise NullStateError("traced state has no weight")
    rho /= weight
    return DensityMatrix(out, rho).validate()


def von_neumann_entropy(rho, psd_tol: float = 1e-9) -> float:
    """``-Tr rho log2 rho`` in bits (``0 log 0 = 0``)."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if not np.all(np.isfinite(mat)):
        raise NumericalContractError("density matrix has non-finite entries")
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > 1e-10:
        raise NumericalContractError("density matrix not Hermitian")
    lam = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if lam.size and lam.min() < -psd_tol:
        raise NumericalContractError(f"density matrix not PSD (min eigenvalue {lam.min():.3g})")
    lam = lam[lam > 1e-15]
    s = float(-np.sum(lam * np.log2(lam)))
    return min(max(s, 0.0), math.log2(max(mat.shape[0], 1)))
