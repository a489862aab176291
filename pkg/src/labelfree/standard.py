"""Reference implementation of the labeled ("standard") construction.

States are explicit (anti)symmetrized rank-N tensors. Nothing here is used by
the label-free engine; it exists to cross-check amplitudes, probabilities and
reduced spectra.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .amplitude import permutation_parity
from .errors import GuardError, LabelFreeError
from .hilbert import SingleParticleState
from .states import ManyParticleState, Statistics

MAX_TENSOR_SIZE = 10**6


@dataclass(frozen=True, eq=False)
class LabeledState:
    tensor: np.ndarray
    eta: Statistics

    @property
    def n(self) -> int:
        return self.tensor.ndim

    @property
    def d(self) -> int:
        return self.tensor.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensor))

    def inner(self, other: LabeledState) -> complex:
        return complex(np.vdot(self.tensor, other.tensor))

    def exchange_error(self) -> float:
        """Largest violation of ``T[..i..j..] = eta T[..j..i..]``."""
        err = 0.0
        for i, j in itertools.combinations(range(self.n), 2):
            swapped = np.swapaxes(self.tensor, i, j)
            err = max(err, float(np.max(np.abs(self.tensor - int(self.eta) * swapped))))
        return err


def _guard(d: int, n: int) -> None:
    if d**n > MAX_TENSOR_SIZE:
        raise GuardError(f"labeled tensor with d^N = {d}^{n} exceeds {MAX_TENSOR_SIZE}")


def symmetrize(slots: Sequence[SingleParticleState], eta) -> LabeledState:
    """``sum_P eta^P |slot_P1> ⊗ ... ⊗ |slot_PN>`` (no normalization)."""
    eta = Statistics.parse(eta)
    vecs = [s.coeffs for s in slots]
    n, d = len(vecs), len(vecs[0])
    _guard(d, n)
    out = np.zeros((d,) * n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        w = 1 if eta == 1 else permutation_parity(perm)
        out += w * reduce(np.multiply.outer, [vecs[p] for p in perm])
    return LabeledState(out, eta)


def to_labeled(state: ManyParticleState) -> LabeledState:
    """Labeled image of a label-free state, scaled by ``1/sqrt(N!)``.

    With this scaling tensor inner products equal label-free amplitudes.
    """
    d, n = state.basis.dimension, state.n
    _guard(d, n)
    out = np.zeros((d,) * n, dtype=complex)
    for t in state.terms:
        out += t.coeff * symmetrize(t.slots, state.eta).tensor
    return LabeledState(out / math.sqrt(math.factorial(n)), state.eta)


def _project_first(tensor: np.ndarray, m: int, projector: np.ndarray | None) -> np.ndarray:
    d, n = tensor.shape[0], tensor.ndim
    x = tensor
    if projector is not None:
        for axis in range(m):
            x = np.moveaxis(np.tensordot(projector, x, axes=([1], [axis])), 0, axis)
    return x.reshape(d**m, d ** (n - m))


def _projector(sp_basis) -> np.ndarray | None:
    if sp_basis is None:
        return None
    b = np.array([s.coeffs for s in sp_basis])
    return b.T @ b.conj()


def reduced_matrix(state: LabeledState, m: int, sp_basis=None) -> np.ndarray:
    """Tensor partial trace over the first ``m`` labels, normalized to unit trace.

    ``sp_basis`` restricts the traced labels to the span of the given
    orthonormal single-particle states.
    """
    if not 1 <= m < state.n:
        raise LabelFreeError(f"need 1 <= m < N, got m={m}, N={state.n}")
    x = _project_first(state.tensor, m, _projector(sp_basis))
    rho = x.T @ x.conj()
    tr = np.trace(rho).real
    if tr <= 1e-14:
        raise LabelFreeError("no weight in the traced subspace")
    return rho / tr


def reduced_spectrum(state: LabeledState, m: int, sp_basis=None) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(reduced_matrix(state, m, sp_basis)))[::-1]


def projection_probability(
    state: LabeledState, proj_slots: Sequence[SingleParticleState], sp_basis=None
) -> float:
    """Relative weight of the normalized symmetrized ``proj_slots`` tensor on the first labels.

    Normalized by the total weight in the span of ``sp_basis`` (default: all).
    """
    m = len(proj_slots)
    k = symmetrize(proj_slots, state.eta).tensor
    nk = np.linalg.norm(k)
    if nk <= 1e-14:
        raise LabelFreeError("null projection tensor")
    k = (k / nk).reshape(-1)
    x = _project_first(state.tensor, m, None)
    w = np.linalg.norm(k.conj() @ x) ** 2
    total = np.linalg.norm(_project_first(state.tensor, m, _projector(sp_basis))) ** 2
    return float(w / total)


@dataclass(frozen=True)
class OracleReport:
    max_abs: float
    max_rel: float
    size: int

    def ok(self, rel_tol: float = 1e-9) -> bool:
        return self.max_rel <= rel_tol


def oracle_compare(nsa_quantity, sa_quantity, spectrum: bool = False) -> OracleReport:
    """Deviation between a label-free and a labeled quantity.

    Scalars and arrays are compared elementwise. With ``spectrum=True`` both
    are treated as real eigenvalue lists: sorted in descending order and
    zero-padded to a common length (the two reduced matrices live on bases
    of different dimension).
    """
    a = np.atleast_1d(np.asarray(nsa_quantity, dtype=complex)).reshape(-1)
    b = np.atleast_1d(np.asarray(sa_quantity, dtype=complex)).reshape(-1)
    if spectrum:
        size = max(a.size, b.size)
        a = np.pad(np.sort(a.real)[::-1], (0, size - a.size)).astype(complex)
        b = np.pad(np.sort(b.real)[::-1], (0, size - b.size)).astype(complex)
    elif a.size != b.size:
        raise LabelFreeError("scenario mismatch: quantities of different size")
    diff = np.abs(a - b)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    max_abs = float(diff.max(initial=0.0))
    rel = 0.0 if scale == 0 else max_abs / scale
    return OracleReport(max_abs, float(rel), int(a.size))
