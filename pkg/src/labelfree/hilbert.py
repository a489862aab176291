"""Single-particle Hilbert space: a finite (mode x spin) computational basis.

Spatial wavefunctions are vectors over a set of orthonormal spatial modes, so
"spatial overlap" between two particles simply means non-orthogonal vectors.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import BasisMismatchError, DegenerateStateError, LabelError

TOL = 1e-9

Amplitudes = Union[str, Mapping[str, complex], Sequence[complex], np.ndarray]


@dataclass(frozen=True)
class ModeBasis:
    """Orthonormal product basis ``|mode, spin>``.

    Index ordering is mode-major: ``index(m, s) = i_m * n_spins + i_s``.
    """

    spatial_labels: tuple[str, ...]
    spin_labels: tuple[str, ...] = ("↑", "↓")

    def __post_init__(self):
        object.__setattr__(self, "spatial_labels", tuple(self.spatial_labels))
        object.__setattr__(self, "spin_labels", tuple(self.spin_labels))
        for name, labels in (("spatial", self.spatial_labels), ("spin", self.spin_labels)):
            if not labels:
                raise LabelError(f"{name} label list is empty")
            if len(set(labels)) != len(labels):
                raise LabelError(f"duplicate {name} labels in {labels}")

    @property
    def n_modes(self) -> int:
        return len(self.spatial_labels)

    @property
    def n_spins(self) -> int:
        return len(self.spin_labels)

    @property
    def dimension(self) -> int:
        return self.n_modes * self.n_spins

    def index(self, mode: str, spin: str) -> int:
        try:
            return self.spatial_labels.index(mode) * self.n_spins + self.spin_labels.index(spin)
        except ValueError:
            raise LabelError(f"unknown label pair ({mode!r}, {spin!r})") from None

    def label(self, i: int) -> str:
        m, s = divmod(i, self.n_spins)
        return f"{self.spatial_labels[m]}{self.spin_labels[s]}"

    def ket(self, mode: str, spin: str) -> "SingleParticleState":
        v = np.zeros(self.dimension, dtype=complex)
        v[self.index(mode, spin)] = 1.0
        return SingleParticleState(self, v)

    def computational_basis(self) -> list["SingleParticleState"]:
        return [SingleParticleState(self, row) for row in np.eye(self.dimension, dtype=complex)]

    def localized_basis(self, modes: Sequence[str]) -> list["SingleParticleState"]:
        """All basis kets whose spatial part is one of ``modes`` (every spin)."""
        if isinstance(modes, str):
            modes = [modes]
        return [self.ket(m, s) for m in modes for s in self.spin_labels]

    def spatial_vector(self, spatial: Amplitudes) -> np.ndarray:
        return _amplitude_vector(spatial, self.spatial_labels, "spatial")

    def spin_vector(self, spin: Amplitudes) -> np.ndarray:
        return _amplitude_vector(spin, self.spin_labels, "spin")


def _amplitude_vector(spec: Amplitudes, labels: tuple[str, ...], kind: str) -> np.ndarray:
    if isinstance(spec, str):
        spec = {spec: 1.0}
    if isinstance(spec, Mapping):
        v = np.zeros(len(labels), dtype=complex)
        for key, amp in spec.items():
            if key not in labels:
                raise LabelError(f"unknown {kind} label {key!r}; expected one of {labels}")
            v[labels.index(key)] += complex(amp)
        return v
    v = np.asarray(spec, dtype=complex)
    if v.shape != (len(labels),):
        raise BasisMismatchError(f"{kind} vector has shape {v.shape}, expected ({len(labels)},)")
    return v


@dataclass(frozen=True, eq=False)
class SingleParticleState:
    """A one-particle vector over a :class:`ModeBasis` (not necessarily normalized)."""

    basis: ModeBasis
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape != (self.basis.dimension,):
            raise BasisMismatchError(
                f"coefficient vector of length {c.size} on a basis of dimension {self.basis.dimension}"
            )
        if not np.all(np.isfinite(c)):
            raise DegenerateStateError("single-particle amplitudes must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __add__(self, other: SingleParticleState) -> SingleParticleState:
        _check_same_basis(self, other)
        return SingleParticleState(self.basis, self.coeffs + other.coeffs)

    def __sub__(self, other: SingleParticleState) -> SingleParticleState:
        _check_same_basis(self, other)
        return SingleParticleState(self.basis, self.coeffs - other.coeffs)

    def __mul__(self, z: complex) -> SingleParticleState:
        return SingleParticleState(self.basis, complex(z) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> SingleParticleState:
        return SingleParticleState(self.basis, -self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.norm() <= tol

    def normalized(self) -> SingleParticleState:
        n = self.norm()
        if n <= 1e-12:
            raise DegenerateStateError("cannot normalize the zero vector")
        return SingleParticleState(self.basis, self.coeffs / n)

    def as_matrix(self) -> np.ndarray:
        """Coefficients reshaped to ``(n_modes, n_spins)``."""
        return self.coeffs.reshape(self.basis.n_modes, self.basis.n_spins)

    def factor(self, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray] | None:
        """Split into ``spatial (x) spin`` if the vector is a product, else ``None``.

        The spatial factor carries the norm; the spin factor is unit length with
        its first non-negligible entry made real and positive.
        """
        u, s, vh = np.linalg.svd(self.as_matrix())
        if s[0] <= tol or (len(s) > 1 and s[1] > tol * max(1.0, s[0])):
            return None
        spin = vh[0].copy()
        k = int(np.argmax(np.abs(spin) > tol))
        phase = spin[k] / abs(spin[k])
        spin = spin / phase
        spatial = u[:, 0] * s[0] * phase
        return spatial, spin

    def describe(self, digits: int = 4) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if abs(c) > 10.0 ** (-digits - 2):
                parts.append(f"{_fmt(c, digits)}|{self.basis.label(i)}>")
        return " + ".join(parts) if parts else "0"


def _fmt(z: complex, digits: int) -> str:
    if abs(z.imag) < 10.0 ** (-digits - 2):
        return f"{z.real:.{digits}g}"
    return f"({z.real:.{digits}g}{z.imag:+.{digits}g}j)"


def _check_same_basis(a: SingleParticleState, b: SingleParticleState) -> None:
    if a.basis != b.basis:
        raise BasisMismatchError(f"basis mismatch: {a.basis} vs {b.basis}")


def inner1(bra: SingleParticleState, ket: SingleParticleState) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    _check_same_basis(bra, ket)
    return complex(np.vdot(bra.coeffs, ket.coeffs))


def make_state(basis: ModeBasis, spatial: Amplitudes, spin: Amplitudes) -> SingleParticleState:
    """Product state with ``coeff(m, s) = spatial(m) * spin(s)``.

    ``spatial`` and ``spin`` may be a single label, a ``{label: amplitude}``
    mapping or a full amplitude vector. The result is not renormalized.

    >>> b = ModeBasis(("L", "R"))
    >>> make_state(b, {"L": 0.6, "R": 0.8}, "↑").norm()
    1.0
    """
    v = np.outer(basis.spatial_vector(spatial), basis.spin_vector(spin)).reshape(-1)
    if not np.any(np.abs(v) > 0):
        raise DegenerateStateError("all amplitudes are zero")
    return SingleParticleState(basis, v)


def gram_matrix(states: Sequence[SingleParticleState]) -> np.ndarray:
    """Matrix of ``<a_i|a_j>``."""
    if not states:
        return np.zeros((0, 0), dtype=complex)
    for s in states[1:]:
        _check_same_basis(states[0], s)
    m = np.array([s.coeffs for s in states])
    return m.conj() @ m.T


def check_orthonormal(states: Sequence[SingleParticleState], tol: float = 1e-10) -> None:
    g = gram_matrix(states)
    if not np.allclose(g, np.eye(len(states)), atol=tol, rtol=0):
        raise BasisMismatchError("single-particle states are not orthonormal")
