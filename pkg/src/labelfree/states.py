"""Holistic N-particle kets and their algebra.

A ket ``|1, 2, ..., N>`` just lists occupied single-particle states; there are
no particle labels. Kets are stored as given; equality and exchange symmetry
are decided through amplitudes, never through the term list syntax.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .amplitude import amplitude, permutation_parity
from .errors import (
    BasisMismatchError,
    LabelFreeError,
    NullStateError,
    NumericalContractError,
    ParticleNumberError,
    StatisticsMismatchError,
)
from .hilbert import ModeBasis, SingleParticleState

NULL_TOL = 1e-12


class Statistics(enum.IntEnum):
    BOSON = 1
    FERMION = -1

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("boson", "bosons", "+1", "1"):
                return cls.BOSON
            if key in ("fermion", "fermions", "-1"):
                return cls.FERMION
            raise LabelFreeError(f"unknown statistics {value!r}")
        try:
            return cls(int(value))
        except ValueError:
            raise LabelFreeError(f"eta must be +1 or -1, got {value!r}") from None


@dataclass(frozen=True, eq=False)
class ElementaryKet:
    """``coeff * |slot_1, ..., slot_N>``."""

    coeff: complex
    slots: tuple[SingleParticleState, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "slots", tuple(self.slots))

    @property
    def n(self) -> int:
        return len(self.slots)

    def matrix(self, dimension: int) -> np.ndarray:
        if not self.slots:
            return np.zeros((0, dimension), dtype=complex)
        return np.array([s.coeffs for s in self.slots])

    def describe(self, digits: int = 4) -> str:
        inner = ", ".join(s.describe(digits) for s in self.slots)
        return f"{self.coeff:.{digits}g} |{inner}>"


def swap_slots(ket: ElementaryKet, j: int, k: int, eta: int) -> ElementaryKet:
    """Exchange slots ``j`` and ``k`` (0-based) and multiply the coefficient by eta.

    The result represents the same physical ket.
    """
    n = len(ket.slots)
    if not (0 <= j < n and 0 <= k < n) or j == k:
        raise IndexError(f"invalid slot pair ({j}, {k}) for a {n}-particle ket")
    slots = list(ket.slots)
    slots[j], slots[k] = slots[k], slots[j]
    return ElementaryKet(ket.coeff * int(eta), tuple(slots))


@dataclass(frozen=True, eq=False)
class ManyParticleState:
    """Finite linear combination of elementary kets with fixed N and statistics."""

    basis: ModeBasis
    eta: Statistics
    n: int
    terms: tuple[ElementaryKet, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "eta", Statistics.parse(self.eta))
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n < 0:
            raise ParticleNumberError("negative particle number")
        for t in self.terms:
            if t.n != self.n:
                raise ParticleNumberError(f"term with {t.n} slots in an {self.n}-particle state")
            for s in t.slots:
                if s.basis != self.basis:
                    raise BasisMismatchError("term slot on a foreign basis")

    # construction -------------------------------------------------------

    @classmethod
    def from_slots(
        cls, slots: Sequence[SingleParticleState], eta, coeff: complex = 1.0
    ) -> ManyParticleState:
        slots = tuple(slots)
        if not slots:
            raise ParticleNumberError("use ManyParticleState.vacuum for zero particles")
        return cls(slots[0].basis, eta, len(slots), (ElementaryKet(coeff, slots),))

    @classmethod
    def zero(cls, basis: ModeBasis, eta, n: int) -> ManyParticleState:
        return cls(basis, eta, n, ())

    @classmethod
    def vacuum(cls, basis: ModeBasis, eta, coeff: complex = 1.0) -> ManyParticleState:
        return cls(basis, eta, 0, (ElementaryKet(coeff, ()),))

    @cached_property
    def arrays(self) -> list[tuple[complex, np.ndarray]]:
        """``(coeff, slot matrix)`` per term, slot matrix of shape (n, d)."""
        return [(t.coeff, t.matrix(self.basis.dimension)) for t in self.terms]

    # linear structure ---------------------------------------------------

    def _check_compatible(self, other: ManyParticleState) -> None:
        if not isinstance(other, ManyParticleState):
            raise TypeError(f"cannot combine a state with {type(other).__name__}")
        if other.eta != self.eta:
            raise StatisticsMismatchError("cannot add bosonic and fermionic states")
        if other.n != self.n:
            raise ParticleNumberError(
                f"cannot add {self.n}- and {other.n}-particle states (no Fock direct sum)"
            )
        if other.basis != self.basis:
            raise BasisMismatchError("cannot add states on different bases")

    def __add__(self, other: ManyParticleState) -> ManyParticleState:
        self._check_compatible(other)
        return ManyParticleState(self.basis, self.eta, self.n, self.terms + other.terms)

    def __sub__(self, other: ManyParticleState) -> ManyParticleState:
        return self + (-1.0) * other

    def __mul__(self, z: complex) -> ManyParticleState:
        z = complex(z)
        terms = tuple(ElementaryKet(z * t.coeff, t.slots) for t in self.terms)
        return ManyParticleState(self.basis, self.eta, self.n, terms)

    __rmul__ = __mul__

    def __truediv__(self, z: complex) -> ManyParticleState:
        return self * (1.0 / complex(z))

    def __neg__(self) -> ManyParticleState:
        return (-1.0) * self

    # scalar queries -----------------------------------------------------

    def self_amplitude(self) -> float:
        return float(amplitude(self, self).real)

    def norm(self) -> float:
        return float(np.sqrt(max(self.self_amplitude(), 0.0)))

    def is_null(self, tol: float = NULL_TOL) -> bool:
        return self.self_amplitude() <= tol

    def scalar(self) -> complex:
        """Value of a zero-particle state."""
        if self.n != 0:
            raise ParticleNumberError(f"scalar() needs a 0-particle state, have N={self.n}")
        return complex(sum(t.coeff for t in self.terms))

    def describe(self, digits: int = 4) -> str:
        if not self.terms:
            return "0"
        return "\n".join(t.describe(digits) for t in self.terms)

    def __repr__(self) -> str:
        kind = "boson" if self.eta == 1 else "fermion"
        return f"ManyParticleState(N={self.n}, {kind}, {len(self.terms)} terms)"


def wedge(a: ManyParticleState, b: ManyParticleState) -> ManyParticleState:
    """``a ∧ b``: concatenate slot lists term by term (bilinear)."""
    if a.eta != b.eta:
        raise StatisticsMismatchError("wedge of bosonic and fermionic states")
    if a.basis != b.basis:
        raise BasisMismatchError("wedge of states on different bases")
    terms = tuple(
        ElementaryKet(ta.coeff * tb.coeff, ta.slots + tb.slots) for ta in a.terms for tb in b.terms
    )
    return ManyParticleState(a.basis, a.eta, a.n + b.n, terms)


def wedge_all(states: Iterable[ManyParticleState]) -> ManyParticleState:
    it = iter(states)
    out = next(it)
    for s in it:
        out = wedge(out, s)
    return out


def single(state: SingleParticleState, eta) -> ManyParticleState:
    """Wrap a one-particle state as a 1-particle ket."""
    return ManyParticleState.from_slots([state], eta)


def normalize(s: ManyParticleState) -> ManyParticleState:
    """Return ``s / sqrt(<s|s>)``; the input is left untouched."""
    sa = amplitude(s, s).real
    if not np.isfinite(sa):
        raise NumericalContractError("self-amplitude is not finite")
    if sa <= NULL_TOL:
        raise NullStateError(f"null state (self-amplitude {sa:.3g}) cannot be normalized")
    return s * (1.0 / np.sqrt(sa))


@lru_cache(maxsize=64)
def _occupation_basis(basis: ModeBasis, n: int, eta: int):
    from .reduction import CollectiveBasis

    return CollectiveBasis.computational(basis, n, eta)


def coordinates(s: ManyParticleState) -> np.ndarray:
    """Coefficients of ``s`` on the orthonormal occupation basis of its sector."""
    if s.n == 0:
        return np.array([s.scalar()])
    return _occupation_basis(s.basis, s.n, int(s.eta)).coordinates(s)


def coordinate_norm(s: ManyParticleState) -> float:
    """Norm of ``s`` from its occupation-basis coordinates.

    Linear in the terms, so cancellations are resolved at machine precision
    (the self-amplitude route only reaches about sqrt(eps)).
    """
    return float(np.linalg.norm(coordinates(s)))


def distance(a: ManyParticleState, b: ManyParticleState) -> float:
    """Norm of ``a - b``."""
    return coordinate_norm(a - b)


def states_equal(a: ManyParticleState, b: ManyParticleState, tol: float = 1e-9) -> bool:
    return distance(a, b) <= tol


def _slot_key(s: SingleParticleState, digits: int = 12) -> tuple:
    c = np.round(s.coeffs, digits) + 0.0  # drop negative zeros
    return tuple(np.concatenate([c.real, c.imag]).tolist())


def canonicalize(s: ManyParticleState, digits: int = 12) -> ManyParticleState:
    """Sort slots of every term, merge duplicates and drop vanishing terms.

    Sorting uses a lexicographic key on the rounded basis expansion and
    accumulates the eta sign of the sorting permutation. Only meant to keep
    term lists short; physics is unaffected.
    """
    merged: dict[tuple, list] = {}
    for t in s.terms:
        keys = [_slot_key(x, digits) for x in t.slots]
        order = sorted(range(t.n), key=lambda i: keys[i])
        sign = 1 if s.eta == 1 else permutation_parity(order)
        sorted_keys = tuple(keys[i] for i in order)
        if s.eta == -1 and len(set(sorted_keys)) < len(sorted_keys):
            continue
        entry = merged.setdefault(sorted_keys, [0.0 + 0.0j, tuple(t.slots[i] for i in order)])
        entry[0] += sign * t.coeff
    terms = tuple(
        ElementaryKet(c, slots) for c, slots in merged.values() if abs(c) > 10.0 ** (-digits - 2)
    )
    return ManyParticleState(s.basis, s.eta, s.n, terms)
