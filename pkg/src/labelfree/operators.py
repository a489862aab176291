"""One-body operators and generalised annihilation/creation operators.

Operators are plain functions on states. ``a(k)`` is the one-particle dot
product, ``a†(k)`` prepends ``|k>`` with the wedge product; the pair versions
act with two-particle bras and kets.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .amplitude import amplitude
from .errors import BasisMismatchError, ParticleNumberError
from .hilbert import ModeBasis, SingleParticleState, inner1
from .reduction import dot
from .states import ElementaryKet, ManyParticleState, coordinate_norm, wedge


@dataclass(frozen=True, eq=False)
class OneBodyOperator:
    basis: ModeBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.basis.dimension
        if m.shape != (d, d):
            raise BasisMismatchError(f"operator of shape {m.shape} on a basis of dimension {d}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def outer(cls, ket: SingleParticleState, bra: SingleParticleState) -> OneBodyOperator:
        """``|ket><bra|``."""
        return cls(ket.basis, np.outer(ket.coeffs, bra.coeffs.conj()))

    @classmethod
    def identity(cls, basis: ModeBasis) -> OneBodyOperator:
        return cls(basis, np.eye(basis.dimension))

    def __call__(self, s: SingleParticleState) -> SingleParticleState:
        return SingleParticleState(self.basis, self.matrix @ s.coeffs)


def apply_one_body(op: OneBodyOperator, s: ManyParticleState) -> ManyParticleState:
    """``A|1..N> = sum_k |1, .., A k, .., N>``."""
    if op.basis != s.basis:
        raise BasisMismatchError("operator and state on different bases")
    terms = []
    for t in s.terms:
        for k in range(t.n):
            slots = t.slots[:k] + (op(t.slots[k]),) + t.slots[k + 1 :]
            terms.append(ElementaryKet(t.coeff, slots))
    return ManyParticleState(s.basis, s.eta, s.n, tuple(terms))


def annihilate(k: SingleParticleState, s: ManyParticleState) -> ManyParticleState:
    """``a(k)|1..N> = <k|.|1..N>``."""
    if s.n < 1:
        raise ParticleNumberError("a(k) needs at least one particle")
    return dot([k], s)


def create(k: SingleParticleState, s: ManyParticleState) -> ManyParticleState:
    """``a†(k)|1..N> = |k> ∧ |1..N>``."""
    return wedge(ManyParticleState.from_slots([k], s.eta), s)


def pair_annihilate(j: SingleParticleState, k: SingleParticleState, s: ManyParticleState) -> ManyParticleState:
    if s.n < 2:
        raise ParticleNumberError("a(j, k) needs at least two particles")
    return dot([j, k], s)


def pair_create(j: SingleParticleState, k: SingleParticleState, s: ManyParticleState) -> ManyParticleState:
    return wedge(ManyParticleState.from_slots([j, k], s.eta), s)


def _maybe_annihilate(k, s):
    # a(k) on fewer particles than it removes is the zero vector
    if s.n < 1:
        return None
    return annihilate(k, s)


def _maybe_pair_annihilate(j, k, s):
    if s.n < 2:
        return None
    return pair_annihilate(j, k, s)


def _residual(first, second, factor, target) -> float:
    """Norm of ``first - factor*second - target``; ``None`` stands for the zero vector."""
    acc = None
    for x, c in ((first, 1.0), (second, -factor), (target, -1.0)):
        if x is not None:
            acc = c * x if acc is None else acc + c * x
    return 0.0 if acc is None else coordinate_norm(acc)


@dataclass(frozen=True)
class CommutatorReport:
    """Largest residual norms of each rule over the trial states."""

    one_body: float
    annihilators: float
    creators: float
    pair: float | None = None
    pair_annihilators: float | None = None
    pair_creators: float | None = None
    n_trials: int = 0

    @property
    def max_residual(self) -> float:
        vals = [self.one_body, self.annihilators, self.creators, self.pair, self.pair_annihilators, self.pair_creators]
        return max(v for v in vals if v is not None)


def pair_commutator_residual(
    j, k, m, n, t: ManyParticleState, eta_bracket: int = 1
) -> float:
    """``|| (a(j,k) a†(m,n) - s a†(m,n) a(j,k)) t - <j,k|m,n> t ||`` with s = ``eta_bracket``."""
    jk = ManyParticleState.from_slots([j, k], t.eta)
    mn = ManyParticleState.from_slots([m, n], t.eta)
    c = amplitude(jk, mn)
    lhs1 = pair_annihilate(j, k, pair_create(m, n, t))
    inner = _maybe_pair_annihilate(j, k, t)
    lhs2 = None if inner is None else pair_create(m, n, inner)
    return _residual(lhs1, lhs2, eta_bracket, c * t)


def commutator_check(
    j: SingleParticleState,
    k: SingleParticleState,
    trial_states: Sequence[ManyParticleState],
    pair: tuple[SingleParticleState, SingleParticleState] | None = None,
) -> CommutatorReport:
    """Check the eta-commutation rules of a(j), a†(k) on every trial state.

    Verifies ``(a(j)a†(k) - eta a†(k)a(j))|t> = <j|k>|t>`` and that
    ``[a(j),a(k)]_eta`` and ``[a†(j),a†(k)]_eta`` vanish. With
    ``pair=(m, n)`` the two-particle operators are checked with a plain
    commutator: ``[a(j,k), a†(m,n)] = <j,k|m,n>`` and the pair-pair brackets
    vanish (pair checks only on trial states with at least two particles).

    The pair rule is exact whenever the number-conserving remainder of the
    commutator vanishes on ``t``: e.g. ``{j,k}`` orthogonal to ``{m,n}``, or
    ``t`` carrying no weight in ``j`` and ``k``.
    """
    jk = inner1(j, k)
    one = ann = cre = 0.0
    p_res = p_ann = p_cre = 0.0 if pair is not None else None
    count = 0
    for t in trial_states:
        if t.is_null():
            continue
        t = t / t.norm()
        count += 1
        eta = int(t.eta)
        one = max(one, _residual(annihilate(j, create(k, t)), _maybe_create(k, _maybe_annihilate(j, t)), eta, jk * t))
        cre = max(cre, _residual(create(j, create(k, t)), create(k, create(j, t)), eta, None))
        if t.n >= 2:
            ann = max(ann, _residual(annihilate(j, annihilate(k, t)), annihilate(k, annihilate(j, t)), eta, None))
        if pair is not None and t.n >= 2:
            m, n = pair
            p_res = max(p_res, pair_commutator_residual(j, k, m, n, t))
            p_cre = max(p_cre, _residual(pair_create(j, k, pair_create(m, n, t)), pair_create(m, n, pair_create(j, k, t)), 1, None))
            if t.n >= 4:
                p_ann = max(
                    p_ann,
                    _residual(pair_annihilate(j, k, pair_annihilate(m, n, t)), pair_annihilate(m, n, pair_annihilate(j, k, t)), 1, None),
                )
    return CommutatorReport(one, ann, cre, p_res, p_ann, p_cre, count)


def _maybe_create(k, s):
    return None if s is None else create(k, s)
