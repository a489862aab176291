"""N-particle transition amplitudes.

The amplitude between two elementary kets is the eta-weighted permutation sum
over products of one-particle overlaps, i.e. the permanent (bosons) or the
determinant (fermions) of the overlap matrix ``M[i, j] = <exit_i|enter_j>``.
"""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

import numpy as np
from numba import njit

from .errors import (
    BasisMismatchError,
    GuardError,
    LabelFreeError,
    ParticleNumberError,
    StatisticsMismatchError,
)

if TYPE_CHECKING:
    from .states import ManyParticleState

#: Largest matrix accepted by :func:`permanent_ryser` (2^30 Gray-code steps).
RYSER_MAX_N = 30
#: Factorial guard for the exhaustive oracle.
NAIVE_MAX_N = 8


@njit(cache=True)
def _ryser_gray(a):
    n = a.shape[0]
    rowsum = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    prev = 0
    parity = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        diff = g ^ prev
        j = 0
        while (diff >> j) != 1:
            j += 1
        if g & diff:
            for i in range(n):
                rowsum[i] += a[i, j]
        else:
            for i in range(n):
                rowsum[i] -= a[i, j]
        parity ^= 1
        prev = g
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= rowsum[i]
        if parity:
            total -= prod
        else:
            total += prod
    if n % 2 == 1:
        return -total
    return total


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LabelFreeError(f"expected a square matrix, got shape {m.shape}")
    return m


def permanent_ryser(m) -> complex:
    """Permanent via Ryser's inclusion-exclusion formula in Gray-code order.

    Runs in ``O(2^n n)``; matrices up to ``RYSER_MAX_N = 30`` are accepted
    (n = 20 takes well under a second).
    """
    m = _square(m)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n > RYSER_MAX_N:
        raise GuardError(f"permanent of a {n}x{n} matrix exceeds the limit {RYSER_MAX_N}")
    return complex(_ryser_gray(np.ascontiguousarray(m)))


def permutation_parity(perm) -> int:
    """+1 for even, -1 for odd permutations of ``range(len(perm))``."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutation_sum(m, eta: int) -> complex:
    """Exhaustive ``sum_P eta^P prod_i m[i, P_i]`` (reference oracle)."""
    m = _square(m)
    n = m.shape[0]
    if n > NAIVE_MAX_N:
        raise GuardError(f"naive permutation sum limited to N <= {NAIVE_MAX_N}, got {n}")
    rows = np.arange(n)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        weight = 1 if eta == 1 else permutation_parity(perm)
        total += weight * np.prod(m[rows, perm])
    return complex(total)


def overlap_kernel(m: np.ndarray, eta: int) -> complex:
    """per(m) for eta=+1, det(m) for eta=-1, with closed forms for n <= 2."""
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] + eta * m[0, 1] * m[1, 0])
    if eta == 1:
        return complex(_ryser_gray(np.ascontiguousarray(m)))
    # LAPACK getrf (LU with partial pivoting)
    return complex(np.linalg.det(m))


@njit(cache=True)
def _ryser_batch(stack):
    out = np.empty(stack.shape[0], dtype=np.complex128)
    for b in range(stack.shape[0]):
        out[b] = _ryser_gray(stack[b])
    return out


def overlap_kernel_batch(stack: np.ndarray, eta: int) -> np.ndarray:
    """:func:`overlap_kernel` over a stack of square matrices, shape (B, n, n)."""
    b, n = stack.shape[0], stack.shape[1]
    if n == 0:
        return np.ones(b, dtype=complex)
    if n == 1:
        return stack[:, 0, 0].astype(complex)
    if n == 2:
        return stack[:, 0, 0] * stack[:, 1, 1] + eta * stack[:, 0, 1] * stack[:, 1, 0]
    if eta == 1:
        return _ryser_batch(np.ascontiguousarray(stack, dtype=np.complex128))
    return np.linalg.det(stack)


def overlap_matrix(bra_slots: np.ndarray, ket_slots: np.ndarray) -> np.ndarray:
    """``M[i, j] = <bra_i|ket_j>`` for slot matrices of shape (n, d)."""
    return bra_slots.conj() @ ket_slots.T


def _check_pair(bra: ManyParticleState, ket: ManyParticleState) -> None:
    if bra.eta != ket.eta:
        raise StatisticsMismatchError("amplitude between bosonic and fermionic states")
    if bra.n != ket.n:
        raise ParticleNumberError(f"amplitude between {bra.n}- and {ket.n}-particle states")
    if bra.basis != ket.basis:
        raise BasisMismatchError("amplitude between states on different bases")


def amplitude(bra: ManyParticleState, ket: ManyParticleState) -> complex:
    """``<bra|ket>``, extended sesquilinearly over the term lists."""
    _check_pair(bra, ket)
    total = 0.0 + 0.0j
    for cb, mb in bra.arrays:
        for ck, mk in ket.arrays:
            total += np.conj(cb) * ck * overlap_kernel(overlap_matrix(mb, mk), ket.eta)
    return complex(total)


def amplitude_naive(bra: ManyParticleState, ket: ManyParticleState) -> complex:
    """Same contract as :func:`amplitude`, evaluated term by term over all N! permutations."""
    _check_pair(bra, ket)
    if ket.n > NAIVE_MAX_N:
        raise GuardError(f"amplitude_naive limited to N <= {NAIVE_MAX_N}, got {ket.n}")
    total = 0.0 + 0.0j
    for tb in bra.terms:
        for tk in ket.terms:
            acc = 0.0 + 0.0j
            for perm in itertools.permutations(range(ket.n)):
                w = 1 if ket.eta == 1 else permutation_parity(perm)
                prod = 1.0 + 0.0j
                for i, p in enumerate(perm):
                    prod *= np.vdot(tb.slots[i].coeffs, tk.slots[p].coeffs)
                acc += w * prod
            total += np.conj(tb.coeff) * tk.coeff * acc
    return complex(total)
