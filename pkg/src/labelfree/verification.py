"""Randomised invariant suites shared by ``labelfree verify`` and the tests.

Every check returns :class:`Check` records (name, measured residual,
tolerance). Nothing here raises on a failed check; callers decide.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .amplitude import amplitude, amplitude_naive
from .errors import NullStateError
from .hilbert import ModeBasis, SingleParticleState
from .operators import annihilate, commutator_check, pair_annihilate, pair_commutator_residual
from .reduction import CollectiveBasis, outcome_probability, partial_trace
from .standard import oracle_compare, projection_probability, reduced_spectrum, to_labeled
from .states import ElementaryKet, ManyParticleState, Statistics, coordinate_norm, normalize, swap_slots

MODE_NAMES = "ABCDEFGH"


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tol: float
    # "max" checks need value <= tol, "min" checks need value > tol
    kind: str = "max"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.tol if self.kind == "max" else self.value > self.tol


def summarize(checks: Iterable[Check]) -> list[Check]:
    """Collapse checks sharing (suite, name) to the worst value."""
    worst: dict[tuple[str, str], Check] = {}
    for c in checks:
        key = (c.suite, c.name)
        prev = worst.get(key)
        if prev is None:
            worst[key] = c
            continue
        if c.kind == "max" and c.value > prev.value or c.kind == "min" and c.value < prev.value:
            worst[key] = c
        if not math.isfinite(c.value):
            worst[key] = c
    return list(worst.values())


# --- random inputs -----------------------------------------------------------


def mode_basis(n_modes: int) -> ModeBasis:
    return ModeBasis(tuple(MODE_NAMES[:n_modes]))


def random_single(basis: ModeBasis, rng: np.random.Generator) -> SingleParticleState:
    v = rng.normal(size=basis.dimension) + 1j * rng.normal(size=basis.dimension)
    return SingleParticleState(basis, v / np.linalg.norm(v))


def random_state(basis: ModeBasis, eta, n: int, rng: np.random.Generator, n_terms: int = 2) -> ManyParticleState:
    """Normalized sum of ``n_terms`` random product kets (non-orthogonal slots)."""
    terms = []
    for _ in range(n_terms):
        c = complex(rng.normal(), rng.normal())
        terms.append(ElementaryKet(c, tuple(random_single(basis, rng) for _ in range(n))))
    return normalize(ManyParticleState(basis, Statistics.parse(eta), n, tuple(terms)))


def _rel(a, b, spectrum=False) -> float:
    return oracle_compare(a, b, spectrum=spectrum).max_rel


# --- suites -------------------------------------------------------------------


def oracle_scenario(rng: np.random.Generator, eta, n: int, n_modes: int) -> list[Check]:
    """One random scenario compared against the labeled construction."""
    basis = mode_basis(n_modes)
    state = random_state(basis, eta, n, rng)
    bra = random_state(basis, eta, n, rng, n_terms=1)
    lab, lab_bra = to_labeled(state), to_labeled(bra)
    out = [
        Check("oracle", "amplitude", _rel(amplitude(bra, state), lab_bra.inner(lab)), 1e-9),
        Check("oracle", "exchange symmetry (labeled)", lab.exchange_error(), 1e-12),
    ]
    comp = basis.computational_basis()
    local = basis.localized_basis(basis.spatial_labels[0])
    for m in range(1, min(n - 1, 2) + 1):
        for sp, where in ((None, "full"), (local, "localized")):
            try:
                rho = partial_trace(state, m, sp_basis=sp)
            except NullStateError:
                continue
            sa = reduced_spectrum(lab, m, sp_basis=sp)
            out.append(Check("oracle", f"spectrum M={m} {where}", _rel(rho.eigenvalues(), sa, spectrum=True), 1e-9))
    proj = [comp[int(i)] for i in rng.choice(len(comp), size=min(2, n - 1), replace=False)]
    p_nsa = outcome_probability(proj, state).probability
    p_sa = projection_probability(lab, proj)
    out.append(Check("oracle", "probability", _rel(p_nsa, p_sa), 1e-9))
    return out


def oracle_suite(n_scenarios: int = 200, seed: int = 0, etas=(1, -1), max_n: int = 4, max_d: int = 8) -> list[Check]:
    """Random NSA-vs-labeled scenarios with 2 <= N <= max_n and d <= max_d."""
    rng = np.random.default_rng(seed)
    checks = []
    max_modes = max(1, max_d // 2)
    for i in range(n_scenarios):
        eta = etas[i % len(etas)]
        n = int(rng.integers(2, max_n + 1))
        lo = 1 if eta == 1 else math.ceil(n / 2)
        n_modes = int(rng.integers(max(lo, 1), max_modes + 1))
        checks.extend(oracle_scenario(rng, eta, n, n_modes))
    return checks


def naive_suite(seed: int = 0, etas=(1, -1), max_n: int = 7, per_n: int = 2) -> list[Check]:
    """Fast kernel against the exhaustive N!-term evaluation."""
    rng = np.random.default_rng(seed)
    checks = []
    for eta in etas:
        for n in range(1, max_n + 1):
            basis = mode_basis(4)
            for _ in range(per_n):
                a = random_state(basis, eta, n, rng, n_terms=1)
                b = random_state(basis, eta, n, rng, n_terms=2)
                checks.append(Check("naive", f"amplitude vs naive N<={max_n}", _rel(amplitude(a, b), amplitude_naive(a, b)), 1e-9))
    return checks


def basis_trials(basis: ModeBasis, eta, max_n: int, sp=None) -> list[ManyParticleState]:
    """Every collective computational basis ket with 1..max_n particles."""
    sp = tuple(basis.computational_basis()) if sp is None else tuple(sp)
    out = []
    for n in range(1, max_n + 1):
        if eta == -1 and n > len(sp):
            break
        out.extend(CollectiveBasis(sp, n, eta).kets())
    return out


def commutator_suite(eta, max_n: int = 4, seed: int = 0) -> list[Check]:
    """One- and two-particle bracket rules on basis trial states.

    The pair rule is exercised where it is exact: ``{j,k}`` orthogonal to
    ``{m,n}`` on every trial, and ``(j,k) = (m,n)`` on trials with no weight
    in ``j`` or ``k``.
    """
    eta = int(Statistics.parse(eta))
    rng = np.random.default_rng(seed)
    basis = mode_basis(3)
    trials = basis_trials(basis, eta, max_n)
    comp = basis.computational_basis()
    checks = []
    pairs = [(comp[0], comp[0]), (comp[0], comp[3]), (comp[1], comp[4])]
    pairs.append((random_single(basis, rng), random_single(basis, rng)))
    for j, k in pairs:
        r = commutator_check(j, k, trials)
        checks.append(Check("commutator", "[a(j),a†(k)] = <j|k>", r.one_body, 1e-10))
        checks.append(Check("commutator", "[a(j),a(k)] = 0", r.annihilators, 1e-10))
        checks.append(Check("commutator", "[a†(j),a†(k)] = 0", r.creators, 1e-10))
    a_up, a_dn, b_up, b_dn = (basis.ket(m, s) for m in "AB" for s in basis.spin_labels)
    r = commutator_check(a_up, a_dn, trials, pair=(b_up, b_dn))
    checks.append(Check("commutator", "pair rule, disjoint pairs (plain commutator)", r.pair, 1e-10))
    checks.append(Check("commutator", "pair creators commute", r.pair_creators, 1e-10))
    checks.append(Check("commutator", "pair annihilators commute", r.pair_annihilators, 1e-10))
    # same pair on trials living in the other modes
    other = [s for s in comp if abs(s.coeffs[0]) + abs(s.coeffs[1]) == 0]
    res = max(pair_commutator_residual(a_up, a_dn, a_up, a_dn, t) for t in basis_trials(basis, eta, max_n, sp=other))
    checks.append(Check("commutator", "pair rule, same pair (plain commutator)", res, 1e-10))
    return checks


def pair_demonstrations(eta=-1) -> dict[str, float]:
    """Explicit instances used to show how pair operators differ from products.

    ``anticommutator residual`` evaluates the pair rule with the fermionic
    anticommutator instead of the commutator on a trial where the plain
    commutator holds; ``a(j,k) - a(j)a(k)`` is the difference norm on
    ``|A↑,B↓>``.
    """
    basis = mode_basis(3)
    j, k = basis.ket("A", "↑"), basis.ket("A", "↓")
    m, n = basis.ket("B", "↑"), basis.ket("B", "↓")
    t = ManyParticleState.from_slots([basis.ket("A", "↑"), basis.ket("A", "↓"), basis.ket("C", "↑")], eta)
    comm = pair_commutator_residual(j, k, m, n, t, eta_bracket=1)
    anti = pair_commutator_residual(j, k, m, n, t, eta_bracket=-1)
    u, v = basis.ket("A", "↑"), basis.ket("B", "↓")
    s = ManyParticleState.from_slots([u, v], eta)
    diff = coordinate_norm(pair_annihilate(u, v, s) - annihilate(u, annihilate(v, s)))
    return {"commutator residual": comm, "anticommutator residual": anti, "a(j,k) - a(j)a(k)": diff}


def structural_suite(seed: int = 0, etas=(1, -1), max_n: int = 4, n_states: int = 6) -> list[Check]:
    """Trace/Hermiticity/PSD of partial traces, probability completeness, exchange sign."""
    rng = np.random.default_rng(seed)
    checks = []
    for eta in etas:
        for n in range(2, max_n + 1):
            basis = mode_basis(3)
            for _ in range(n_states):
                s = random_state(basis, eta, n, rng)
                for m in range(1, min(n - 1, 2) + 1):
                    rho = partial_trace(s, m)
                    checks.append(Check("structure", "trace = 1", abs(rho.trace() - 1), 1e-9))
                    checks.append(Check("structure", "Hermitian", rho.hermiticity_error(), 1e-10))
                    checks.append(Check("structure", "min eigenvalue", -float(rho.eigenvalues().min()), 1e-9))
                    coll = CollectiveBasis.computational(basis, m, eta)
                    total = 0.0
                    for k in coll.kets():
                        slots = list(k.terms[0].slots)
                        total += outcome_probability(slots, s).probability
                    checks.append(Check("structure", "sum of probabilities = 1", abs(total - 1), 1e-9))
                t = s.terms[0]
                bra = random_state(basis, eta, n, rng, n_terms=1)
                for a, b in itertools.combinations(range(n), 2):
                    swapped = ManyParticleState(basis, s.eta, n, (swap_slots(t, a, b, eta),))
                    orig = ManyParticleState(basis, s.eta, n, (t,))
                    lhs = amplitude(bra, swapped)
                    rhs = amplitude(bra, orig)
                    scale = max(abs(rhs), 1e-300)
                    checks.append(Check("structure", "exchange symmetry", abs(lhs - rhs) / scale, 1e-12))
    return checks


def run_all(max_n: int = 4, seed: int = 0, etas=(1, -1), n_scenarios: int = 200) -> list[Check]:
    checks = []
    checks += oracle_suite(n_scenarios, seed, etas, max_n=max_n)
    checks += naive_suite(seed, etas, max_n=max(max_n, 7) if max_n >= 4 else max_n + 3)
    for eta in etas:
        checks += commutator_suite(eta, max_n=max_n, seed=seed)
    checks += structural_suite(seed, etas, max_n=max_n)
    demo = pair_demonstrations()
    if -1 in etas:
        checks.append(Check("demonstration", "fermion a(j,k) differs from a(j)a(k)", demo["a(j,k) - a(j)a(k)"], 0.1, "min"))
    return checks
