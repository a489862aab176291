"""Execute a parsed :class:`~labelfree.scenario.Scenario` task by task."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .amplitude import amplitude
from .errors import NumericalContractError
from .hilbert import ModeBasis, SingleParticleState, make_state
from .library import SpesSpec, bell_pair, build_naive_w, build_spes, psi_pair, spes_terms
from .reduction import partial_trace, von_neumann_entropy
from .scenario import Scenario, TaskDef
from .slocc import bell_max, bell_max_search, concurrence, horodecki_bound, slocc_project
from .states import ElementaryKet, ManyParticleState, normalize
from .verification import commutator_suite, structural_suite, summarize


class Sci(float):
    """A residual; printed in scientific notation."""


@dataclass(frozen=True)
class Row:
    task: str
    name: str
    quantity: str
    value: object


def format_value(v) -> str:
    if isinstance(v, (bool, int, np.integer)):
        return str(int(v))
    if isinstance(v, Sci):
        return f"{float(v):.3e}"
    if isinstance(v, (complex, np.complexfloating)):
        z = complex(v)
        return f"{z.real:.12g}{'-' if z.imag < 0 else '+'}{abs(z.imag):.12g}j"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12f}"
    return str(v)


class Context:
    """Resolved basis, single-particle states and (lazily) many-particle states."""

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.basis = ModeBasis(sc.modes, sc.spins)
        self.spatial = {name: dict(amp) for name, amp in sc.spatial}
        self.single: dict[str, SingleParticleState] = {
            name: make_state(self.basis, self.region(d.spatial), d.spin if isinstance(d.spin, str) else dict(d.spin))
            for name, d in sc.single
        }
        self._defs = dict(sc.states)
        self._states: dict[str, ManyParticleState] = {}

    def region(self, ref):
        """Spatial reference (named map, mode label, or inline map) as an amplitude map."""
        if isinstance(ref, str):
            return self.spatial.get(ref, ref)
        return dict(ref)

    def state(self, name: str) -> ManyParticleState:
        if name not in self._states:
            self._states[name] = self._build(self._defs[name])
        return self._states[name]

    def _build(self, d) -> ManyParticleState:
        eta, b = self.sc.eta, self.basis
        if d.kind == "terms":
            terms = tuple(ElementaryKet(c, tuple(self.single[s] for s in slots)) for c, slots in d.terms)
            return ManyParticleState(b, eta, terms[0].n, terms)
        modes = [self.region(m) for m in d.modes]
        if d.kind == "spes":
            return build_spes(SpesSpec(b, modes, d.spins, eta))
        if d.kind == "naive_w":
            return build_naive_w(b, modes, eta)
        build = bell_pair if d.kind == "bell" else psi_pair
        return build(b, modes[0], modes[1], d.spins[0], d.spins[1], eta, d.alpha, d.beta)

    def sp_basis(self, over):
        if over is None or over == "*":
            return None
        return self.basis.localized_basis(list(over))


def run(sc: Scenario) -> Iterator[Row]:
    ctx = Context(sc)
    for task in sc.tasks:
        for quantity, value in _TASKS[task.kind](ctx, task):
            yield Row(task.kind, task.name, quantity, value)


def _amp(ctx, t: TaskDef):
    yield "amplitude", amplitude(ctx.state(t.get("bra")), ctx.state(t.get("ket")))


def _norm(ctx, t):
    s = ctx.state(t.get("state"))
    sa = s.self_amplitude()
    if not np.isfinite(sa):
        raise NumericalContractError(f"state {t.get('state')!r} has a non-finite self-amplitude")
    yield "self-amplitude", sa
    yield "norm", float(np.sqrt(max(sa, 0.0)))


def _rho(ctx, t):
    s = normalize(ctx.state(t.get("state")))
    return partial_trace(s, t.get("m", 1), sp_basis=ctx.sp_basis(t.get("over")))


def _trace(ctx, t):
    rho = _rho(ctx, t)
    ev = np.sort(rho.eigenvalues())[::-1]
    yield "dimension", len(rho.basis)
    yield "trace", float(rho.trace().real)
    yield "rank", int(np.sum(ev > 1e-12))
    for i, lam in enumerate(ev[ev > 1e-12], start=1):
        yield f"eigenvalue {i}", float(lam)


def _entropy(ctx, t):
    yield "entropy", von_neumann_entropy(_rho(ctx, t))


def _spes(ctx, t):
    d = ctx._defs[t.get("state")]
    spec = SpesSpec(ctx.basis, [ctx.region(m) for m in d.modes], d.spins, ctx.sc.eta)
    for shift, w, _ in spes_terms(spec):
        yield f"weight shift {shift}", float(w)
    yield "self-amplitude", build_spes(spec).self_amplitude()


def _slocc(ctx, t):
    res = slocc_project(ctx.state(t.get("state")), ctx.region(t.get("left")), ctx.region(t.get("right")))
    up, down = ctx.basis.spin_labels
    yield "P_LR", res.probability
    for (s, tt), a in zip([(up, up), (up, down), (down, up), (down, down)], res.state):
        yield f"amp L{s},R{tt}", complex(a)
    if res.overlaps is not None:
        for k, v in res.overlaps.items():
            yield f"overlap {k}", v
    yield "P_same_region", res.p_same_region
    yield "concurrence", concurrence(res.state)


def _bell(ctx, t):
    res = slocc_project(ctx.state(t.get("state")), ctx.region(t.get("left")), ctx.region(t.get("right")))
    yield "concurrence", concurrence(res.state)
    yield "B_max", bell_max(res.state)
    yield "B_horodecki", horodecki_bound(res.state)
    if t.get("samples", 0) > 0:
        yield "B_search", bell_max_search(res.state, n_samples=t.get("samples"), seed=t.get("seed", 0))


def _verify(ctx, t):
    levels, seed, eta = t.get("levels", 3), t.get("seed", 0), ctx.sc.eta
    checks = summarize(
        commutator_suite(eta, max_n=levels, seed=seed) + structural_suite(seed, (eta,), max_n=levels, n_states=2)
    )
    failed = [c for c in checks if not c.passed]
    for c in checks:
        yield c.name, Sci(c.value)
    yield "failed", len(failed)
    if failed:
        raise NumericalContractError(f"invariant check failed: {failed[0].name} = {failed[0].value:.3e}")


_TASKS = {
    "amp": _amp,
    "norm": _norm,
    "trace": _trace,
    "entropy": _entropy,
    "spes": _spes,
    "slocc": _slocc,
    "bell": _bell,
    "verify": _verify,
}
