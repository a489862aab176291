"""One electron on Earth, one in Andromeda.

In the labeled construction the antisymmetrized product of two far-apart
electrons has a maximally mixed single-label reduced state: every pair of
electrons in the universe would look entangled. The label-free partial
trace is taken over the particle found in a region. Tracing over Earth
leaves the Andromeda electron in a pure state. Both routes agree on the
full-basis spectra; they differ in what the reduced object means.
"""

import numpy as np

from labelfree import ManyParticleState, ModeBasis, partial_trace, von_neumann_entropy
from labelfree.standard import reduced_spectrum, to_labeled

basis = ModeBasis(("Earth", "Andromeda"))
state = ManyParticleState.from_slots([basis.ket("Earth", "↑"), basis.ket("Andromeda", "↓")], -1)

labeled = to_labeled(state)
lam = reduced_spectrum(labeled, 1)
print("labeled: reduced matrix of 'particle 1'")
print("  spectrum", np.round(lam[lam > 1e-12], 6), "entropy", f"{-np.sum(lam[lam > 1e-12] * np.log2(lam[lam > 1e-12])):.3f}")

rho = partial_trace(state, 1, sp_basis=basis.localized_basis("Earth"))
labels, block = rho.support()
print("label-free: trace over the particle found on Earth")
print("  support", labels, "entropy", f"{abs(von_neumann_entropy(rho)):.3f}")

full = partial_trace(state, 1)
print("label-free, trace over the whole basis (no region singled out)")
print("  spectrum", np.round(np.sort(full.eigenvalues())[::-1][:2], 6), "- same numbers as the labeled route")
