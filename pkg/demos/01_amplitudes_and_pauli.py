"""Amplitudes without labels.

A two-particle ket |a, b> just lists the occupied one-particle states. Its
overlap with another ket is the permanent (bosons) or the determinant
(fermions) of the matrix of one-particle overlaps. Exclusion for fermions
is then a property of the determinant, not an extra rule.
"""

import numpy as np

from labelfree import ManyParticleState, ModeBasis, amplitude, make_state, normalize, permanent_ryser
from labelfree.errors import NullStateError

basis = ModeBasis(("L", "R"))
up_L = basis.ket("L", "↑")
down_R = basis.ket("R", "↓")
tilted = make_state(basis, {"L": 0.6, "R": 0.8}, "↑")

for eta, name in ((1, "bosons"), (-1, "fermions")):
    ket = ManyParticleState.from_slots([up_L, down_R], eta)
    swapped = ManyParticleState.from_slots([down_R, up_L], eta)
    bra = ManyParticleState.from_slots([tilted, down_R], eta)
    print(f"{name}:")
    print(f"  <L↑,R↓|L↑,R↓>     = {amplitude(ket, ket).real:+.3f}")
    print(f"  <L↑,R↓|R↓,L↑>     = {amplitude(ket, swapped).real:+.3f}   (exchange gives eta)")
    print(f"  <tilted,R↓|L↑,R↓> = {amplitude(bra, ket).real:+.3f}   (0.6 from the L component)")

    double = ManyParticleState.from_slots([up_L, up_L], eta)
    try:
        n = normalize(double)
        print(f"  |L↑,L↑> has squared norm {double.self_amplitude():.0f}; normalized coefficient {n.terms[0].coeff.real:.4f}")
    except NullStateError:
        print("  |L↑,L↑> is the null vector: two fermions cannot share a state")
    print()

# the bosonic kernel: Ryser's formula, fast enough for N = 20
rng = np.random.default_rng(0)
m = rng.normal(size=(20, 20)) / 4
print(f"permanent of a random 20x20 matrix: {permanent_ryser(m).real:.6e}")
