"""Entanglement of spin-exchanged states, with and without spatial overlap.

SPES3 puts one particle in each of L, C, R and cycles a single ↑ through
them. Tracing out the particle found in L leaves an entropy of
log2(3) - 2/3, the same for bosons and fermions. Letting C coincide with L
makes the statistics matter: the fermionic cyclic term with two ↓ in L is
forbidden, the bosonic one survives.
"""

import math

from labelfree import ModeBasis, SpesSpec, build_spes, overlap_spes3_entropy, partial_trace, von_neumann_entropy

lcr = ModeBasis(("L", "C", "R"))
print("separated modes L, C, R")
for eta, name in ((1, "bosons"), (-1, "fermions")):
    s = build_spes(SpesSpec(lcr, ("L", "C", "R"), ("↑", "↓", "↓"), eta))
    rho = partial_trace(s, 1, sp_basis=lcr.localized_basis("L"))
    labels, block = rho.support()
    print(f"  {name:8s} S = {von_neumann_entropy(rho):.12f}  support {labels}")
print(f"  log2(3) - 2/3 = {math.log2(3) - 2 / 3:.12f}")

lr = ModeBasis(("L", "R"))
print("\nC = L (two particles share the L wavefunction)")
for eta, name in ((1, "bosons"), (-1, "fermions")):
    s = build_spes(SpesSpec(lr, ("L", "L", "R"), ("↑", "↓", "↓"), eta))
    print(f"  {name:8s} state:")
    for line in s.describe(3).splitlines():
        print(f"    {line}")
    rho = partial_trace(s, 1, sp_basis=lr.localized_basis("L"))
    print(f"  {'':8s} S = {von_neumann_entropy(rho):.12f}   closed form {overlap_spes3_entropy(eta):.12f}")
