"""Creation and annihilation operators from wedge and dot products.

a†(k) prepends |k> to a ket; a(k) projects one particle onto <k|. The usual
eta-brackets follow from these definitions. Pair operators obey plain
commutators even for fermions, and a(j,k) is not a(j)a(k).
"""

from labelfree import ManyParticleState, ModeBasis, annihilate, commutator_check, create, pair_annihilate
from labelfree.states import coordinate_norm
from labelfree.verification import basis_trials, random_single

import numpy as np

basis = ModeBasis(("A", "B"))
rng = np.random.default_rng(1)
j, k = random_single(basis, rng), random_single(basis, rng)

for eta, name in ((1, "bosons"), (-1, "fermions")):
    trials = basis_trials(basis, eta, 3)
    r = commutator_check(j, k, trials)
    print(f"{name}: {len(trials)} basis trials, random non-orthogonal j, k")
    print(f"  [a(j), a†(k)]_eta - <j|k>  residual {r.one_body:.1e}")
    print(f"  [a(j), a(k)]_eta           residual {r.annihilators:.1e}")
    print(f"  [a†(j), a†(k)]_eta         residual {r.creators:.1e}")

print()
three = ModeBasis(("A", "B", "C"))
jj, kk, mm, nn = (three.ket(x, s) for x in "AB" for s in three.spin_labels)
r = commutator_check(jj, kk, basis_trials(three, -1, 4), pair=(mm, nn))
print(f"fermion pair operators, disjoint pairs: [a(j,k), a†(m,n)] residual {r.pair:.1e} with a plain commutator")

u, v = three.ket("A", "↑"), three.ket("B", "↓")
s = ManyParticleState.from_slots([u, v], -1)
diff = pair_annihilate(u, v, s) - annihilate(u, annihilate(v, s))
print(f"fermions: || a(u,v)|u,v> - a(u)a(v)|u,v> || = {coordinate_norm(diff):.1f}")
print(f"          a(u,v)|u,v> = {pair_annihilate(u, v, s).scalar().real:+.0f},  a(u)a(v)|u,v> = {annihilate(u, annihilate(v, s)).scalar().real:+.0f}")
print(f"vacuum: a†(A↑)|vac> has {create(u, ManyParticleState.vacuum(three, -1)).n} particle")
