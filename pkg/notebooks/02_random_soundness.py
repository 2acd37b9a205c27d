"""Compare the bounds with exact diagonalization on random 2-local Hamiltonians."""

from fractions import Fraction

import numpy as np

from gapcert import PauliPoly, eeb_upper, lasserre_upper, solve_lower
from gapcert.oracle import spectrum
from gapcert.pauli import all_strings

rng = np.random.default_rng(0)


def random_h(n):
    return PauliPoly(n, {s: Fraction(int(rng.integers(-1000, 1001)), 1000) for s in all_strings(n, 2)[1:]})


print("n=2, level 1 lower bound against lambda1 + lambda2")
for _ in range(5):
    h = random_h(2)
    sp = spectrum(h)
    a = solve_lower(h, 1).certified_bound
    print(f"  A={a:+.6f}  exact={sp.lam1 + sp.lam2:+.6f}  slack={sp.lam1 + sp.lam2 - a:.2e}")

print("n=3, upper bounds on lambda1 by degree")
h = random_h(3)
lam1 = spectrum(h).lam1
for d in range(4):
    las = lasserre_upper(h, d).certified_bound
    eeb = eeb_upper(h, d).certified_bound if d else float("nan")
    print(f"  d={d}: Lasserre {las:+.6f}  EEB {eeb:+.6f}  exact {lam1:+.6f}")
