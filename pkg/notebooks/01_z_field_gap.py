"""Certify the gap of H_n = -sum_i Z_i.

The exact gap is 2. The lower bound A on lambda1 + lambda2 comes out at
-2(n - 1), and the EEB upper bound B on lambda1 at -n.
"""

from gapcert import PauliPoly, certify_gap
from gapcert.oracle import spectrum


def z_field(n):
    return PauliPoly.parse(n, " ".join(f"- Z{i}" for i in range(1, n + 1)))


for n in (3, 2):  # n = 3 is quick with the sparse layout; n = 2 (dense) takes about a minute
    h = z_field(n)
    cert = certify_gap(h, k=2, upper_method="eeb", d=n, log=print)
    sp = spectrum(h)
    print(f"n={n}: A={cert.A['certified_bound']:.8f}  B={cert.B['certified_bound']:.8f}  "
          f"gap >= {cert.gap_lower_bound:.8f}  (exact {sp.gap:.1f})")
