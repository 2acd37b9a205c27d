"""Exact Lie relations, the span check and the derived constants."""

from gapcert import oracle
from gapcert.genrel import f_map, g_map, gen_relations, span_check, verify_relations
from gapcert.pauli import PauliString

p = PauliString.parse(3, "X1 Y2 Z3")
tree = g_map(p)
print("g(X1 Y2 Z3) =", tree, " f(g(P)) =", f_map(tree, 3))

rs = gen_relations(2)
print("relations for n=2:", verify_relations(rs).counts)
print("span ranks:", span_check(2), span_check(3))

table = oracle.derive_constants()
for e in table["entries"]:
    print(f"{e['name']:>14} = {e['value']:>3}   ({e['note']})")
for n in (2, 3):
    r = oracle.verify_pair_constraint(n)
    print(f"pair bound 12 on n={n}: ok={r.ok}, min eigenvalue {r.details['min_eigenvalue']:.3g}")
