"""The half-twist operator X = J T_w0 and the braiding it induces."""

from halfrib.halftwist import (
    braiding,
    braiding_is_intertwiner,
    conjugation_check,
    half_twist,
    half_twist_report,
    self_test,
    yang_baxter_check,
)
from halfrib.modules import irrep
from halfrib.rootdata import build_root_datum

print("calibration self-test failures:", self_test())

V = irrep(build_root_datum("A", 1), (1,))
print("X on the sl2 standard module:\n" + half_twist(V).pretty())
print("X^2 (a central scalar):\n" + (half_twist(V) @ half_twist(V)).pretty())
print("half-twist identities:", half_twist_report(V))

# the R-matrix comes from X on the tensor product and X on each factor
print("R on V (x) V:\n" + braiding(V, V).R.pretty())
for rank in (1, 2):
    d = build_root_datum("A", rank)
    W = irrep(d, d.fundamental(0))
    print(f"{d.name}: intertwiner {braiding_is_intertwiner(W, W)}, Yang-Baxter {yang_baxter_check(W)}, conjugation {conjugation_check(W)}")
