"""Temperley-Lieb diagrams, the Kauffman bracket, and a differential test against the functor."""

from halfrib.halftwist import RibbonChoice
from halfrib.modules import irrep
from halfrib.rootdata import build_root_datum
from halfrib.skein import PlanarDiagram, SkeinElement, differential_test, kauffman_bracket, loop_value, tl_compose
from halfrib.tangles import braid_closure, link_invariant

e1 = SkeinElement.of(PlanarDiagram.e(3, 0))
print("loop value:", loop_value().to_text())
print("e1 e1 = delta e1:", tl_compose(e1, e1) == e1.scale(loop_value()))

trefoil = braid_closure(2, [1, 1, 1])
print("bracket of the trefoil:", kauffman_bracket(trefoil).to_text())

reps = {"V": irrep(build_root_datum("A", 1), (1,))}
cal = [("unknot", braid_closure(1, [])), ("hopf", braid_closure(2, [1, 1]))]
held = [("trefoil", trefoil), ("figure8", braid_closure(3, [1, -2, 1, -2]))]
report = differential_test(cal, held, lambda d, normalize: link_invariant(d, RibbonChoice.half(), reps, normalize=normalize))
print("calibration determined:", report["determined"], "| held-out links agree:", report["all_match"])
for name, row in report["held_out"].items():
    print(f"  {name:8} functor {row['functor']:36} bracket model {row['bracket']}")
