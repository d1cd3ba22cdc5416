"""Ribbon elements: the standard C, the half-twist choice X^-2 and its twists."""

from halfrib.halftwist import RibbonChoice, classify_ribbons, fs_indicator, verify_ribbon_axioms
from halfrib.modules import irrep
from halfrib.rootdata import build_root_datum

a1 = build_root_datum("A", 1)
V = irrep(a1, (1,))
for c in (RibbonChoice.standard(), RibbonChoice.half(), RibbonChoice("x-inverse")):
    axioms = verify_ribbon_axioms(c, a1, [(1,), (2,)])
    print(f"{c.label:6} axioms: {axioms}")

print("FS indicator of the sl2 standard module: C ->", fs_indicator(RibbonChoice.standard(), V),
      "| X^-2 ->", fs_indicator(RibbonChoice.half(), V))

for rank in (1, 2, 3):
    cl = classify_ribbons(build_root_datum("A", rank))
    rows = [(c.choice.label, c.verified, c.is_standard) for c in cl.choices]
    print(f"A{rank}: {len(rows)} ribbon choices (label, verified, equals C): {rows}")
a3 = classify_ribbons(build_root_datum("A", 3))
print("A3: order-4 characters squaring to the one giving C act on the standard module by",
      [complex(phi((1, 0, 0))) for phi in a3.standard_square_roots])
