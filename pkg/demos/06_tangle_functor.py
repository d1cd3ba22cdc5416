"""Evaluating framed, shaded tangles and link diagrams."""

from halfrib.dsl import parse_link, parse_tangle
from halfrib.halftwist import RibbonChoice
from halfrib.modules import irrep
from halfrib.rootdata import build_root_datum
from halfrib.tangles import components, evaluate, link_invariant, writhe

reps = {"V": irrep(build_root_datum("A", 1), (1,))}
H, C = RibbonChoice.half(), RibbonChoice.standard()

# a shaded cap: evaluation on the half-twisted side
cap = parse_tangle("object: V#^ V#v\nslice: cap@0\n")
print("shaded cap:\n" + evaluate(cap, H, reps).operator.pretty())

# a single half-twist on one strand is X itself
ht = parse_tangle("object: V^\nslice: h+(1)@0\n")
print("h+(1) on V^:\n" + evaluate(ht, H, reps).operator.pretty())

for name, text in [
    ("unknot", "braid 1: ; close"),
    ("hopf", "braid 2: s1 s1 ; close"),
    ("trefoil", "braid 2: s1 s1 s1 ; close"),
    ("figure-8", "braid 3: s1 s2^-1 s1 s2^-1 ; close"),
]:
    d = parse_link(text)
    h, c = link_invariant(d, H, reps), link_invariant(d, C, reps)
    print(f"{name:9} components={components(d)} writhe={writhe(d):+d}  X^-2: {h.to_text():32} C: {c.to_text()}")
