"""Highest weight modules, tensor products and their decomposition."""

from halfrib.modules import decompose, dual, irrep, tensor
from halfrib.rootdata import build_root_datum

a1 = build_root_datum("A", 1)
a2 = build_root_datum("A", 2)

V = irrep(a1, (1,))
print("sl2 standard module: dim", V.dim, "weights", V.weights)
print("E acting on it:\n" + V.E[0].pretty())

VV = tensor(V, V)
print("V (x) V splits as:", [s.weight for s in decompose(VV)])

W = irrep(a2, (1, 1))
print("sl3 adjoint: dim", W.dim)
print("sl3 standard (x) its dual splits as:", [s.weight for s in decompose(tensor(irrep(a2, (1, 0)), dual(irrep(a2, (1, 0)))))])
