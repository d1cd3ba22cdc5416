"""Root data for types A1, A2, A3: Cartan data, the longest element, P/Q characters."""

from halfrib.rootdata import build_root_datum, gaussian_characters, order2_characters

for rank in (1, 2, 3):
    d = build_root_datum("A", rank)
    print(f"== {d.name}")
    print("  longest word w0      :", d.longest_word)
    print("  diagram automorphism :", d.theta)
    print("  root of q used       : v^%d = q" % d.L)
    print("  order-2 characters   :", [phi.label() for phi in order2_characters(d)])
    print("  characters of P/Q    :", [phi.label() for phi in gaussian_characters(d)])
