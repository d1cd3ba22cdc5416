"""Exact arithmetic in Q(i)(v), where v is a fixed root of q."""

from halfrib.scalars import GaussianRational, Scalar, q_power, qint, v_power

L = 4  # v^4 = q, enough for sl2

q = q_power(1, L)
print("q          =", q.to_text())
print("q^(1/2)    =", q_power(0.5, L).to_text(), "(stored as a power of v)")
print("[3]        =", qint(3, L).to_text())

# rational functions reduce to a canonical form, so equality is structural
x = (q * q - 1) / (q - 1)
print("(q^2-1)/(q-1) =", x.to_text(), "| equals q+1:", x == q + 1)

# Gaussian rational coefficients appear for twisted ribbon choices
i = Scalar.const(GaussianRational(0, 1), L)
print("i*i        =", (i * i).to_text())
print("v^3 * v^-3 =", (v_power(3, L) * v_power(-3, L)).to_text())
print("JSON form of [2]:", qint(2, L).to_json())
