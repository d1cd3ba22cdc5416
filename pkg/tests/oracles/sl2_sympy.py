"""Independent sympy recomputation of the sl2 values frozen into the tests.

Nothing here imports halfrib.  Run ``python tests/oracles/sl2_sympy.py`` to
reprint the values; the tests hold literal copies.

Variable: s = q^(1/4), so q = s^4 (matching the package's root order 4 for sl2).
"""

import itertools

import sympy as sp

s = sp.symbols("s")
q = s**4


def qint(n):
    return sp.simplify((q**n - q**-n) / (q - q**-1))


def qfact(n):
    out = sp.Integer(1)
    for k in range(1, n + 1):
        out *= qint(k)
    return out


def spin(n):
    """(n+1)-dim sl2 module; basis v_0 (top, weight n) ... v_n (weight -n)."""
    dim = n + 1
    E = sp.zeros(dim)
    F = sp.zeros(dim)
    wts = [n - 2 * k for k in range(dim)]
    # F v_k = [k+1] v_{k+1}, E v_{k+1} = [n-k] v_k
    for k in range(n):
        F[k + 1, k] = qint(k + 1)
        E[k, k + 1] = qint(n - k)
    return E, F, wts


def K_of(wts):
    return sp.diag(*[q**w for w in wts])


def tensor(A, B):
    EA, FA, wA = A
    EB, FB, wB = B
    KA, KB = K_of(wA), K_of(wB)
    IA, IB = sp.eye(len(wA)), sp.eye(len(wB))
    E = sp.kronecker_product(EA, KB) + sp.kronecker_product(IA, EB)
    F = sp.kronecker_product(FA, IB) + sp.kronecker_product(KA.inv(), FB)
    wts = [a + b for a in wA for b in wB]
    return E, F, wts


def left_dual(A):
    E, F, wts = A
    K = K_of(wts)
    # x acts on f by f o S(x): S(E) = -E K^-1, S(F) = -K F
    Ed = -(E * K.inv()).T
    Fd = -(K * F).T
    return Ed, Fd, [-w for w in wts]


def divided(M, n):
    return M**n / qfact(n)


def T_op(mod):
    E, F, wts = mod
    dim = len(wts)
    out = sp.zeros(dim)
    for j in range(dim):
        vec = sp.zeros(dim, 1)
        vec[j] = 1
        m = wts[j]
        acc = sp.zeros(dim, 1)
        for a in range(dim):
            for c in range(dim):
                b = a + c + m
                if b < 0 or b >= dim + 2:
                    continue
                acc += (-1) ** b * q ** (b - a * c) * divided(E, a) * divided(F, b) * divided(E, c) * vec
        out[:, j] = acc
    return out.applyfunc(sp.simplify)


def J_op(mod):
    _, _, wts = mod
    return sp.diag(*[s ** (m * m + 2 * m) for m in wts])  # q^{m^2/4 + m/2}


def X_op(mod):
    return (J_op(mod) * T_op(mod)).applyfunc(sp.simplify)


def R_op(A, B):
    XA, XB, XAB = X_op(A), X_op(B), X_op(tensor(A, B))
    return (sp.kronecker_product(XA.inv(), XB.inv()) * XAB).applyfunc(sp.simplify)


def drinfeld_u(V):
    Vd = left_dual(V)
    R = R_op(V, Vd)
    n = len(V[2])
    u = sp.zeros(n)
    for i in range(n):
        for j in range(n):
            u[i, j] = sum(R[m * n + m, j * n + i] for m in range(n))
    return u.applyfunc(sp.simplify)


def fs(V, G):
    """Sign with F = FS * F^T G for F spanning Hom(V, V*)."""
    E, F, wts = V
    Ed, Fd, _ = left_dual(V)
    n = len(wts)
    syms = sp.symbols(f"f0:{n * n}")
    Fm = sp.Matrix(n, n, syms)
    eqs = list(Fm * E - Ed * Fm) + list(Fm * F - Fd * Fm) + list(Fm * K_of(wts) - K_of([-w for w in wts]) * Fm)
    sol = sp.solve(eqs, syms, dict=True)[0]
    Fm = Fm.subs(sol)
    free = [x for x in syms if Fm.has(x)]
    Fm = Fm.subs({free[0]: 1}).subs({x: 0 for x in free[1:]})
    rhs = (Fm.T * G).applyfunc(sp.simplify)
    if (Fm - rhs).applyfunc(sp.simplify) == sp.zeros(n):
        return 1
    if (Fm + rhs).applyfunc(sp.simplify) == sp.zeros(n):
        return -1
    return None


# -- Kauffman bracket from PD codes ------------------------------------------

A = sp.symbols("A")


def bracket_pd(pd):
    total = 0
    for state in itertools.product((0, 1), repeat=len(pd)):
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                x = parent[x]
            return x

        def join(a, b):
            parent[find(a)] = find(b)

        coeff = 1
        for (a, b, c, d), st in zip(pd, state):
            if st == 0:
                join(a, b), join(c, d)
                coeff *= A
            else:
                join(a, d), join(b, c)
                coeff *= A**-1
        loops = len({find(x) for x in parent})
        total += coeff * (-A**2 - A**-2) ** (loops - 1)
    return sp.expand(total)


TREFOIL_PD = [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)]
FIGURE8_PD = [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)]


def main():
    V, V2 = spin(1), spin(2)
    print("T on V:", T_op(V).tolist())
    print("T on V2 middle:", sp.factor(T_op(V2)[1, 1]))
    X = X_op(V)
    print("X on V:", X.tolist())
    print("X^2 on V:", (X * X).applyfunc(sp.simplify).tolist())
    print("R on VV:", R_op(V, V).tolist())
    u = drinfeld_u(V)
    print("u on V:", u.tolist())
    vC = s**-6  # q^{-3/2}
    vX = -(s**-6)
    gC = (u / vC).applyfunc(sp.simplify)
    gX = (u / vX).applyfunc(sp.simplify)
    print("g_C:", gC.tolist(), "g_X2:", gX.tolist())
    print("FS_C:", fs(V, gC), "FS_X2:", fs(V, gX))
    # singular vector at weight 0 in V (x) V
    E, F, w = tensor(V, V)
    ns = E.nullspace()
    print("singular:", [list(v.applyfunc(sp.simplify)) for v in ns])
    # normalized Jones-type values, unknot normalized to 1
    for name, pd, wr in (("trefoil", TREFOIL_PD, None), ("figure8", FIGURE8_PD, 0)):
        b = bracket_pd(pd)
        print(name, "bracket/unknot:", b)


if __name__ == "__main__":
    main()
