"""Arbitrary-precision reimplementation used to produce frozen expected values.

Shares no code with the package: kets are dicts keyed by level tuples, every
contraction is an explicit loop, and spectra come from mpmath.
"""

import mpmath as mp

mp.mp.dps = 40

D = 4
ZERO = mp.mpf("1e-30")


def dilation_angle(omega, r0):
    omega, r0 = mp.mpf(omega), mp.mpf(r0)
    return mp.atan(mp.exp(-omega / 2 * mp.sqrt(1 - 1 / r0)))


def hh_to_boulware(level, q):
    """Hartle-Hawking level -> {(region I, region IV): amplitude}."""
    c, s = mp.cos(q), mp.sin(q)
    if level == 0:
        return {(0, 0): c * c, (1, 2): s * c, (2, 1): s * c, (3, 3): s * s}
    if level == 1:
        return {(1, 0): c, (3, 1): s}
    if level == 2:
        return {(2, 0): c, (3, 2): -s}
    raise ValueError("pair level not supported")


def transform_ket(ket, q):
    out = {}
    for (a, b), amp in ket.items():
        for (r, rbar), coeff in hh_to_boulware(b, q).items():
            out[(a, r, rbar)] = out.get((a, r, rbar), 0) + amp * coeff
    return out


def rho_ar(components, q):
    """sum_k w_k Tr_IV |psi_k'><psi_k'| for two-mode kets psi_k given as dicts."""
    rho = mp.matrix(D * D, D * D)
    for weight, ket in components:
        t = transform_ket(ket, q)
        for (a, r, rbar), x in t.items():
            for (a2, r2, rbar2), y in t.items():
                if rbar == rbar2:
                    rho[a * D + r, a2 * D + r2] += weight * x * mp.conj(y)
    return rho


def bell_components():
    h = 1 / mp.sqrt(2)
    return [(mp.mpf(1), {(0, 0): h, (1, 2): h})]


def w_components():
    h = 1 / mp.sqrt(2)
    return [(mp.mpf(1) / 3, {(0, 0): mp.mpf(1)}),
            (mp.mpf(2) / 3, {(0, 1): h, (1, 0): h})]


def entropy_of(m):
    ev = mp.eigh(m, eigvals_only=True)
    h = mp.mpf(0)
    for x in ev:
        x = mp.re(x)
        if x > ZERO:
            h -= x * mp.log(x, 2)
    return h


def reduce_a(rho):
    out = mp.matrix(D, D)
    for a in range(D):
        for a2 in range(D):
            out[a, a2] = sum(rho[a * D + b, a2 * D + b] for b in range(D))
    return out


def reduce_b(rho):
    out = mp.matrix(D, D)
    for b in range(D):
        for b2 in range(D):
            out[b, b2] = sum(rho[a * D + b, a * D + b2] for a in range(D))
    return out


def observables():
    r3 = mp.sqrt(3)
    j = mp.mpc(0, 1)
    sx = mp.matrix([[0, r3, 0, 0], [r3, 0, 2, 0], [0, 2, 0, r3], [0, 0, r3, 0]]) / 2
    sy = mp.matrix([[0, -j * r3, 0, 0], [j * r3, 0, -2 * j, 0],
                    [0, 2 * j, 0, -j * r3], [0, 0, j * r3, 0]]) / 2
    sz = mp.diag([mp.mpf(3) / 2, mp.mpf(1) / 2, -mp.mpf(1) / 2, -mp.mpf(3) / 2])
    return {"x": sx, "y": sy, "z": sz}


def basis_vectors(label):
    _, q = mp.eigh(observables()[label])
    return [[q[i, k] for i in range(D)] for k in range(D)]


def dephased(rho, vecs):
    """sum_j (P_j x I) rho (P_j x I)."""
    out = mp.matrix(D * D, D * D)
    for u in vecs:
        proj = [[u[a] * mp.conj(u[a2]) for a2 in range(D)] for a in range(D)]
        for a in range(D):
            for b in range(D):
                for a2 in range(D):
                    for b2 in range(D):
                        acc = 0
                        for x in range(D):
                            for y in range(D):
                                acc += proj[a][x] * rho[x * D + b, y * D + b2] * proj[y][a2]
                        out[a * D + b, a2 * D + b2] += acc
    return out


def holevo(rho, vecs):
    h_b = entropy_of(reduce_b(rho))
    avg = mp.mpf(0)
    for u in vecs:
        block = mp.matrix(D, D)
        for b in range(D):
            for b2 in range(D):
                block[b, b2] = sum(mp.conj(u[a]) * rho[a * D + b, a2 * D + b2] * u[a2]
                                   for a in range(D) for a2 in range(D))
        p = mp.re(sum(block[b, b] for b in range(D)))
        if p > ZERO:
            avg += p * entropy_of(block / p)
    return h_b - avg


def overlap_c1(l1, l2):
    v1, v2 = basis_vectors(l1), basis_vectors(l2)
    return max(abs(sum(mp.conj(x) * y for x, y in zip(u, v))) ** 2 for u in v1 for v in v2)


def report(components, q, labels=("x", "y")):
    rho = rho_ar(components, q)
    h_ab = entropy_of(rho)
    h_a = entropy_of(reduce_a(rho))
    h_b = entropy_of(reduce_b(rho))
    v1, v2 = basis_vectors(labels[0]), basis_vectors(labels[1])
    lhs = entropy_of(dephased(rho, v1)) + entropy_of(dephased(rho, v2)) - 2 * h_b
    mi = h_a + h_b - h_ab
    j1, j2 = holevo(rho, v1), holevo(rho, v2)
    mu = -mp.log(overlap_c1(*labels), 2)
    return {
        "lhs": lhs, "mutual_info": mi, "holevo_m1": j1, "holevo_m2": j2,
        "u1": mu + h_a - mi, "u2": mu + h_a - j1 - j2, "h_a": h_a,
    }


if __name__ == "__main__":
    mp.nprint(dilation_angle(10, "1.05"), 20)
    for name, comps, q in [
        ("bell q=pi/4", bell_components(), mp.pi / 4),
        ("bell q=0", bell_components(), mp.mpf(0)),
        ("bell O=10 R0=1.05", bell_components(), dilation_angle(10, "1.05")),
        ("bell O=10 R0=1.02", bell_components(), dilation_angle(10, "1.02")),
        ("w O=30 R0=1.01", w_components(), dilation_angle(30, "1.01")),
    ]:
        rep = report(comps, q)
        print(name, {k: mp.nstr(v, 17) for k, v in rep.items()})
