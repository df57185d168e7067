"""Independent NumPy/SciPy reference values frozen into the unit tests.

Run: python3 tests/oracle/derive_values.py
"""

import numpy as np
from math import factorial
from scipy.linalg import expm


def line_h(G, Om):
    m = len(G)
    n = 1 + 2 * m
    h = np.zeros((n, n))
    for s in range(m):
        h[0, 1 + s] = h[1 + s, 0] = G[s]
        h[1 + s, 1 + m + s] = h[1 + m + s, 1 + s] = Om[s]
    return h


def angles(G, Om):
    x = np.array(G) / np.array(Om)
    theta = np.arctan(np.linalg.norm(x))
    phi = [np.arctan2(x[k], np.linalg.norm(x[:k])) for k in range(1, len(x))]
    return theta, phi


def null_vector(h):
    w, v = np.linalg.eigh(h)
    k = np.argmin(abs(w))
    vec = v[:, k]
    return vec * np.sign(vec[0])


def fock_coherent(alpha, nmax):
    n = np.arange(nmax + 1)
    return np.exp(-abs(alpha) ** 2 / 2) * alpha ** n / np.sqrt([float(factorial(int(k))) for k in n])


def product(vectors):
    out = vectors[0]
    for v in vectors[1:]:
        out = np.kron(out, v)
    return out


def cat(branches, nmax):
    psi = sum(w * product([fock_coherent(a, nmax) for a in alphas]) for w, alphas in branches)
    return psi / np.linalg.norm(psi)


def entropy(psi, dims, keep):
    t = psi.reshape(dims)
    rest = [i for i in range(len(dims)) if i not in keep]
    t = np.transpose(t, keep + rest).reshape(int(np.prod([dims[i] for i in keep])), -1)
    p = np.linalg.svd(t, compute_uv=False) ** 2
    p = p[p > 1e-300]
    return float(-(p * np.log(p)).sum())


def log_negativity_traced(psi, d, traced):
    t = psi.reshape(d, d, d)
    t = np.moveaxis(t, traced, 2)
    rho = np.einsum("abk,cdk->abcd", t, t.conj())
    pt = np.transpose(rho, (0, 3, 2, 1)).reshape(d * d, d * d)
    ev = np.linalg.eigvalsh(pt)
    return float(np.log(np.abs(ev).sum()))


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("theta m=1 G=1 Omega=100:", repr(float(angles([1.0], [100.0])[0])))
    print("theta m=2 G=(1,1) Omega=100:", repr(float(angles([1.0, 1.0], [100.0, 100.0])[0])))
    G, Om = [0.6, 1.7, 2.3], [1.1, 0.8, 1.9]
    th, ph = angles(G, Om)
    print("m=3 angles:", float(th), [float(p) for p in ph])
    print("m=3 null vector:", null_vector(line_h(G, Om)).tolist())

    # Constant controls: M = exp(-i h T).
    h = line_h([1.0, 0.7], [2.0, 1.4])
    M = expm(-1j * h * 0.9)
    print("expm col0:", [(float(z.real), float(z.imag)) for z in M[:, 0]])

    # Cat entropies.
    a = 0.5 / np.sqrt(2)
    psi = cat([(1, [a, a]), (1, [-a, -a])], 30)
    print("E Psi+ a0=0.5:", repr(float(entropy(psi, [31, 31], [0]))))
    a = 1.2
    psi = cat([(1, [a * 0.6, a * 0.8]), (-1, [-a * 0.6, -a * 0.8])], 30)
    print("E Psi- a0=1.2 w=(0.6,0.8):", repr(float(entropy(psi, [31, 31], [0]))))

    # GHZ-like three-mode cat, '-' sign, alpha0 = 1.5 per branch, equal weights.
    a = 1.5 / np.sqrt(3)
    d = 16
    psi = cat([(1, [a, a, a]), (-1, [-a, -a, -a])], d - 1)
    print("log negativity GHZ- trace E3:", repr(float(log_negativity_traced(psi, d, 2))))
    b = [0.9 * 0.5, 0.9 * 0.7, 0.9 * np.sqrt(1 - 0.74)]
    psi = cat([(1, b), (1, [-x for x in b])], d - 1)
    for k in range(3):
        print("log negativity unequal + trace", k, repr(float(log_negativity_traced(psi, d, k))))
