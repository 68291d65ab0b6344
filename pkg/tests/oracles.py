"""Independent reference computations used only by the tests.

None of these share code paths with the package beyond plain data types.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from scipy.linalg import expm
from sympy.functions.combinatorial.numbers import kronecker_symbol


# ---------------------------------------------------------------------------
# finite differences of the kernel in extended precision


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """``expm(J S)`` with ``S`` symmetric lies in ``Sp(n, R)``."""
    S = rng.normal(size=(2 * n, 2 * n)) * scale
    S = (S + S.T) / 2
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return expm(J @ S)


def random_siegel_point(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(n, n))
    X = (X + X.T) / 2
    B = rng.normal(size=(n, n))
    Y = B @ B.T + 0.5 * np.eye(n)
    return X + 1j * Y


def _mp_kernel(g, Z, k, s):
    n = Z.rows
    C = g[n:2 * n, 0:n]
    D = g[n:2 * n, n:2 * n]
    d = mpmath.det(C * Z + D)
    Y = mpmath.matrix(n, n)
    for i in range(n):
        for j in range(n):
            Y[i, j] = mpmath.im(Z[i, j])
    eps = mpmath.det(Y)
    return d ** (-k) * mpmath.exp(-2 * s * mpmath.log(abs(d))) * mpmath.exp(s * mpmath.log(eps))


def fd_contracted_derivative(g: np.ndarray, Z: np.ndarray, k, s, links, vectors, h: float = 1e-8,
                             dps: int = 40) -> complex:
    """``prod_{(a,b)} d^{ab}`` of the kernel by nested central differences.

    ``d^{ab}`` contracted with ``v_a, v_b`` is the holomorphic Wirtinger derivative
    along ``H = (v_a v_b^T + v_b v_a^T) / 2``: ``(1/2)(d/dt - i d/du) f(Z + (t + iu) H)``.
    """
    with mpmath.workdps(dps):
        gm = mpmath.matrix(g.tolist())
        Hs = []
        for a, b in links:
            va, vb = np.asarray(vectors[a]), np.asarray(vectors[b])
            H = (np.outer(va, vb) + np.outer(vb, va)) / 2
            Hs.append(mpmath.matrix(H.tolist()))
        Z0 = mpmath.matrix(Z.tolist())
        hh = mpmath.mpf(h)
        m = len(Hs)
        total = mpmath.mpc(0)
        # each derivative: (1/2)[(f(+h) - f(-h))/(2h) - i (f(+ih) - f(-ih))/(2h)]
        steps = [(1, 1), (-1, -1), (1j, -1j), (-1j, 1j)]
        for combo in itertools.product(range(4), repeat=m):
            w = mpmath.mpc(1)
            Zp = Z0.copy()
            for idx, H in zip(combo, Hs):
                direction, weight = steps[idx]
                w *= weight
                Zp = Zp + H * (mpmath.mpc(direction) * hh)
            total += w * _mp_kernel(gm, Zp, k, mpmath.mpc(s))
        val = total / (4 * hh) ** m
    return complex(val)


# ---------------------------------------------------------------------------
# modular forms


def delta_eta(N: int) -> list[int]:
    """``q prod (1 - q^n)^24`` by schoolbook multiplication."""
    prod = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(24):
            for i in range(N, n - 1, -1):
                prod[i] -= prod[i - n]
    return [0] + prod[:N]


def eisenstein_divisor(k: int, N: int) -> list[Fraction]:
    c = Fraction(-2 * k) / sympy.bernoulli(k)
    return [Fraction(1)] + [c * sympy.divisor_sigma(n, k - 1) for n in range(1, N + 1)]


def naive_mul(a, b, N):
    out = [0] * (N + 1)
    for i in range(N + 1):
        for j in range(N + 1 - i):
            out[i + j] += a[i] * b[j]
    return out


def cusp_by_delta(k: int, N: int) -> list:
    """The unique normalized cusp form for ``k in {12, 16, 18, 20, 22}`` as ``E_{k-12} Delta``."""
    d = delta_eta(N)
    if k == 12:
        return d
    e = eisenstein_divisor(k - 12, N)
    return naive_mul(e, d, N)


def hurwitz_class_number(N: int) -> Fraction:
    """``H(N)`` by counting reduced forms of discriminant ``-N`` (imprimitive ones included)."""
    if N == 0:
        return Fraction(-1, 12)
    if N % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    a = 1
    while 3 * a * a <= N:
        for b in range(-a + 1, a + 1):
            if (b * b + N) % (4 * a):
                continue
            c = (b * b + N) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if a == b == c:
                total += Fraction(1, 3)
            elif a == c and b == 0:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return total


def dirichlet_L_negative_numeric(r: int, D: int) -> float:
    """``L(1 - r, chi_D)`` by mpmath's periodic Dirichlet series continuation."""
    m = abs(D)
    chi = [int(kronecker_symbol(D, a)) for a in range(m)]
    return float(mpmath.dirichlet(1 - r, chi))


def e8_vectors(norm: int) -> np.ndarray:
    """All vectors of the E8 lattice with ``x.x = norm`` (``norm`` in {2, 4})."""
    out = []
    for v in itertools.product(range(-2, 3), repeat=8):
        if sum(x * x for x in v) == norm and sum(v) % 2 == 0:
            out.append(v)
    for v in itertools.product((-3, -1, 1, 3), repeat=8):
        if sum(x * x for x in v) == 4 * norm and (sum(v) // 2) % 2 == 0:
            out.append(tuple(x / 2 for x in v))
    return np.array(out, dtype=float)


def e8_theta2(a: int, b: int, c: int) -> int:
    """Degree-2 theta coefficient: ``#{(x, y) in E8^2 : x.x = 2a, x.y = b, y.y = 2c}``, ``a, c >= 1``."""
    X = e8_vectors(2 * a)
    Y = X if a == c else e8_vectors(2 * c)
    G = X @ Y.T
    return int(np.count_nonzero(np.abs(G - b) < 1e-9))


def hecke_tp2_eigen(ap: int, p: int, k: int) -> Fraction:
    """Classical ``T(p^2)`` eigenvalue ``a_p^2 - p^(k-1)``; used with the ``p^(2-k)`` scaling."""
    return Fraction(ap * ap - p ** (k - 1))


def gamma_pq_numeric(p: int, q: int, s: float) -> float:
    """``gamma_{p,q}(s)`` directly from Gamma quotients (mpmath)."""
    def Gn(n, x):
        return mpmath.fprod(mpmath.gamma(x - mpmath.mpf(j - 1) / 2) for j in range(1, n + 1))

    if q % 2 == 0:
        return float(Gn(p, (s + q) / 2) / Gn(p, s / 2))
    return float(Gn(p - 1, (s + q) / 2) / Gn(p - 1, (s - 1) / 2))


def petersson_direct(coeffs, k: int, n: int = 200) -> float:
    """Midpoint-rule double integral over the fundamental domain, for rough agreement checks."""
    c = np.array([float(x) for x in coeffs])
    idx = np.arange(len(c))
    total = 0.0
    xs = (np.arange(n) + 0.5) / n * 0.5
    for x in xs:
        y0 = math.sqrt(1 - x * x)
        ys = y0 + (np.arange(n) + 0.5) / n * (8.0 - y0)
        dy = (8.0 - y0) / n
        for y in ys:
            v = abs(np.dot(c, np.exp(2j * np.pi * idx * complex(x, y))))
            total += v * v * y ** (k - 2) * dy * (0.5 / n)
    return 2 * total


# ---------------------------------------------------------------------------
# pole candidate sets, written out case by case (s -> order bound)


def feit_poles_oracle(n, k):
    """Feit's candidates in ``s`` for the normalized degree-n series, by direct transcription."""
    if 2 * k >= n:
        return {} if n % 4 else {Fraction(n + 2 - 2 * k, 4): 1}
    # k + 2s integral in [[(n+3)/2], n-k+1]
    return {Fraction(m - k, 2): 1 for m in range((n + 3) // 2, n - k + 2)}


def klingen_poles_oracle(p, q, k):
    eps = q % 2
    if 2 * k >= p + q:
        if (p + q) % 4 != 0:
            return {}
        if (p == q and q % 2 == 0) or (p - q == 2 and q % 2 == 1):
            return {Fraction(p - q, 2): 1, Fraction(p - q, 2) + 1: 1}
        return {}
    if k >= q + eps + 2:
        return {}
    half = (q + eps - k) // 2
    out = {}
    for s in range(k - q, p - k + 2):
        j_left = s - (k - q)
        j_right = p - k + 1 - s
        bounds = [min(j // 2, half) + 1 for j in (j_left, j_right) if 0 <= j <= (p + q) // 2 - k]
        if 2 * s == p - q + 1:
            bounds.append(half)
        if bounds and min(bounds) >= 1:
            out[Fraction(s)] = min(bounds)
    return out


def lambda_poles_oracle(q, k):
    if k >= q:
        return {} if q % 2 else {Fraction(0): 1, Fraction(1): 1}
    out = {}
    for j in range(q - k + 1):
        out[Fraction(k - q + j)] = j // 2 + 1
        out[Fraction(q - k + 1 - j)] = j // 2 + 1
    return out
