"""Exact Fourier coefficients for level-one forms of degree one and two.

Degree one: Hecke eigenbases of ``M_k(SL_2(Z))`` built from ``E_4`` and ``E_6``,
Hecke operators, Satake parameters, an explicit double-coset Hecke operator and
numeric Petersson norms.

Degree two: the Siegel Eisenstein series ``E^2_k`` at the holomorphic point,
from Cohen's function ``H(r, N)``::

    a(T) = 2 / (zeta(1-k) zeta(3-2k)) * sum_{d | cont(T)} d^(k-1) H(k-1, det(2T)/d^2)

Binary forms ``(a, b, c)`` stand for ``T = [[a, b/2], [b/2, c]]``.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from sympy import divisors, factorint, isprime, mobius, primerange
from sympy.functions.combinatorial.numbers import kronecker_symbol

from .cache import Cache
from .series import divisor_sigma_table, int_series_mul, series_mul

FORMULA_VERSION = "1"

SUPPORTED_WEIGHTS = (4, 6, 8, 10, 12, 14, 16, 18, 20, 22)


class ModularError(ValueError):
    """Domain error in the modular-forms layer."""


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta values


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(math.comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(math.comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def zeta_negative(m: int) -> Fraction:
    """``zeta(1 - m)`` for ``m >= 1`` (so ``zeta(0) = -1/2``, ``zeta(-1) = -1/12``)."""
    if m < 1:
        raise ValueError("need m >= 1")
    if m == 1:
        return Fraction(-1, 2)
    return -bernoulli(m) / m


# ---------------------------------------------------------------------------
# degree one q-expansions


@dataclass
class QExpansion1:
    """Truncated q-expansion ``sum_{n <= N} a(n) q^n`` with exact coefficients."""

    weight: int
    coeffs: list

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        if n > self.N:
            raise ModularError(f"coefficient a({n}) beyond truncation N={self.N}")
        return self.coeffs[n]

    def __add__(self, other: "QExpansion1") -> "QExpansion1":
        n = min(len(self.coeffs), len(other.coeffs))
        return QExpansion1(self.weight, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __mul__(self, other):
        if isinstance(other, QExpansion1):
            n = min(len(self.coeffs), len(other.coeffs))
            return QExpansion1(self.weight + other.weight, series_mul(self.coeffs, other.coeffs, n))
        return QExpansion1(self.weight, [other * a for a in self.coeffs])

    __rmul__ = __mul__

    def truncate(self, N: int) -> "QExpansion1":
        return QExpansion1(self.weight, self.coeffs[: N + 1])

    def hecke(self, p: int) -> "QExpansion1":
        """``T_p``: ``a(n) -> a(pn) + p^(k-1) a(n/p)``, truncated to ``N // p``."""
        if not isprime(p):
            raise ModularError("hecke() takes a prime")
        k = self.weight
        out = []
        for n in range(self.N // p + 1):
            v = self.coeffs[p * n]
            if n % p == 0:
                v += p ** (k - 1) * self.coeffs[n // p]
            out.append(v)
        return QExpansion1(k, out)

    def __call__(self, z: complex) -> complex:
        q = cmath.exp(2j * math.pi * z)
        return complex(np.polyval([float(c) for c in reversed(self.coeffs)], q))

    def to_json(self) -> dict:
        return {"weight": self.weight, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "QExpansion1":
        return cls(int(data["weight"]), [_num(c) for c in data["coeffs"]])


def _num(text):
    f = Fraction(text)
    return f.numerator if f.denominator == 1 else f


@dataclass
class Eigenform:
    """A Hecke eigenform of level one: its q-expansion, tag and ``T_p`` eigenvalues."""

    form: QExpansion1
    tag: str
    eigenvalues: dict = field(default_factory=dict)
    name: str = ""

    @property
    def weight(self) -> int:
        return self.form.weight

    def a(self, n: int):
        return self.form[n]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tag": self.tag,
            "form": self.form.to_json(),
            "eigenvalues": {str(p): str(v) for p, v in sorted(self.eigenvalues.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Eigenform":
        return cls(
            QExpansion1.from_json(data["form"]),
            data["tag"],
            {int(p): _num(v) for p, v in data["eigenvalues"].items()},
            data.get("name", ""),
        )


def eisenstein_qexp(k: int, N: int) -> QExpansion1:
    """``E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n``."""
    c = -Fraction(2 * k) / bernoulli(k)
    sig = divisor_sigma_table(k - 1, N + 1)
    coeffs = [1] + [c * s for s in sig[1:]]
    if c.denominator == 1:
        coeffs = [int(x) for x in coeffs]
    return QExpansion1(k, coeffs)


def _monomial_exponents(k: int) -> list[tuple[int, int]]:
    """``(a, b)`` with ``4a + 6b = k``, lexicographically descending in ``a``."""
    return sorted(((a, (k - 4 * a) // 6) for a in range(k // 4 + 1) if (k - 4 * a) % 6 == 0), reverse=True)


def _power(base: list[int], e: int, n: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = int_series_mul(out, base, n)
    return out


def _echelon(rows: list[list[int]]) -> list[list[Fraction]]:
    """Reduced echelon form of integer rows (fraction-free elimination, normalised at the end)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                new = [pv * x - f * y for x, y in zip(rows[i], rows[r])]
                g = math.gcd(*new) or 1
                rows[i] = [x // g for x in new]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    out = []
    for row, c in zip(rows, pivots):
        pv = row[c]
        out.append([_num(Fraction(x, pv)) for x in row])
    return out


def modular_basis(k: int, N: int) -> list[QExpansion1]:
    """Echelon basis ``f_i = q^i + O(q^dim)`` of ``M_k`` from monomials in ``E_4``, ``E_6``."""
    n = N + 1
    e4 = eisenstein_qexp(4, N).coeffs
    e6 = eisenstein_qexp(6, N).coeffs
    rows = []
    for a, b in _monomial_exponents(k):
        rows.append(int_series_mul(_power(e4, a, n), _power(e6, b, n), n))
    if len(rows) > n:
        raise ModularError("truncation too small for the dimension of M_k")
    return [QExpansion1(k, r) for r in _echelon(rows)]


def _check_weight(k: int):
    if k not in SUPPORTED_WEIGHTS:
        raise ModularError(f"unsupported weight {k}; expected one of {SUPPORTED_WEIGHTS}")


def qexp_basis(k: int, N: int, cache: Cache | None = None) -> list[Eigenform]:
    """Hecke eigenbasis of ``M_k(SL_2(Z))``: the Eisenstein series, then cusp eigenforms."""
    _check_weight(k)
    if N < 2:
        raise ModularError("truncation must be at least 2")
    params = {"k": k, "N": N}
    if cache is not None:
        hit = cache.load("qexp_basis", params, FORMULA_VERSION)
        if hit is not None:
            return [Eigenform.from_json(x) for x in hit]

    basis = modular_basis(k, N)
    cusp_rows = [f for f in basis if f.coeffs[0] == 0]
    E = eisenstein_qexp(k, N)
    out = [Eigenform(E, "eisenstein", {}, f"E{k}")]
    if len(cusp_rows) > 1:
        # irrational Hecke fields start at weight 24, outside the supported range
        raise ModularError("cusp space of dimension > 1 is not supported")
    for f in cusp_rows:
        if f.coeffs[1] != 1:
            raise ModularError("cusp basis form is not normalised")
        out.append(Eigenform(f, "cusp", {}, "Delta" if k == 12 else f"f{k}"))
    for ef in out:
        for p in primerange(2, N + 1):
            ef.eigenvalues[int(p)] = ef.form.coeffs[p] if ef.tag == "cusp" else 1 + p ** (k - 1)
        _assert_eigen(ef)
    if cache is not None:
        cache.store("qexp_basis", params, FORMULA_VERSION, [x.to_json() for x in out])
    return out


def _assert_eigen(ef: Eigenform):
    f = ef.form
    for p in (2, 3):
        if f.N // p < 1:
            continue
        lam = ef.eigenvalues.get(p)
        tf = f.hecke(p)
        if any(tf.coeffs[n] != lam * f.coeffs[n] for n in range(len(tf.coeffs))):
            raise ModularError(f"{ef.name} is not a T_{p} eigenform")


def cusp_eigenform(k: int, N: int, cache: Cache | None = None) -> Eigenform:
    forms = [f for f in qexp_basis(k, N, cache) if f.tag == "cusp"]
    if not forms:
        raise ModularError(f"no cusp forms of weight {k}")
    return forms[0]


# ---------------------------------------------------------------------------
# Satake parameters


@dataclass(frozen=True)
class SatakeData:
    """Satake parameter at ``p`` of a degree-one eigenform.

    ``alpha + 1/alpha = a_p / p^((k-1)/2)``, which is irrational in general, so
    the exact data kept is its square ``trace_sq`` and sign.  The pair
    ``{alpha, 1/alpha}`` is unordered; ``alpha`` is the root with ``Im >= 0``.
    """

    p: int
    k: int
    a_p: Fraction
    trace_sq: Fraction
    trace_sign: int
    alpha: complex

    @property
    def min_poly(self) -> str:
        return f"X^2 - t*X + 1 with t^2 = {self.trace_sq}, sign(t) = {self.trace_sign:+d}"

    @property
    def trace(self) -> float:
        return self.trace_sign * math.sqrt(self.trace_sq)

    @property
    def sq_trace(self) -> Fraction:
        """``alpha^2 + alpha^-2``, exact."""
        return self.trace_sq - 2


def satake_from_ap(a_p, p: int, k: int) -> SatakeData:
    a_p = Fraction(a_p)
    tsq = a_p * a_p / Fraction(p) ** (k - 1)
    sign = (a_p > 0) - (a_p < 0)
    t = sign * math.sqrt(tsq)
    disc = t * t / 4 - 1
    if disc <= 0:
        alpha = complex(t / 2, math.sqrt(-disc))
    else:
        alpha = complex(t / 2 + math.copysign(math.sqrt(disc), t or 1.0), 0.0)
    return SatakeData(p, k, a_p, tsq, sign, alpha)


def satake(f: Eigenform, p: int) -> SatakeData:
    if f.tag != "cusp":
        raise ModularError("Satake parameters are defined here for cusp eigenforms")
    if p > f.form.N:
        raise ModularError(f"a_{p} not available at truncation {f.form.N}")
    return satake_from_ap(f.form.coeffs[p], p, f.weight)


# ---------------------------------------------------------------------------
# Cohen's function


def _fundamental_split(M: int) -> tuple[int, int]:
    """Write ``M = D f^2`` with ``D`` a fundamental discriminant (``M = 0, 1 mod 4``)."""
    sign = -1 if M < 0 else 1
    sq = 1
    core = 1
    for pr, e in factorint(abs(M)).items():
        sq *= pr ** (e // 2)
        if e % 2:
            core *= pr
    D0 = sign * core
    if D0 % 4 == 1:
        D, f = D0, sq
    else:
        D, f = 4 * D0, sq // 2
    if D * f * f != M:
        raise ModularError(f"{M} is not a discriminant")
    return D, f


def _dirichlet_L_negative(r: int, D: int) -> Fraction:
    """``L(1 - r, chi_D)`` via generalized Bernoulli numbers."""
    m = abs(D)
    B = sum(
        kronecker_symbol(D, a) * bernoulli_poly(r, Fraction(a, m)) for a in range(1, m + 1)
    ) * Fraction(m) ** (r - 1)
    return -B / r


@lru_cache(maxsize=None)
def cohen_H(r: int, N: int) -> Fraction:
    """Cohen's ``H(r, N)``; ``H(1, N)`` is the Hurwitz class number."""
    if r < 1:
        raise ValueError("r must be positive")
    if N < 0:
        raise ValueError("N must be non-negative")
    if N == 0:
        return zeta_negative(2 * r)
    M = (-1) ** r * N
    if M % 4 in (2, 3):
        return Fraction(0)
    D, f = _fundamental_split(M)
    L = _dirichlet_L_negative(r, D)
    total = Fraction(0)
    for d in divisors(f):
        mu = mobius(d)
        if mu:
            total += mu * kronecker_symbol(D, d) * Fraction(d) ** (r - 1) * _sigma(2 * r - 1, f // d)
    return L * total


def _sigma(power: int, n: int) -> int:
    return sum(d**power for d in divisors(n))


# ---------------------------------------------------------------------------
# degree two Eisenstein series


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """GL_2(Z)-reduced representative ``0 <= b <= a <= c`` of a PSD binary form."""
    if a < 0 or c < 0 or b * b > 4 * a * c:
        raise ModularError(f"({a},{b},{c}) is not positive semi-definite")
    while True:
        if a > c:
            a, c = c, a
        if a == 0:
            if b:
                raise ModularError("degenerate form with a = 0 and b != 0")
            return (0, 0, c)
        if abs(b) > a:
            m = (b + a) // (2 * a)
            b, c = b - 2 * a * m, a * m * m - b * m + c
            continue
        if a > c:
            continue
        return (a, abs(b), c)


def form_content(a: int, b: int, c: int) -> int:
    return math.gcd(a, b, c)


@dataclass
class FourierTable2:
    """Fourier coefficients of a degree-two form on reduced ``(a, b, c)`` keys.

    ``max_det`` bounds ``det T = ac - b^2/4`` for rank-two keys; rank-one keys
    ``(0, 0, c)`` are stored for ``c <= max(max_det, 1)``.
    """

    weight: int
    entries: dict
    max_det: int

    def coefficient(self, a: int, b: int, c: int):
        key = reduce_form(a, b, c)
        try:
            return self.entries[key]
        except KeyError:
            raise ModularError(f"T={key} outside the table (max_det={self.max_det})") from None

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "maxDet": self.max_det,
            "entries": [[a, b, c, str(v)] for (a, b, c), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FourierTable2":
        return cls(
            int(data["weight"]),
            {(int(a), int(b), int(c)): _num(v) for a, b, c, v in data["entries"]},
            int(data["maxDet"]),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "c", "value"])
        for (a, b, c), v in sorted(self.entries.items()):
            w.writerow([a, b, c, str(v)])
        return buf.getvalue()


def siegel_eisenstein2_coefficient(k: int, a: int, b: int, c: int) -> Fraction:
    """Coefficient ``a(T)`` of ``E^2_k`` directly from the closed formula."""
    if a == b == c == 0:
        return Fraction(1)
    disc = 4 * a * c - b * b
    if disc < 0:
        raise ModularError("T is not positive semi-definite")
    norm = Fraction(2) / (zeta_negative(k) * zeta_negative(2 * k - 2))
    e = form_content(a, b, c)
    total = Fraction(0)
    for d in divisors(e):
        if disc % (d * d) == 0:
            total += Fraction(d) ** (k - 1) * cohen_H(k - 1, disc // (d * d))
    return norm * total


def _check_eisenstein_weight(k: int):
    if k % 2 or k < 4:
        raise ModularError("degree-2 Eisenstein series needs even k >= 4")


def siegel_eisenstein2(k: int, max_det: int, cache: Cache | None = None) -> FourierTable2:
    """Exact coefficient table of ``E^2_k(Z, 0)`` on reduced forms with ``det T <= max_det``."""
    _check_eisenstein_weight(k)
    if max_det < 0:
        raise ModularError("max_det must be non-negative")
    params = {"k": k, "maxDet": max_det}
    if cache is not None:
        hit = cache.load("eisenstein2", params, FORMULA_VERSION)
        if hit is not None:
            return FourierTable2.from_json(hit)

    cmax = max(max_det, 1)
    deg1 = eisenstein_qexp(k, cmax)
    entries = {(0, 0, 0): Fraction(1)}
    for c in range(1, cmax + 1):
        v = siegel_eisenstein2_coefficient(k, 0, 0, c)
        if v != deg1.coeffs[c]:
            raise ModularError(f"Phi-operator consistency broken at content {c}")
        entries[(0, 0, c)] = v
    bound = 4 * max_det
    a = 1
    while 3 * a * a <= bound:
        for b in range(0, a + 1):
            c = a
            while 4 * a * c - b * b <= bound:
                entries[(a, b, c)] = siegel_eisenstein2_coefficient(k, a, b, c)
                c += 1
        a += 1
    entries = {key: _num(v) for key, v in entries.items()}
    table = FourierTable2(k, entries, max_det)
    if cache is not None:
        cache.store("eisenstein2", params, FORMULA_VERSION, table.to_json())
    return table


# ---------------------------------------------------------------------------
# explicit double-coset Hecke operator for n = 1


def doublecoset_cosets(t: int) -> list[tuple[int, int, int]]:
    """Left coset representatives ``(1/t) [[a, b], [0, d]]`` of ``Gamma diag(t, 1/t) Gamma``."""
    out = []
    n = t * t
    for a in divisors(n):
        d = n // a
        for b in range(d):
            if math.gcd(math.gcd(a, b), d) == 1:
                out.append((int(a), b, int(d)))
    return out


def _exp_sum(bs: Sequence[int], n: int, d: int) -> int:
    """``sum_b exp(2 pi i n b / d)``; an integer since the b-set is stable under units."""
    z = sum(cmath.exp(2j * math.pi * ((n * b) % d) / d) for b in bs)
    r = round(z.real)
    if abs(z - r) > 1e-8 * max(1, len(bs)):
        raise ModularError("exponential sum is not an integer")
    return r


@dataclass(frozen=True)
class HeckeEigenvalue:
    T: tuple
    value: Fraction


def doublecoset_image(f: QExpansion1, t: int, M: int) -> list[Fraction]:
    """Coefficients ``0..M`` of ``f | (Gamma diag(t, 1/t) Gamma)``.

    Each coset ``g = (1/t)[[a, b], [0, d]]`` has ``r(g) = 1`` and contributes
    ``(t/d)^k f((a z + b)/d)``.
    """
    k = f.weight
    cosets = doublecoset_cosets(t)
    groups: dict[tuple[int, int], list[int]] = {}
    for a, b, d in cosets:
        groups.setdefault((a, d), []).append(b)
    out = [Fraction(0)] * (M + 1)
    for (a, d), bs in groups.items():
        w = Fraction(t, d) ** k
        for m in range(M + 1):
            # q^m collects n with n a / d = m
            if (m * d) % a:
                continue
            n = m * d // a
            if n > f.N:
                raise ModularError(f"truncation {f.N} too small for t={t}, m={m}")
            an = f.coeffs[n]
            if an:
                out[m] += w * _exp_sum(bs, n, d) * an
    return out


def hecke_doublecoset_eigenvalue(f: Eigenform | QExpansion1, t: int, check_terms: int = 3) -> HeckeEigenvalue:
    """Eigenvalue of ``Gamma diag(t, 1/t) Gamma`` on ``f`` by explicit coset enumeration."""
    form = f.form if isinstance(f, Eigenform) else f
    if t < 1:
        raise ModularError("t must be positive")
    if t == 1:
        return HeckeEigenvalue((1,), Fraction(1))
    need = t * t
    if form.N < need:
        raise ModularError(f"truncation {form.N} too small to read the eigenvalue at t={t} (need {need})")
    M = max(1, min(check_terms, form.N // need))
    img = doublecoset_image(form, t, M)
    lead = next((m for m in range(M + 1) if form.coeffs[m]), None)
    if lead is None:
        raise ModularError("zero form")
    lam = Fraction(img[lead]) / form.coeffs[lead]
    for m in range(M + 1):
        if img[m] != lam * form.coeffs[m]:
            raise ModularError(f"input is not an eigenform of the t={t} double coset (q^{m})")
    return HeckeEigenvalue((t,), lam)


# ---------------------------------------------------------------------------
# Petersson norms


def petersson_norm_numeric(f: Eigenform | QExpansion1, tol: float = 1e-10, trunc: int | None = None,
                           y_max: float = 12.0) -> tuple[float, float]:
    """``int_F |f|^2 y^(k-2) dx dy`` over the standard fundamental domain.

    Returns ``(value, error_estimate)``.  Uses the truncated q-expansion and
    adaptive quadrature; the error estimate adds the quadrature estimate, the
    truncation effect (comparison with half the terms) and the ``y > y_max``
    tail bound.
    """
    form = f.form if isinstance(f, Eigenform) else f
    if form.coeffs[0] != 0:
        raise ModularError("Petersson norm needs a cusp form")
    k = form.weight
    N = min(trunc or form.N, form.N)

    def integral(nterms):
        c = np.array([float(x) for x in form.coeffs[: nterms + 1]])
        n = np.arange(nterms + 1)

        def integrand(y, x):
            q = np.exp(2j * np.pi * n * complex(x, y))
            v = abs(np.dot(c, q))
            return v * v * y ** (k - 2)

        val, err = integrate.dblquad(
            integrand, 0.0, 0.5, lambda x: math.sqrt(1 - x * x), lambda x: y_max,
            epsabs=tol / 20, epsrel=1e-13,
        )
        return 2 * val, 2 * err

    val, qerr = integral(N)
    val_half, _ = integral(max(1, N // 2))
    # |f(z)| <= sum |a(n)| e^{-2 pi n y}; tail of y^(k-2) |f|^2 beyond y_max
    amax = sum(abs(float(x)) * math.exp(-2 * math.pi * (i - 1) * y_max) for i, x in enumerate(form.coeffs[1: N + 1], 1))
    tail = amax**2 * integrate.quad(lambda y: y ** (k - 2) * math.exp(-4 * math.pi * y), y_max, np.inf)[0]
    err = qerr + abs(val - val_half) + tail
    if err > tol:
        raise ModularError(f"tolerance {tol} unachievable at truncation {N} (estimate {err:.3g})")
    return val, err


def delta_product(z: complex, terms: int = 60) -> complex:
    """``Delta(z) = q prod (1 - q^n)^24`` evaluated from the product."""
    q = cmath.exp(2j * math.pi * z)
    out = q
    qn = 1
    for _ in range(terms):
        qn *= q
        out *= (1 - qn) ** 24
    return out


def petersson_norm_gauss(fn: Callable[[complex], complex], k: int, nodes: int = 80, y_max: float = 12.0) -> float:
    """Tensor Gauss-Legendre quadrature of ``|f|^2 y^(k-2)`` over the fundamental domain.

    The region ``0 <= x <= 1/2``, ``sqrt(1 - x^2) <= y <= y_max`` is mapped to
    the unit square; ``y`` is split at 1.5 and 4 for the fast decay.
    """
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for xi, wi in zip(xs, ws):
        x = 0.25 * (xi + 1)
        wx = 0.25 * wi
        y0 = math.sqrt(1 - x * x)
        for lo, hi in ((y0, 1.5), (1.5, 4.0), (4.0, y_max)):
            half = 0.5 * (hi - lo)
            for yj, wj in zip(xs, ws):
                y = lo + half * (yj + 1)
                v = abs(fn(complex(x, y)))
                total += wx * half * wj * v * v * y ** (k - 2)
    return 2 * total

