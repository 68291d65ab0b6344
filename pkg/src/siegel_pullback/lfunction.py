"""Standard L-functions of degree-one eigenforms, gamma factors and pole tables.

Convention for ``n = 1``: the three inverse roots of the standard Euler factor
at ``p`` are ``1, alpha^2, alpha^-2`` where ``alpha`` is the unitary Satake
parameter of :func:`siegel_pullback.modular.satake`.  Then
``alpha^2 + alpha^-2 = a_p^2 / p^(k-1) - 2`` is rational, and every Euler
factor has exact rational coefficients.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from sympy import factorint, primerange

from .modular import Eigenform, ModularError, SatakeData, cusp_eigenform, satake


class LFunctionError(ValueError):
    """Domain error: divergent range, Gamma pole, missing data, parameters out of scope."""


# ---------------------------------------------------------------------------
# exact polynomials in one variable, coefficient lists lowest degree first


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_trim(a: Sequence[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def poly_compose_affine(a: Sequence[Fraction], c0, c1) -> list[Fraction]:
    """``a(c0 + c1 s)`` by Horner's rule."""
    out = [Fraction(0)]
    for coef in reversed(a):
        out = poly_mul(out, [Fraction(c0), Fraction(c1)])
        out[0] += coef
    return poly_trim(out)


def poly_eval(a: Sequence, x):
    v = 0
    for coef in reversed(a):
        v = v * x + coef
    return v


def poly_str(a: Sequence[Fraction], var: str = "s") -> str:
    parts = []
    for i, c in enumerate(a):
        if c:
            parts.append(f"{c}" + ("" if i == 0 else f"*{var}" if i == 1 else f"*{var}^{i}"))
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Euler factors


@dataclass(frozen=True)
class EulerFactor:
    """``denominator(X)`` with ``X = p^-s``; the local factor is its reciprocal."""

    p: int
    n: int
    denominator: tuple

    @property
    def degree(self) -> int:
        return len(poly_trim(self.denominator)) - 1

    def value(self, s: complex) -> complex:
        if complex(s).real <= 1:
            raise LFunctionError("Euler factor evaluated outside Re(s) > 1")
        X = complex(self.p) ** (-complex(s))
        return 1 / poly_eval([complex(c) for c in self.denominator], X)

    def is_palindromic(self) -> bool:
        """Root multiset closed under inversion: ``X^deg D(1/X) = D[deg] * D(X)``."""
        d = poly_trim(self.denominator)
        return all(d[-1] * x == y for x, y in zip(d, reversed(d)))


def euler_factor_standard(sats: Sequence[SatakeData], n: int, p: int, s: complex | None = None):
    """Standard Euler factor ``(1 - X) prod_j (1 - alpha_j^2 X)(1 - alpha_j^-2 X)`` at ``p``.

    With ``s`` omitted, returns the exact :class:`EulerFactor`; otherwise the
    numeric value of the reciprocal at ``s``.
    """
    if len(sats) != n:
        raise LFunctionError(f"need {n} Satake parameters, got {len(sats)}")
    den = [Fraction(1), Fraction(-1)]
    for sat in sats:
        if sat.p != p:
            raise LFunctionError(f"Satake data at {sat.p} supplied for p={p}")
        den = poly_mul(den, [Fraction(1), -sat.sq_trace, Fraction(1)])
    ef = EulerFactor(p, n, tuple(den))
    if s is None:
        return ef
    return ef.value(s)


def euler_factor_from_roots(sats: Sequence[SatakeData], p: int, s: complex) -> complex:
    """Same value as :func:`euler_factor_standard`, multiplying the three numeric roots."""
    if complex(s).real <= 1:
        raise LFunctionError("Euler factor evaluated outside Re(s) > 1")
    X = complex(p) ** (-complex(s))
    den = 1 - X
    for sat in sats:
        a2 = sat.alpha**2
        den *= (1 - a2 * X) * (1 - X / a2)
    return 1 / den


# ---------------------------------------------------------------------------
# D(s, f) from the Euler products


def _series_div(num: list[Fraction], den: list[Fraction], n: int) -> list[Fraction]:
    """First ``n`` coefficients of ``num / den`` as a power series (``den[0] = 1``)."""
    if den[0] != 1:
        raise ValueError("denominator must have constant term 1")
    out = []
    num = list(num) + [Fraction(0)] * n
    for i in range(n):
        c = num[i] - sum(den[j] * out[i - j] for j in range(1, min(i, len(den) - 1) + 1))
        out.append(c)
    return out


def local_D(sq_trace: Fraction, p: int, e_max: int) -> list[Fraction]:
    """Coefficients of ``D_p(X)`` up to ``X^e_max`` for ``n = 1``.

    ``zeta(s) zeta(2s-2) D(s) = L(s-1, St)`` gives, with ``X = p^-s``,
    ``D_p = (1 - X)(1 - p^2 X^2) / ((1 - pX)(1 - sigma p X + p^2 X^2))``.
    """
    num = poly_mul([Fraction(1), Fraction(-1)], [Fraction(1), Fraction(0), Fraction(-p * p)])
    den = poly_mul([Fraction(1), Fraction(-p)], [Fraction(1), -sq_trace * p, Fraction(p * p)])
    return _series_div(num, den, e_max + 1)


def dirichlet_from_L(f: Eigenform, M: int, n: int = 1) -> list[Fraction]:
    """``[D(1), ..., D(M)]`` (index 0 unused, set to 0) by exact formal division."""
    if n != 1:
        raise LFunctionError("only n = 1 is supported")
    if f.tag != "cusp":
        raise LFunctionError("need a cusp eigenform")
    local: dict[int, list[Fraction]] = {}
    for p in primerange(2, M + 1):
        p = int(p)
        try:
            sat = satake(f, p)
        except ModularError as exc:
            raise LFunctionError(f"missing Satake data at p={p}: {exc}") from None
        e = int(math.log(M, p) + 1e-9)
        local[p] = local_D(sat.sq_trace, p, e)
    out = [Fraction(0), Fraction(1)]
    for t in range(2, M + 1):
        v = Fraction(1)
        for p, e in factorint(t).items():
            v *= local[int(p)][e]
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# gamma factors


def epsilon_q(q: int) -> int:
    return 0 if q % 2 == 0 else 1


def _check_gamma_arg(z):
    z = mpmath.mpc(z)
    if abs(z.imag) < 1e-14 and z.real <= 0 and abs(z.real - round(float(z.real))) < 1e-14:
        raise LFunctionError(f"Gamma has a pole at {complex(z)}")


def Gamma(z):
    _check_gamma_arg(z)
    return mpmath.gamma(z)


def xi(s):
    """``pi^(-s/2) Gamma(s/2) zeta(s)``."""
    s = mpmath.mpmathify(s)
    if s == 0 or s == 1:
        raise LFunctionError("xi has poles at s = 0 and s = 1")
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)


def Gamma_n(n: int, s):
    """``prod_{j=1}^n Gamma(s - (j-1)/2)``."""
    out = mpmath.mpf(1)
    for j in range(1, n + 1):
        out *= Gamma(mpmath.mpmathify(s) - mpmath.mpf(j - 1) / 2)
    return out


def gamma_nk(n: int, k: int, s):
    """``Gamma_n(s + k/2) / Gamma_n(s) * xi(2s) * prod_{j=1}^{[n/2]} xi(4s - 2j)``."""
    s = mpmath.mpmathify(s)
    out = Gamma_n(n, s + mpmath.mpf(k) / 2) / Gamma_n(n, s) * xi(2 * s)
    for j in range(1, n // 2 + 1):
        out *= xi(4 * s - 2 * j)
    return out


def Gamma_R(s):
    s = mpmath.mpmathify(s)
    return mpmath.pi ** (-s / 2) * Gamma(s / 2)


def Gamma_C(s):
    s = mpmath.mpmathify(s)
    return 2 * (2 * mpmath.pi) ** (-s) * Gamma(s)


def Gamma_rho(q: int, k: int, lambdas: Sequence[int], s):
    """``Gamma_R(s + eps_q) prod_j Gamma_C(s + k + lambda_j - j)``."""
    if len(lambdas) != q:
        raise LFunctionError("need q lambda values")
    s = mpmath.mpmathify(s)
    out = Gamma_R(s + epsilon_q(q))
    for j, lam in enumerate(lambdas, 1):
        out *= Gamma_C(s + k + lam - j)
    return out


def gamma_pq(p: int, q: int) -> list[Fraction]:
    """``gamma_{p,q}(s)`` as an exact polynomial, lowest degree first.

    Expanded from ``Gamma(x + m) / Gamma(x) = x (x+1) ... (x+m-1)`` factor by factor.
    """
    if not 1 <= q <= p:
        raise LFunctionError("need 1 <= q <= p")
    out = [Fraction(1)]
    if q % 2 == 0:
        for j in range(1, p + 1):
            for m in range(q // 2):
                out = poly_mul(out, [Fraction(-j + 1 + 2 * m, 2), Fraction(1, 2)])
    else:
        for j in range(1, p):
            for m in range((q + 1) // 2):
                out = poly_mul(out, [Fraction(-1 - (j - 1) + 2 * m, 2), Fraction(1, 2)])
    return poly_trim(out)


def gamma_pq_degree(p: int, q: int) -> int:
    return p * q // 2 if q % 2 == 0 else (p - 1) * (q + 1) // 2


@dataclass(frozen=True)
class GammaCheck:
    p: int
    q: int
    degree: int
    degree_formula: int
    residual: tuple

    @property
    def ok(self) -> bool:
        return all(c == 0 for c in self.residual) and self.degree == self.degree_formula


def gamma_pq_functional_check(p: int, q: int) -> GammaCheck:
    """Exact check of ``gamma(s) = (-1)^deg gamma(p - q + 1 - s)``."""
    g = gamma_pq(p, q)
    deg = len(g) - 1
    refl = poly_compose_affine(g, p - q + 1, -1)
    sign = -1 if deg % 2 else 1
    n = max(len(g), len(refl))
    g = g + [Fraction(0)] * (n - len(g))
    refl = refl + [Fraction(0)] * (n - len(refl))
    residual = poly_trim([a - sign * b for a, b in zip(g, refl)])
    return GammaCheck(p, q, deg, gamma_pq_degree(p, q), tuple(residual))


# ---------------------------------------------------------------------------
# numeric L-values


@dataclass(frozen=True)
class LValue:
    s: complex
    cutoff: int
    value: complex
    tail_bound: float
    primes_used: int


def tail_bound(sigma: float, P: int, degree: int = 3) -> float:
    """Bound ``T`` on ``|log(L / L_P)|`` from ``|alpha| = 1``.

    Each omitted prime contributes at most ``degree * p^-sigma / (1 - p^-sigma)``
    to the logarithm, and ``sum_{n > P} n^-sigma <= P^(1-sigma) / (sigma - 1)``.
    """
    return degree * P ** (1 - sigma) / ((sigma - 1) * (1 - P ** (-sigma)))


def lvalue_from_traces(sq_trace: Callable[[int], float], s: complex, cutoff: int) -> LValue:
    """Partial product of ``1 / ((1 - X)(1 - t_p X + X^2))`` over ``p <= cutoff``.

    ``sq_trace(p)`` returns ``alpha_p^2 + alpha_p^-2``; the constant function 2
    gives the partial product of ``zeta(s)^3``.
    """
    s = complex(s)
    if s.real <= 1:
        raise LFunctionError("the Euler product diverges for Re(s) <= 1")
    logv = 0j
    count = 0
    for p in primerange(2, cutoff + 1):
        t = sq_trace(int(p))
        if not -2 - 1e-9 <= t <= 2 + 1e-9:
            raise LFunctionError(f"|alpha_{p}| != 1 (alpha^2 + alpha^-2 = {t})")
        X = complex(p) ** (-s)
        logv -= cmath.log(1 - X) + cmath.log(1 - t * X + X * X)
        count += 1
    value = cmath.exp(logv)
    T = tail_bound(s.real, cutoff)
    return LValue(s, cutoff, value, abs(value) * math.expm1(T), count)


def lvalue_numeric(f: Eigenform | int, s: complex, cutoff: int = 10_000) -> LValue:
    """``L(s, f, St)`` by the Euler product up to ``cutoff`` with a rigorous tail bound.

    ``f`` may be an eigenform or a weight (then the cusp eigenform of that
    weight is built to the needed truncation).
    """
    if isinstance(f, int):
        f = cusp_eigenform(f, cutoff)
    if f.form.N < cutoff:
        raise LFunctionError(f"eigenform truncated at {f.form.N} < cutoff {cutoff}")
    k = f.weight
    coeffs = f.form.coeffs

    def sq(p):
        return float(Fraction(coeffs[p]) ** 2 / Fraction(p) ** (k - 1)) - 2

    return lvalue_from_traces(sq, s, cutoff)


# ---------------------------------------------------------------------------
# pole tables


@dataclass
class PoleTable:
    """Candidate poles with order bounds; never a claim that a pole exists."""

    context: str
    parameters: dict
    conditional: bool
    entries: list = field(default_factory=list)
    case: str = ""
    region: str = ""

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "parameters": self.parameters,
            "case": self.case,
            "region": self.region,
            "conditional": self.conditional,
            "poles": [{"s": str(s), "maxOrder": o} for s, o in self.entries],
        }


def _table(context, params, conditional, case, entries, region=""):
    merged: dict = {}
    for s, o in entries:
        if o >= 1:
            merged[Fraction(s)] = max(o, merged.get(Fraction(s), 0))
    return PoleTable(context, params, conditional, sorted(merged.items()), case, region)


def _require_even_k(k: int):
    if k < 1 or k % 2:
        raise LFunctionError("k must be a positive even integer")


def poles_feit(n: int, k: int) -> PoleTable:
    """Candidates for the normalized degree-``n`` Eisenstein series in ``s``, valid for ``k + 2 Re s > [n/2]``."""
    _require_even_k(k)
    if n < 1:
        raise LFunctionError("n must be positive")
    params = {"n": n, "k": k}
    region = f"k+2Re(s) > {n // 2}"
    if 2 * k >= n and n % 4:
        return _table("feit", params, False, "i", [], region)
    if 2 * k >= n:
        return _table("feit", params, False, "ii", [((Fraction(n, 2) + 1 - k) / 2, 1)], region)
    lo, hi = (n + 3) // 2, n - k + 1
    return _table("feit", params, False, "iii", [(Fraction(m - k, 2), 1) for m in range(lo, hi + 1)], region)


def poles_klingen(p: int, q: int, k: int) -> PoleTable:
    """Candidates for the modified Klingen Eisenstein series, assuming the conjectured constant."""
    _require_even_k(k)
    if not 1 <= q <= p:
        raise LFunctionError("need 1 <= q <= p")
    params = {"p": p, "q": q, "k": k}
    eps = epsilon_q(q)
    if 2 * k >= p + q:
        if (p + q) % 4:
            return _table("klingen63", params, True, "i", [])
        if (p - q == 0 and q % 2 == 0) or (p - q == 2 and q % 2 == 1):
            c = Fraction(p - q, 2)
            return _table("klingen63", params, True, "ii", [(c, 1), (c + 1, 1)])
        return _table("klingen63", params, True, "ii", [])
    if k >= q + eps + 2:
        return _table("klingen63", params, True, "iii", [])
    if k <= q + eps:
        cap = (q + eps - k) // 2
        entries = []
        for j in range(0, (p + q) // 2 - k + 1):
            o = min(j // 2, cap) + 1
            entries.append((k - q + j, o))
            entries.append((p - k + 1 - j, o))
        if (p + q) % 2:
            entries.append((Fraction(p - q + 1, 2), cap))
        return _table("klingen63", params, True, "iv", entries)
    raise LFunctionError(f"(p, q, k) = ({p}, {q}, {k}) is outside every stated case")


def poles_lambda(q: int, k: int) -> PoleTable:
    """Candidates for the completed standard L-function, assuming the conjectured constant."""
    _require_even_k(k)
    if q < 1:
        raise LFunctionError("q must be positive")
    params = {"q": q, "k": k}
    if k >= q:
        if q % 2:
            return _table("lambda64", params, True, "i", [])
        return _table("lambda64", params, True, "i", [(0, 1), (1, 1)])
    entries = []
    for j in range(0, q - k + 1):
        o = j // 2 + 1
        entries.append((k - q + j, o))
        entries.append((q - k + 1 - j, o))
    return _table("lambda64", params, True, "ii", entries)


def pole_tables(context: str, p: int | None = None, q: int | None = None, k: int | None = None,
                n: int | None = None) -> PoleTable:
    if k is None:
        raise LFunctionError("k is required")
    if context == "feit":
        if n is None:
            n = p if q is None else (p or 0) + q
        if not n:
            raise LFunctionError("feit needs n (or p, q with n = p + q)")
        return poles_feit(n, k)
    if context == "klingen63":
        if p is None or q is None:
            raise LFunctionError("klingen63 needs p and q")
        return poles_klingen(p, q, k)
    if context == "lambda64":
        if q is None:
            raise LFunctionError("lambda64 needs q")
        return poles_lambda(q, k)
    raise LFunctionError(f"unknown context {context!r}")


__all__ = [
    "EulerFactor", "GammaCheck", "LFunctionError", "LValue", "PoleTable",
    "euler_factor_standard", "euler_factor_from_roots", "local_D", "dirichlet_from_L",
    "epsilon_q", "xi", "Gamma", "Gamma_n", "gamma_nk", "Gamma_R", "Gamma_C", "Gamma_rho",
    "gamma_pq", "gamma_pq_degree", "gamma_pq_functional_check",
    "tail_bound", "lvalue_from_traces", "lvalue_numeric",
    "poles_feit", "poles_klingen", "poles_lambda", "pole_tables",
    "poly_mul", "poly_compose_affine", "poly_eval", "poly_str",
]
