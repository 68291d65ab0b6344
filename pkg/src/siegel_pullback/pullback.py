"""Pullback of the degree-2 Eisenstein series to ``H x H`` and the ``c(s)`` integral for ``q = 1``.

At ``s = 0`` and ``p = q = 1`` the restriction
``E^2_k(diag(z, w)) = sum_{m,n} b(m, n) e(mz + nw)`` has
``b(m, n) = sum_{b^2 <= 4mn} a(m, b, n)``.  Writing ``b`` over products of the
Hecke eigenbasis ``h_i(z) h_j(w)`` is an exact linear problem; the eigenbasis
is orthogonal for the pullback, so only ``i = j`` may survive.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy import integrate

from .cache import Cache
from .exact import rank, solve
from .harmonic import (
    QPolynomial,
    SplitShape,
    compute_Q,
    degree1_mixed,
    link_kind,
    project_harmonic,
    symmetric_degree2,
)
from .modular import FourierTable2, qexp_basis


class PullbackError(ValueError):
    """Domain error in the pullback layer."""


@dataclass
class DoubleQExpansion:
    weight: int
    coeffs: dict
    N: int

    def __getitem__(self, mn: tuple[int, int]):
        return self.coeffs[mn]

    def is_symmetric(self) -> bool:
        return all(self.coeffs[(m, n)] == self.coeffs[(n, m)] for m, n in self.coeffs)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "N": self.N,
            "coeffs": [[m, n, str(v)] for (m, n), v in sorted(self.coeffs.items())],
        }


def restrict_diagonal(F2: FourierTable2, N: int) -> DoubleQExpansion:
    """``b(m, n) = sum_{b^2 <= 4mn} a(m, b, n)`` for ``0 <= m, n <= N``."""
    if F2.max_det < N * N:
        raise PullbackError(f"maxDet {F2.max_det} < N^2 = {N * N}; rebuild the table with a larger bound")
    out = {}
    for m in range(N + 1):
        for n in range(N + 1):
            bmax = math.isqrt(4 * m * n)
            out[(m, n)] = sum((F2.coefficient(m, b, n) for b in range(-bmax, bmax + 1)), Fraction(0))
    return DoubleQExpansion(F2.weight, out, N)


@dataclass
class PullbackDecomposition:
    """``b(m, n) = sum_{i,j} c_ij h_i(m) h_j(n)`` solved exactly over ``0 <= m, n <= N``."""

    weight: int
    N: int
    names: list
    coefficients: dict
    residual_rank: int
    equations: int
    unknown_rank: int
    first_failure: tuple | None = None

    @property
    def surplus(self) -> int:
        """Equations beyond the rank needed to pin the coefficients."""
        return self.equations - self.unknown_rank

    @property
    def off_diagonal_zero(self) -> bool:
        return all(v == 0 for (i, j), v in self.coefficients.items() if i != j)

    @property
    def ok(self) -> bool:
        return self.residual_rank == 0 and self.off_diagonal_zero

    def diagonal(self) -> list[tuple[str, Fraction]]:
        return [(f"{n}x{n}", self.coefficients[(i, i)]) for i, n in enumerate(self.names)]

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "N": self.N,
            "diagonal": [{"form": f, "coeff": str(c)} for f, c in self.diagonal()],
            "offDiagonal": [
                {"pair": [self.names[i], self.names[j]], "coeff": str(v)}
                for (i, j), v in sorted(self.coefficients.items()) if i != j
            ],
            "residualRank": self.residual_rank,
            "equations": self.equations,
            "surplus": self.surplus,
            "firstFailure": list(self.first_failure) if self.first_failure else None,
        }


def decompose_pullback(dq: DoubleQExpansion, k: int, N: int | None = None,
                       cache: Cache | None = None) -> PullbackDecomposition:
    """Exact decomposition over products of the Hecke eigenbasis of ``M_k``.

    A non-zero residual rank means no decomposition exists; ``first_failure``
    is then the first ``(m, n)`` (row-major) whose equation breaks consistency.
    """
    N = dq.N if N is None else N
    if N > dq.N:
        raise PullbackError("N exceeds the truncation of the double expansion")
    basis = qexp_basis(k, N, cache)
    h = [f.form.coeffs for f in basis]
    names = ["Delta" if (f.tag == "cusp" and k == 12) else f.name for f in basis]
    r = len(basis)
    pairs = [(i, j) for i in range(r) for j in range(r)]
    rows, rhs, where = [], [], []
    for m in range(N + 1):
        for n in range(N + 1):
            rows.append([Fraction(h[i][m]) * h[j][n] for i, j in pairs])
            rhs.append(Fraction(dq.coeffs[(m, n)]))
            where.append((m, n))
    x, residual, bad = solve(rows, rhs)
    rk = rank(rows)
    if x is None:
        x = [Fraction(0)] * len(pairs)
    coeffs = {pair: v for pair, v in zip(pairs, x)}
    return PullbackDecomposition(
        k, N, names, coeffs, residual, len(rows), rk, where[bad] if bad is not None else None
    )


# ---------------------------------------------------------------------------
# the c(s) integral for q = 1


@dataclass(frozen=True)
class CIntegralSample:
    s: complex
    k: int
    lam: int
    value: complex
    quadrature_error: float

    def to_json(self) -> dict:
        return {
            "s": [self.s.real, self.s.imag],
            "k": self.k,
            "lambda": self.lam,
            "value": [self.value.real, self.value.imag],
            "quadratureError": self.quadrature_error,
        }


def harmonic_for_lambda(lam: int, k: int):
    """The pluri-harmonic polynomial used for weight ``lambda`` (1 or 2), with ``d = 2k``."""
    if lam == 1:
        return degree1_mixed(SplitShape(1, 1, 2 * k, 1))
    if lam == 2:
        res = project_harmonic(symmetric_degree2(SplitShape(1, 1, 2 * k, 2)))
        if not res.ok:
            raise PullbackError("symmetric degree-2 projection failed")
        return res.poly
    raise PullbackError("lambda must be 1 or 2")


def _monomial_profile(links) -> tuple[int, int]:
    """Numbers of star-star and substar-substar links in a monomial."""
    kinds = [link_kind(lk) for lk in links]
    return kinds.count("**"), kinds.count("__")


def c_integral_numeric(lam: int, k: int, s: complex, Q: QPolynomial | None = None, q: int = 1,
                       tol: float = 1e-9) -> CIntegralSample:
    """``int_{|S| < 1} (1 - |S|^2)^(k + lambda + s - 2) conj(Q(R(S), conj s)) dS``.

    For ``q = 1`` the entries of ``R`` are ``1`` on mixed links, ``iS/2`` on
    star-star links and ``2i conj(S) / (1 - |S|^2)`` on substar-substar links;
    ``dS`` is Lebesgue measure.  A monomial with ``a`` star-star and ``b``
    substar-substar links integrates to zero over the angle unless ``a = b``,
    and for ``a = b`` the angular integral is exactly ``2 pi``; the radial part
    is done numerically in ``u = |S|^2`` with the endpoint singularity passed
    to the quadrature weight.
    """
    if q != 1:
        raise PullbackError("only q = 1 is implemented")
    s = complex(s)
    if Q is None:
        Q = compute_Q(harmonic_for_lambda(lam, k))
    base = k + lam + s - 2
    live = []
    for links, coeff in Q.terms.items():
        a, b = _monomial_profile(links)
        if a == b:
            live.append((a, coeff))
            if (base - a).real <= -1:
                raise PullbackError(f"integral diverges at s={s} (exponent {(base - a).real:.3g})")
    total = 0j
    err = 0.0
    scale = 1.0
    for a, coeff in live:
        # conj of Q's coefficient at conj(s) is the coefficient at s (real polynomial)
        cval = complex(coeff(k, s))
        if cval == 0:
            continue
        # conj((iS/2)^a (2i conj S / (1-u))^a) = (-1)^a u^a / (1-u)^a
        expo = base - a
        wre = expo.real
        wim = expo.imag

        def fr(u, part, a=a, wim=wim):
            if not wim:
                return float(u**a) if part == 0 else 0.0
            if u >= 1.0:
                # (1-u)^(i wim) has no limit at u = 1; a single endpoint value is harmless
                return 0.0
            z = u**a * np.exp(1j * wim * np.log1p(-u))
            return z.real if part == 0 else z.imag

        parts = []
        for part in (0, 1):
            if part == 1 and not wim:
                parts.append((0.0, 0.0))
                continue
            with warnings.catch_warnings():
                # the returned error estimate is checked against tol below
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                v, e = integrate.quad(fr, 0.0, 1.0, args=(part,), weight="alg", wvar=(0.0, wre),
                                      epsabs=tol * 1e-3, epsrel=1e-12, limit=200)
            parts.append((v, e))
        radial = complex(parts[0][0], parts[1][0])
        # dS = (1/2) du dtheta, angular factor 2 pi
        term = cval * (-1) ** a * math.pi * radial
        total += term
        scale = max(scale, abs(term))
        err += abs(cval) * math.pi * (parts[0][1] + parts[1][1])
    if err > tol * scale:
        raise PullbackError(f"quadrature error {err:.3g} above tolerance")
    return CIntegralSample(s, k, lam, total, err)


def c_integral_disk(lam: int, k: int, s: complex, Q: QPolynomial | None = None, n_theta: int = 64,
                    tol: float = 1e-9) -> CIntegralSample:
    """Same integral by brute force over the disk: trapezoid in the angle, adaptive in ``u = |S|^2``.

    Kept as an independent check of the angular bookkeeping in
    :func:`c_integral_numeric`; it evaluates the ``R`` entries directly.
    """
    s = complex(s)
    if Q is None:
        Q = compute_Q(harmonic_for_lambda(lam, k))
    base = k + lam + s - 2
    thetas = np.arange(n_theta) * (2 * math.pi / n_theta)
    monos = []
    for links, coeff in Q.terms.items():
        a, b = _monomial_profile(links)
        monos.append((a, b, complex(coeff(k, s))))
    bmax = max((b for _, b, _ in monos), default=0)
    wre = (base - bmax).real
    if wre <= -1:
        raise PullbackError("integral diverges")

    def angular_mean(u):
        if u >= 1.0:
            return 0j
        r = math.sqrt(u)
        S = r * np.exp(1j * thetas)
        r11 = 1j * S / 2
        r22 = 2j * np.conj(S) / (1 - u)
        val = np.zeros_like(S)
        for a, b, c in monos:
            val = val + c * np.conj(r11**a * r22**b)
        # (1-u)^(base) = (1-u)^(wre) * (1-u)^(base - wre); the first factor is the quadrature weight
        return np.mean(val) * (1 - u) ** (base - wre)

    parts = []
    for part in (0, 1):
        v, e = integrate.quad(lambda u: (angular_mean(u).real, angular_mean(u).imag)[part], 0.0, 1.0,
                              weight="alg", wvar=(0.0, wre), epsabs=tol * 1e-3, epsrel=1e-12, limit=200)
        parts.append((v, e))
    value = math.pi * complex(parts[0][0], parts[1][0])
    return CIntegralSample(s, k, lam, value, math.pi * (parts[0][1] + parts[1][1]))


def gamma_ratio(lam: int, k: int, s: complex, q: int = 1) -> complex:
    """``prod_{j=1}^q Gamma(s + k + lambda_j - j) / Gamma(s + q + k + 1 - 2j)`` with all ``lambda_j = lam``."""
    out = mpmath.mpc(1)
    for j in range(1, q + 1):
        out *= mpmath.gamma(s + k + lam - j) / mpmath.gamma(s + q + k + 1 - 2 * j)
    return complex(out)


@dataclass
class ConjectureReport:
    lam: int
    k: int
    samples: list = field(default_factory=list)
    quotients: list = field(default_factory=list)
    constant: complex = 0j
    max_relative_deviation: float = 0.0

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "k": self.k,
            "constant": [self.constant.real, self.constant.imag],
            "maxRelativeDeviation": self.max_relative_deviation,
            "samples": [
                dict(x.to_json(), quotient=[qv.real, qv.imag]) for x, qv in zip(self.samples, self.quotients)
            ],
        }


def normalized_c_check(lam: int, k: int, s_grid: Sequence[complex], q: int = 1) -> ConjectureReport:
    """Quotients ``c((s + q - k)/2) / gamma_ratio(s)`` over ``s_grid`` and their spread."""
    if q != 1:
        raise PullbackError("only q = 1 is implemented")
    if not s_grid:
        raise PullbackError("empty s grid")
    Q = compute_Q(harmonic_for_lambda(lam, k))
    rep = ConjectureReport(lam, k)
    for s in s_grid:
        s = complex(s)
        sample = c_integral_numeric(lam, k, (s + q - k) / 2, Q=Q)
        rep.samples.append(sample)
        rep.quotients.append(sample.value / gamma_ratio(lam, k, s, q))
    const = sum(rep.quotients) / len(rep.quotients)
    rep.constant = const
    if const == 0:
        raise PullbackError("fitted constant is zero")
    rep.max_relative_deviation = max(abs(x - const) for x in rep.quotients) / abs(const)
    return rep


__all__ = [
    "PullbackError", "DoubleQExpansion", "restrict_diagonal", "PullbackDecomposition",
    "decompose_pullback", "CIntegralSample", "harmonic_for_lambda", "c_integral_numeric",
    "c_integral_disk", "gamma_ratio", "ConjectureReport", "normalized_c_check",
]
