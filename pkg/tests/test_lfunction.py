import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import primerange

from oracles import feit_poles_oracle, gamma_pq_numeric, klingen_poles_oracle, lambda_poles_oracle
from siegel_pullback.lfunction import (
    Gamma,
    Gamma_C,
    Gamma_n,
    Gamma_R,
    Gamma_rho,
    LFunctionError,
    dirichlet_from_L,
    epsilon_q,
    euler_factor_from_roots,
    euler_factor_standard,
    gamma_nk,
    gamma_pq,
    gamma_pq_degree,
    gamma_pq_functional_check,
    lvalue_from_traces,
    lvalue_numeric,
    pole_tables,
    poles_feit,
    poles_klingen,
    poles_lambda,
    poly_eval,
    tail_bound,
    xi,
)
from siegel_pullback.modular import cusp_eigenform, hecke_doublecoset_eigenvalue, satake, satake_from_ap


@pytest.fixture(scope="module")
def delta():
    return cusp_eigenform(12, 25 * 25 * 3)


@pytest.fixture(scope="module")
def f16():
    return cusp_eigenform(16, 25 * 25 * 3)


# ---------------------------------------------------------------------------
# Euler factors


def test_euler_factor_alpha_i():
    sat = satake_from_ap(0, 3, 12)
    ef = euler_factor_standard([sat], 1, 3)
    # (1 - X)(1 + X)^2
    assert list(ef.denominator) == [1, 1, -1, -1]
    assert ef.degree == 3
    assert ef.is_palindromic()


def test_euler_factor_alpha_one():
    # odd k - 1 = 10 lets a_p = 2 p^5 hit the Ramanujan bound, so alpha = 1
    sat = satake_from_ap(2 * 7**5, 7, 11)
    assert sat.sq_trace == 2
    ef = euler_factor_standard([sat], 1, 7)
    assert list(ef.denominator) == [1, -3, 3, -1]


def test_euler_factor_delta_two_paths(delta):
    for p in (2, 3, 5, 7):
        sats = [satake(delta, p)]
        for s in (10, 2.5 + 1j):
            a = euler_factor_standard(sats, 1, p, s)
            b = euler_factor_from_roots(sats, p, s)
            assert abs(a - b) < 1e-12 * abs(b)


def test_euler_factor_errors(delta):
    sats = [satake(delta, 2)]
    with pytest.raises(LFunctionError):
        euler_factor_standard(sats, 1, 2, 0.5)
    with pytest.raises(LFunctionError):
        euler_factor_standard(sats, 2, 2)
    with pytest.raises(LFunctionError):
        euler_factor_standard(sats, 1, 3)


@given(st.integers(-10**6, 10**6), st.sampled_from([2, 3, 5, 7, 11]))
def test_euler_factor_palindromic(ap, p):
    k = 12
    if ap * ap > 4 * p ** (k - 1):
        return
    ef = euler_factor_standard([satake_from_ap(ap, p, k)], 1, p)
    assert ef.degree == 3 and ef.is_palindromic()


# ---------------------------------------------------------------------------
# D(s, f)


def test_d_leading(delta):
    assert dirichlet_from_L(delta, 10)[1] == 1


@pytest.mark.parametrize("t", [2, 3, 4, 5, 9, 25])
def test_d_equals_doublecoset(delta, f16, t):
    for f in (delta, f16):
        D = dirichlet_from_L(f, 25)
        assert D[t] == hecke_doublecoset_eigenvalue(f, t).value


def test_d_multiplicative(delta):
    D = dirichlet_from_L(delta, 120)
    for m in range(1, 12):
        for n in range(1, 11):
            if math.gcd(m, n) == 1:
                assert D[m * n] == D[m] * D[n]


def test_d_identity_numeric(delta):
    # zeta(s) zeta(2s-2) D(s) = L(s-1, St) at s = 12 (both sides absolutely convergent)
    s = 12
    D = dirichlet_from_L(delta, 1800)
    lhs = float(mpmath.zeta(s) * mpmath.zeta(2 * s - 2)) * sum(float(D[t]) * t ** -s for t in range(1, 1801))
    rhs = lvalue_numeric(delta, s - 1, cutoff=1800).value.real
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_d_requires_cusp_form():
    from siegel_pullback.modular import qexp_basis

    with pytest.raises(LFunctionError):
        dirichlet_from_L(qexp_basis(12, 10)[0], 5)
    with pytest.raises(LFunctionError, match="Satake"):
        dirichlet_from_L(cusp_eigenform(12, 5), 20)


# ---------------------------------------------------------------------------
# gamma factors


def test_epsilon():
    assert epsilon_q(2) == 0 and epsilon_q(3) == 1


def test_gamma22():
    assert gamma_pq(2, 2) == [0, Fraction(-1, 4), Fraction(1, 4)]
    assert gamma_pq_degree(3, 1) == 2 == len(gamma_pq(3, 1)) - 1
    assert gamma_pq(1, 1) == [1]


@pytest.mark.parametrize("p", range(1, 9))
def test_gamma_functional_equation(p):
    for q in range(1, p + 1):
        chk = gamma_pq_functional_check(p, q)
        assert chk.ok, (p, q, chk.residual)
        assert chk.degree == chk.degree_formula


@pytest.mark.parametrize("pq", [(2, 2), (3, 1), (4, 3), (5, 2), (6, 6), (8, 5)])
def test_gamma_polynomial_vs_gamma_quotient(pq):
    p, q = pq
    g = gamma_pq(p, q)
    for s in (7.3, 11.9, 15.25):
        want = gamma_pq_numeric(p, q, s)
        assert float(poly_eval(g, Fraction(s))) == pytest.approx(want, rel=1e-12)


def test_gamma_range_error():
    with pytest.raises(LFunctionError):
        gamma_pq(2, 3)


def test_xi_symmetry():
    pts = [complex(0.1 + 0.8 * i / 19, -20 + 2.1 * i) for i in range(20)]
    for s in pts:
        a, b = xi(s), xi(1 - s)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_xi_poles():
    with pytest.raises(LFunctionError):
        xi(1)
    with pytest.raises(LFunctionError):
        Gamma(-2)


def test_gamma_n_and_nk():
    s = mpmath.mpf("3.3")
    assert Gamma_n(1, s) == mpmath.gamma(s)
    assert Gamma_n(2, s) == pytest.approx(mpmath.gamma(s) * mpmath.gamma(s - 0.5))
    # n = 1: Gamma(s + k/2) / Gamma(s) xi(2s)
    assert gamma_nk(1, 4, s) == pytest.approx(mpmath.gamma(s + 2) / mpmath.gamma(s) * xi(2 * s))


def test_gamma_rho():
    s = mpmath.mpf("2.2")
    want = Gamma_R(s + 1) * Gamma_C(s + 12 - 1)
    assert Gamma_rho(1, 12, [0], s) == pytest.approx(want)
    assert Gamma_C(3) == pytest.approx(2 * (2 * mpmath.pi) ** -3 * 2)
    with pytest.raises(LFunctionError):
        Gamma_rho(2, 12, [0], s)


# ---------------------------------------------------------------------------
# L-values


def test_lvalue_zeta_cubed():
    v = lvalue_from_traces(lambda p: 2.0, 4, 5000)
    partial = 1.0
    for p in primerange(2, 5001):
        partial *= (1 - p**-4.0) ** -3
    assert v.value.real == pytest.approx(partial, rel=1e-12)
    assert abs(v.value - float(mpmath.zeta(4)) ** 3) <= v.tail_bound


def test_lvalue_delta_stability(delta):
    a = lvalue_numeric(12, 10, 10_000)
    b = lvalue_numeric(12, 10, 100_000)
    assert abs(a.value - b.value) < 1e-8
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound


@given(st.floats(1.1, 20), st.integers(10, 10**6))
def test_tail_bound_monotone(sigma, P):
    assert tail_bound(sigma, 2 * P) < tail_bound(sigma, P)


def test_lvalue_errors(delta):
    with pytest.raises(LFunctionError, match="diverges"):
        lvalue_numeric(delta, 1.0, 100)
    with pytest.raises(LFunctionError):
        lvalue_numeric(cusp_eigenform(12, 50), 5, 100)
    with pytest.raises(LFunctionError, match="alpha"):
        lvalue_from_traces(lambda p: 3.0, 4, 10)


# ---------------------------------------------------------------------------
# pole tables, checked against a direct transcription of the case analysis


def _entries(t):
    return {s: o for s, o in t.entries}


def test_feit_examples():
    assert _entries(poles_feit(3, 8)) == {}
    assert poles_feit(3, 8).case == "i"
    assert _entries(poles_feit(8, 4)) == {Fraction(1, 2): 1}
    assert _entries(poles_feit(9, 2)) == {Fraction(2): 1, Fraction(5, 2): 1, Fraction(3): 1}


def test_klingen_example():
    t = pole_tables("klingen63", p=3, q=1, k=8)
    assert t.conditional
    assert t.to_json()["poles"] == [{"s": "1", "maxOrder": 1}, {"s": "2", "maxOrder": 1}]


def test_lambda_examples():
    assert _entries(poles_lambda(3, 4)) == {}
    assert _entries(poles_lambda(4, 4)) == {0: 1, 1: 1}
    assert _entries(poles_lambda(6, 2)) == {
        -4: 1, -3: 1, -2: 2, -1: 2, 0: 3, 1: 3, 2: 2, 3: 2, 4: 1, 5: 1
    }


def test_pole_grid():
    for k in range(2, 21, 2):
        for n in range(1, 13):
            assert _entries(poles_feit(n, k)) == feit_poles_oracle(n, k)
        for p in range(1, 7):
            for q in range(1, p + 1):
                assert _entries(poles_klingen(p, q, k)) == klingen_poles_oracle(p, q, k), (p, q, k)
        for q in range(1, 7):
            t = poles_lambda(q, k)
            assert _entries(t) == lambda_poles_oracle(q, k)
            if q % 2 and k >= q:
                assert t.entries == []


def test_klingen_exceptional_subcases():
    # (1) p = q even, (2) p - q = 2 with q odd
    assert _entries(poles_klingen(2, 2, 2)) == {0: 1, 1: 1}
    assert _entries(poles_klingen(4, 4, 4)) == {0: 1, 1: 1}
    assert _entries(poles_klingen(5, 3, 4)) == {1: 1, 2: 1}
    assert _entries(poles_klingen(5, 3, 6)) == {1: 1, 2: 1}
    assert _entries(poles_klingen(6, 2, 4)) == {}


def test_reflection_symmetry():
    for k in range(2, 21, 2):
        for p in range(1, 9):
            for q in range(1, p + 1):
                t = poles_klingen(p, q, k)
                if t.case != "iv":
                    continue
                e = _entries(t)
                for j in range(0, (p + q) // 2 - k + 1):
                    assert e.get(k - q + j) == e.get(p - k + 1 - j)
        for q in range(1, 9):
            e = _entries(poles_lambda(q, k))
            for j in range(0, q - k + 1):
                assert e[k - q + j] == e[q - k + 1 - j] == j // 2 + 1


def test_pole_errors():
    with pytest.raises(LFunctionError):
        poles_feit(3, 7)
    with pytest.raises(LFunctionError):
        pole_tables("klingen63", p=3, k=8)
    with pytest.raises(LFunctionError):
        pole_tables("nope", p=3, q=1, k=8)
    assert all(o >= 1 for _, o in poles_klingen(7, 4, 2).entries)


def test_feit_through_pole_tables():
    assert pole_tables("feit", n=3, k=8).entries == []
    assert pole_tables("feit", p=2, q=2, k=2).entries == poles_feit(4, 2).entries
