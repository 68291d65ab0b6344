import csv
import io
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol

from oracles import (
    cusp_by_delta,
    delta_eta,
    dirichlet_L_negative_numeric,
    e8_theta2,
    eisenstein_divisor,
    hurwitz_class_number,
    petersson_direct,
)
from siegel_pullback.cache import Cache
from siegel_pullback.modular import (
    Eigenform,
    FourierTable2,
    ModularError,
    QExpansion1,
    bernoulli,
    cohen_H,
    cusp_eigenform,
    delta_product,
    doublecoset_cosets,
    eisenstein_qexp,
    hecke_doublecoset_eigenvalue,
    modular_basis,
    petersson_norm_gauss,
    petersson_norm_numeric,
    qexp_basis,
    reduce_form,
    satake,
    satake_from_ap,
    siegel_eisenstein2,
    siegel_eisenstein2_coefficient,
    zeta_negative,
)

# <Delta, Delta> over SL_2(Z)\H with dx dy / y^2 measure, literature value
DELTA_NORM = 1.035362056804320922e-6


def test_bernoulli_matches_sympy():
    for n in range(0, 30):
        want = sympy.bernoulli(n)
        if n == 1:
            want = sympy.Rational(-1, 2)
        assert bernoulli(n) == Fraction(int(want.p), int(want.q))


def test_zeta_negative():
    assert zeta_negative(1) == Fraction(-1, 2)
    assert zeta_negative(2) == Fraction(-1, 12)
    assert zeta_negative(4) == Fraction(1, 120)


# ---------------------------------------------------------------------------
# q-expansions


@pytest.mark.parametrize("k", [4, 6, 8, 10, 14])
def test_eisenstein_vs_divisor_sums(k):
    assert eisenstein_qexp(k, 40).coeffs == eisenstein_divisor(k, 40)


def test_delta_vs_eta_product():
    f = cusp_eigenform(12, 200)
    assert f.name == "Delta"
    assert f.form.coeffs == delta_eta(200)


@pytest.mark.parametrize("k", [16, 18, 20, 22])
def test_cusp_forms_vs_oracle(k):
    assert cusp_eigenform(k, 60).form.coeffs == cusp_by_delta(k, 60)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12, 14, 16])
def test_basis_dimension(k):
    dim = k // 12 + (0 if k % 12 == 2 else 1)
    assert len(modular_basis(k, 20)) == dim


def test_no_cusp_forms_below_12():
    with pytest.raises(ModularError):
        cusp_eigenform(10, 20)


@pytest.mark.parametrize("k", [7, 2, 24, 26])
def test_unsupported_weight(k):
    with pytest.raises(ModularError):
        qexp_basis(k, 20)


def test_coefficient_beyond_truncation():
    f = cusp_eigenform(12, 10)
    with pytest.raises(ModularError, match="truncation"):
        f.a(11)


@pytest.mark.parametrize("k", [12, 16, 20])
def test_multiplicative_and_hecke_recursion(k):
    a = cusp_eigenform(k, 130).form.coeffs
    for m in range(1, 12):
        for n in range(1, 12):
            if math.gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]
    for p in (2, 3, 5):
        pk = p
        while pk * p <= 130:
            assert a[pk * p] == a[p] * a[pk] - p ** (k - 1) * a[pk // p]
            pk *= p


def test_hecke_eigenvalues_stored():
    for ef in qexp_basis(12, 30):
        lam = ef.eigenvalues[5]
        tf = ef.form.hecke(5)
        assert all(tf.coeffs[n] == lam * ef.form.coeffs[n] for n in range(len(tf.coeffs)))


def test_qexp_json_and_cache_round_trip(tmp_path):
    cache = Cache(tmp_path)
    first = qexp_basis(16, 30, cache)
    assert len(cache.list()) == 1
    second = qexp_basis(16, 30, cache)
    assert [e.to_json() for e in first] == [e.to_json() for e in second]
    ef = first[1]
    assert Eigenform.from_json(ef.to_json()) == ef
    assert QExpansion1.from_json(ef.form.to_json()) == ef.form


# ---------------------------------------------------------------------------
# Satake parameters


@pytest.mark.parametrize("k", [12, 16, 18, 20, 22])
def test_satake_unitary(k):
    f = cusp_eigenform(k, 40)
    for p in (2, 3, 5, 7, 11, 13):
        sd = satake(f, p)
        a = sd.alpha
        assert abs(abs(a) - 1) < 1e-12
        assert abs(a + 1 / a - f.a(p) / p ** ((k - 1) / 2)) < 1e-12
        assert abs(a * (1 / a) - 1) < 1e-15
        assert a.imag >= 0
        assert sd.sq_trace == Fraction(f.a(p)) ** 2 / Fraction(p) ** (k - 1) - 2


def test_satake_vanishing_ap():
    sd = satake_from_ap(0, 7, 12)
    assert sd.alpha == pytest.approx(1j)
    assert sd.sq_trace == -2


def test_satake_rejects_eisenstein():
    E = qexp_basis(12, 10)[0]
    with pytest.raises(ModularError):
        satake(E, 2)


# ---------------------------------------------------------------------------
# Cohen's function


def test_cohen_small_values():
    assert cohen_H(1, 3) == Fraction(1, 3)
    assert cohen_H(1, 4) == Fraction(1, 2)
    assert cohen_H(2, 4) == Fraction(-7, 12)
    assert cohen_H(3, 3) == Fraction(-2, 9)
    assert cohen_H(1, 0) == Fraction(-1, 12)


@pytest.mark.parametrize("N", list(range(0, 80)))
def test_cohen_r1_is_hurwitz(N):
    assert cohen_H(1, N) == hurwitz_class_number(N)


def _cohen_oracle(r, N):
    M = (-1) ** r * N
    if M % 4 in (2, 3):
        return 0.0
    f = max(f for f in range(1, math.isqrt(N) + 1) if M % (f * f) == 0 and _is_fundamental(M // (f * f)))
    D = M // (f * f)
    L = dirichlet_L_negative_numeric(r, D)
    total = 0
    for d in sympy.divisors(f):
        total += int(sympy.mobius(d)) * int(kronecker_symbol(D, d)) * d ** (r - 1) * int(
            sympy.divisor_sigma(f // d, 2 * r - 1)
        )
    return L * total


def _is_fundamental(D):
    if D == 1:
        return True
    if D % 4 == 1:
        return sympy.ntheory.factor_.core(abs(D)) == abs(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and sympy.ntheory.factor_.core(abs(m)) == abs(m)
    return False


@pytest.mark.parametrize("r", [2, 3, 5, 7])
def test_cohen_vs_numeric_L(r):
    for N in range(1, 40):
        want = _cohen_oracle(r, N)
        got = float(cohen_H(r, N))
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------------------
# degree-two Eisenstein series


@pytest.mark.parametrize("T", [(1, 0, 1), (1, 1, 1), (1, 0, 2), (1, 1, 2), (2, 0, 2), (2, 1, 2), (2, 2, 2)])
def test_e4_degree2_vs_e8_theta(T):
    # the degree-2 theta series of E8 is the weight 4 Siegel Eisenstein series
    assert siegel_eisenstein2_coefficient(4, *T) == e8_theta2(*T)


def test_e4_known_values():
    t = siegel_eisenstein2(4, 3)
    assert t.coefficient(1, 0, 1) == 30240
    assert t.coefficient(1, 1, 1) == 13440
    assert t.coefficient(0, 0, 1) == 240


@pytest.mark.parametrize("k", [4, 6, 10, 12])
def test_phi_operator(k):
    t = siegel_eisenstein2(k, 12)
    E = eisenstein_qexp(k, 12)
    for c in range(13):
        assert t.coefficient(0, 0, c) == E[c]


def test_table_bounds_and_errors():
    t = siegel_eisenstein2(6, 5)
    for (a, b, c) in t.entries:
        if a:
            assert 4 * a * c - b * b <= 20
    with pytest.raises(ModularError, match="outside"):
        t.coefficient(3, 0, 3)
    with pytest.raises(ModularError):
        t.coefficient(1, 3, 1)
    with pytest.raises(ModularError):
        siegel_eisenstein2(5, 4)


def test_table_json_csv_cache(tmp_path):
    cache = Cache(tmp_path)
    t = siegel_eisenstein2(8, 6, cache)
    assert FourierTable2.from_json(t.to_json()) == t
    assert siegel_eisenstein2(8, 6, cache) == t
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows[0] == ["a", "b", "c", "value"]
    assert len(rows) == len(t.entries) + 1


forms = st.tuples(st.integers(0, 12), st.integers(-12, 12), st.integers(0, 12)).filter(
    lambda x: x[1] ** 2 <= 4 * x[0] * x[2] and not (x[0] == 0 and x[1] != 0) and not (x[2] == 0 and x[1] != 0)
)
unimodular = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(
    lambda m: abs(m[0] * m[3] - m[1] * m[2]) == 1
)


@given(forms, unimodular)
def test_gl2_invariance(T, U):
    a, b, c = T
    p, q, r, s = U
    # U^T T U with T = [[a, b/2], [b/2, c]]
    a2 = a * p * p + b * p * r + c * r * r
    b2 = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s
    c2 = a * q * q + b * q * s + c * s * s
    assert reduce_form(a, b, c) == reduce_form(a2, b2, c2)
    assert siegel_eisenstein2_coefficient(6, a, b, c) == siegel_eisenstein2_coefficient(6, a2, b2, c2)


@given(forms)
def test_reduced_form_shape(T):
    a, b, c = reduce_form(*T)
    assert 0 <= b <= a <= c or (a == 0 and b == 0)
    assert 4 * a * c - b * b == 4 * T[0] * T[2] - T[1] ** 2


# ---------------------------------------------------------------------------
# double coset operator


def test_coset_count():
    # |Gamma diag(p, 1/p) Gamma / Gamma| = p^2 + p for prime p
    for p in (2, 3, 5, 7):
        assert len(doublecoset_cosets(p)) == p * p + p


def test_doublecoset_trivial_and_delta():
    f = cusp_eigenform(12, 30)
    assert hecke_doublecoset_eigenvalue(f, 1).value == 1
    assert hecke_doublecoset_eigenvalue(f, 2).value == Fraction(-39, 16)


@pytest.mark.parametrize("k", [12, 16, 18])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_doublecoset_vs_classical_tp2(k, p):
    # primitive matrices of determinant p^2: classical T(p^2) minus the scalar coset
    f = cusp_eigenform(k, 3 * p * p)
    want = Fraction(f.a(p * p), p ** (k - 2)) - 1
    assert hecke_doublecoset_eigenvalue(f, p).value == want


def test_doublecoset_on_eisenstein():
    E = qexp_basis(12, 30)[0]
    p, k = 2, 12
    # for E_k: a(p^2)-eigenvalue sigma_{k-1}(p^2), scaled as above
    want = Fraction(1 + p ** (k - 1) + p ** (2 * k - 2), p ** (k - 2)) - 1
    assert hecke_doublecoset_eigenvalue(E, 2).value == want


def test_doublecoset_rejects_non_eigenform():
    f = cusp_eigenform(12, 40).form
    g = eisenstein_qexp(12, 40)
    with pytest.raises(ModularError, match="not an eigenform"):
        hecke_doublecoset_eigenvalue(f + g * Fraction(1, 7) + f, 2)


def test_doublecoset_needs_truncation():
    f = cusp_eigenform(12, 20)
    with pytest.raises(ModularError, match="too small"):
        hecke_doublecoset_eigenvalue(f, 5)


# ---------------------------------------------------------------------------
# Petersson norm


def test_petersson_delta_literature():
    val, err = petersson_norm_numeric(cusp_eigenform(12, 40), tol=1e-10)
    assert err <= 1e-10
    assert val == pytest.approx(DELTA_NORM, abs=2e-11)


def test_petersson_gauss_product_formula():
    val = petersson_norm_gauss(delta_product, 12)
    assert val == pytest.approx(DELTA_NORM, rel=1e-9)


def test_petersson_midpoint_oracle():
    f = cusp_eigenform(12, 20)
    assert petersson_direct(f.form.coeffs, 12, n=160) == pytest.approx(DELTA_NORM, rel=1e-3)


def test_petersson_scaling_and_truncation():
    f = cusp_eigenform(12, 40)
    v1, _ = petersson_norm_numeric(f, tol=1e-9)
    v2, _ = petersson_norm_numeric(f.form * 2, tol=4e-9)
    assert v2 == pytest.approx(4 * v1, rel=1e-9)
    v20, _ = petersson_norm_numeric(cusp_eigenform(12, 20), tol=1e-9)
    assert v20 == pytest.approx(v1, abs=1e-10)


def test_petersson_errors():
    with pytest.raises(ModularError, match="cusp"):
        petersson_norm_numeric(eisenstein_qexp(12, 10))
    with pytest.raises(ModularError, match="unachievable"):
        petersson_norm_numeric(cusp_eigenform(12, 2), tol=1e-14)
