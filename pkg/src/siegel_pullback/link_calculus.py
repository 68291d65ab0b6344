"""Link polynomials and the closed differential calculus on the Eisenstein kernel.

A *link* is an unordered pair of distinct index labels and a *link set* is a
partial matching of labels.  Applying the operators ``d^{ab}`` of a link set to
the kernel ``delta^{-k} |delta|^{-2s} eps^s`` gives the kernel times a
polynomial in the symbols ``Delta^{ab}`` and ``E^{ab}``.  This module computes
that polynomial exactly, rewritten in the basis ``A = Delta - E`` and ``E``.

Coefficients are exact polynomials in two formal symbols ``k`` and ``s``
(:class:`CoeffPoly`).  The kernel itself is never expanded.
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping

import numpy as np

__all__ = [
    "CoeffPoly",
    "Expansion",
    "canonical_link",
    "link_set",
    "underlying_set",
    "is_perfect_matching",
    "perfect_matchings",
    "expand_operator",
    "delta_basis_expansion",
    "evaluate_expansion",
    "coefficient_lookup",
    "kernel_value",
    "LinkError",
]


class LinkError(ValueError):
    """Raised for malformed links, link sets or matchings."""


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def _label_key(label):
    return (type(label).__name__, label)


# ---------------------------------------------------------------------------
# exact coefficient polynomials in k and s


class CoeffPoly:
    """Exact polynomial in the formal symbols ``k`` and ``s``.

    Stored as a mapping ``(k_exponent, s_exponent) -> Fraction`` with no zero
    entries.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Any] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent in CoeffPoly")
            c = Fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), Fraction(0)) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c) -> "CoeffPoly":
        return cls({(0, 0): c})

    @classmethod
    def k(cls) -> "CoeffPoly":
        return cls({(1, 0): 1})

    @classmethod
    def s(cls) -> "CoeffPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_s_coeffs(cls, coeffs: Iterable) -> "CoeffPoly":
        """Univariate polynomial in ``s`` from coefficients, lowest degree first."""
        return cls({(0, j): c for j, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _coerce(self, other) -> "CoeffPoly":
        if isinstance(other, CoeffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return CoeffPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return CoeffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CoeffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return CoeffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = CoeffPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def degree_s(self) -> int:
        return max((j for _, j in self._terms), default=-1)

    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def s_coeffs(self) -> list[Fraction]:
        """Coefficients in ``s`` (lowest first); requires no ``k`` dependence."""
        if any(i for i, _ in self._terms):
            raise ValueError("polynomial depends on k")
        deg = self.degree_s()
        return [self._terms.get((0, j), Fraction(0)) for j in range(deg + 1)]

    def subs_k(self, kval) -> "CoeffPoly":
        """Substitute an exact value for ``k``; the result depends on ``s`` only."""
        kval = Fraction(kval)
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self._terms.items():
            out[(0, j)] = out.get((0, j), Fraction(0)) + c * kval**i
        return CoeffPoly(out)

    def subs_s_affine(self, a, b) -> "CoeffPoly":
        """Substitute ``s -> a + b*s`` with exact ``a``, ``b``."""
        lin = CoeffPoly({(0, 0): a, (0, 1): b})
        out = CoeffPoly()
        for (i, j), c in self._terms.items():
            out = out + CoeffPoly({(i, 0): c}) * lin**j
        return out

    def __call__(self, k, s):
        """Evaluate at numeric or exact ``k``, ``s``."""
        total = 0
        for (i, j), c in self._terms.items():
            if isinstance(k, (int, Fraction)) and isinstance(s, (int, Fraction)):
                total += c * Fraction(k) ** i * Fraction(s) ** j
            else:
                total += float(c) * k**i * s**j
        return total

    def to_json(self) -> list[dict]:
        return [
            {"k": i, "s": j, "num": str(c.numerator), "den": str(c.denominator)}
            for (i, j), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "CoeffPoly":
        return cls({(int(t["k"]), int(t["s"])): Fraction(int(t["num"]), int(t["den"])) for t in data})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        # descending total degree, then by power of k
        for (i, j), c in sorted(self._terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "*".join(
                x for x in (
                    ("k" if i == 1 else f"k^{i}") if i else "",
                    ("s" if j == 1 else f"s^{j}") if j else "",
                ) if x
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            pieces.append(("-" if c < 0 else "+", body))
        head_sign, head = pieces[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"CoeffPoly({self})"


K = CoeffPoly.k()
S = CoeffPoly.s()


# ---------------------------------------------------------------------------
# links and matchings


def canonical_link(a, b) -> tuple:
    if a == b:
        raise LinkError(f"a link needs two distinct indices, got ({a!r}, {b!r})")
    return (a, b) if _label_key(a) <= _label_key(b) else (b, a)


def link_set(pairs: Iterable[Iterable]) -> frozenset:
    """Build a link set from pairs, rejecting repeated indices."""
    out = set()
    seen = set()
    for pair in pairs:
        a, b = tuple(pair)
        lk = canonical_link(a, b)
        for x in lk:
            if x in seen:
                raise LinkError(f"index {x!r} appears in more than one link")
            seen.add(x)
        out.add(lk)
    return frozenset(out)


def underlying_set(links: Iterable[tuple]) -> frozenset:
    return frozenset(x for lk in links for x in lk)


def sorted_links(links: Iterable[tuple]) -> list[tuple]:
    return sorted(links, key=lambda lk: (_label_key(lk[0]), _label_key(lk[1])))


def sorted_labels(labels: Iterable) -> list:
    return sorted(labels, key=_label_key)


def is_perfect_matching(links: Iterable[tuple], labels: Iterable) -> bool:
    links = list(links)
    used = [x for lk in links for x in lk]
    return len(used) == len(set(used)) and set(used) == set(labels)


def perfect_matchings(labels: Iterable) -> list[frozenset]:
    """All perfect matchings of an even-sized label set, deterministic order."""
    labels = sorted_labels(labels)
    if len(labels) % 2:
        raise LinkError("odd number of labels has no perfect matching")

    def rec(rest):
        if not rest:
            yield []
            return
        first = rest[0]
        for i in range(1, len(rest)):
            partner = rest[i]
            remaining = rest[1:i] + rest[i + 1:]
            for tail in rec(remaining):
                yield [canonical_link(first, partner)] + tail

    return [frozenset(m) for m in rec(labels)]


# ---------------------------------------------------------------------------
# the expansion


class Expansion:
    """Polynomial part of ``d^{L0}(kernel)`` in the ``(Delta - E, E)`` basis.

    ``terms`` maps ``(A_links, E_links)`` (two disjoint frozensets of links) to
    a :class:`CoeffPoly`.  Every key covers the underlying set exactly once.
    """

    __slots__ = ("underlying", "terms")

    def __init__(self, underlying: Iterable, terms: Mapping[tuple[frozenset, frozenset], CoeffPoly]):
        self.underlying = frozenset(underlying)
        clean = {}
        for (a_links, e_links), c in terms.items():
            if not c:
                continue
            a_links, e_links = frozenset(a_links), frozenset(e_links)
            if not is_perfect_matching(a_links | e_links, self.underlying) or a_links & e_links:
                raise LinkError("expansion term is not a perfect matching of the underlying set")
            clean[(a_links, e_links)] = c
        self.terms = clean

    def __eq__(self, other):
        if not isinstance(other, Expansion):
            return NotImplemented
        return self.underlying == other.underlying and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def relabel(self, mapping: Mapping) -> "Expansion":
        def ren(links):
            return frozenset(canonical_link(mapping[a], mapping[b]) for a, b in links)

        return Expansion(
            (mapping[x] for x in self.underlying),
            {(ren(a), ren(e)): c for (a, e), c in self.terms.items()},
        )

    def to_json(self) -> dict:
        rows = []
        for (a_links, e_links), c in sorted(
            self.terms.items(), key=lambda t: (_links_key(t[0][0]), _links_key(t[0][1]))
        ):
            rows.append({
                "A": [list(lk) for lk in sorted_links(a_links)],
                "E": [list(lk) for lk in sorted_links(e_links)],
                "coeff": c.to_json(),
            })
        return {"underlying": sorted_labels(self.underlying), "terms": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Expansion":
        terms = {}
        for row in data["terms"]:
            key = (link_set(row["A"]), link_set(row["E"]))
            terms[key] = CoeffPoly.from_json(row["coeff"])
        return cls(data["underlying"], terms)


def _links_key(links):
    return [(_label_key(a), _label_key(b)) for a, b in sorted_links(links)]


def _add(acc: dict, key, c: CoeffPoly):
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


_HALF = Fraction(1, 2)


def _split(a, b, x, y):
    """The two links produced by (D3)/(D4): -(1/2)(X^{ax}X^{by} + X^{ay}X^{bx})."""
    if len({a, b, x, y}) != 4:
        raise LinkError("rules (D3)/(D4) need four distinct indices")
    return (
        (canonical_link(a, x), canonical_link(b, y)),
        (canonical_link(a, y), canonical_link(b, x)),
    )


def delta_basis_expansion(L0: Iterable[tuple], order: Iterable[tuple] | None = None) -> dict:
    """Expansion of ``d^{L0}(kernel)`` in the ``(Delta, E)`` basis.

    Returns a dict ``(Delta_links, E_links) -> CoeffPoly``.  ``order`` fixes the
    order in which the operators are applied (default: sorted).
    """
    L0 = link_set(L0)
    seq = sorted_links(L0) if order is None else [canonical_link(*lk) for lk in order]
    if set(seq) != set(L0) or len(seq) != len(L0):
        raise LinkError("order must be a permutation of the links of L0")

    d2_delta = -K - S
    d2_e = S
    state: dict[tuple[frozenset, frozenset], CoeffPoly] = {(frozenset(), frozenset()): CoeffPoly.const(1)}
    for a, b in seq:
        ab = (a, b)
        new: dict[tuple[frozenset, frozenset], CoeffPoly] = {}
        for (dl, el), c in state.items():
            # (D2) on the kernel
            _add(new, (dl | {ab}, el), c * d2_delta)
            _add(new, (dl, el | {ab}), c * d2_e)
            # (D1) + (D3) on each Delta factor
            for x, y in dl:
                rest = dl - {(x, y)}
                for l1, l2 in _split(a, b, x, y):
                    _add(new, (rest | {l1, l2}, el), c * (-_HALF))
            # (D1) + (D4) on each E factor
            for x, y in el:
                rest = el - {(x, y)}
                for l1, l2 in _split(a, b, x, y):
                    _add(new, (dl, rest | {l1, l2}), c * (-_HALF))
        state = new
    return state


def expand_operator(L0: Iterable[tuple], order: Iterable[tuple] | None = None) -> Expansion:
    """Exact expansion of ``d^{L0}(delta^{-k}|delta|^{-2s}eps^s)`` over the kernel.

    >>> e = expand_operator([(1, 2)])
    >>> str(coefficient_lookup(e, [(1, 2)], []))
    '-k - s'
    """
    L0 = link_set(L0)
    dstate = delta_basis_expansion(L0, order)
    out: dict[tuple[frozenset, frozenset], CoeffPoly] = {}
    for (dl, el), c in dstate.items():
        dl_list = sorted_links(dl)
        # Delta = A + E on every Delta factor
        for mask in itertools.product((0, 1), repeat=len(dl_list)):
            a_links = frozenset(lk for lk, m in zip(dl_list, mask) if m == 0)
            moved = frozenset(lk for lk, m in zip(dl_list, mask) if m == 1)
            _add(out, (a_links, el | moved), c)
    return Expansion(underlying_set(L0), out)


def coefficient_lookup(e: Expansion, L1: Iterable, L2: Iterable) -> CoeffPoly:
    """Coefficient ``c(L1, L2)`` of ``(Delta - E)^{L1} E^{L2}``; zero if absent."""
    L1, L2 = link_set(L1), link_set(L2)
    if L1 & L2 or not is_perfect_matching(L1 | L2, e.underlying):
        raise LinkError("(L1, L2) is not a perfect matching of the underlying set")
    return e.terms.get((L1, L2), CoeffPoly())


# ---------------------------------------------------------------------------
# numeric instantiation


def _check_point(n: int, g: np.ndarray, Z: np.ndarray):
    g = np.asarray(g, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    if g.shape != (2 * n, 2 * n) or Z.shape != (n, n):
        raise ValueError("shape mismatch between n, g and Z")
    Y = Z.imag
    if np.linalg.eigvalsh((Y + Y.T) / 2).min() <= 0:
        raise ValueError("Im(Z) is not positive definite")
    C, D = g[n:, :n], g[n:, n:]
    J = C @ Z + D
    if abs(np.linalg.det(J)) < 1e-300 or np.linalg.cond(J) > 1e14:
        raise ValueError("CZ + D is singular")
    return C, J, Y


def kernel_value(n: int, g, Z, k, s) -> complex:
    """``delta^{-k} |delta|^{-2s} eps^s`` at ``(g, Z)``."""
    _, J, Y = _check_point(n, g, Z)
    d = np.linalg.det(J)
    eps = np.linalg.det(Y)
    return complex(d ** (-k) * np.exp(-2 * s * np.log(abs(d))) * np.exp(s * np.log(eps)))


def evaluate_expansion(e: Expansion, n: int, g, Z, k, s, vectors: Mapping) -> complex:
    """Numerically instantiate an expansion.

    ``Delta^{ab} -> v_a^T (CZ+D)^{-1} C v_b`` and ``E^{ab} -> v_a^T (2i Im Z)^{-1} v_b``;
    coefficients are evaluated at ``(k, s)``.
    """
    C, J, Y = _check_point(n, g, Z)
    delta = np.linalg.solve(J, C)
    E = np.linalg.inv(Y) / 2j
    A = delta - E
    vec = {lab: np.asarray(v, dtype=complex) for lab, v in vectors.items()}
    missing = e.underlying - set(vec)
    if missing:
        raise ValueError(f"no vector for labels {sorted_labels(missing)}")

    def contract(M, links):
        out = 1.0 + 0j
        for a, b in links:
            out *= vec[a] @ M @ vec[b]
        return out

    total = 0j
    for (a_links, e_links), c in e.terms.items():
        total += complex(c(k, s)) * contract(A, a_links) * contract(E, e_links)
    return total
