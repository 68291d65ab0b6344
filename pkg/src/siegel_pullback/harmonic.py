"""Pluri-harmonic link polynomials over a split index set.

Labels are strings: ``"3*"`` is the third starred index (first variable block,
rows of ``X1``) and ``"3_"`` the third substarred one (rows of ``X2``).  A link
between a starred and a substarred label is *mixed*.

The block Laplacians are applied directly in the link basis.  Writing
``u_a = e^{(a)} X1`` for a starred label ``a``, a link monomial is a product of
inner products of such vectors, and

* ``Lap_{ab} X^{ab} = d``,
* ``Lap_{ab} X^{ac} X^{bd} = X^{cd}``,

with every other second derivative vanishing because each label occurs once.
This is the explicit Laplacian ``sum_kappa d^2/dx_{mu kappa} dx_{nu kappa}``
read off on the coefficient of ``e^{(a)}_mu e^{(b)}_nu``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import solve
from .link_calculus import (
    CoeffPoly,
    LinkError,
    canonical_link,
    expand_operator,
    link_set,
    perfect_matchings,
    sorted_labels,
    sorted_links,
    underlying_set,
)

__all__ = [
    "SplitShape",
    "HarmonicPolynomial",
    "QPolynomial",
    "Witness",
    "ProjectionResult",
    "NotPluriharmonic",
    "VanishingFailure",
    "star",
    "sub",
    "block_of",
    "link_kind",
    "block_laplacian",
    "check_pluriharmonic",
    "is_pluriharmonic",
    "project_harmonic",
    "compute_Q",
    "full_expansion",
    "non_mixed_coefficients",
    "mixed",
    "antisymmetric_degree2",
    "symmetric_degree2",
    "degree1_mixed",
]

_LABEL = re.compile(r"^(\d+)([*_])$")


class NotPluriharmonic(ValueError):
    """Input polynomial is not annihilated by the block Laplacians."""


class VanishingFailure(AssertionError):
    """A coefficient that must vanish for pluri-harmonic input did not."""

    def __init__(self, L1, L2, coeff, k):
        self.L1, self.L2, self.coeff, self.k = L1, L2, coeff, k
        super().__init__(
            f"c(L1={sorted_links(L1)}, L2={sorted_links(L2)}) = {coeff} at k={k} is not zero"
        )


def star(i: int) -> str:
    return f"{i}*"


def sub(i: int) -> str:
    return f"{i}_"


def block_of(label: str) -> int:
    """1 for starred labels, 2 for substarred ones."""
    m = _LABEL.match(label) if isinstance(label, str) else None
    if not m:
        raise LinkError(f"bad label {label!r}; expected '<n>*' or '<n>_'")
    return 1 if m.group(2) == "*" else 2


def _label_index(label: str) -> int:
    return int(_LABEL.match(label).group(1))


def link_kind(link: tuple) -> str:
    """``'**'``, ``'*_'`` (mixed) or ``'__'``."""
    b = sorted(block_of(x) for x in link)
    return {(1, 1): "**", (1, 2): "*_", (2, 2): "__"}[tuple(b)]


@dataclass(frozen=True)
class SplitShape:
    p: int
    q: int
    d: int
    l: int

    def __post_init__(self):
        if min(self.p, self.q, self.d, self.l) < 1:
            raise ValueError("p, q, d, l must be positive")


@dataclass
class HarmonicPolynomial:
    """Homogeneous rational combination of link monomials on split labels."""

    shape: SplitShape
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for links, c in self.terms.items():
            links = link_set(links)
            c = Fraction(c)
            if c:
                clean[links] = clean.get(links, Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}
        under = {underlying_set(m) for m in self.terms}
        if len(under) > 1:
            raise LinkError("polynomial is not homogeneous: monomials have different underlying sets")
        for lab in self.underlying:
            block_of(lab)
            if _label_index(lab) > self.shape.l:
                raise LinkError(f"label {lab} exceeds the tensor degree l={self.shape.l}")

    @classmethod
    def from_pairs(cls, shape: SplitShape, monomials: Iterable[tuple[Iterable, object]]) -> "HarmonicPolynomial":
        acc: dict = {}
        for links, c in monomials:
            key = link_set(links)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        return cls(shape, acc)

    @property
    def underlying(self) -> frozenset:
        return underlying_set(next(iter(self.terms))) if self.terms else frozenset()

    @property
    def degree(self) -> int:
        return len(self.underlying) // 2

    def is_zero(self) -> bool:
        return not self.terms

    def with_d(self, d: int) -> "HarmonicPolynomial":
        return HarmonicPolynomial(replace(self.shape, d=d), dict(self.terms))

    def __add__(self, other: "HarmonicPolynomial") -> "HarmonicPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return HarmonicPolynomial(self.shape, out)

    def __rmul__(self, scalar) -> "HarmonicPolynomial":
        scalar = Fraction(scalar)
        return HarmonicPolynomial(self.shape, {m: scalar * c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-1) * other

    def to_json(self) -> dict:
        rows = [
            {"links": [list(lk) for lk in sorted_links(m)], "coeff": str(c)}
            for m, c in sorted(self.terms.items(), key=lambda t: [list(x) for x in sorted_links(t[0])])
        ]
        s = self.shape
        return {"p": s.p, "q": s.q, "d": s.d, "l": s.l, "terms": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> "HarmonicPolynomial":
        shape = SplitShape(int(data["p"]), int(data["q"]), int(data["d"]), int(data["l"]))
        return cls.from_pairs(shape, ((row["links"], Fraction(row["coeff"])) for row in data["terms"]))


@dataclass(frozen=True)
class Witness:
    """First non-vanishing block Laplacian: block, label pair and residual."""

    block: int
    mu: str
    nu: str
    residual: dict

    def residual_str(self) -> str:
        return " + ".join(
            f"{c}*X^{{{','.join(''.join(lk) for lk in sorted_links(m))}}}" for m, c in self.residual.items()
        ) or "0"


def block_laplacian(terms: Mapping[frozenset, Fraction], a: str, b: str, d: int) -> dict:
    """``Lap_{ab}`` on a link polynomial; result lives on the labels minus ``{a, b}``."""
    out: dict[frozenset, Fraction] = {}
    ab = canonical_link(a, b)
    for links, c in terms.items():
        if ab in links:
            key, val = links - {ab}, c * d
        else:
            la = next((lk for lk in links if a in lk), None)
            lb = next((lk for lk in links if b in lk), None)
            if la is None or lb is None:
                continue
            u = la[0] if la[1] == a else la[1]
            w = lb[0] if lb[1] == b else lb[1]
            key, val = (links - {la, lb}) | {canonical_link(u, w)}, c
        out[key] = out.get(key, Fraction(0)) + val
    return {m: c for m, c in out.items() if c}


def _laplacian_pairs(labels: Iterable[str]):
    labels = sorted_labels(labels)
    for block in (1, 2):
        group = [x for x in labels if block_of(x) == block]
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                yield block, a, b


def check_pluriharmonic(P: HarmonicPolynomial) -> Witness | None:
    """``None`` if every block Laplacian annihilates ``P``, else the first witness."""
    for block, a, b in _laplacian_pairs(P.underlying):
        res = block_laplacian(P.terms, a, b, P.shape.d)
        if res:
            return Witness(block, a, b, res)
    return None


def is_pluriharmonic(P: HarmonicPolynomial) -> bool:
    return check_pluriharmonic(P) is None


@dataclass(frozen=True)
class ProjectionResult:
    poly: HarmonicPolynomial
    ok: bool


def project_harmonic(P: HarmonicPolynomial) -> ProjectionResult:
    """Harmonic representative of ``P`` modulo star-star / substar-substar links.

    Keeps the all-mixed monomials of ``P`` and solves exactly for the
    coefficients of the trace monomials (those containing a non-mixed link) so
    that every block Laplacian vanishes.  ``ok`` is False, and the zero
    polynomial returned, when no non-zero harmonic completion exists.
    """
    if P.degree > 3:
        raise ValueError("project_harmonic is limited to degree <= 3")
    if P.is_zero():
        return ProjectionResult(P, False)
    labels = P.underlying
    monos = perfect_matchings(labels)
    trace = [m for m in monos if any(link_kind(lk) != "*_" for lk in m)]
    fixed = {m: c for m, c in P.terms.items() if all(link_kind(lk) == "*_" for lk in m)}

    # Laplacian images, one linear equation per (pair, output monomial)
    pairs = list(_laplacian_pairs(labels))
    images_fixed = [block_laplacian(fixed, a, b, P.shape.d) for _, a, b in pairs]
    images_trace = [[block_laplacian({m: Fraction(1)}, a, b, P.shape.d) for m in trace] for _, a, b in pairs]
    rows, rhs = [], []
    for img_f, imgs_t in zip(images_fixed, images_trace):
        keys = set(img_f)
        for img in imgs_t:
            keys |= set(img)
        for key in sorted(keys, key=lambda m: [list(x) for x in sorted_links(m)]):
            rows.append([img.get(key, Fraction(0)) for img in imgs_t])
            rhs.append(-img_f.get(key, Fraction(0)))

    if trace and rows:
        x, residual, _ = solve(rows, rhs)
    elif rows:
        x, residual = [], (1 if any(rhs) else 0)
    else:
        x, residual = [Fraction(0)] * len(trace), 0
    if residual:
        return ProjectionResult(HarmonicPolynomial(P.shape, {}), False)
    out = dict(fixed)
    for m, c in zip(trace, x):
        if c:
            out[m] = c
    H = HarmonicPolynomial(P.shape, out)
    if H.is_zero() or not is_pluriharmonic(H):
        return ProjectionResult(HarmonicPolynomial(P.shape, {}), False)
    return ProjectionResult(H, True)


@dataclass
class QPolynomial:
    """The pure ``Delta - E`` part of ``P(d)(kernel)``; coefficients in ``k``, ``s``."""

    underlying: frozenset
    terms: dict
    validated_ks: tuple = ()

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.terms == other.terms and (self.underlying == other.underlying or not self.terms)

    def subs_k(self, k) -> "QPolynomial":
        terms = {m: c.subs_k(k) for m, c in self.terms.items()}
        return QPolynomial(self.underlying, {m: c for m, c in terms.items() if c}, self.validated_ks)

    def to_json(self) -> dict:
        return {
            "underlying": sorted_labels(self.underlying),
            "terms": [
                {"links": [list(lk) for lk in sorted_links(m)], "coeff": c.to_json(), "text": str(c)}
                for m, c in sorted(self.terms.items(), key=lambda t: [list(x) for x in sorted_links(t[0])])
            ],
            "validatedK": list(self.validated_ks),
        }


def full_expansion(P: HarmonicPolynomial) -> dict:
    """``sum_L c(L) expand_operator(L)`` as ``(L1, L2) -> CoeffPoly``."""
    acc: dict = {}
    for links, c in P.terms.items():
        for key, poly in expand_operator(links).terms.items():
            v = acc.get(key, CoeffPoly()) + poly * c
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return acc


def compute_Q(P: HarmonicPolynomial, validate: bool = False, ks: Iterable[int] | None = None) -> QPolynomial:
    """Polynomial ``Q(X, s)`` with ``P(d)(kernel) = kernel * Q(Delta - E, s)`` on the diagonal.

    With ``validate`` set, every coefficient ``c(L1, L2)`` whose ``L2`` is
    non-empty and contains no mixed link is checked to vanish identically in
    ``s`` for each ``k`` in ``ks`` (default ``d/2``), after confirming that
    ``P`` is pluri-harmonic for ``d = 2k``.  Raises :class:`VanishingFailure`
    or :class:`NotPluriharmonic`.  Validation is skipped when
    ``min(p, q) < l``.
    """
    total = full_expansion(P)
    q_terms = {l1: c for (l1, l2), c in total.items() if not l2}
    done: tuple = ()
    shape = P.shape
    if validate and min(shape.p, shape.q) >= shape.l:
        if ks is None:
            if shape.d % 2:
                raise ValueError("d must be even (d = 2k) to validate")
            ks = (shape.d // 2,)
        ks = tuple(int(k) for k in ks)
        for k in ks:
            w = check_pluriharmonic(P.with_d(2 * k))
            if w is not None:
                raise NotPluriharmonic(
                    f"not pluri-harmonic for d={2 * k}: block {w.block}, labels ({w.mu}, {w.nu})"
                )
            for (l1, l2), c in sorted(total.items(), key=lambda t: (len(t[0][1]), str(sorted_links(t[0][0])))):
                if l2 and all(link_kind(lk) != "*_" for lk in l2):
                    ck = c.subs_k(k)
                    if ck:
                        raise VanishingFailure(l1, l2, ck, k)
        done = ks
    return QPolynomial(P.underlying, q_terms, done)


def non_mixed_coefficients(P: HarmonicPolynomial, k: int) -> dict:
    """Coefficients ``c(L1, L2)`` at fixed ``k`` with ``L2`` non-empty and free of mixed links."""
    out = {}
    for (l1, l2), c in full_expansion(P).items():
        if l2 and all(link_kind(lk) != "*_" for lk in l2):
            out[(l1, l2)] = c.subs_k(k)
    return out


def mixed(i: int, j: int) -> tuple:
    """The mixed link ``(i*, j_)``."""
    return (star(i), sub(j))


def antisymmetric_degree2(shape: SplitShape) -> HarmonicPolynomial:
    """``X^{1*1_} X^{2*2_} - X^{1*2_} X^{2*1_}``."""
    return HarmonicPolynomial.from_pairs(shape, [([mixed(1, 1), mixed(2, 2)], 1), ([mixed(1, 2), mixed(2, 1)], -1)])


def symmetric_degree2(shape: SplitShape) -> HarmonicPolynomial:
    """``X^{1*1_} X^{2*2_} + X^{1*2_} X^{2*1_}`` (not harmonic on its own)."""
    return HarmonicPolynomial.from_pairs(shape, [([mixed(1, 1), mixed(2, 2)], 1), ([mixed(1, 2), mixed(2, 1)], 1)])


def degree1_mixed(shape: SplitShape, i: int = 1, j: int = 1) -> HarmonicPolynomial:
    return HarmonicPolynomial.from_pairs(shape, [([mixed(i, j)], 1)])
