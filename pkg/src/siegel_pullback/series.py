"""Fast exact truncated power series over the integers and rationals.

Products use Kronecker substitution: a series is packed into one big integer
(``gmpy2`` multiplies those quickly) and unpacked with a per-slot offset so
signed coefficients decode without carries.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import gmpy2


def _pack(coeffs: Sequence[int], slot_bytes: int) -> gmpy2.mpz:
    # little-endian fixed-width slots; coefficients must be non-negative here
    return gmpy2.mpz(int.from_bytes(b"".join(c.to_bytes(slot_bytes, "little") for c in coeffs), "little"))


def _pack_signed(coeffs: Sequence[int], slot_bytes: int) -> gmpy2.mpz:
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    return _pack(pos, slot_bytes) - _pack(neg, slot_bytes)


def int_series_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of ``a * b`` for integer series."""
    a = [int(x) for x in a[:n]]
    b = [int(x) for x in b[:n]]
    if not a or not b:
        return [0] * n
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    bits = bound.bit_length() + 2
    slot_bytes = (bits + 7) // 8
    prod = _pack_signed(a, slot_bytes) * _pack_signed(b, slot_bytes)
    # offset every slot by half its range so all slots are non-negative
    half = 1 << (8 * slot_bytes - 1)
    nslots = min(n, len(a) + len(b) - 1)
    offset = _pack([half] * nslots, slot_bytes)
    mask = (gmpy2.mpz(1) << (8 * slot_bytes * nslots)) - 1
    shifted = int((prod + offset) & mask)
    raw = shifted.to_bytes(slot_bytes * nslots, "little")
    out = [
        int.from_bytes(raw[i * slot_bytes:(i + 1) * slot_bytes], "little") - half
        for i in range(nslots)
    ]
    return out + [0] * (n - nslots)


def series_mul(a: Sequence, b: Sequence, n: int) -> list:
    """Product of two rational (or integer) series truncated to ``n`` terms."""
    if all(isinstance(x, int) for x in a) and all(isinstance(x, int) for x in b):
        return int_series_mul(a, b, n)
    da = lcm(*(Fraction(x).denominator for x in a)) if a else 1
    db = lcm(*(Fraction(x).denominator for x in b)) if b else 1
    ia = [int(Fraction(x) * da) for x in a]
    ib = [int(Fraction(x) * db) for x in b]
    den = da * db
    return [Fraction(c, den) for c in int_series_mul(ia, ib, n)]


def naive_series_mul(a: Sequence, b: Sequence, n: int) -> list:
    """Schoolbook product, kept as an independent check of :func:`series_mul`."""
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def divisor_sigma_table(power: int, n: int) -> list[int]:
    """``[sigma_power(m) for m in range(n)]`` with ``sigma(0) = 0``."""
    sig = [0] * n
    for d in range(1, n):
        dp = d**power
        for m in range(d, n, d):
            sig[m] += dp
    return sig
