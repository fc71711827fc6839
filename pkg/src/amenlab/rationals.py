"""Exact rational serialization helpers.

All rationals cross serialization boundaries as "p/q" strings so that
certificates round-trip losslessly and digests are stable across runs.
No floating point is accepted anywhere.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction


def fmt_q(x: Fraction | int) -> str:
    """Render a rational as a canonical "p/q" string (gcd-reduced, q > 0)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_q(text: str | int) -> Fraction:
    """Parse "p/q" (or a bare integer string) into an exact Fraction.

    Floats are rejected: certificates must stay exact.
    """
    if isinstance(text, bool):
        raise ValueError("rational expected, got bool")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError("floating point rationals are not accepted; use p/q")
    s = str(text).strip()
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            return Fraction(int(num), int(den))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in rational {text!r}") from None
    return Fraction(int(s))


def canonical_dumps(obj) -> str:
    """JSON with sorted keys and fixed separators; byte-stable across runs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256_digest(obj) -> str:
    """Content digest of an object's canonical JSON form."""
    raw = canonical_dumps(obj).encode("utf-8")
    return "sha256:" + hashlib.sha256(raw).hexdigest()
