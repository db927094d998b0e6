"""Exact arithmetic for integer polynomials Laurent in A and ordinary in a, b.

A value is a finite sum of terms ``c * A^eA * a^ea * b^eb`` with integer
coefficient ``c``, integer exponent ``eA`` (may be negative) and non-negative
exponents ``ea``, ``eb``.  Coefficients are arbitrary-precision Python ints.

The canonical text form joins terms with " + " / " - ", ordering them
lexicographically by (ea desc, eb desc, eA desc), e.g. ``-2*A^-3*a^2 + b``.
The zero polynomial prints as ``0``.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Optional

__all__ = [
    "LaurentPoly",
    "ZERO",
    "ONE",
    "A",
    "A_INV",
    "VAR_A",
    "VAR_a",
    "VAR_b",
    "D_LOOP",
    "parse_poly",
]

Key = tuple[int, int, int]  # (eA, ea, eb)


def _term_sort_key(key: Key):
    eA, ea, eb = key
    return (-ea, -eb, -eA)


class LaurentPoly:
    """Immutable polynomial in Z[A, A^-1][a, b], kept in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, int] | Iterable[tuple[Key, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, int] = {}
        for (eA, ea, eb), c in items:
            if ea < 0 or eb < 0:
                raise ValueError("exponents of a and b must be non-negative")
            if c:
                k = (eA, ea, eb)
                acc[k] = acc.get(k, 0) + c
                if not acc[k]:
                    del acc[k]
        self._terms: dict[Key, int] = acc
        self._hash: Optional[int] = None

    # -- basic protocol ----------------------------------------------------

    @property
    def terms(self) -> Mapping[Key, int]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Key, int]]:
        return iter(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        acc: dict[Key, int] = {}
        for (x1, y1, z1), c1 in self._terms.items():
            for (x2, y2, z2), c2 in other._terms.items():
                k = (x1 + x2, y1 + y2, z1 + z2)
                acc[k] = acc.get(k, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            inv = self._monomial_inverse()
            if inv is None:
                raise ValueError("not invertible")
            return inv ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _monomial_inverse(self) -> Optional["LaurentPoly"]:
        """Inverse if this is ``+-A^k`` (the only invertible monomials here)."""
        if len(self._terms) != 1:
            return None
        ((eA, ea, eb), c), = self._terms.items()
        if ea or eb or c not in (1, -1):
            return None
        return LaurentPoly({(-eA, 0, 0): c})

    # -- queries -----------------------------------------------------------

    def max_degree(self, var: str) -> Optional[int]:
        """Maximum exponent of ``var`` in {A, a, b}; None for the zero poly."""
        idx = _var_index(var)
        if not self._terms:
            return None
        return max(k[idx] for k in self._terms)

    def substitute(self, var: str, value: "LaurentPoly | int") -> "LaurentPoly":
        """Replace every power of ``var`` (one of a, b) by ``value``-powers.

        Substitution for A is unsupported: A is the Laurent variable.
        """
        if var == "A":
            raise ValueError("A substitution unsupported")
        idx = _var_index(var)
        value = _coerce(value)
        if value.max_degree(var) is not None and value:
            # a nonzero value mentioning var would not terminate meaningfully
            if any(k[idx] for k in value._terms):
                raise ValueError(f"substitution value contains {var}")
        out = ZERO
        powers: dict[int, LaurentPoly] = {0: ONE}
        for (eA, ea, eb), c in self._terms.items():
            e = (eA, ea, eb)[idx]
            if e not in powers:
                powers[e] = value ** e
            rest = [eA, ea, eb]
            rest[idx] = 0
            out = out + LaurentPoly({tuple(rest): c}) * powers[e]
        return out

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for key in sorted(self._terms, key=_term_sort_key):
            c = self._terms[key]
            body = _format_term(abs(c), key)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def _format_term(coeff: int, key: Key) -> str:
    eA, ea, eb = key
    factors: list[str] = []
    for name, e in (("A", eA), ("a", ea), ("b", eb)):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    if not factors:
        return str(coeff)
    if coeff == 1:
        return "*".join(factors)
    return str(coeff) + "*" + "*".join(factors)


def _var_index(var: str) -> int:
    try:
        return {"A": 0, "a": 1, "b": 2}[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}") from None


def _coerce(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return const(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to LaurentPoly")


def const(c: int) -> LaurentPoly:
    return LaurentPoly({(0, 0, 0): c})


def monomial(coeff: int = 1, eA: int = 0, ea: int = 0, eb: int = 0) -> LaurentPoly:
    return LaurentPoly({(eA, ea, eb): coeff})


_FACTOR_RE = re.compile(r"(A|a|b)(?:\^(-?\d+))?$")


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical text form (inverse of :meth:`LaurentPoly.to_text`)."""
    text = text.strip()
    if text == "0":
        return ZERO
    # normalize "a - b" into explicit signed chunks
    chunks = re.split(r"\s+([+-])\s+", text)
    signed: list[tuple[int, str]] = []
    first = chunks[0]
    sign = 1
    if first.startswith("-"):
        sign, first = -1, first[1:].strip()
    elif first.startswith("+"):
        first = first[1:].strip()
    signed.append((sign, first))
    for op, body in zip(chunks[1::2], chunks[2::2]):
        signed.append((1 if op == "+" else -1, body.strip()))
    acc = ZERO
    for sgn, body in signed:
        if not body:
            raise ValueError("empty term")
        coeff = 1
        eA = ea = eb = 0
        factors = body.split("*")
        start = 0
        if re.fullmatch(r"\d+", factors[0]):
            coeff = int(factors[0])
            start = 1
        for factor in factors[start:]:
            m = _FACTOR_RE.fullmatch(factor.strip())
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            if name == "A":
                eA += exp
            elif name == "a":
                ea += exp
            else:
                eb += exp
        acc = acc + LaurentPoly({(eA, ea, eb): sgn * coeff})
    return acc


ZERO = LaurentPoly()
ONE = const(1)
A = monomial(eA=1)
A_INV = monomial(eA=-1)
VAR_A = A
VAR_a = monomial(ea=1)
VAR_b = monomial(eb=1)

#: Value of a disjoint unmarked loop in the bracket state sum: -A^2 - A^-2.
D_LOOP = -(A ** 2) - (A_INV ** 2)
