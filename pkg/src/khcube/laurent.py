"""Exact one-variable Laurent polynomials over the integers.

Coefficients are arbitrary-precision ints keyed by exponent.  The class is
immutable; arithmetic returns new objects.  Division is only provided in
the exact form needed by fraction-free elimination: it raises if the
quotient is not integral.
"""

from __future__ import annotations

from typing import Dict, Iterator, Mapping, Tuple

__all__ = ["LaurentPoly"]


class LaurentPoly:
    """A Laurent polynomial sum(c_e * T**e) with integer coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean: Dict[int, int] = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    clean[int(e)] = clean.get(int(e), 0) + int(c)
                    if not clean[int(e)]:
                        del clean[int(e)]
        self._coeffs = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    # -- inspection --------------------------------------------------

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._coeffs.items()))

    def coeff(self, exponent: int) -> int:
        return self._coeffs.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no support")
        return min(self._coeffs)

    @property
    def max_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no support")
        return max(self._coeffs)

    def abs_coeff_sum(self) -> int:
        """Sum of absolute values of all coefficients (0 for the zero poly)."""
        return sum(abs(c) for c in self._coeffs.values())

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._coeffs.items()})
        out: Dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by T**k."""
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Return q with self == q * other, or raise ValueError.

        Needed by Bareiss-style elimination, where interior divisions are
        guaranteed exact; a failure here is a logic error upstream.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        rem = dict(self._coeffs)
        lead_e = other.max_exp
        lead_c = other._coeffs[lead_e]
        # An exact quotient q has min_exp == self.min_exp - other.min_exp;
        # generated exponents sinking below that bound prove inexactness
        # (and cap the otherwise unbounded Laurent descent).
        min_qe = self.min_exp - other.min_exp
        out: Dict[int, int] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if c % lead_c:
                raise ValueError("non-exact Laurent division")
            qe, qc = e - lead_e, c // lead_c
            if qe < min_qe:
                raise ValueError("non-exact Laurent division")
            out[qe] = out.get(qe, 0) + qc
            for oe, oc in other._coeffs.items():
                t = oe + qe
                rem[t] = rem.get(t, 0) - oc * qc
                if not rem[t]:
                    del rem[t]
        return LaurentPoly(out)

    def __call__(self, value: int) -> int:
        """Evaluate at a nonzero integer (negative exponents must divide out)."""
        if value == 0:
            raise ZeroDivisionError("cannot evaluate a Laurent polynomial at 0")
        total_num = 0
        min_e = min(self._coeffs) if self._coeffs else 0
        shift = -min_e if min_e < 0 else 0
        for e, c in self._coeffs.items():
            total_num += c * value ** (e + shift)
        denom = value**shift
        if total_num % denom:
            raise ValueError("evaluation is not an integer")
        return total_num // denom

    def reversed_variable(self) -> "LaurentPoly":
        """Substitute T -> T**-1."""
        return LaurentPoly({-e: c for e, c in self._coeffs.items()})

    # -- comparisons / display ---------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in sorted(self._coeffs.items(), reverse=True):
            if e == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                power = "T" if e == 1 else f"T^{e}"
                term = mag + power
            parts.append(("+ " if c > 0 else "- ") + term)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_dict(self) -> Dict[int, int]:
        return dict(self._coeffs)
