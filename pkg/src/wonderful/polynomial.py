"""Integer polynomials in one variable ``t``, used as Poincare polynomials."""

from __future__ import annotations

from itertools import zip_longest
from typing import Iterable


class PoincarePolynomial:
    """An exact polynomial ``sum(b_i * t**i)`` with integer coefficients.

    Coefficients are stored lowest degree first with trailing zeros stripped,
    so two polynomials are equal iff their coefficient tuples are equal.

    >>> p = PoincarePolynomial.projective_space(2)
    >>> str(p)
    '1 + t^2 + t^4'
    >>> str(p * PoincarePolynomial([1, 0, 1]))
    '1 + 2*t^2 + 2*t^4 + t^6'
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def one(cls) -> PoincarePolynomial:
        return cls((1,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> PoincarePolynomial:
        return cls((0,) * degree + (coeff,))

    @classmethod
    def even_range(cls, lo: int, hi: int) -> PoincarePolynomial:
        """``t^(2lo) + t^(2lo+2) + ... + t^(2hi)``; zero when ``hi < lo``."""
        if hi < lo:
            return cls()
        cs = [0] * (2 * hi + 1)
        for k in range(lo, hi + 1):
            cs[2 * k] = 1
        return cls(cs)

    @classmethod
    def projective_space(cls, d: int) -> PoincarePolynomial:
        return cls.even_range(0, d)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, PoincarePolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (tuple, list)):
            return self.coeffs == PoincarePolynomial(other).coeffs
        if isinstance(other, int):
            return self.coeffs == PoincarePolynomial((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: PoincarePolynomial) -> PoincarePolynomial:
        other = _coerce(other)
        return PoincarePolynomial(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __mul__(self, other: PoincarePolynomial | int) -> PoincarePolynomial:
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return PoincarePolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PoincarePolynomial(out)

    __rmul__ = __mul__

    def euler_number(self) -> int:
        """Signed sum of the Betti numbers (value at ``t = -1``)."""
        return sum(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def total_betti(self) -> int:
        return sum(self.coeffs)

    def is_palindromic(self, degree: int | None = None) -> bool:
        if degree is not None and self.degree != degree:
            return False
        return self.coeffs == self.coeffs[::-1]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "t" if i == 1 else f"t^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"PoincarePolynomial({list(self.coeffs)})"


def _coerce(p) -> PoincarePolynomial:
    if isinstance(p, PoincarePolynomial):
        return p
    if isinstance(p, int):
        return PoincarePolynomial((p,))
    return PoincarePolynomial(p)
