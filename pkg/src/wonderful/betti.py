"""Poincare polynomials of space expressions.

Used only as a quantitative side channel: towers built in different ways
must agree on their Betti numbers.
"""

from __future__ import annotations

from functools import lru_cache

from .polynomial import PoincarePolynomial
from .space import Atom, Blowup, Empty, Point, Product, ProjBundle, SpaceExpr, render

__all__ = ["PoincarePolynomial", "InsufficientData", "poincare", "betti_vector"]


class InsufficientData(ValueError):
    """An atom without a stored Poincare polynomial was reached."""

    def __init__(self, atom_name: str):
        super().__init__(f"insufficient data: atom {atom_name!r} has no Poincare polynomial")
        self.atom_name = atom_name


@lru_cache(maxsize=None)
def poincare(s: SpaceExpr) -> PoincarePolynomial:
    if isinstance(s, Point):
        return PoincarePolynomial.one()
    if isinstance(s, Empty):
        return PoincarePolynomial()
    if isinstance(s, Atom):
        if s.poincare is None:
            raise InsufficientData(s.name)
        return PoincarePolynomial(s.poincare)
    if isinstance(s, Product):
        return poincare(s.left) * poincare(s.right)
    if isinstance(s, ProjBundle):
        return poincare(s.base) * PoincarePolynomial.even_range(0, s.fiber_rank - 1)
    if isinstance(s, Blowup):
        base = poincare(s.ambient)
        if s.codim == 1:
            return base
        return base + poincare(s.center) * PoincarePolynomial.even_range(1, s.codim - 1)
    raise TypeError(f"not a space expression: {render(s) if hasattr(s, 'dim') else s!r}")


def betti_vector(s: SpaceExpr) -> list[int]:
    return list(poincare(s).coeffs)
