"""Coefficient arithmetic in a localization A[1/P], as (numerator, power) pairs.

Used by the variable-elimination bridge solver, which runs module actions
with parameters that carry bounded denominators at a fixed pivot P.
"""

from __future__ import annotations

from .rings import Poly


class LocElt:
    __slots__ = ("num", "k", "pivot")

    def __init__(self, num: Poly, k: int, pivot: Poly):
        if num.is_zero():
            k = 0
        self.num = num
        self.k = k
        self.pivot = pivot

    def normalized(self) -> "LocElt":
        """Strip pivot factors from the numerator where the division is exact."""
        num, k = self.num, self.k
        while k > 0 and not num.is_zero():
            try:
                num = num.exact_div(self.pivot)
                k -= 1
            except (ValueError, ZeroDivisionError):
                break
        if num.is_zero():
            k = 0
        return LocElt(num, k, self.pivot)

    @staticmethod
    def wrap(p: Poly, pivot: Poly) -> "LocElt":
        return LocElt(p, 0, pivot)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "LocElt") -> "LocElt":
        if self.k == other.k:
            return LocElt(self.num + other.num, self.k, self.pivot)
        if self.k > other.k:
            return LocElt(self.num + other.num * self.pivot ** (self.k - other.k),
                          self.k, self.pivot)
        return LocElt(self.num * self.pivot ** (other.k - self.k) + other.num,
                      other.k, self.pivot)

    def __neg__(self) -> "LocElt":
        e = LocElt.__new__(LocElt)
        e.num, e.k, e.pivot = -self.num, self.k, self.pivot
        return e

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LocElt") -> "LocElt":
        return LocElt(self.num * other.num, self.k + other.k, self.pivot)

    def __eq__(self, other):
        if not isinstance(other, LocElt):
            return NotImplemented
        if self.k == other.k:
            return self.num == other.num
        if self.k > other.k:
            return self.num == other.num * self.pivot ** (self.k - other.k)
        return self.num * self.pivot ** (other.k - self.k) == other.num

    def int_scalar(self, n: int) -> "LocElt":
        return LocElt(Poly.const(self.num.ring, self.num.names, n), 0, self.pivot)

    def one_like(self) -> "LocElt":
        return self.int_scalar(1)

    def inv_pivot(self) -> "LocElt":
        """1/P as an element."""
        return LocElt(Poly.const(self.num.ring, self.num.names, 1), 1, self.pivot)

    def divide_by_pivot(self, times: int = 1) -> "LocElt":
        return LocElt(self.num, self.k + times, self.pivot)

    def to_poly(self) -> Poly:
        if self.k == 0:
            return self.num
        return self.num.exact_div(self.pivot ** self.k)

    def __repr__(self):
        return f"({self.num})/P^{self.k}"
