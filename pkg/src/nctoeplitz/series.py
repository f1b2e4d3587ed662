"""Truncated bivariate power series in the renormalized parameters (B, T).

Used as the coefficient ring when expanding star-product coefficients
jointly around (B, T) = (0, 0); all rational prefactors with powers of
1 - B*T in the denominator become finite series here.
"""

from __future__ import annotations

from numbers import Number

from .errors import NotExpandable


class BTSeries:
    """Polynomial in (B, T) truncated at a fixed total degree."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict[tuple[int, int], complex] | None = None):
        self.order = order
        self.coeffs = {}
        if coeffs:
            for (a, b), c in coeffs.items():
                if a + b <= order and c != 0:
                    self.coeffs[(a, b)] = complex(c)

    @classmethod
    def const(cls, value, order: int) -> "BTSeries":
        return cls(order, {(0, 0): value})

    @classmethod
    def gen_B(cls, order: int) -> "BTSeries":
        return cls(order, {(1, 0): 1.0})

    @classmethod
    def gen_T(cls, order: int) -> "BTSeries":
        return cls(order, {(0, 1): 1.0})

    def coefficient(self, a: int, b: int) -> complex:
        return self.coeffs.get((a, b), 0.0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other) -> "BTSeries":
        if isinstance(other, BTSeries):
            if other.order != self.order:
                raise ValueError("mixing truncation orders")
            return other
        if isinstance(other, Number):
            return BTSeries.const(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out.get(k, 0.0) + c
        return BTSeries(self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return BTSeries(self.order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in o.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if a + b <= self.order:
                    k = (a, b)
                    out[k] = out.get(k, 0.0) + c1 * c2
        return BTSeries(self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)
        return NotImplemented

    def __pow__(self, n: int):
        out = BTSeries.const(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            return self.coeffs == ({} if other == 0 else {(0, 0): complex(other)})
        if isinstance(other, BTSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def reciprocal(self) -> "BTSeries":
        """1/self for series with nonzero constant term, via a Neumann sum."""
        c0 = self.coefficient(0, 0)
        if c0 == 0:
            raise NotExpandable("series has no constant term; not invertible")
        rest = BTSeries(self.order,
                        {k: -c / c0 for k, c in self.coeffs.items() if k != (0, 0)})
        out = BTSeries.const(1.0, self.order)
        power = BTSeries.const(1.0, self.order)
        for _ in range(self.order):
            power = power * rest
            if power.is_zero():
                break
            out = out + power
        return out * (1.0 / c0)

    def __call__(self, B: float, T: float) -> complex:
        return sum(c * B ** a * T ** b for (a, b), c in self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "BTSeries(0)"
        parts = [f"{c}*B^{a}*T^{b}" for (a, b), c in sorted(self.coeffs.items())]
        return "BTSeries(" + " + ".join(parts) + f"; order<={self.order})"


def geometric_inverse_one_minus_bt(order: int) -> BTSeries:
    """Series of 1/(1 - B*T): 1 + BT + (BT)^2 + ... truncated."""
    one = BTSeries.const(1.0, order)
    return (one - BTSeries.gen_B(order) * BTSeries.gen_T(order)).reciprocal()
