"""Linear partial differential operators in two variables.

An LPDO is a finite sum  sum a_jk(x, y) Dx^j Dy^k  kept in normal form:
all coefficients stand to the left of the derivatives and no zero
coefficient is stored.  Composition moves coefficients through derivatives
by the Leibniz rule, so the product of two normal forms is again a normal
form.  All values are immutable; operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .expr import ConstScalar, Poly, RatExpr


class LPDO:
    """Normal-form differential operator with RatExpr coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[tuple[int, int], RatExpr] | None = None):
        self.coeffs = {jk: c for jk, c in (coeffs or {}).items() if not c.is_zero()}

    # -- constructors

    @classmethod
    def zero(cls) -> "LPDO":
        return cls()

    @classmethod
    def function(cls, f: RatExpr) -> "LPDO":
        """The order-0 operator 'multiply by f'."""
        return cls({(0, 0): f})

    @classmethod
    def monomial(cls, j: int, k: int, coeff: RatExpr | None = None) -> "LPDO":
        return cls({(j, k): coeff if coeff is not None else RatExpr.ONE})

    @classmethod
    def dx(cls) -> "LPDO":
        return cls.monomial(1, 0)

    @classmethod
    def dy(cls) -> "LPDO":
        return cls.monomial(0, 1)

    # -- views

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> int:
        return max((j + k for j, k in self.coeffs), default=0)

    def coeff(self, j: int, k: int) -> RatExpr:
        return self.coeffs.get((j, k), RatExpr.ZERO)

    def level(self, m: int) -> dict[tuple[int, int], RatExpr]:
        """Coefficients of total derivative order m."""
        return {jk: c for jk, c in self.coeffs.items() if jk[0] + jk[1] == m}

    def sorted_coeffs(self) -> list[tuple[tuple[int, int], RatExpr]]:
        """Deterministic term order: total order descending, then x-power
        descending."""
        keys = sorted(self.coeffs, key=lambda jk: (-(jk[0] + jk[1]), -jk[0]))
        return [(jk, self.coeffs[jk]) for jk in keys]

    # -- linear structure

    def __add__(self, other: "LPDO") -> "LPDO":
        out = dict(self.coeffs)
        for jk, c in other.coeffs.items():
            s = out.get(jk)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(jk, None)
            else:
                out[jk] = s
        o = LPDO.__new__(LPDO)
        o.coeffs = out
        return o

    def __neg__(self) -> "LPDO":
        o = LPDO.__new__(LPDO)
        o.coeffs = {jk: -c for jk, c in self.coeffs.items()}
        return o

    def __sub__(self, other: "LPDO") -> "LPDO":
        return self + (-other)

    def scale(self, f: RatExpr) -> "LPDO":
        """Left-multiply by the function f."""
        if f.is_zero():
            return LPDO.zero()
        o = LPDO.__new__(LPDO)
        o.coeffs = {jk: f * c for jk, c in self.coeffs.items()}
        return o

    # -- the noncommutative product

    def compose(self, other: "LPDO") -> "LPDO":
        """Normal form of self applied after other (self o other).

        Dx^j Dy^k moves through a coefficient b by the Leibniz rule:
        Dx^j Dy^k o b = sum C(j,r) C(k,s) (d^(j-r)x d^(k-s)y b) Dx^r Dy^s.
        """
        out: dict[tuple[int, int], RatExpr] = {}
        for (j, k), a in self.coeffs.items():
            for (l, m), b in other.coeffs.items():
                # precompute the derivative grid of b up to (j, k)
                dxs = [b]
                for _ in range(j):
                    dxs.append(dxs[-1].diff("x"))
                for r in range(j, -1, -1):
                    base = dxs[j - r]
                    for s in range(k, -1, -1):
                        if base.is_zero():
                            break
                        factor = comb(j, r) * comb(k, s)
                        term = a * base
                        if factor != 1:
                            term = term * RatExpr.from_int(factor)
                        key = (r + l, s + m)
                        acc = out.get(key)
                        acc = term if acc is None else acc + term
                        if acc.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = acc
                        base = base.diff("y")
        return LPDO(out)

    def apply(self, f: RatExpr) -> RatExpr:
        """Evaluate the operator on a function."""
        out = RatExpr.ZERO
        for (j, k), a in self.coeffs.items():
            g = f
            for _ in range(j):
                g = g.diff("x")
            for _ in range(k):
                g = g.diff("y")
            if not g.is_zero():
                out = out + a * g
        return out

    def transpose(self) -> "LPDO":
        """Formal transpose sum (-1)^(j+k) Dx^j Dy^k o a_jk, renormalized."""
        out = LPDO.zero()
        for (j, k), a in self.coeffs.items():
            term = LPDO.monomial(j, k).compose(LPDO.function(a))
            if (j + k) % 2:
                term = -term
            out = out + term
        return out

    def change_vars(self, matrix) -> "LPDO":
        """Rewrite in coordinates (u, v) = M (x, y) for a constant invertible
        M, renaming (u, v) back to (x, y).

        Derivatives transform as Dx -> M11 Dx + M21 Dy, Dy -> M12 Dx + M22 Dy
        and coefficients pull back through the inverse map, so the result of
        applying M then M^-1 is the original operator.
        """
        m11, m12, m21, m22 = _matrix_entries(matrix)
        det = m11 * m22 - m12 * m21
        if det.is_zero():
            raise ValueError("singular change of variables")
        for entry in (m11, m12, m21, m22):
            if not entry.is_const():
                raise ValueError("change of variables must be constant")
        inv = det.inverse()
        i11, i12 = m22 * inv, -(m12 * inv)
        i21, i22 = -(m21 * inv), m11 * inv
        subs = {
            "x": i11 * RatExpr.X + i12 * RatExpr.Y,
            "y": i21 * RatExpr.X + i22 * RatExpr.Y,
        }
        new_dx = LPDO({(1, 0): m11, (0, 1): m21})
        new_dy = LPDO({(1, 0): m12, (0, 1): m22})
        dx_pow: list[LPDO] = [LPDO.function(RatExpr.ONE)]
        dy_pow: list[LPDO] = [LPDO.function(RatExpr.ONE)]
        out = LPDO.zero()
        for (j, k), a in self.coeffs.items():
            while len(dx_pow) <= j:
                dx_pow.append(dx_pow[-1].compose(new_dx))
            while len(dy_pow) <= k:
                dy_pow.append(dy_pow[-1].compose(new_dy))
            term = dx_pow[j].compose(dy_pow[k]).scale(a.substitute(subs))
            out = out + term
        return out

    # -- comparison / display

    def __eq__(self, other) -> bool:
        return isinstance(other, LPDO) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __str__(self) -> str:
        from .printer import operator_str

        return operator_str(self)

    __repr__ = __str__


def _matrix_entries(matrix) -> tuple[RatExpr, RatExpr, RatExpr, RatExpr]:
    (a, b), (c, d) = matrix
    return tuple(_as_ratexpr(e) for e in (a, b, c, d))


def _as_ratexpr(v) -> RatExpr:
    if isinstance(v, RatExpr):
        return v
    if isinstance(v, ConstScalar):
        return RatExpr.from_const(v)
    if isinstance(v, Poly):
        return RatExpr.from_poly(v)
    return RatExpr.from_fraction(v)


SWAP_XY = ((0, 1), (1, 0))


def shear_matrix(c) -> tuple:
    """First-row shear (x, y) -> (x + c*y, y); sends the pure-Dy direction
    onto a mix containing Dx^n."""
    return ((1, c), (0, 1))


def matrix_inverse(matrix):
    m11, m12, m21, m22 = _matrix_entries(matrix)
    det = m11 * m22 - m12 * m21
    if det.is_zero():
        raise ValueError("singular matrix")
    inv = det.inverse()
    return ((m22 * inv, -(m12 * inv)), (-(m21 * inv), m11 * inv))


@dataclass(frozen=True)
class FirstOrderFactor:
    """A first-order operator p1 Dx + p2 Dy + p3 with (p1, p2) != (0, 0).

    Normalized factors have p1 = 1, or p1 = 0 with p2 = 1.
    """

    p1: RatExpr
    p2: RatExpr
    p3: RatExpr

    def __post_init__(self):
        if self.p1.is_zero() and self.p2.is_zero():
            raise ValueError("first-order factor needs a nonzero derivative part")

    @classmethod
    def from_root(cls, omega: RatExpr, p3: RatExpr) -> "FirstOrderFactor":
        """The factor Dx - omega*Dy + p3 attached to a symbol root."""
        return cls(RatExpr.ONE, -omega, p3)

    @classmethod
    def from_operator(cls, op: LPDO) -> "FirstOrderFactor":
        if op.order != 1:
            raise ValueError("not a first-order operator")
        return cls(op.coeff(1, 0), op.coeff(0, 1), op.coeff(0, 0))

    def as_operator(self) -> LPDO:
        return LPDO({(1, 0): self.p1, (0, 1): self.p2, (0, 0): self.p3})

    def normalized(self) -> tuple["FirstOrderFactor", RatExpr]:
        """(normalized factor, unit): self = unit * normalized, unit a function."""
        unit = self.p1 if not self.p1.is_zero() else self.p2
        inv = unit.inverse()
        return (
            FirstOrderFactor(self.p1 * inv, self.p2 * inv, self.p3 * inv),
            unit,
        )

    def __str__(self) -> str:
        return str(self.as_operator())
