"""Characteristic polynomial of an operator and exact root finding.

The top-order coefficients a_{n,0}, a_{n-1,1}, ..., a_{0,n} of an order-n
operator define P_n(w) = a_{n,0} w^n + ... + a_{0,n}.  Each root w selects
a candidate first-order factor Dx - w*Dy + p3; a degree drop of P below n
corresponds to a root at infinity (a factor led by Dy).  Root finding is
exact over the supported field: linear solves, the quadratic formula when
the discriminant has a square root in (an extension of) the constant
tower, and candidate rational-function roots for higher degrees.  Roots
that cannot be expressed are returned as an unresolved residual factor,
never dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import RatExpr, tower
from .operator import LPDO


@dataclass(frozen=True)
class CharPoly:
    """Coefficients [a_n0, a_{n-1,1}, ..., a_0n] in descending powers of w."""

    coeffs: tuple[RatExpr, ...]
    n: int

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("characteristic polynomial needs n+1 coefficients")

    def degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return self.n - i
        return -1

    def eval_at(self, omega: RatExpr) -> RatExpr:
        out = RatExpr.ZERO
        for c in self.coeffs:
            out = out * omega + c
        return out

    def derivative_coeffs(self) -> tuple[RatExpr, ...]:
        d = self.n
        out = []
        for i, c in enumerate(self.coeffs[:-1]):
            out.append(c * RatExpr.from_int(d - i))
        return tuple(out)

    def derivative_at(self, omega: RatExpr) -> RatExpr:
        out = RatExpr.ZERO
        for c in self.derivative_coeffs():
            out = out * omega + c
        return out

    def multiplicity_of(self, omega: RatExpr) -> int:
        """Largest m with P(omega) = P'(omega) = ... = P^(m-1)(omega) = 0."""
        coeffs = list(self.coeffs)
        m = 0
        while len(coeffs) > 1 or (coeffs and not coeffs[0].is_zero()):
            val = RatExpr.ZERO
            for c in coeffs:
                val = val * omega + c
            if not val.is_zero():
                break
            m += 1
            deg = len(coeffs) - 1
            coeffs = [c * RatExpr.from_int(deg - i) for i, c in enumerate(coeffs[:-1])]
        return m


@dataclass(frozen=True)
class Root:
    """A root of the characteristic polynomial.

    value is None exactly when at_infinity is set; extensions lists the
    radicals newly adjoined to the constant tower while expressing the root.
    """

    value: RatExpr | None
    multiplicity: int
    at_infinity: bool = False
    extensions: tuple[int, ...] = ()

    def sort_key(self) -> tuple[int, str]:
        if self.at_infinity:
            return (1, "")
        return (0, str(self.value))

    def __str__(self) -> str:
        body = "infinity" if self.at_infinity else str(self.value)
        return f"{body} (multiplicity {self.multiplicity})"


@dataclass(frozen=True)
class RootSearch:
    """All roots found in the supported field plus any unresolved factor."""

    roots: tuple[Root, ...]
    unresolved: tuple[RatExpr, ...] = ()  # descending coefficients, empty if split

    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)


def char_poly(op: LPDO) -> CharPoly:
    """Read the characteristic polynomial off the top-order coefficients."""
    n = op.order
    if n < 1:
        raise ValueError("operator must have order at least 1")
    coeffs = tuple(op.coeff(n - k, k) for k in range(n + 1))
    return CharPoly(coeffs, n)


def find_roots(p: CharPoly) -> RootSearch:
    """Split P into roots over the supported field.

    Strategy: strip the degree drop (root at infinity) and trailing zeros
    (roots at 0), then peel linear factors; quadratics go through the
    quadratic formula, extending the tower when the discriminant is a
    constant whose square root needs a new radical; higher degrees try
    candidate rational-function roots built from the trailing/leading
    coefficients.  Multiplicities are certified by derivative tests on the
    full polynomial.  Whatever does not split is reported unresolved.
    """
    if all(c.is_zero() for c in p.coeffs):
        raise ValueError("zero characteristic polynomial")
    work = list(p.coeffs)
    while work and work[0].is_zero():
        work.pop(0)
    degree_drop = p.n - (len(work) - 1)

    values: list[RatExpr] = []
    unresolved: tuple[RatExpr, ...] = ()
    extensions: dict[int, tuple[int, ...]] = {}

    zero_mult = 0
    while len(work) > 1 and work[-1].is_zero():
        work.pop()
        zero_mult += 1
    if zero_mult:
        values.append(RatExpr.ZERO)

    while len(work) > 1:
        deg = len(work) - 1
        if deg == 1:
            values.append(-(work[1] / work[0]))
            break
        if deg == 2:
            roots, ext = _quadratic_roots(work[0], work[1], work[2])
            if roots is None:
                unresolved = tuple(work)
                break
            for r in roots:
                if r not in values:
                    values.append(r)
                    if ext:
                        extensions[len(values) - 1] = ext
            break
        found = None
        for cand in _root_candidates(work):
            if _eval_list(work, cand).is_zero():
                found = cand
                break
        if found is None:
            unresolved = tuple(work)
            break
        values.append(found)
        work = _deflate(work, found)

    roots = []
    seen: set[RatExpr] = set()
    for i, v in enumerate(values):
        if v in seen:
            continue
        seen.add(v)
        m = p.multiplicity_of(v)
        roots.append(Root(v, m, extensions=extensions.get(i, ())))
    roots.sort(key=Root.sort_key)
    if degree_drop > 0:
        roots.append(Root(None, degree_drop, at_infinity=True))
    return RootSearch(tuple(roots), unresolved)


def _eval_list(coeffs: list[RatExpr], omega: RatExpr) -> RatExpr:
    out = RatExpr.ZERO
    for c in coeffs:
        out = out * omega + c
    return out


def _deflate(coeffs: list[RatExpr], root: RatExpr) -> list[RatExpr]:
    """Synthetic division by (w - root); the remainder must be zero."""
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(out[-1] * root + c)
    return out


def _quadratic_roots(a, b, c):
    disc = b * b - RatExpr.from_int(4) * a * c
    if disc.is_zero():
        half = -(b / (a + a))
        return (half, half), ()
    before = set(tower().radicals)
    r = disc.perfect_square_root()
    if r is None:
        return None, ()
    ext = tuple(d for d in tower().radicals if d not in before)
    twice_a = a + a
    return ((-b + r) / twice_a, (-b - r) / twice_a), ext


def _root_candidates(coeffs: list[RatExpr]):
    """Candidate roots for a polynomial of degree >= 3.

    Covers constant rational roots (divisor pairs of the integer trailing
    and leading terms) and simple rational-function roots built from the
    trailing/leading coefficients themselves.
    """
    lead, trail = coeffs[0], coeffs[-1]
    seen: set[RatExpr] = set()

    def emit(v: RatExpr):
        if v not in seen:
            seen.add(v)
            yield v

    for s in (1, -1):
        yield from emit(RatExpr.from_int(s))
    if all(c.is_rational() for c in coeffs):
        nums = [c.rational_value() for c in coeffs]
        common = 1
        for q in nums:
            common = common * q.denominator // _gcd(common, q.denominator)
        ints = [int(q * common) for q in nums]
        for pdiv in _int_divisors(ints[-1]):
            for qdiv in _int_divisors(ints[0]):
                for s in (1, -1):
                    yield from emit(RatExpr.from_fraction(Fraction(s * pdiv, qdiv)))
    else:
        ratio = trail / lead
        for v in (ratio, -ratio, ratio.inverse() if not ratio.is_zero() else None):
            if v is not None:
                yield from emit(v)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) or 1


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def root_transform(root: Root, matrix) -> Root:
    """Image of a root under the change of variables (u, v) = M (x, y).

    The symbol direction [w : 1] maps by the Moebius action
    w' = (M22 w - M21) / (M11 - M12 w), with infinity handled projectively.
    """
    from .operator import _matrix_entries

    m11, m12, m21, m22 = _matrix_entries(matrix)
    if root.at_infinity:
        if m12.is_zero():
            return root
        value = -(m22 / m12)
        return Root(value, root.multiplicity, extensions=root.extensions)
    w = root.value
    den = m11 - m12 * w
    if den.is_zero():
        return Root(None, root.multiplicity, at_infinity=True,
                    extensions=root.extensions)
    return Root((m22 * w - m21) / den, root.multiplicity,
                extensions=root.extensions)
