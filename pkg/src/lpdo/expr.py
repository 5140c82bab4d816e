"""Exact rational-function arithmetic over a multiquadratic constant tower.

Values live in Q(sqrt(d1), ..., sqrt(dk))(x, y, parameters): rational
functions of the variables x, y and any number of named parameters, with
constants drawn from Q extended by square roots of square-free integers
(including i = sqrt(-1)).  Every value is kept in a unique canonical form,
so equality and zero-testing are plain structural comparisons.

Three layers:

  ConstScalar -- an element of the constant tower, stored as a map from
                 square-free radical index to rational coordinate.
  Poly        -- a sparse multivariate polynomial over ConstScalar with a
                 fixed graded-lexicographic term order.
  RatExpr     -- a reduced fraction of two Polys with a monic denominator.

Parameters commute with x and y and normally differentiate to zero.  A
parameter may instead be registered as *differential*, in which case its
x/y-derivatives are fresh formal symbols (name suffixed with ``_x...y...``);
this is how unknown functions are threaded through the factorization
engine's degenerate path.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key


# --------------------------------------------------------------------------
# integer helpers
# --------------------------------------------------------------------------

def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = c**2 * d with c > 0 and d square-free (d keeps the sign)."""
    if n == 0:
        raise ValueError("cannot decompose 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    c, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            c *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= n  # leftover prime
    return c, sign * d


def _radical_generators(d: int) -> frozenset[int]:
    """Generator set of a square-free index: its primes, plus -1 for the sign."""
    gens = set()
    if d < 0:
        gens.add(-1)
        d = -d
    p = 2
    while p * p <= d:
        if d % p == 0:
            gens.add(p)
            d //= p
        p += 1 if p == 2 else 2
    if d > 1:
        gens.add(d)
    return frozenset(gens)


def _mul_radicals(a: int, b: int) -> tuple[int, int]:
    """sqrt(a)*sqrt(b) = factor * sqrt(key) for square-free a, b.

    Convention: sqrt(d) for d < 0 means i*sqrt(-d) with i the principal
    square root of -1, so sqrt(-1)*sqrt(-1) = -1.
    """
    ga, gb = _radical_generators(a), _radical_generators(b)
    factor = 1
    for g in ga & gb:
        factor *= g
    key = 1
    neg = False
    for g in ga ^ gb:
        if g == -1:
            neg = True
        else:
            key *= g
    return factor, (-key if neg else key)


# --------------------------------------------------------------------------
# the radical tower registry
# --------------------------------------------------------------------------

class RadicalTower:
    """Append-only record of the square roots adjoined to the constant field.

    Arithmetic on ConstScalar works for arbitrary radical indices; the tower
    only tracks which radicals the computation has committed to, so that
    square-root extraction can distinguish "already available" from "needs a
    new extension".  Guarded by a single-writer contract: values themselves
    are immutable and freely shareable.
    """

    def __init__(self) -> None:
        self._radicals: list[int] = []

    @property
    def radicals(self) -> tuple[int, ...]:
        return tuple(self._radicals)

    def adjoin(self, d: int) -> bool:
        """Record sqrt(d); returns True when d is a genuinely new extension."""
        if d in (0, 1):
            return False
        _, d = squarefree_decompose(d)
        if self.contains(d):
            # already spanned by products of existing radicals
            return False
        self._radicals.append(d)
        return True

    def contains(self, d: int) -> bool:
        """True when sqrt(d) lies in the field generated by the tower."""
        if d == 0:
            raise ValueError("no square root of 0 in the tower sense")
        _, d = squarefree_decompose(d)
        if d == 1:
            return True
        # membership of the square class of d in the GF(2)-span of the
        # square classes of the adjoined radicals, by Gaussian elimination
        # with generator sets as sparse vectors
        pivots: dict[int, frozenset[int]] = {}
        for r in self._radicals:
            v = self._reduce(_radical_generators(r), pivots)
            if v:
                pivots[max_gen(v)] = v
        return not self._reduce(_radical_generators(d), pivots)

    @staticmethod
    def _reduce(v: frozenset[int], pivots: dict[int, frozenset[int]]) -> frozenset[int]:
        while v:
            g = max_gen(v)
            row = pivots.get(g)
            if row is None:
                return v
            v = v ^ row
        return v

    def reset(self) -> None:
        """Forget all extensions (test isolation only)."""
        self._radicals.clear()


def max_gen(v: frozenset[int]) -> int:
    return max(v, key=abs)


_TOWER = RadicalTower()


def tower() -> RadicalTower:
    """The process-wide radical tower."""
    return _TOWER


# --------------------------------------------------------------------------
# differential parameters (formal unknown functions)
# --------------------------------------------------------------------------

_DIFFERENTIAL_PARAMS: set[str] = set()


def register_differential_param(name: str) -> None:
    """Declare a parameter whose x/y-derivatives are formal jet symbols."""
    _DIFFERENTIAL_PARAMS.add(name)


def differential_base(symbol: str) -> str | None:
    """Base name when `symbol` is a jet of a differential parameter, else None."""
    if symbol in _DIFFERENTIAL_PARAMS:
        return symbol
    stem, _, tail = symbol.rpartition("_")
    if stem and tail and set(tail) <= {"x", "y"} and stem in _DIFFERENTIAL_PARAMS:
        return stem
    return None


def jet_symbol(base: str, dx: int, dy: int) -> str:
    """Canonical name of d^dx/dx^dx d^dy/dy^dy applied to a differential param."""
    if dx == 0 and dy == 0:
        return base
    return base + "_" + "x" * dx + "y" * dy


def _jet_orders(symbol: str, base: str) -> tuple[int, int]:
    if symbol == base:
        return 0, 0
    tail = symbol[len(base) + 1:]
    return tail.count("x"), tail.count("y")


def _diff_symbol(symbol: str, var: str):
    """Derivative of a single symbol: 1, 0, or a jet symbol name."""
    if symbol == var:
        return 1
    base = differential_base(symbol)
    if base is not None:
        dx, dy = _jet_orders(symbol, base)
        if var == "x":
            return jet_symbol(base, dx + 1, dy)
        return jet_symbol(base, dx, dy + 1)
    return 0


def reset_state() -> None:
    """Reset the tower and the differential-parameter registry (tests)."""
    _TOWER.reset()
    _DIFFERENTIAL_PARAMS.clear()


# --------------------------------------------------------------------------
# ConstScalar
# --------------------------------------------------------------------------

class ConstScalar:
    """An element of Q(sqrt(d1), ..., sqrt(dk)).

    Stored as {square-free index d: Fraction coordinate}; the index 1 holds
    the rational part.  Distinct square-free radicals are linearly
    independent over Q, so the representation (with zero coordinates
    dropped) is unique and zero-testing is `not coords`.
    """

    __slots__ = ("_coords", "_hash")

    def __init__(self, coords: dict[int, Fraction] | None = None):
        self._coords = {d: q for d, q in (coords or {}).items() if q != 0}
        self._hash: int | None = None

    # -- constructors

    @classmethod
    def from_rational(cls, q) -> "ConstScalar":
        q = Fraction(q)
        return cls({1: q}) if q else cls()

    @classmethod
    def radical(cls, d: int) -> "ConstScalar":
        """sqrt(d) for an integer d; adjoins the square-free part to the tower."""
        if d == 0:
            return cls()
        c, d = squarefree_decompose(d)
        if d == 1:
            return cls.from_rational(c)
        _TOWER.adjoin(d)
        return cls({d: Fraction(c)})

    ZERO: "ConstScalar"
    ONE: "ConstScalar"

    # -- predicates and views

    def is_zero(self) -> bool:
        return not self._coords

    def is_rational(self) -> bool:
        return all(d == 1 for d in self._coords)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._coords.get(1, Fraction(0))

    @property
    def coords(self) -> dict[int, Fraction]:
        return dict(self._coords)

    def radicals(self) -> set[int]:
        return {d for d in self._coords if d != 1}

    # -- ring operations

    def __add__(self, other: "ConstScalar") -> "ConstScalar":
        out = dict(self._coords)
        for d, q in other._coords.items():
            s = out.get(d, Fraction(0)) + q
            if s:
                out[d] = s
            else:
                out.pop(d, None)
        return ConstScalar(out)

    def __neg__(self) -> "ConstScalar":
        return ConstScalar({d: -q for d, q in self._coords.items()})

    def __sub__(self, other: "ConstScalar") -> "ConstScalar":
        return self + (-other)

    def __mul__(self, other: "ConstScalar") -> "ConstScalar":
        out: dict[int, Fraction] = {}
        for d1, q1 in self._coords.items():
            for d2, q2 in other._coords.items():
                f, key = _mul_radicals(d1, d2)
                s = out.get(key, Fraction(0)) + q1 * q2 * f
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return ConstScalar(out)

    def scale(self, q) -> "ConstScalar":
        q = Fraction(q)
        return ConstScalar({d: c * q for d, c in self._coords.items()})

    def inverse(self) -> "ConstScalar":
        """Field inverse by conjugation over one generator at a time."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero constant")
        if self.is_rational():
            return ConstScalar.from_rational(1 / self.rational_value())
        g = self._split_generator()
        u, v = self._split_by(g)
        # self = u + sqrt(g)*v with u, v free of the generator g
        norm = u * u - v * v.scale(g)
        conj = ConstScalar({**u._coords}) - _radical_term(g) * v
        return conj * norm.inverse()

    def __truediv__(self, other: "ConstScalar") -> "ConstScalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "ConstScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ConstScalar.ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _split_generator(self) -> int:
        gens: set[int] = set()
        for d in self._coords:
            if d != 1:
                gens |= _radical_generators(d)
        return max_gen(frozenset(gens))

    def _split_by(self, g: int) -> tuple["ConstScalar", "ConstScalar"]:
        """self = u + sqrt(g) * v, with u and v not involving generator g."""
        u: dict[int, Fraction] = {}
        v: dict[int, Fraction] = {}
        for d, q in self._coords.items():
            if g in _radical_generators(d):
                v[d // g] = q
            else:
                u[d] = q
        return ConstScalar(u), ConstScalar(v)

    # -- square roots

    def sqrt(self, allow_extend: bool) -> "ConstScalar | None":
        """A square root in the tower, or None.

        With allow_extend the rational case may adjoin one new radical
        (sqrt(q) = c*sqrt(d) for q = c^2 d); otherwise the result must lie
        in the current tower.  Non-rational inputs are denested recursively
        and never extend the tower.
        """
        if self.is_zero():
            return ConstScalar.ZERO
        if self.is_rational():
            q = self.rational_value()
            cn, dn = squarefree_decompose(q.numerator)
            cd, dd = squarefree_decompose(q.denominator)
            f, key = _mul_radicals(dn, dd)
            c = Fraction(cn * f, cd * dd)
            if key == 1:
                return ConstScalar.from_rational(c)
            if allow_extend:
                _TOWER.adjoin(key)
                return ConstScalar({key: c})
            if _TOWER.contains(key):
                return ConstScalar({key: c})
            return None
        g = self._split_generator()
        u, v = self._split_by(g)
        w = (u * u - v * v.scale(g)).sqrt(False)
        if w is None:
            return None
        half = ConstScalar.from_rational(Fraction(1, 2))
        for wc in (w, -w):
            s2 = (u + wc) * half
            s = s2.sqrt(False)
            if s is None or s.is_zero():
                continue
            t = v * (s + s).inverse()
            r = s + _radical_term(g) * t
            if r * r == self:
                return r
        return None

    # -- comparison / hashing / display

    def __eq__(self, other) -> bool:
        return isinstance(other, ConstScalar) and self._coords == other._coords

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._coords.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._coords:
            return "0"
        parts = []
        for d in sorted(self._coords, key=abs):
            q = self._coords[d]
            parts.append(_scalar_term_str(q, d, leading=not parts))
        return "".join(parts)

    __repr__ = __str__


def _radical_term(d: int) -> ConstScalar:
    return ConstScalar({d: Fraction(1)})


def _scalar_term_str(q: Fraction, d: int, leading: bool) -> str:
    sign = "-" if q < 0 else ("" if leading else "+")
    if not leading:
        sign = f" {sign or '+'} "
    body = _radical_str(abs(q), d)
    return sign + body


def _radical_str(q: Fraction, d: int) -> str:
    if d == 1:
        return str(q)
    rad = "i" if d == -1 else f"sqrt({d})"
    if q == 1:
        return rad
    return f"{q}*{rad}"


ConstScalar.ZERO = ConstScalar()
ConstScalar.ONE = ConstScalar.from_rational(1)


# --------------------------------------------------------------------------
# monomials
# --------------------------------------------------------------------------
#
# A monomial is a tuple of (symbol, exponent) pairs, sorted by symbol rank,
# exponents > 0.  Rank: x first, y second, all other symbols alphabetically.

Monomial = tuple[tuple[str, int], ...]

MONO_ONE: Monomial = ()


def _srank(name: str) -> tuple[int, str]:
    if name == "x":
        return (0, "")
    if name == "y":
        return (1, "")
    return (2, name)


def mono_make(pairs) -> Monomial:
    items = [(s, e) for s, e in pairs if e]
    items.sort(key=lambda it: _srank(it[0]))
    return tuple(items)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for s, e in b:
        out[s] = out.get(s, 0) + e
    return mono_make(out.items())


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when b does not divide a."""
    out = dict(a)
    for s, e in b:
        r = out.get(s, 0) - e
        if r < 0:
            return None
        if r:
            out[s] = r
        else:
            out.pop(s, None)
    return mono_make(out.items())


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_gt(a: Monomial, b: Monomial) -> bool:
    """Graded lexicographic order: higher total degree wins, then the
    earlier-ranked symbol with the larger exponent."""
    da, db = mono_degree(a), mono_degree(b)
    if da != db:
        return da > db
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        ra, rb = _srank(sa), _srank(sb)
        if ra < rb:
            return True
        if rb < ra:
            return False
        if ea != eb:
            return ea > eb
        i += 1
        j += 1
    return i < len(a)


def _mono_cmp(a: Monomial, b: Monomial) -> int:
    if a == b:
        return 0
    return -1 if mono_gt(a, b) else 1


MONO_DESC_KEY = cmp_to_key(_mono_cmp)


# --------------------------------------------------------------------------
# Poly
# --------------------------------------------------------------------------

class Poly:
    """Sparse multivariate polynomial over ConstScalar; no zero terms stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, ConstScalar] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    # -- constructors

    @classmethod
    def const(cls, c: ConstScalar) -> "Poly":
        return cls({MONO_ONE: c})

    @classmethod
    def rational(cls, q) -> "Poly":
        return cls.const(ConstScalar.from_rational(q))

    @classmethod
    def symbol(cls, name: str, exp: int = 1) -> "Poly":
        return cls({mono_make([(name, exp)]): ConstScalar.ONE})

    ZERO: "Poly"
    ONE: "Poly"

    # -- views

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and MONO_ONE in self.terms)

    def const_value(self) -> ConstScalar:
        if not self.terms:
            return ConstScalar.ZERO
        if self.is_const():
            return self.terms[MONO_ONE]
        raise ValueError(f"{self} is not constant")

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            out.update(s for s, _ in m)
        return out

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def leading_term(self) -> tuple[Monomial, ConstScalar]:
        if not self.terms:
            raise ValueError("leading term of zero polynomial")
        best = None
        for m in self.terms:
            if best is None or mono_gt(m, best):
                best = m
        return best, self.terms[best]

    def sorted_terms(self) -> list[tuple[Monomial, ConstScalar]]:
        return [(m, self.terms[m]) for m in sorted(self.terms, key=MONO_DESC_KEY)]

    def radicals(self) -> set[int]:
        out: set[int] = set()
        for c in self.terms.values():
            out |= c.radicals()
        return out

    # -- ring operations

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly.ZERO
        out: dict[Monomial, ConstScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    def scale(self, c: ConstScalar) -> "Poly":
        if c.is_zero():
            return Poly.ZERO
        p = Poly.__new__(Poly)
        p.terms = {m: q * c for m, q in self.terms.items()}
        return p

    def scale_rational(self, q) -> "Poly":
        q = Fraction(q)
        if not q:
            return Poly.ZERO
        p = Poly.__new__(Poly)
        p.terms = {m: c.scale(q) for m, c in self.terms.items()}
        return p

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus

    def diff(self, var: str) -> "Poly":
        out = Poly.ZERO
        for m, c in self.terms.items():
            for s, e in m:
                ds = _diff_symbol(s, var)
                if ds == 0:
                    continue
                rest = dict(m)
                if e == 1:
                    rest.pop(s)
                else:
                    rest[s] = e - 1
                term = Poly({mono_make(rest.items()): c.scale(e)})
                if ds != 1:
                    term = term * Poly.symbol(ds)
                out = out + term
        return out

    # -- division and gcd

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ValueError when the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_const():
            return self.scale(other.const_value().inverse())
        rem = self
        dm, dc = other.leading_term()
        dci = dc.inverse()
        out: dict[Monomial, ConstScalar] = {}
        while not rem.is_zero():
            rm, rc = rem.leading_term()
            q = mono_div(rm, dm)
            if q is None:
                raise ValueError("inexact polynomial division")
            qc = rc * dci
            out[q] = qc
            rem = rem - other * Poly({q: qc})
        return Poly(out)

    def monic(self) -> "Poly":
        """Scale so the graded-lex leading coefficient is 1."""
        if self.is_zero():
            return self
        _, c = self.leading_term()
        return self.scale(c.inverse())

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        return poly_str(self)

    __repr__ = __str__


Poly.ZERO = Poly()
Poly.ONE = Poly.rational(1)


# -- univariate views (used by the gcd machinery) ---------------------------

def _univar(p: Poly, v: str) -> list[Poly]:
    """Coefficients of p as a polynomial in v, ascending, as Polys without v."""
    deg = 0
    for m in p.terms:
        deg = max(deg, dict(m).get(v, 0))
    coeffs: list[dict[Monomial, ConstScalar]] = [dict() for _ in range(deg + 1)]
    for m, c in p.terms.items():
        d = dict(m)
        e = d.pop(v, 0)
        coeffs[e][mono_make(d.items())] = c
    return [Poly(t) for t in coeffs]


def _from_univar(coeffs: list[Poly], v: str) -> Poly:
    out = Poly.ZERO
    for e, c in enumerate(coeffs):
        if c.is_zero():
            continue
        out = out + (c * Poly.symbol(v, e) if e else c)
    return out


def _trim(coeffs: list[Poly]) -> list[Poly]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(f: list[Poly], g: list[Poly]) -> list[Poly]:
    """prem(f, g) = lc(g)^(deg f - deg g + 1) * f  mod g, computed stably."""
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        return list(f)
    lg = g[-1]
    r = list(f)
    e = df - dg + 1
    while r and len(r) - 1 >= dg:
        lead = r[-1]
        shift = len(r) - 1 - dg
        r = [c * lg for c in r[:-1]]
        for i in range(dg):
            r[shift + i] = r[shift + i] - lead * g[i]
        r = _trim(r)
        e -= 1
    if e > 0:
        m = lg ** e
        r = [c * m for c in r]
    return r


_EVAL_POINTS = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _poly_eval_const(p: Poly, point: dict[str, Fraction]) -> ConstScalar:
    out = ConstScalar.ZERO
    for m, c in p.terms.items():
        q = Fraction(1)
        for s, e in m:
            q *= point[s] ** e
        out = out + c.scale(q)
    return out


def _univar_gcd_degree(f: list[ConstScalar], g: list[ConstScalar]) -> int:
    """Degree of the gcd of two univariate polynomials over the tower
    (ascending coefficient lists, nonzero leads)."""
    a, b = list(f), list(g)
    while b:
        if len(b) == 1:
            return 0
        # monic remainder step
        binv = b[-1].inverse()
        bm = [c * binv for c in b]
        r = list(a)
        while len(r) >= len(bm):
            lead = r[-1]
            shift = len(r) - len(bm)
            if not lead.is_zero():
                for i in range(len(bm) - 1):
                    r[shift + i] = r[shift + i] - lead * bm[i]
            r.pop()
            while r and r[-1].is_zero():
                r.pop()
        a, b = bm, r
    return len(a) - 1


def _pp_gcd_trivial(fa: list[Poly], fb: list[Poly], v: str) -> bool:
    """Sound fast test: evaluate all symbols but v at a point keeping both
    leading coefficients nonzero; coprime univariate images mean the
    primitive parts are coprime.  False means 'unknown', not 'nontrivial'."""
    syms = set()
    for c in fa:
        syms |= c.symbols()
    for c in fb:
        syms |= c.symbols()
    names = sorted(syms, key=_srank)
    for attempt in range(3):
        point = {
            s: Fraction(_EVAL_POINTS[(i + 5 * attempt) % len(_EVAL_POINTS)])
            for i, s in enumerate(names)
        }
        la = _poly_eval_const(fa[-1], point)
        lb = _poly_eval_const(fb[-1], point)
        if la.is_zero() or lb.is_zero():
            continue
        ia = [_poly_eval_const(c, point) for c in fa]
        ib = [_poly_eval_const(c, point) for c in fb]
        return _univar_gcd_degree(ia, ib) == 0
    return False


def _content_pp(p: Poly, v: str) -> tuple[Poly, list[Poly]]:
    """Content (gcd of v-coefficients) and primitive part of p in v."""
    coeffs = _univar(p, v)
    cont = Poly.ZERO
    for c in coeffs:
        if not c.is_zero():
            cont = poly_gcd(cont, c)
            if cont.is_const() and not cont.is_zero():
                cont = Poly.ONE
                break
    if cont.is_zero():
        return Poly.ZERO, []
    pp = [c.exact_div(cont) if not c.is_zero() else c for c in coeffs]
    return cont, _trim(pp)


def _mono_content(p: Poly) -> Monomial:
    """Largest monomial dividing every term."""
    it = iter(p.terms)
    common = dict(next(it))
    for m in it:
        if not common:
            break
        exps = dict(m)
        for s in list(common):
            e = exps.get(s, 0)
            if e < common[s]:
                if e:
                    common[s] = e
                else:
                    del common[s]
    return mono_make(common.items())


def _div_mono(p: Poly, m: Monomial) -> Poly:
    if not m:
        return p
    out = Poly.__new__(Poly)
    out.terms = {mono_div(t, m): c for t, c in p.terms.items()}
    return out


def _mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    out = {}
    for s, e in a:
        r = min(e, db.get(s, 0))
        if r:
            out[s] = r
    return mono_make(out.items())


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via content/primitive-part recursion with a subresultant
    remainder sequence in one variable at a time."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return Poly.ONE
    if a.terms == b.terms:
        return a.monic()
    # strip the common monomial part first; it is the whole answer when
    # either argument is a single term
    ma, mb = _mono_content(a), _mono_content(b)
    mg = _mono_gcd(ma, mb)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return Poly({mg: ConstScalar.ONE})
    if ma:
        a = _div_mono(a, ma)
    if mb:
        b = _div_mono(b, mb)
    common = Poly({mg: ConstScalar.ONE}) if mg else None
    # quick mutual-divisibility test catches powers of a shared factor
    small, large = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    try:
        large.exact_div(small)
    except ValueError:
        pass
    else:
        g = small.monic()
        return g * common if common is not None else g
    syms = sorted(a.symbols() | b.symbols(), key=_srank)
    v = syms[0]
    ca, fa = _content_pp(a, v)
    cb, fb = _content_pp(b, v)
    cont = poly_gcd(ca, cb)
    if common is not None:
        cont = cont * common
    if len(fa) - 1 == 0 or len(fb) - 1 == 0:
        return cont.monic()
    if len(fa) < len(fb):
        fa, fb = fb, fa
    if _pp_gcd_trivial(fa, fb, v):
        return cont.monic()
    # subresultant PRS
    g = Poly.ONE
    h = Poly.ONE
    F, G = fa, fb
    while True:
        delta = (len(F) - 1) - (len(G) - 1)
        R = _prem(F, G)
        if not R:
            break
        if len(R) - 1 == 0:
            G = [Poly.ONE]
            break
        divisor = g * (h ** delta)
        F, G = G, [c.exact_div(divisor) for c in R]
        g = F[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
    if len(G) - 1 == 0:
        return cont.monic()
    gp = _from_univar(G, v)
    _, gpp = _content_pp(gp, v)
    return (cont * _from_univar(gpp, v)).monic()


# -- polynomial square root -------------------------------------------------

def poly_sqrt(p: Poly, allow_extend_const: bool) -> Poly | None:
    """Exact square root of a polynomial, or None when p is not a square.

    Constant polynomials may extend the tower when allow_extend_const is
    set; otherwise all constants must already have square roots available.
    """
    if p.is_zero():
        return Poly.ZERO
    if p.is_const():
        c = p.const_value().sqrt(allow_extend_const)
        return None if c is None else Poly.const(c)
    lm, lc = p.leading_term()
    if any(e % 2 for _, e in lm):
        return None
    half = mono_make([(s, e // 2) for s, e in lm])
    c = lc.sqrt(False)
    if c is None:
        return None
    root = Poly({half: c})
    twice_inv = (c + c).inverse()
    rem = p - root * root
    last = lm
    while not rem.is_zero():
        rm, rc = rem.leading_term()
        if not mono_gt(last, rm):
            return None
        last = rm
        q = mono_div(rm, half)
        if q is None:
            return None
        root = root + Poly({q: rc * twice_inv})
        rem = p - root * root
    return root


# --------------------------------------------------------------------------
# RatExpr
# --------------------------------------------------------------------------

class RatExpr:
    """A rational function in canonical form.

    The fraction num/den is reduced (gcd is a unit) and den is monic under
    the graded-lex term order, so equal values always have identical
    representations and equality is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den
        self._hash: int | None = None

    @classmethod
    def _reduce(cls, num: Poly, den: Poly) -> "RatExpr":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(Poly.ZERO, Poly.ONE)
        if den.is_const():
            return cls(num.scale(den.const_value().inverse()), Poly.ONE)
        g = poly_gcd(num, den)
        if not g.is_const():
            num = num.exact_div(g)
            den = den.exact_div(g)
        _, lc = den.leading_term()
        if not (lc == ConstScalar.ONE):
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    # -- constructors

    @classmethod
    def from_poly(cls, p: Poly) -> "RatExpr":
        return cls(p, Poly.ONE)

    @classmethod
    def from_int(cls, n: int) -> "RatExpr":
        return cls.from_poly(Poly.rational(n))

    @classmethod
    def from_fraction(cls, q) -> "RatExpr":
        return cls.from_poly(Poly.rational(Fraction(q)))

    @classmethod
    def from_const(cls, c: ConstScalar) -> "RatExpr":
        return cls.from_poly(Poly.const(c))

    @classmethod
    def symbol(cls, name: str) -> "RatExpr":
        return cls.from_poly(Poly.symbol(name))

    @classmethod
    def sqrt_int(cls, d: int) -> "RatExpr":
        return cls.from_const(ConstScalar.radical(d))

    ZERO: "RatExpr"
    ONE: "RatExpr"
    X: "RatExpr"
    Y: "RatExpr"

    # -- views

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self == RatExpr.ONE

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> ConstScalar:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num.const_value()

    def is_rational(self) -> bool:
        return self.is_const() and self.num.const_value().is_rational()

    def rational_value(self) -> Fraction:
        return self.const_value().rational_value()

    def symbols(self) -> set[str]:
        return self.num.symbols() | self.den.symbols()

    def radicals(self) -> set[int]:
        return self.num.radicals() | self.den.radicals()

    # -- field operations

    def __add__(self, other: "RatExpr") -> "RatExpr":
        d1, d2 = self.den, other.den
        if d1.is_const():
            if d2.is_const():
                return RatExpr(self.num + other.num, Poly.ONE)
            return RatExpr._fast(self.num * d2 + other.num, d2)
        if d2.is_const():
            return RatExpr._fast(self.num + other.num * d1, d1)
        if d1 == d2:
            num = self.num + other.num
            if num.is_zero():
                return RatExpr.ZERO
            g = poly_gcd(num, d1)
            if g.is_const():
                return RatExpr(num, d1)
            return RatExpr._fast(num.exact_div(g), d1.exact_div(g))
        # reduced fractions: only gcd(den, den) can survive into the sum
        g = poly_gcd(d1, d2)
        if g.is_const():
            return RatExpr._fast(self.num * d2 + other.num * d1, d1 * d2)
        d2r = d2.exact_div(g)
        t = self.num * d2r + other.num * d1.exact_div(g)
        if t.is_zero():
            return RatExpr.ZERO
        g2 = poly_gcd(t, g)
        if g2.is_const():
            return RatExpr._fast(t, d1 * d2r)
        return RatExpr._fast(t.exact_div(g2), d1.exact_div(g2) * d2r)

    def __neg__(self) -> "RatExpr":
        return RatExpr(-self.num, self.den)

    def __sub__(self, other: "RatExpr") -> "RatExpr":
        return self + (-other)

    def __mul__(self, other: "RatExpr") -> "RatExpr":
        if self.num.is_zero() or other.num.is_zero():
            return RatExpr.ZERO
        d1, d2 = self.den, other.den
        if d1.is_const() and d2.is_const():
            return RatExpr(self.num * other.num, Poly.ONE)
        # cross-reduce: each fraction is already reduced
        n1, n2 = self.num, other.num
        g1 = poly_gcd(n1, d2)
        if not g1.is_const():
            n1 = n1.exact_div(g1)
            d2 = d2.exact_div(g1)
        g2 = poly_gcd(n2, d1)
        if not g2.is_const():
            n2 = n2.exact_div(g2)
            d1 = d1.exact_div(g2)
        return RatExpr._fast(n1 * n2, d1 * d2)

    def __truediv__(self, other: "RatExpr") -> "RatExpr":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return self * other.inverse()

    def inverse(self) -> "RatExpr":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatExpr._fast(self.den, self.num)

    @classmethod
    def _fast(cls, num: Poly, den: Poly) -> "RatExpr":
        """Assemble a fraction already known to be reduced, normalizing the
        denominator to be monic (or constant 1)."""
        if num.is_zero():
            return cls.ZERO
        if den.is_const():
            return cls(num.scale(den.const_value().inverse()), Poly.ONE)
        _, lc = den.leading_term()
        if not (lc == ConstScalar.ONE):
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    def __pow__(self, n: int) -> "RatExpr":
        if n < 0:
            return self.inverse() ** (-n)
        out = RatExpr.ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus

    def diff(self, var: str) -> "RatExpr":
        """Partial derivative by the quotient rule (parameters are constant
        unless registered as differential)."""
        dn = self.num.diff(var)
        if self.den is Poly.ONE or self.den.is_const():
            return RatExpr(dn, Poly.ONE) if self.den is Poly.ONE \
                else RatExpr._reduce(dn, self.den)
        dd = self.den.diff(var)
        if dd.is_zero():
            return RatExpr._reduce(dn, self.den)
        # for den = g*e with g = gcd(den, den'), the derivative reduces to
        # (num' e - num den'/g) / (den e), avoiding the blind den^2 gcd
        g = poly_gcd(self.den, dd)
        if g.is_const():
            return RatExpr._reduce(dn * self.den - self.num * dd,
                                   self.den * self.den)
        e = self.den.exact_div(g)
        h = dd.exact_div(g)
        return RatExpr._reduce(dn * e - self.num * h, self.den * e)

    def substitute(self, assignments: dict[str, "RatExpr"]) -> "RatExpr":
        """Simultaneous substitution of expressions for symbols."""
        num = _poly_substitute(self.num, assignments)
        den = _poly_substitute(self.den, assignments)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes under substitution")
        return num / den

    def perfect_square_root(self) -> "RatExpr | None":
        """r with r*r == self when num and den are perfect squares.

        A constant argument may adjoin one new radical to the tower; for
        non-constant arguments the square root must exist over the current
        tower.  Returns None when no such root is found (not an error).
        """
        if self.is_zero():
            return RatExpr.ZERO
        allow = self.is_const()
        rn = poly_sqrt(self.num, allow)
        if rn is None:
            return None
        rd = poly_sqrt(self.den, allow)
        if rd is None:
            return None
        r = RatExpr._reduce(rn, rd)
        return r if r * r == self else None

    # -- structure helpers

    def as_poly_in(self, names: set[str]) -> dict[Monomial, "RatExpr"]:
        """View as a polynomial in the given symbols with RatExpr coefficients.

        Raises ValueError when any of the symbols occurs in the denominator.
        """
        if self.den.symbols() & names:
            raise ValueError("denominator involves the grouping symbols")
        groups: dict[Monomial, Poly] = {}
        for m, c in self.num.terms.items():
            inside = [(s, e) for s, e in m if s in names]
            outside = [(s, e) for s, e in m if s not in names]
            key = mono_make(inside)
            g = groups.setdefault(key, Poly.ZERO)
            groups[key] = g + Poly({mono_make(outside): c})
        return {
            m: RatExpr._reduce(p, self.den) for m, p in groups.items() if not p.is_zero()
        }

    # -- comparison / hashing / display

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatExpr)
            and self.num.terms == other.num.terms
            and self.den.terms == other.den.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.terms.items()),
                               frozenset(self.den.terms.items())))
        return self._hash

    def __str__(self) -> str:
        return ratexpr_str(self)

    __repr__ = __str__


def _poly_substitute(p: Poly, assignments: dict[str, RatExpr]) -> RatExpr:
    out = RatExpr.ZERO
    for m, c in p.terms.items():
        term = RatExpr.from_const(c)
        for s, e in m:
            rep = assignments.get(s)
            base = rep if rep is not None else RatExpr.symbol(s)
            term = term * base ** e
        out = out + term
    return out


def jet_assignments(base: str, candidate: RatExpr, symbols: set[str]) -> dict[str, RatExpr]:
    """Assignments replacing every jet of `base` occurring in `symbols` by the
    corresponding true derivative of `candidate`."""
    out: dict[str, RatExpr] = {}
    for s in symbols:
        if differential_base(s) == base:
            dx, dy = _jet_orders(s, base)
            val = candidate
            for _ in range(dx):
                val = val.diff("x")
            for _ in range(dy):
                val = val.diff("y")
            out[s] = val
    return out


RatExpr.ZERO = RatExpr(Poly.ZERO, Poly.ONE)
RatExpr.ONE = RatExpr(Poly.ONE, Poly.ONE)
RatExpr.X = RatExpr.symbol("x")
RatExpr.Y = RatExpr.symbol("y")


# --------------------------------------------------------------------------
# canonical plain-text forms (also used to order roots deterministically)
# --------------------------------------------------------------------------

def _coeff_str(c: ConstScalar) -> tuple[str, bool]:
    """Render a scalar; second value says whether it needs parentheses as a
    multiplicative prefix."""
    s = str(c)
    return s, (" + " in s or " - " in s)

def _mono_str(m: Monomial) -> str:
    parts = []
    for s, e in m:
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def poly_str(p: Poly) -> str:
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for m, c in p.sorted_terms():
        txt, grouped = _coeff_str(c)
        neg = txt.startswith("-") and not grouped
        if neg:
            txt = txt[1:]
        body = _mono_str(m)
        coeff = f"({txt})" if grouped else txt
        if body:
            piece = body if coeff == "1" else f"{coeff}*{body}"
        else:
            piece = coeff
        if not chunks:
            chunks.append(f"-{piece}" if neg else piece)
        else:
            chunks.append(f" - {piece}" if neg else f" + {piece}")
    return "".join(chunks)


def ratexpr_str(r: RatExpr) -> str:
    num = poly_str(r.num)
    if r.den is Poly.ONE or r.den == Poly.ONE:
        return num
    den = poly_str(r.den)
    if len(r.num.terms) > 1:
        num = f"({num})"
    if len(r.den.terms) > 1:
        den = f"({den})"
    return f"{num}/{den}"
