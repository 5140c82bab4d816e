"""Order-reduction factorization of an operator into first-order * cofactor.

Writing an order-n operator as (Dx - w*Dy + p3) o B for a root w of the
characteristic polynomial, the coefficient equations split into levels.
The top level determines B's order-(n-1) coefficients by forward
substitution; the next level determines p3 (dividing by P'(w), whence the
simple-root hypothesis) together with B's next coefficients; every level
below contributes one more batch of coefficients plus exactly one surplus
equation, whose residual is a necessary condition of factorization.  An
order-n operator therefore carries n-1 condition residuals, and the
factorization exists iff they all vanish.

When the chosen root is multiple (P'(w) = 0 identically) the division is
impossible: one necessary precondition must vanish, p3 becomes a free
unknown function, and the leftover residuals are differential-polynomial
constraints on p3 -- generalized Riccati equations.  This module emits that
problem and can verify or complete a supplied candidate, but does not
solve differential equations beyond a small candidate search (zero,
constants, linear forms) used by the recursive factorizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .expr import (
    RatExpr,
    jet_assignments,
    mono_degree,
    mono_gt,
    register_differential_param,
    tower,
)
from .operator import (
    LPDO,
    FirstOrderFactor,
    SWAP_XY,
    matrix_inverse,
    shear_matrix,
)
from .charpoly import CharPoly, Root, char_poly, find_roots, root_transform


class OutcomeStatus(Enum):
    FACTORED = "factored"
    CONDITIONS_FAIL = "conditions_fail"
    DEGENERATE = "degenerate"
    UNSUPPORTED_ROOT = "unsupported_root"


@dataclass(frozen=True)
class RiccatiProblem:
    """The degenerate-path reduction: constraints the free p3 must satisfy.

    Each constraint is a differential polynomial in the unknown and its
    formal derivatives (jet symbols of `unknown`), normalized so the
    leading jet monomial has coefficient 1; a candidate solves the problem
    exactly when every constraint vanishes under substitution.
    """

    unknown: str
    constraints: tuple[RatExpr, ...]
    necessary_precondition: RatExpr

    def check(self, candidate: RatExpr) -> tuple[RatExpr, ...]:
        """Residuals of the constraints at a concrete candidate."""
        out = []
        for c in self.constraints:
            subs = jet_assignments(self.unknown, candidate, c.symbols())
            out.append(c.substitute(subs))
        return tuple(out)


@dataclass(frozen=True)
class FactorizationOutcome:
    status: OutcomeStatus
    side: str = "left"
    root: Root | None = None
    factor: FirstOrderFactor | None = None
    cofactor: LPDO | None = None
    residuals: tuple[RatExpr, ...] = ()
    riccati: RiccatiProblem | None = None
    normalization: tuple | None = None  # change of variables applied, if any
    extensions: tuple[int, ...] = ()
    unresolved: tuple[RatExpr, ...] = ()

    def nonzero_residuals(self) -> tuple[RatExpr, ...]:
        return tuple(r for r in self.residuals if not r.is_zero())


class DegenerateRoot(Exception):
    """Raised when p3 cannot be isolated because P'(w) vanishes."""


# --------------------------------------------------------------------------
# the level solves
# --------------------------------------------------------------------------

def _derivation(omega: RatExpr):
    """The directional derivation along the factor: f -> f_x - w * f_y."""

    def L(f: RatExpr) -> RatExpr:
        return f.diff("x") - omega * f.diff("y")

    return L


def solve_top(op: LPDO, omega: RatExpr) -> dict[tuple[int, int], RatExpr]:
    """Top-level forward substitution: the order-(n-1) cofactor coefficients
    p_{n-1-k,k} = a_{n,0} w^k + a_{n-1,1} w^(k-1) + ... + a_{n-k,k}."""
    n = op.order
    if op.coeff(n, 0).is_zero():
        raise ValueError("leading pure-Dx coefficient must be nonzero")
    if not char_poly(op).eval_at(omega).is_zero():
        raise ValueError("omega is not a root of the characteristic polynomial")
    out: dict[tuple[int, int], RatExpr] = {}
    acc = RatExpr.ZERO
    for k in range(n):
        acc = acc * omega + op.coeff(n - k, k)
        if not acc.is_zero():
            out[(n - 1 - k, k)] = acc
    return out


def solve_p3(op: LPDO, omega: RatExpr,
             top: dict[tuple[int, int], RatExpr]) -> RatExpr:
    """p3 = (b_{n-1,0} w^(n-1) + ... + b_{0,n-1}) / P'(w) for a simple root,
    where b_{n-1-k,k} = a_{n-1-k,k} - L(p_{n-1-k,k})."""
    n = op.order
    dP = char_poly(op).derivative_at(omega)
    if dP.is_zero():
        raise DegenerateRoot(
            "multiple root: p3 is not determined, switch to the Riccati path")
    L = _derivation(omega)
    acc = RatExpr.ZERO
    for k in range(n):
        b = op.coeff(n - 1 - k, k) - L(top.get((n - 1 - k, k), RatExpr.ZERO))
        acc = acc * omega + b
    return acc / dP


@dataclass
class LevelState:
    """Mutable scratch for the descending elimination."""

    omega: RatExpr
    p3: RatExpr | None = None
    solved: dict[tuple[int, int], RatExpr] = field(default_factory=dict)


def solve_level(state: LevelState, op: LPDO, m: int) -> RatExpr:
    """Process the m-th level equations a_{m-k,k} = L(p) + p3*p + (shift terms).

    Solves the level-(m-1) cofactor coefficients triangularly and returns
    the residual (left side minus right side) of the surplus equation; the
    residual of the lowest level (m = 0) is the whole equation.
    """
    L = _derivation(state.omega)
    cs = []
    for k in range(m + 1):
        p = state.solved.get((m - k, k), RatExpr.ZERO)
        cs.append(op.coeff(m - k, k) - L(p) - state.p3 * p)
    u_prev = RatExpr.ZERO
    for k in range(m):
        u = cs[k] + state.omega * u_prev
        if not u.is_zero():
            state.solved[(m - 1 - k, k)] = u
        u_prev = u
    return cs[m] + state.omega * u_prev


def _run_descent(op: LPDO, omega: RatExpr, p3: RatExpr,
                 top: dict[tuple[int, int], RatExpr]) -> tuple[dict, list[RatExpr]]:
    """Run all equation levels from n-1 down to 0.

    Returns the full cofactor coefficient map and the list of residuals
    [level n-1, level n-2, ..., level 0].  The level-(n-1) entry vanishes
    identically when p3 came from the simple-root division; in the
    degenerate path it equals the necessary precondition.
    """
    n = op.order
    state = LevelState(omega=omega, p3=p3, solved=dict(top))
    residuals = [solve_level(state, op, m) for m in range(n - 1, -1, -1)]
    cofactor = {jk: v for jk, v in state.solved.items()}
    return cofactor, residuals


# --------------------------------------------------------------------------
# single-root attempts on a normalized operator
# --------------------------------------------------------------------------

def _attempt_simple(op: LPDO, omega: RatExpr) -> tuple[FirstOrderFactor, LPDO, list[RatExpr]]:
    top = solve_top(op, omega)
    p3 = solve_p3(op, omega, top)
    cof, residuals = _run_descent(op, omega, p3, top)
    assert residuals[0].is_zero(), "p3 level must close exactly for a simple root"
    return FirstOrderFactor.from_root(omega, p3), LPDO(cof), residuals[1:]


def _fresh_unknown(op: LPDO) -> str:
    used = set()
    for c in op.coeffs.values():
        used |= c.symbols()
    for name in itertools.chain(("psi",), (f"psi{i}" for i in itertools.count(1))):
        if name not in used and not any(s.startswith(name + "_") for s in used):
            return name


def degenerate_constraints(op: LPDO, omega: RatExpr) -> RiccatiProblem:
    """Eliminate every cofactor coefficient in favor of a free p3.

    Requires P'(omega) = 0 identically and the necessary precondition
    (the w-weighted sum of the b's) to vanish; the surviving level
    residuals, normalized monic in their leading jet monomial, are the
    generalized Riccati constraints on p3.
    """
    P = char_poly(op)
    if not P.derivative_at(omega).is_zero():
        raise ValueError("root is simple: the algebraic path applies")
    name = _fresh_unknown(op)
    register_differential_param(name)
    psi = RatExpr.symbol(name)
    top = solve_top(op, omega)
    _, residuals = _run_descent(op, omega, psi, top)
    precondition = residuals[0]
    constraints = tuple(
        _normalize_constraint(r, name) for r in residuals[1:] if not r.is_zero()
    )
    return RiccatiProblem(name, constraints, precondition)


def _normalize_constraint(residual: RatExpr, unknown: str) -> RatExpr:
    jets = {s for s in residual.symbols()
            if s == unknown or s.startswith(unknown + "_")}
    if not jets:
        return residual
    groups = residual.as_poly_in(jets)
    lead = None
    for m in groups:
        if mono_degree(m) and (lead is None or mono_gt(m, lead)):
            lead = m
    if lead is None:
        return residual
    return residual / groups[lead]


def _attempt(op: LPDO, omega: RatExpr, p3_candidate: RatExpr | None):
    """One factorization attempt on a normalized operator at a finite root.

    Returns (status, factor, cofactor, residuals, riccati).
    """
    if p3_candidate is not None:
        top = solve_top(op, omega)
        cof, residuals = _run_descent(op, omega, p3_candidate, top)
        if all(r.is_zero() for r in residuals):
            return (OutcomeStatus.FACTORED,
                    FirstOrderFactor.from_root(omega, p3_candidate),
                    LPDO(cof), tuple(residuals), None)
        return (OutcomeStatus.CONDITIONS_FAIL, None, None, tuple(residuals), None)
    try:
        factor, cof, residuals = _attempt_simple(op, omega)
    except DegenerateRoot:
        problem = degenerate_constraints(op, omega)
        if not problem.necessary_precondition.is_zero():
            return (OutcomeStatus.CONDITIONS_FAIL, None, None,
                    (problem.necessary_precondition,), None)
        return (OutcomeStatus.DEGENERATE, None, None, (), problem)
    if all(r.is_zero() for r in residuals):
        return (OutcomeStatus.FACTORED, factor, cof, tuple(residuals), None)
    return (OutcomeStatus.CONDITIONS_FAIL, None, None, tuple(residuals), None)


# --------------------------------------------------------------------------
# normalization (making the pure-Dx leading coefficient nonzero)
# --------------------------------------------------------------------------

def choose_normalization(op: LPDO, max_shear: int | None = None):
    """A constant change of variables with nonzero transformed a_{n,0}.

    Tries the x-y swap first, then the shears (x, y) -> (x + c*y, y) for
    c = 1, ..., max_shear (default n+1).  The order-n symbol vanishes on at
    most n directions, so some candidate always succeeds.
    """
    n = op.order
    if not op.coeff(n, 0).is_zero():
        return None
    if not op.coeff(0, n).is_zero():
        return SWAP_XY
    limit = max_shear if max_shear is not None else n + 1
    for c in range(1, limit + 1):
        # the transformed a_{n,0} is the symbol on the direction (1, c):
        # sum over k of a_{n-k,k} c^k
        ci = RatExpr.from_int(c)
        val = RatExpr.ZERO
        for k in range(n, -1, -1):
            val = val * ci + op.coeff(n - k, k)
        if not val.is_zero():
            return shear_matrix(c)
    raise ValueError("no admissible shear found within the bound")


# --------------------------------------------------------------------------
# the public engine
# --------------------------------------------------------------------------

def _map_back(matrix, factor: FirstOrderFactor | None, cofactor: LPDO | None,
              residuals: tuple[RatExpr, ...]):
    """Undo a normalization change of variables on an attempt's results."""
    if matrix is None:
        return factor, cofactor, residuals
    inv = matrix_inverse(matrix)
    subs_back = _coordinate_substitution(matrix)
    residuals = tuple(r.substitute(subs_back) for r in residuals)
    if factor is None:
        return factor, cofactor, residuals
    f_op = factor.as_operator().change_vars(inv)
    b_op = cofactor.change_vars(inv)
    f = FirstOrderFactor.from_operator(f_op)
    f_norm, unit = f.normalized()
    return f_norm, b_op.scale(unit), residuals


def _coordinate_substitution(matrix) -> dict[str, RatExpr]:
    """Substitution expressing a function of the new coordinates in the old
    ones: (u, v) = M (x, y)."""
    from .operator import _matrix_entries

    m11, m12, m21, m22 = _matrix_entries(matrix)
    return {
        "x": m11 * RatExpr.X + m12 * RatExpr.Y,
        "y": m21 * RatExpr.X + m22 * RatExpr.Y,
    }


def _as_root(op: LPDO, root_choice, search) -> Root:
    """Resolve a user root choice (index, Root, or expression) to a Root."""
    if isinstance(root_choice, Root):
        return root_choice
    if isinstance(root_choice, int):
        if not 0 <= root_choice < len(search.roots):
            raise ValueError(f"root index {root_choice} out of range")
        return search.roots[root_choice]
    value = root_choice
    P = char_poly(op)
    if not P.eval_at(value).is_zero():
        raise ValueError(f"{value} is not a root of the characteristic polynomial")
    return Root(value, P.multiplicity_of(value))


def _attempt_for_root(op: LPDO, root: Root, matrix, p3_candidate):
    """Attempt a root of the original operator, normalizing when needed."""
    tower_before = set(tower().radicals)
    if matrix is None and root.at_infinity:
        matrix = choose_normalization(op) or SWAP_XY
    if matrix is not None:
        work = op.change_vars(matrix)
        w_root = root_transform(root, matrix)
        if p3_candidate is not None:
            p3_candidate = p3_candidate.substitute(
                _coordinate_substitution(matrix_inverse(matrix)))
    else:
        work = op
        w_root = root
    status, factor, cof, residuals, riccati = _attempt(
        work, w_root.value, p3_candidate)
    factor, cof, residuals = _map_back(matrix, factor, cof, residuals)
    new_radicals = tuple(d for d in tower().radicals if d not in tower_before)
    extensions = tuple(root.extensions) + tuple(
        d for d in new_radicals if d not in root.extensions)
    if status is OutcomeStatus.FACTORED:
        check = verify(factor, cof, op, side="left")
        assert check.is_zero(), "factorization failed independent verification"
    return FactorizationOutcome(
        status=status, side="left", root=root, factor=factor, cofactor=cof,
        residuals=residuals, riccati=riccati, normalization=matrix,
        extensions=extensions)


def factor_all_roots(op: LPDO, max_shear: int | None = None) -> list[FactorizationOutcome]:
    """One factorization outcome per root of the characteristic polynomial."""
    if op.order < 2:
        raise ValueError("factorization needs an operator of order >= 2")
    matrix = choose_normalization(op, max_shear)
    search = find_roots(char_poly(op))
    outcomes = []
    for root in search.roots:
        outcomes.append(_attempt_for_root(op, root, matrix, None))
    if not outcomes:
        outcomes.append(FactorizationOutcome(
            status=OutcomeStatus.UNSUPPORTED_ROOT, unresolved=search.unresolved))
    return outcomes


def factor_left(op: LPDO, root_choice=None, p3: RatExpr | None = None,
                max_shear: int | None = None) -> FactorizationOutcome:
    """Find a first-order left factor.

    With no root choice every root is tried in deterministic order and the
    first Factored outcome wins; otherwise the preferred outcome is the
    first Degenerate one, then the attempt with the fewest nonzero
    residuals.  An explicit root (index or expression) restricts the search
    to that root; an explicit p3 candidate completes the degenerate path.
    """
    if op.order < 2:
        raise ValueError("factorization needs an operator of order >= 2")
    matrix = choose_normalization(op, max_shear)
    if root_choice is not None:
        search = find_roots(char_poly(op))
        root = _as_root(op, root_choice, search)
        return _attempt_for_root(op, root, matrix, p3)
    search = find_roots(char_poly(op))
    if not search.roots:
        return FactorizationOutcome(
            status=OutcomeStatus.UNSUPPORTED_ROOT, unresolved=search.unresolved)
    outcomes = []
    for root in search.roots:
        out = _attempt_for_root(op, root, matrix, p3)
        if out.status is OutcomeStatus.FACTORED:
            return out
        outcomes.append(out)
    for out in outcomes:
        if out.status is OutcomeStatus.DEGENERATE:
            return out
    return min(outcomes, key=lambda o: len(o.nonzero_residuals()))


def factor_right(op: LPDO, root_choice=None, p3: RatExpr | None = None,
                 max_shear: int | None = None) -> FactorizationOutcome:
    """First-order right factor via the formal transpose.

    A = C o F holds exactly when A^t = F^t o C^t, so the left engine runs
    on the transpose and both returned operators are transposed back (with
    a sign normalization keeping the factor's leading part monic).
    """
    out = factor_left(op.transpose(), root_choice=root_choice, p3=p3,
                      max_shear=max_shear)
    factor = cofactor = None
    if out.factor is not None:
        factor_op = -(out.factor.as_operator().transpose())
        cofactor = -(out.cofactor.transpose())
        factor = FirstOrderFactor.from_operator(factor_op)
        if out.status is OutcomeStatus.FACTORED:
            assert verify(factor, cofactor, op, side="right").is_zero()
    return FactorizationOutcome(
        status=out.status, side="right", root=out.root, factor=factor,
        cofactor=cofactor, residuals=out.residuals, riccati=out.riccati,
        normalization=out.normalization, extensions=out.extensions,
        unresolved=out.unresolved)


def complete_with_p3(op: LPDO, omega: RatExpr, candidate: RatExpr,
                     max_shear: int | None = None) -> FactorizationOutcome:
    """Finish a degenerate factorization with a user-supplied p3."""
    matrix = choose_normalization(op, max_shear)
    P = char_poly(op)
    root = Root(omega, P.multiplicity_of(omega))
    return _attempt_for_root(op, root, matrix, candidate)


def verify(factor: FirstOrderFactor, cofactor: LPDO, op: LPDO,
           side: str = "left") -> LPDO:
    """compose(factor, cofactor) - op (or the mirrored product for a right
    factor); the zero operator certifies the factorization."""
    f = factor.as_operator()
    prod = f.compose(cofactor) if side == "left" else cofactor.compose(f)
    return prod - op


# --------------------------------------------------------------------------
# automatic candidate search for the degenerate path
# --------------------------------------------------------------------------

def _const_roots(values: list[RatExpr]) -> list[RatExpr]:
    """Roots of a univariate constant-coefficient polynomial given by a
    descending coefficient list, via the characteristic machinery."""
    while values and values[0].is_zero():
        values.pop(0)
    if len(values) <= 1:
        return []
    search = find_roots(CharPoly(tuple(values), len(values) - 1))
    return [r.value for r in search.roots if not r.at_infinity]


def _solve_small_system(equations: list[RatExpr], unknowns: list[str],
                        assignment: dict[str, RatExpr]) -> dict[str, RatExpr] | None:
    """Tiny backtracking solver: repeatedly pick an equation in a single
    unknown, enumerate its constant roots, substitute, recurse."""
    eqs = [e for e in equations if not e.is_zero()]
    if not eqs:
        return assignment
    free = [u for u in unknowns if u not in assignment]
    if not free:
        return None
    for eq in eqs:
        present = [u for u in free if u in eq.symbols()]
        if len(present) != 1:
            continue
        u = present[0]
        groups = eq.as_poly_in({u})
        degree = max(mono_degree(m) for m in groups)
        coeffs = []
        for d in range(degree, -1, -1):
            key = next((m for m in groups if mono_degree(m) == d), None)
            coeffs.append(RatExpr.ZERO if key is None else groups[key])
        if any(not c.is_const() for c in coeffs):
            continue
        for value in _const_roots(list(coeffs)):
            new_assignment = dict(assignment)
            new_assignment[u] = value
            reduced = [e.substitute({u: value}) for e in eqs]
            got = _solve_small_system(reduced, unknowns, new_assignment)
            if got is not None:
                return got
        return None
    return None


def riccati_candidates(problem: RiccatiProblem) -> list[RatExpr]:
    """Search for p3 among 0, constants, and linear forms c1*x + c2*y + c3.

    Undetermined constants are solved by matching coefficients of the x/y
    monomials; anything beyond this family is left to the caller, as the
    reduction stops at the Riccati problem by design.
    """
    found: list[RatExpr] = []

    def check(cand: RatExpr) -> bool:
        return all(r.is_zero() for r in problem.check(cand))

    if check(RatExpr.ZERO):
        found.append(RatExpr.ZERO)
    unknowns = ["_c1", "_c2", "_c3"]
    c1, c2, c3 = (RatExpr.symbol(u) for u in unknowns)
    for template in (c3, c1 * RatExpr.X + c2 * RatExpr.Y + c3):
        equations: list[RatExpr] = []
        for constraint in problem.constraints:
            subs = jet_assignments(problem.unknown, template, constraint.symbols())
            residual = constraint.substitute(subs)
            # the residual vanishes iff its numerator does; grouping the
            # numerator by x/y monomials gives equations in the constants
            groups = RatExpr.from_poly(residual.num).as_poly_in({"x", "y"})
            equations.extend(groups.values())
        solution = _solve_small_system(equations, unknowns, {})
        if solution is None:
            continue
        cand = template.substitute(
            {u: solution.get(u, RatExpr.ZERO) for u in unknowns})
        if cand not in found and check(cand):
            found.append(cand)
    return found


# --------------------------------------------------------------------------
# recursive full factorization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorizationTree:
    """Depth-first factorization record: one branch per root; Factored
    branches recurse on the cofactor, first-order operators are leaves."""

    operator: LPDO
    branches: tuple[tuple[FactorizationOutcome, "FactorizationTree | None"], ...]

    def chains(self) -> list[list[LPDO]]:
        """All complete splittings into first-order operators, outermost
        factor first."""
        if self.operator.order <= 1:
            return [[self.operator]]
        out = []
        for outcome, subtree in self.branches:
            if outcome.status is not OutcomeStatus.FACTORED or subtree is None:
                continue
            head = outcome.factor.as_operator()
            for tail in subtree.chains():
                out.append([head] + tail)
        return out

    def is_leaf(self) -> bool:
        return not self.branches


def factor_fully(op: LPDO, max_shear: int | None = None) -> FactorizationTree:
    """Recursively split off first-order left factors along every root.

    Degenerate roots are completed through the automatic candidate search
    when it succeeds; otherwise the branch carries the emitted Riccati
    problem and stops."""
    if op.order <= 1:
        return FactorizationTree(op, ())
    branches = []
    for outcome in factor_all_roots(op, max_shear):
        if outcome.status is OutcomeStatus.DEGENERATE:
            for cand in riccati_candidates(outcome.riccati):
                done = complete_with_p3(op, outcome.root.value, cand, max_shear)
                if done.status is OutcomeStatus.FACTORED:
                    outcome = done
                    break
        subtree = None
        if outcome.status is OutcomeStatus.FACTORED:
            subtree = factor_fully(outcome.cofactor, max_shear)
        branches.append((outcome, subtree))
    return FactorizationTree(op, tuple(branches))
