"""Exact linear programming with re-checkable certificates.

Two-phase tableau simplex over rationals with Bland's rule (anti-cycling, so
termination needs no perturbation).  Every verdict carries a certificate that
re-validates by pure substitution:

* feasible      -- a point satisfying all rows (strict rows strictly),
* infeasible    -- a Farkas ray, or an optimal pair of the margin relaxation
                   proving the strict-feasibility supremum is nonpositive,
* optimal       -- a primal point and dual multipliers with equal objective
                   values (duals are stated for the canonical minimization),
* unbounded     -- a feasible point plus an improving recession ray.

Strict inequality rows are handled by maximizing a margin variable ``m`` with
``row - m >= rhs`` on the strict rows; the system is strictly feasible exactly
when the margin optimum is positive or unbounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .matrix import ONE, ZERO, Vec, dot, vec, zero_vec

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
OPTIMAL = "optimal"
UNBOUNDED = "unbounded"

KIND_POINT = "feasible-point"
KIND_FARKAS = "farkas-infeasibility-ray"
KIND_PAIR = "optimal-primal-dual-pair"
KIND_RAY = "unbounded-ray"


class LpError(ValueError):
    pass


@dataclass(frozen=True)
class LpProblem:
    """``min/max objective . x`` subject to ``eq_rows . x = eq_rhs`` and ``ineq_rows . x >= ineq_rhs``.

    ``strict`` lists inequality row indices that must hold strictly; those are
    only supported for pure feasibility queries (no objective).
    """

    n_vars: int
    objective: Vec | None = None
    sense: str = "min"
    eq_rows: tuple[Vec, ...] = ()
    eq_rhs: Vec = ()
    ineq_rows: tuple[Vec, ...] = ()
    ineq_rhs: Vec = ()
    strict: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.sense not in ("min", "max"):
            raise LpError(f"unknown sense {self.sense!r}")
        if self.objective is not None and len(self.objective) != self.n_vars:
            raise LpError("objective length does not match variable count")
        if len(self.eq_rows) != len(self.eq_rhs) or len(self.ineq_rows) != len(self.ineq_rhs):
            raise LpError("row/rhs counts do not match")
        for r in itertools.chain(self.eq_rows, self.ineq_rows):
            if len(r) != self.n_vars:
                raise LpError("constraint row length does not match variable count")
        if any(i < 0 or i >= len(self.ineq_rows) for i in self.strict):
            raise LpError("strict index out of range")

    def min_objective(self) -> Vec:
        """Objective of the canonical minimization (negated when sense is max)."""
        if self.objective is None:
            return zero_vec(self.n_vars)
        if self.sense == "min":
            return self.objective
        return tuple(-c for c in self.objective)


@dataclass(frozen=True)
class LpCertificate:
    kind: str
    point: Vec | None = None
    ray: Vec | None = None
    dual_eq: Vec | None = None
    dual_ineq: Vec | None = None
    margin: Fraction | None = None


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None
    certificate: LpCertificate


def margin_relaxation(p: LpProblem) -> LpProblem:
    """Auxiliary LP: maximize the margin m with ``row . x - m >= rhs`` on strict rows."""
    n = p.n_vars
    rows = []
    for i, row in enumerate(p.ineq_rows):
        extra = -ONE if i in p.strict else ZERO
        rows.append(row + (extra,))
    return LpProblem(
        n_vars=n + 1,
        objective=zero_vec(n) + (ONE,),
        sense="max",
        eq_rows=tuple(r + (ZERO,) for r in p.eq_rows),
        eq_rhs=p.eq_rhs,
        ineq_rows=tuple(rows),
        ineq_rhs=p.ineq_rhs,
    )


def lp_solve(p: LpProblem) -> LpResult:
    if p.strict:
        if p.objective is not None:
            raise LpError("strict rows are only supported for feasibility queries")
        return _solve_strict(p)
    return _solve_plain(p)


def _solve_strict(p: LpProblem) -> LpResult:
    aux = margin_relaxation(p)
    res = lp_solve(aux)
    if res.status == INFEASIBLE:
        # The Farkas ray forces zero weight on strict rows (margin column), so
        # it certifies infeasibility of the weak system, hence of the strict one.
        return LpResult(INFEASIBLE, None, res.certificate)
    if res.status == UNBOUNDED:
        cert = res.certificate
        point, ray = cert.point, cert.ray
        m0, mr = point[-1], ray[-1]
        theta = ZERO if m0 >= 1 else (1 - m0) / mr
        lifted = tuple(x + theta * r for x, r in zip(point, ray))
        return LpResult(
            FEASIBLE, None, LpCertificate(KIND_POINT, point=lifted[:-1], margin=lifted[-1])
        )
    assert res.status == OPTIMAL
    if res.value > 0:
        point = res.certificate.point
        return LpResult(FEASIBLE, None, LpCertificate(KIND_POINT, point=point[:-1], margin=res.value))
    cert = LpCertificate(
        KIND_PAIR,
        point=res.certificate.point,
        dual_eq=res.certificate.dual_eq,
        dual_ineq=res.certificate.dual_ineq,
        margin=res.value,
    )
    return LpResult(INFEASIBLE, None, cert)


def _solve_plain(p: LpProblem) -> LpResult:
    tab = _Tableau(p)
    farkas = tab.phase_one()
    if farkas is not None:
        return LpResult(INFEASIBLE, None, LpCertificate(KIND_FARKAS, dual_eq=farkas[0], dual_ineq=farkas[1]))
    if p.objective is None:
        return LpResult(FEASIBLE, None, LpCertificate(KIND_POINT, point=tab.primal_point()))
    outcome = tab.phase_two(p.min_objective())
    if outcome == OPTIMAL:
        point = tab.primal_point()
        dual_eq, dual_ineq = tab.dual_solution()
        value = dot(p.objective, point)
        return LpResult(
            OPTIMAL, value, LpCertificate(KIND_PAIR, point=point, dual_eq=dual_eq, dual_ineq=dual_ineq)
        )
    point, ray = tab.unbounded_ray()
    return LpResult(UNBOUNDED, None, LpCertificate(KIND_RAY, point=point, ray=ray))


class _Tableau:
    """Standard-form tableau: free variables split, slacks on >= rows, artificial basis."""

    def __init__(self, p: LpProblem) -> None:
        self.p = p
        n = p.n_vars
        self.n_split = 2 * n
        self.n_ineq = len(p.ineq_rows)
        self.n_struct = self.n_split + self.n_ineq
        rows: list[list[Fraction]] = []
        flips: list[Fraction] = []
        rhs_all = list(p.eq_rhs) + list(p.ineq_rhs)
        for k, row in enumerate(itertools.chain(p.eq_rows, p.ineq_rows)):
            body = list(row) + [-x for x in row] + [ZERO] * self.n_ineq
            if k >= len(p.eq_rows):
                body[self.n_split + (k - len(p.eq_rows))] = -ONE
            b = rhs_all[k]
            flip = -ONE if b < 0 else ONE
            rows.append([flip * x for x in body] + [flip * b])
            flips.append(flip)
        self.flips = flips
        self.m_orig = len(rows)
        # artificial columns: n_struct + k for original row k
        self.total = self.n_struct + self.m_orig
        for k, row in enumerate(rows):
            art = [ZERO] * self.m_orig
            art[k] = ONE
            rows[k] = row[:-1] + art + [row[-1]]
        self.rows = rows
        self.basis = [self.n_struct + k for k in range(self.m_orig)]
        self.obj: list[Fraction] = []

    # -- pivoting ---------------------------------------------------------

    def _recompute_obj(self, cost: list[Fraction]) -> None:
        obj = cost + [ZERO]
        for i, row in enumerate(self.rows):
            cb = cost[self.basis[i]]
            if cb:
                for j in range(self.total + 1):
                    obj[j] -= cb * row[j]
        self.obj = obj

    def _pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            self.rows[r] = row = [x / piv for x in row]
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                f = other[c]
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        if self.obj and self.obj[c]:
            f = self.obj[c]
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[r] = c

    def _iterate(self, allowed: range | list[int]) -> int | None:
        """Bland pivoting until optimal (returns None) or unbounded (returns entering col)."""
        while True:
            enter = None
            for j in allowed:
                if self.obj[j] < 0:
                    enter = j
                    break
            if enter is None:
                return None
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return enter
            self._pivot(leave, enter)

    # -- phases -----------------------------------------------------------

    def phase_one(self) -> tuple[Vec, Vec] | None:
        """Drive artificials to zero; on infeasibility return the Farkas ray (dual_eq, dual_ineq)."""
        cost = [ZERO] * self.n_struct + [ONE] * self.m_orig
        self._recompute_obj(cost)
        self._iterate(range(self.total))
        value = -self.obj[-1]
        if value > 0:
            y = [ONE - self.obj[self.n_struct + k] for k in range(self.m_orig)]
            return self._unflip_duals(y)
        self._evict_artificials()
        return None

    def _evict_artificials(self) -> None:
        # Pivot basic artificials (necessarily at value 0) onto structural
        # columns; rows that admit none are redundant and get dropped.
        drop: list[int] = []
        for i in range(len(self.rows)):
            if self.basis[i] >= self.n_struct:
                c = next((j for j in range(self.n_struct) if self.rows[i][j] != 0), None)
                if c is None:
                    drop.append(i)
                else:
                    self._pivot(i, c)
        for i in reversed(drop):
            del self.rows[i]
            del self.basis[i]

    def phase_two(self, c_min: Vec) -> str:
        cost = (
            list(c_min)
            + [-x for x in c_min]
            + [ZERO] * self.n_ineq
            + [ZERO] * self.m_orig
        )
        self._recompute_obj(cost)
        entering = self._iterate(range(self.n_struct))
        if entering is None:
            return OPTIMAL
        self._unbounded_col = entering
        return UNBOUNDED

    # -- extraction --------------------------------------------------------

    def primal_point(self) -> Vec:
        x_std = [ZERO] * self.n_struct
        for i, b in enumerate(self.basis):
            if b < self.n_struct:
                x_std[b] = self.rows[i][-1]
        n = self.p.n_vars
        return tuple(x_std[j] - x_std[n + j] for j in range(n))

    def dual_solution(self) -> tuple[Vec, Vec]:
        # The artificial block stays in the tableau, so -obj[artificial k] is
        # the simplex multiplier of original row k even after redundant rows
        # were dropped (their artificial columns keep the row-operation record).
        y = [-self.obj[self.n_struct + k] for k in range(self.m_orig)]
        return self._unflip_duals(y)

    def _unflip_duals(self, y: list[Fraction]) -> tuple[Vec, Vec]:
        unflipped = [self.flips[k] * y[k] for k in range(self.m_orig)]
        n_eq = len(self.p.eq_rows)
        return tuple(unflipped[:n_eq]), tuple(unflipped[n_eq:])

    def unbounded_ray(self) -> tuple[Vec, Vec]:
        c = self._unbounded_col
        r_std = [ZERO] * self.n_struct
        r_std[c] = ONE
        for i, b in enumerate(self.basis):
            assert b < self.n_struct, "artificial variable basic after cleanup"
            r_std[b] = -self.rows[i][c]
        n = self.p.n_vars
        ray = tuple(r_std[j] - r_std[n + j] for j in range(n))
        return self.primal_point(), ray


# -- certificate validation -------------------------------------------------


def _point_feasible(p: LpProblem, x: Vec, strictly: bool) -> bool:
    if len(x) != p.n_vars:
        return False
    for row, b in zip(p.eq_rows, p.eq_rhs):
        if dot(row, x) != b:
            return False
    for i, (row, b) in enumerate(zip(p.ineq_rows, p.ineq_rhs)):
        v = dot(row, x)
        if strictly and i in p.strict:
            if v <= b:
                return False
        elif v < b:
            return False
    return True


def verify_certificate(p: LpProblem, result: LpResult) -> list[str]:
    """Re-check a verdict by substitution only; returns a list of violations (empty = valid)."""
    errors: list[str] = []
    cert = result.certificate
    if result.status == FEASIBLE:
        if cert.kind != KIND_POINT or cert.point is None:
            return ["feasible verdict without a point certificate"]
        if not _point_feasible(p, cert.point, strictly=True):
            errors.append("claimed feasible point violates a constraint")
        return errors
    if result.status == INFEASIBLE:
        if cert.kind == KIND_FARKAS:
            return _check_farkas(p, cert)
        if cert.kind == KIND_PAIR:
            aux = margin_relaxation(p)
            if cert.margin is None or cert.margin > 0:
                return ["margin certificate must prove a nonpositive optimum"]
            sub = LpResult(OPTIMAL, cert.margin, LpCertificate(KIND_PAIR, cert.point, None, cert.dual_eq, cert.dual_ineq))
            errs = verify_certificate(aux, sub)
            return [f"margin relaxation: {e}" for e in errs]
        return [f"unexpected certificate kind {cert.kind!r} for infeasible"]
    if result.status == OPTIMAL:
        if cert.kind != KIND_PAIR or cert.point is None or cert.dual_eq is None or cert.dual_ineq is None:
            return ["optimal verdict needs a primal-dual pair"]
        if not _point_feasible(p, cert.point, strictly=False):
            errors.append("optimal point infeasible")
        if p.objective is not None and dot(p.objective, cert.point) != result.value:
            errors.append("objective value mismatch at the optimal point")
        c_min = p.min_objective()
        min_value = result.value if p.sense == "min" else -result.value
        if any(lam < 0 for lam in cert.dual_ineq):
            errors.append("negative inequality multiplier")
        for j in range(p.n_vars):
            lhs = sum((cert.dual_eq[k] * p.eq_rows[k][j] for k in range(len(p.eq_rows))), ZERO)
            lhs += sum((cert.dual_ineq[i] * p.ineq_rows[i][j] for i in range(len(p.ineq_rows))), ZERO)
            if lhs != c_min[j]:
                errors.append(f"dual feasibility fails at column {j}")
                break
        dual_value = dot(cert.dual_eq, p.eq_rhs) + dot(cert.dual_ineq, p.ineq_rhs)
        if dual_value != min_value:
            errors.append("strong duality gap")
        return errors
    if result.status == UNBOUNDED:
        if cert.kind != KIND_RAY or cert.point is None or cert.ray is None:
            return ["unbounded verdict needs a point and a ray"]
        if not _point_feasible(p, cert.point, strictly=False):
            errors.append("ray base point infeasible")
        for row in p.eq_rows:
            if dot(row, cert.ray) != 0:
                errors.append("ray leaves an equality")
                break
        for row in p.ineq_rows:
            if dot(row, cert.ray) < 0:
                errors.append("ray leaves an inequality")
                break
        if p.objective is None or dot(p.min_objective(), cert.ray) >= 0:
            errors.append("ray does not improve the objective")
        return errors
    return [f"unknown status {result.status!r}"]


def _check_farkas(p: LpProblem, cert: LpCertificate) -> list[str]:
    errors: list[str] = []
    y_eq, y_in = cert.dual_eq, cert.dual_ineq
    if y_eq is None or y_in is None:
        return ["farkas certificate incomplete"]
    if any(lam < 0 for lam in y_in):
        errors.append("negative inequality weight in Farkas ray")
    for j in range(p.n_vars):
        combo = sum((y_eq[k] * p.eq_rows[k][j] for k in range(len(p.eq_rows))), ZERO)
        combo += sum((y_in[i] * p.ineq_rows[i][j] for i in range(len(p.ineq_rows))), ZERO)
        if combo != 0:
            errors.append(f"Farkas combination is nonzero at column {j}")
            break
    if dot(y_eq, p.eq_rhs) + dot(y_in, p.ineq_rhs) <= 0:
        errors.append("Farkas ray does not witness a positive right-hand side")
    return errors
