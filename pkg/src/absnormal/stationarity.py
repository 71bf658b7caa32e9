"""M- and B-stationarity checks with exact multiplier certificates.

M-stationarity asks for multipliers making the Lagrangian gradient vanish
while the pair multipliers of each degenerate switch satisfy the disjunction
"both strictly positive, or product zero".  The disjunction is decided by
exhaustive case enumeration (three convex cases per degenerate index) with one
strict-margin feasibility LP per case combination.  Both problem forms use the
same three cases, which makes their provable equivalence a direct
computational cross-check.

B-stationarity (the linearized variant) asks that no branch linearized cone
contains a first-order descent direction; per branch this is one exact LP, and
a Holds verdict carries a dual-cone membership certificate for the gradient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .anf import AbsNormalProgram, EvalResult, constraint_jacobians
from .cones import PolyCone, lin_cone_branch
from .cq import FAILS, HOLDS
from .ratmath import (
    ONE,
    ZERO,
    LpCertificate,
    LpProblem,
    Vec,
    dot,
    lp_solve,
    vec_add,
    zero_vec,
)
from .transforms import (
    DEFAULT_BRANCH_CAP,
    MpccPoint,
    MpccProgram,
    enumerate_branches,
    enumerate_mpcc_branches,
)

DEFAULT_CASE_CAP = 3**10

CASE_U_ZERO = "pair-u=0"
CASE_V_ZERO = "pair-v=0"
CASE_BOTH_POSITIVE = "pair-both>0"
CASES = (CASE_U_ZERO, CASE_V_ZERO, CASE_BOTH_POSITIVE)


class CaseLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class MultiplierSet:
    """Multipliers (lam_e, lam_i, lam_z) plus the derived pair multipliers.

    ``mu_u``/``mu_v`` are determined by the stationarity rows of the
    complementarity variables; in abs-normal language the same two vectors are
    the plus/minus switching multipliers.
    """

    lam_e: Vec
    lam_i: Vec
    lam_z: Vec
    mu_u: Vec
    mu_v: Vec

    @property
    def mu_plus(self) -> Vec:
        return self.mu_u

    @property
    def mu_minus(self) -> Vec:
        return self.mu_v


@dataclass(frozen=True)
class CaseOutcome:
    assignment: tuple[str, ...]
    certificate: LpCertificate


@dataclass(frozen=True)
class BranchDualCertificate:
    branch: str
    dual_eq: Vec
    dual_ineq: Vec


@dataclass(frozen=True)
class StationarityVerdict:
    kind: str  # "m-anf" | "m-mpcc" | "b-anf" | "b-mpcc"
    status: str
    multipliers: MultiplierSet | None = None
    case: tuple[str, ...] | None = None
    failed_cases: tuple[CaseOutcome, ...] = ()
    branch_certificates: tuple[BranchDualCertificate, ...] = ()
    failing_branch: str | None = None
    descent: Vec | None = None
    note: str = ""


# ---------------------------------------------------------------------------
# shared multiplier system assembly


@dataclass(frozen=True)
class _MultiplierSystem:
    """Linear data of the stationarity system in the unknowns (lam_e, lam_i, lam_z).

    All rows are affine expressions ``(coeffs, offset)`` with value
    ``coeffs . lam + offset``: ``stationary_rows`` must vanish, while
    ``pair_u``/``pair_v`` evaluate to the pair multipliers of each switching
    index.
    """

    m1: int
    m2: int
    s: int
    stationary_rows: tuple[tuple[Vec, Fraction], ...]
    pair_u: tuple[tuple[Vec, Fraction], ...]
    pair_v: tuple[tuple[Vec, Fraction], ...]
    inactive_i: tuple[int, ...]
    degenerate: tuple[int, ...]
    fixed_pair_u_zero: tuple[int, ...]
    fixed_pair_v_zero: tuple[int, ...]

    @property
    def n_unknowns(self) -> int:
        return self.m1 + self.m2 + self.s

    def lam_slice(self, lam: Vec) -> tuple[Vec, Vec, Vec]:
        return lam[: self.m1], lam[self.m1 : self.m1 + self.m2], lam[self.m1 + self.m2 :]

    def pair_value(self, expr: tuple[Vec, Fraction], lam: Vec) -> Fraction:
        coeffs, offset = expr
        return dot(coeffs, lam) + offset


def _mpcc_system(mp: MpccProgram, point: MpccPoint) -> _MultiplierSystem:
    """Stationarity of f + lam_e.c_e - lam_i.c_i + lam_z.(switching rows) minus
    the pair terms, over the full (x, u, v) gradient."""
    coords = point.coords
    n_x, s, m1, m2 = mp.n_x, mp.s, mp.m1, mp.m2
    grad_f = mp.objective.gradient(coords)
    grads_e = [func.gradient(coords) for func in mp.ce_funcs]
    grads_i = [func.gradient(coords) for func in mp.ci_funcs]
    grads_z = [func.gradient(coords) for func in mp.cz_funcs]

    def column(coord: int) -> Vec:
        return (
            tuple(g[coord] for g in grads_e)
            + tuple(-g[coord] for g in grads_i)
            + tuple(g[coord] for g in grads_z)
        )

    stationary = tuple((column(c), grad_f[c]) for c in range(n_x))
    pair_u = tuple((column(mp.u_index(i)), grad_f[mp.u_index(i)]) for i in range(s))
    pair_v = tuple((column(mp.v_index(i)), grad_f[mp.v_index(i)]) for i in range(s))
    values_i = tuple(func.value(coords) for func in mp.ci_funcs)
    inactive = tuple(k for k, v in enumerate(values_i) if v != 0)
    return _MultiplierSystem(
        m1=m1,
        m2=m2,
        s=s,
        stationary_rows=stationary,
        pair_u=pair_u,
        pair_v=pair_v,
        inactive_i=inactive,
        degenerate=point.degenerate,
        fixed_pair_u_zero=point.u_plus,
        fixed_pair_v_zero=point.v_plus,
    )


def _anf_system(p: AbsNormalProgram, e: EvalResult) -> _MultiplierSystem:
    """The same system read off the abs-normal data: the pair multipliers are
    the row combination of the zeta-Jacobians shifted by -/+ the switching
    multiplier of the index."""
    jac = constraint_jacobians(p, e)
    n_t, s, m1, m2 = p.n_t, p.s, p.m1, p.m2
    grad_f = p.f.gradient(e.t)

    def t_column(c: int) -> Vec:
        return (
            tuple(jac.d1_ce.entry(k, c) for k in range(m1))
            + tuple(-jac.d1_ci.entry(k, c) for k in range(m2))
            + tuple(jac.d1_cz.entry(i, c) for i in range(s))
        )

    def zeta_column(i: int) -> Vec:
        return (
            tuple(jac.d2_ce.entry(k, i) for k in range(m1))
            + tuple(-jac.d2_ci.entry(k, i) for k in range(m2))
            + tuple(jac.d2_cz.entry(j, i) for j in range(s))
        )

    stationary = tuple((t_column(c), grad_f[c]) for c in range(n_t))
    pair_u = []
    pair_v = []
    for i in range(s):
        col = list(zeta_column(i))
        col_u = list(col)
        col_u[m1 + m2 + i] -= ONE  # subtract the switching multiplier itself
        col_v = list(col)
        col_v[m1 + m2 + i] += ONE
        pair_u.append((tuple(col_u), ZERO))
        pair_v.append((tuple(col_v), ZERO))
    inactive = tuple(k for k, v in enumerate(e.value_i) if v != 0)
    u_plus = tuple(i for i, sg in enumerate(e.sigma.entries) if sg > 0)
    v_plus = tuple(i for i, sg in enumerate(e.sigma.entries) if sg < 0)
    return _MultiplierSystem(
        m1=m1,
        m2=m2,
        s=s,
        stationary_rows=stationary,
        pair_u=tuple(pair_u),
        pair_v=tuple(pair_v),
        inactive_i=inactive,
        degenerate=e.alpha,
        fixed_pair_u_zero=u_plus,
        fixed_pair_v_zero=v_plus,
    )


def build_case_problem(system: _MultiplierSystem, assignment: tuple[str, ...]) -> LpProblem:
    """The feasibility LP of one disjunction case combination.

    Every row is an affine expression (coeffs, offset); as a constraint it
    reads coeffs . lam = -offset (resp. >= -offset, strictly for the
    both-positive case).
    """
    n = system.n_unknowns
    eq: list[tuple[Vec, Fraction]] = list(system.stationary_rows)
    for i in system.fixed_pair_u_zero:
        eq.append(system.pair_u[i])
    for i in system.fixed_pair_v_zero:
        eq.append(system.pair_v[i])
    for k in system.inactive_i:
        row = [ZERO] * n
        row[system.m1 + k] = ONE
        eq.append((tuple(row), ZERO))
    ineq: list[tuple[Vec, Fraction]] = []
    for k in range(system.m2):
        row = [ZERO] * n
        row[system.m1 + k] = ONE
        ineq.append((tuple(row), ZERO))
    strict: set[int] = set()
    for i, case in zip(system.degenerate, assignment, strict=True):
        if case == CASE_U_ZERO:
            eq.append(system.pair_u[i])
        elif case == CASE_V_ZERO:
            eq.append(system.pair_v[i])
        elif case == CASE_BOTH_POSITIVE:
            strict.add(len(ineq))
            ineq.append(system.pair_u[i])
            strict.add(len(ineq))
            ineq.append(system.pair_v[i])
        else:
            raise ValueError(f"unknown case {case!r}")
    return LpProblem(
        n_vars=n,
        eq_rows=tuple(r for r, _ in eq),
        eq_rhs=tuple(-b for _, b in eq),
        ineq_rows=tuple(r for r, _ in ineq),
        ineq_rhs=tuple(-b for _, b in ineq),
        strict=frozenset(strict),
    )


def _solve_system(system: _MultiplierSystem, kind: str, case_cap: int) -> StationarityVerdict:
    if 3 ** len(system.degenerate) > case_cap:
        raise CaseLimitError(
            f"{3 ** len(system.degenerate)} multiplier case combinations exceed the cap {case_cap}"
        )
    failed: list[CaseOutcome] = []
    for assignment in itertools.product(CASES, repeat=len(system.degenerate)):
        res = lp_solve(build_case_problem(system, assignment))
        if res.status == "feasible":
            lam = res.certificate.point
            ms = _multipliers_from_lam(system, lam)
            verdict = StationarityVerdict(kind, HOLDS, multipliers=ms, case=assignment)
            errors = verify_multipliers(system, ms)
            assert not errors, f"holds certificate failed self-check: {errors}"
            return verdict
        failed.append(CaseOutcome(assignment, res.certificate))
    return StationarityVerdict(kind, FAILS, failed_cases=tuple(failed))


def _multipliers_from_lam(system: _MultiplierSystem, lam: Vec) -> MultiplierSet:
    lam_e, lam_i, lam_z = system.lam_slice(lam)
    mu_u = []
    mu_v = []
    for i in range(system.s):
        mu_u.append(system.pair_value(system.pair_u[i], lam))
        mu_v.append(system.pair_value(system.pair_v[i], lam))
    return MultiplierSet(lam_e, lam_i, lam_z, tuple(mu_u), tuple(mu_v))


def verify_multipliers(system: _MultiplierSystem, ms: MultiplierSet) -> list[str]:
    """Re-check an M-stationarity certificate by substitution."""
    lam = ms.lam_e + ms.lam_i + ms.lam_z
    errors = []
    for row, offset in system.stationary_rows:
        if dot(row, lam) + offset != 0:
            errors.append("Lagrangian gradient row does not vanish")
            break
    for i in range(system.s):
        if system.pair_value(system.pair_u[i], lam) != ms.mu_u[i]:
            errors.append(f"pair multiplier u[{i}] mismatch")
        if system.pair_value(system.pair_v[i], lam) != ms.mu_v[i]:
            errors.append(f"pair multiplier v[{i}] mismatch")
    for i in system.fixed_pair_u_zero:
        if ms.mu_u[i] != 0:
            errors.append(f"pair multiplier u[{i}] must vanish (strictly positive side)")
    for i in system.fixed_pair_v_zero:
        if ms.mu_v[i] != 0:
            errors.append(f"pair multiplier v[{i}] must vanish (strictly negative side)")
    for i in system.degenerate:
        a, b = ms.mu_u[i], ms.mu_v[i]
        if not ((a > 0 and b > 0) or a * b == 0):
            errors.append(f"degenerate pair {i} violates the sign disjunction")
    if any(x < 0 for x in ms.lam_i):
        errors.append("negative inequality multiplier")
    for k in system.inactive_i:
        if ms.lam_i[k] != 0:
            errors.append(f"inactive inequality {k} has a nonzero multiplier")
    return errors


def check_m_stationary_mpcc(
    mp: MpccProgram, point: MpccPoint, case_cap: int = DEFAULT_CASE_CAP
) -> StationarityVerdict:
    return _solve_system(_mpcc_system(mp, point), "m-mpcc", case_cap)


def check_m_stationary_anf(
    p: AbsNormalProgram, e: EvalResult, case_cap: int = DEFAULT_CASE_CAP
) -> StationarityVerdict:
    return _solve_system(_anf_system(p, e), "m-anf", case_cap)


def translate_multipliers(
    ms: MultiplierSet,
    direction: str,
    system_from,
    system_to,
) -> MultiplierSet:
    """Map a valid multiplier set between the two formulations.

    The shared block (lam_e, lam_i, lam_z) is unchanged; the pair multipliers
    are re-derived in the target system, where they coincide with the source
    values because both systems build them from the same Jacobian rows.
    ``direction`` is "anf->mpcc" or "mpcc->anf" and is recorded for intent;
    the systems carry the actual data.
    """
    if direction not in ("anf->mpcc", "mpcc->anf"):
        raise ValueError(f"unknown direction {direction!r}")
    src = _as_system(system_from)
    dst = _as_system(system_to)
    errors = verify_multipliers(src, ms)
    if errors:
        raise ValueError("source multipliers are not valid: " + "; ".join(errors))
    lam = ms.lam_e + ms.lam_i + ms.lam_z
    out = _multipliers_from_lam(dst, lam)
    errors = verify_multipliers(dst, out)
    if errors:
        raise AssertionError("translated multipliers failed the target system: " + "; ".join(errors))
    return out


def _as_system(obj) -> _MultiplierSystem:
    if isinstance(obj, _MultiplierSystem):
        return obj
    if isinstance(obj, tuple) and len(obj) == 2:
        first, second = obj
        if isinstance(first, MpccProgram):
            return _mpcc_system(first, second)
        return _anf_system(first, second)
    raise TypeError("expected a (program, point) pair")


def multiplier_system(obj, point) -> _MultiplierSystem:
    """Public accessor for the linear stationarity system at a point."""
    return _as_system((obj, point))


# ---------------------------------------------------------------------------
# B-stationarity on the branch linearized cones


def _branch_descent_lp(gradient: Vec, cone: PolyCone) -> LpProblem:
    return LpProblem(
        n_vars=cone.dim,
        objective=gradient,
        sense="min",
        eq_rows=cone.eq_rows,
        eq_rhs=zero_vec(len(cone.eq_rows)),
        ineq_rows=cone.ineq_rows,
        ineq_rhs=zero_vec(len(cone.ineq_rows)),
    )


def _check_b_over_branches(branches, kind: str) -> StationarityVerdict:
    certificates = []
    for b in branches:
        cone = lin_cone_branch(b)
        gradient = b.objective.gradient(b.anchor)
        res = lp_solve(_branch_descent_lp(gradient, cone))
        if res.status == "unbounded":
            descent = res.certificate.ray
            assert dot(gradient, descent) < 0
            return StationarityVerdict(
                kind, FAILS, failing_branch=b.label, descent=descent
            )
        assert res.status == "optimal" and res.value == 0
        certificates.append(
            BranchDualCertificate(b.label, res.certificate.dual_eq, res.certificate.dual_ineq)
        )
    return StationarityVerdict(kind, HOLDS, branch_certificates=tuple(certificates))


def check_b_stationary(
    program,
    point,
    form: str,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> StationarityVerdict:
    """No-descent check over every branch linearized cone.

    ``form`` is "anf" (program: AbsNormalProgram, point: EvalResult) or "mpcc"
    (program: MpccProgram, point: MpccPoint).  Holds carries one dual-cone
    membership certificate per branch; Fails carries the violating branch and
    an explicit descent direction.
    """
    if form == "anf":
        branches = enumerate_branches(program, point, branch_cap)
        return _check_b_over_branches(branches, "b-anf")
    if form == "mpcc":
        branches = enumerate_mpcc_branches(program, point, branch_cap)
        return _check_b_over_branches(branches, "b-mpcc")
    raise ValueError(f"unknown form {form!r}")


def verify_branch_dual_certificate(
    cert: BranchDualCertificate, cone: PolyCone, gradient: Vec
) -> list[str]:
    """Substitution check: gradient = E^T y + I^T lam with lam >= 0."""
    errors = []
    if any(x < 0 for x in cert.dual_ineq):
        errors.append("negative inequality weight")
    combo = zero_vec(cone.dim)
    for y, row in zip(cert.dual_eq, cone.eq_rows, strict=True):
        combo = vec_add(combo, tuple(y * x for x in row))
    for lam, row in zip(cert.dual_ineq, cone.ineq_rows, strict=True):
        combo = vec_add(combo, tuple(lam * x for x in row))
    if combo != tuple(gradient):
        errors.append("dual combination does not reproduce the gradient")
    return errors
