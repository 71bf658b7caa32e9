"""Derived formulations: slack lifting, complementarity counterparts, branches.

Four formulations share two generic shapes.  The slack-lifted program is again
a program in abs-normal form (over ``(t, w)`` with switching block
``(z, z_w)``), and the complementarity counterpart of either one substitutes
``zeta -> u + v`` and ``z -> u - v`` with one complementarity pair per
switching variable.  Branch problems fix a definite signature (respectively a
resolution of the degenerate pairs) and are plain smooth quadratic programs;
all cone and stationarity machinery downstream consumes those.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .anf import (
    AbsNormalProgram,
    EvalResult,
    ProgramError,
    QuadraticFunc,
    SignatureVector,
    require_valid,
)
from .ratmath import ONE, ZERO, RatMatrix, Vec, unit_vec, vec, vec_neg, zero_vec

DEFAULT_BRANCH_CAP = 2**16


class BranchLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured branch cap."""


# ---------------------------------------------------------------------------
# slack reformulation


@dataclass(frozen=True)
class SlackProgram:
    """Equality-only lifting: inequalities become ``c_i(t,|z|) - |z_w| = 0`` with ``w = z_w``.

    ``program`` is itself a valid abs-normal program; the slack switching block
    is ordered after the original one, which preserves triangularity.
    """

    base: AbsNormalProgram
    program: AbsNormalProgram

    def lift_smooth_point(self, e: EvalResult, signs: tuple[int, ...] | None = None) -> Vec:
        """The lifted smooth variables (t, w); ``signs`` picks the slack representative.

        By default w takes the nonnegative representative ``w_k = c_i_k``; any
        sign vector gives another element of the slack fiber.
        """
        if signs is None:
            signs = (1,) * self.base.m2
        if len(signs) != self.base.m2:
            raise ProgramError("need one sign per inequality")
        w = tuple(Fraction(sg) * val for sg, val in zip(signs, e.value_i))
        return e.t + w


def to_slack(p: AbsNormalProgram) -> SlackProgram:
    require_valid(p)
    n_t, s, m1, m2 = p.n_t, p.s, p.m1, p.m2
    new_n_t = n_t + m2
    new_s = s + m2
    new_block = new_n_t + new_s
    # old block (t, zeta) sits at t_i -> i and zeta_i -> n_t + m2 + i
    positions = tuple(range(n_t)) + tuple(new_n_t + i for i in range(s))
    c_e = [func.embed(new_block, positions) for func in p.c_e]
    for k, func in enumerate(p.c_i):
        slack_col = new_n_t + s + k
        c_e.append(func.embed(new_block, positions).add_linear(vec_neg(unit_vec(new_block, slack_col))))
    c_z = [func.embed(new_block, positions) for func in p.c_z]
    for k in range(m2):
        c_z.append(QuadraticFunc.affine(new_block, 0, unit_vec(new_block, n_t + k)))
    lifted = AbsNormalProgram(
        n_t=new_n_t,
        s=new_s,
        m1=m1 + m2,
        m2=0,
        f=p.f.embed(new_n_t, tuple(range(n_t))),
        c_e=tuple(c_e),
        c_i=(),
        c_z=tuple(c_z),
    )
    require_valid(lifted)
    return SlackProgram(base=p, program=lifted)


# ---------------------------------------------------------------------------
# counterpart with complementarity pairs


@dataclass(frozen=True)
class MpccProgram:
    """Counterpart with variables (x, u, v) and pairs ``0 <= u_i  complementary  v_i >= 0``.

    Constraint functions live over the block ``(x, u, v)``; the switching rows
    already include the ``-(u_i - v_i)`` term.
    """

    base: AbsNormalProgram
    n_x: int
    s: int
    m1: int
    m2: int
    objective: QuadraticFunc
    ce_funcs: tuple[QuadraticFunc, ...]
    ci_funcs: tuple[QuadraticFunc, ...]
    cz_funcs: tuple[QuadraticFunc, ...]

    @property
    def dim(self) -> int:
        return self.n_x + 2 * self.s

    def u_index(self, i: int) -> int:
        return self.n_x + i

    def v_index(self, i: int) -> int:
        return self.n_x + self.s + i

    @property
    def eq_funcs(self) -> tuple[QuadraticFunc, ...]:
        return self.ce_funcs + self.cz_funcs


def to_mpcc(p: AbsNormalProgram | SlackProgram) -> MpccProgram:
    if isinstance(p, SlackProgram):
        p = p.program
    require_valid(p)
    n_x, s = p.n_t, p.s
    dim = n_x + 2 * s
    # block substitution (x, u, v) -> (x, u + v)
    rows = [unit_vec(dim, i) for i in range(n_x)]
    for i in range(s):
        row = [ZERO] * dim
        row[n_x + i] = ONE
        row[n_x + s + i] = ONE
        rows.append(tuple(row))
    subs = RatMatrix.from_rows(rows, dim)
    ce = tuple(func.compose_linear(subs) for func in p.c_e)
    ci = tuple(func.compose_linear(subs) for func in p.c_i)
    cz = []
    for i, func in enumerate(p.c_z):
        extra = [ZERO] * dim
        extra[n_x + i] = -ONE
        extra[n_x + s + i] = ONE
        cz.append(func.compose_linear(subs).add_linear(tuple(extra)))
    return MpccProgram(
        base=p,
        n_x=n_x,
        s=s,
        m1=p.m1,
        m2=p.m2,
        objective=p.f.embed(dim, tuple(range(n_x))),
        ce_funcs=ce,
        ci_funcs=ci,
        cz_funcs=tuple(cz),
    )


@dataclass(frozen=True)
class MpccPoint:
    x: Vec
    u: Vec
    v: Vec

    def __post_init__(self) -> None:
        if len(self.u) != len(self.v):
            raise ProgramError("u and v must have equal length")
        if any(a < 0 for a in self.u) or any(b < 0 for b in self.v):
            raise ProgramError("complementarity variables must be nonnegative")
        if any(a * b != 0 for a, b in zip(self.u, self.v)):
            raise ProgramError("complementarity violated")

    @property
    def u_plus(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.u) if a > 0)

    @property
    def v_plus(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.v) if b > 0)

    @property
    def degenerate(self) -> tuple[int, ...]:
        return tuple(i for i, (a, b) in enumerate(zip(self.u, self.v)) if a == 0 and b == 0)

    @property
    def base_signature(self) -> SignatureVector:
        return SignatureVector(
            tuple(1 if a > 0 else (-1 if b > 0 else 0) for a, b in zip(self.u, self.v))
        )

    @property
    def coords(self) -> Vec:
        return self.x + self.u + self.v


def phi(point: MpccPoint) -> Vec:
    """Map a counterpart point to the abs-normal point (x, z) with z = u - v."""
    return point.x + tuple(a - b for a, b in zip(point.u, point.v))


def phi_inv(x: Vec, z: Vec) -> MpccPoint:
    """Split z into nonnegative and nonpositive parts: u = max(z,0), v = max(-z,0)."""
    u = tuple(max(c, ZERO) for c in z)
    v = tuple(max(-c, ZERO) for c in z)
    return MpccPoint(vec(x), u, v)


def mpcc_point_from_eval(e: EvalResult) -> MpccPoint:
    return phi_inv(e.t, e.z)


def mpcc_residuals(mp: MpccProgram, point: MpccPoint) -> tuple[Vec, Vec]:
    coords = point.coords
    eq = tuple(func.value(coords) for func in mp.eq_funcs)
    ineq = tuple(func.value(coords) for func in mp.ci_funcs)
    return eq, ineq


def mpcc_feasible(mp: MpccProgram, point: MpccPoint) -> bool:
    eq, ineq = mpcc_residuals(mp, point)
    return all(r == 0 for r in eq) and all(v >= 0 for v in ineq)


# ---------------------------------------------------------------------------
# branch problems


@dataclass(frozen=True)
class BranchSpec:
    """One branch: a definite signature, or equivalently a resolution of degenerate pairs.

    ``signs`` is the definite signature; ``base_signs`` the (possibly
    indefinite) signature at the anchor.  The partition view collects the
    degenerate indices resolved to the negative side.
    """

    kind: str  # "signature" | "partition"
    signs: tuple[int, ...]
    base_signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("signature", "partition"):
            raise ProgramError(f"unknown branch kind {self.kind!r}")
        if len(self.signs) != len(self.base_signs):
            raise ProgramError("signature lengths differ")
        if any(sg == 0 for sg in self.signs):
            raise ProgramError("branch signature must be definite")
        if not SignatureVector(self.signs).dominates(SignatureVector(self.base_signs)):
            raise ProgramError("branch signature must dominate the anchor signature")

    @property
    def degenerate(self) -> tuple[int, ...]:
        return tuple(i for i, sg in enumerate(self.base_signs) if sg == 0)

    @property
    def partition(self) -> frozenset[int]:
        return frozenset(i for i in self.degenerate if self.signs[i] == -1)

    @property
    def label(self) -> str:
        if self.kind == "signature":
            return "σ=" + "".join("+" if sg > 0 else "-" for sg in self.signs)
        members = ",".join(str(i + 1) for i in sorted(self.partition))
        return "P={" + members + "}"


def branch_correspondence(spec: BranchSpec) -> BranchSpec:
    """The same branch seen from the other formulation (signature <-> partition)."""
    other = "partition" if spec.kind == "signature" else "signature"
    return BranchSpec(other, spec.signs, spec.base_signs)


@dataclass(frozen=True)
class SmoothBranchProblem:
    """A smooth quadratic NLP: min objective s.t. eqs = 0, ineqs >= 0, anchored at a feasible point."""

    n_vars: int
    objective: QuadraticFunc
    eqs: tuple[QuadraticFunc, ...]
    ineqs: tuple[QuadraticFunc, ...]
    spec: BranchSpec
    anchor: Vec
    form: str  # "anf" | "mpcc"

    @property
    def label(self) -> str:
        return self.spec.label

    def anchor_feasible(self) -> bool:
        return all(func.value(self.anchor) == 0 for func in self.eqs) and all(
            func.value(self.anchor) >= 0 for func in self.ineqs
        )

    def active_ineq_indices(self) -> tuple[int, ...]:
        return tuple(k for k, func in enumerate(self.ineqs) if func.value(self.anchor) == 0)

    def all_affine(self) -> bool:
        return all(func.is_affine() for func in itertools.chain(self.eqs, self.ineqs))


def _check_cap(n_degenerate: int, cap: int) -> None:
    if 2**n_degenerate > cap:
        raise BranchLimitError(
            f"{2**n_degenerate} branches from {n_degenerate} degenerate switches "
            f"exceed the cap of {cap}; the enumeration is exponential by nature, "
            "raise the cap explicitly to proceed"
        )


def branch_signature_matrix(p: AbsNormalProgram, signs: tuple[int, ...]) -> RatMatrix:
    """Block map (t, z) -> (t, Sigma z) used to substitute zeta = Sigma z."""
    dim = p.block_dim
    rows = [unit_vec(dim, i) for i in range(p.n_t)]
    for i in range(p.s):
        rows.append(tuple(Fraction(signs[i]) if j == p.n_t + i else ZERO for j in range(dim)))
    return RatMatrix.from_rows(rows, dim)


def build_anf_branch(p: AbsNormalProgram, e: EvalResult, spec: BranchSpec) -> SmoothBranchProblem:
    dim = p.block_dim
    subs = branch_signature_matrix(p, spec.signs)
    eqs = [func.compose_linear(subs) for func in p.c_e]
    for i, func in enumerate(p.c_z):
        eqs.append(
            func.compose_linear(subs).add_linear(vec_neg(unit_vec(dim, p.n_t + i)))
        )
    ineqs = [func.compose_linear(subs) for func in p.c_i]
    for i in range(p.s):
        row = tuple(Fraction(spec.signs[i]) if j == p.n_t + i else ZERO for j in range(dim))
        ineqs.append(QuadraticFunc.affine(dim, 0, row))
    return SmoothBranchProblem(
        n_vars=dim,
        objective=p.f.embed(dim, tuple(range(p.n_t))),
        eqs=tuple(eqs),
        ineqs=tuple(ineqs),
        spec=spec,
        anchor=e.t + e.z,
        form="anf",
    )


def enumerate_branches(
    p: AbsNormalProgram, e: EvalResult, cap: int = DEFAULT_BRANCH_CAP
) -> list[SmoothBranchProblem]:
    """All branch problems at the point, one per definite signature dominating it.

    Order is deterministic: degenerate entries are resolved + before -, first
    index varying slowest.
    """
    _check_cap(len(e.alpha), cap)
    out = []
    for refined in e.sigma.refinements():
        spec = BranchSpec("signature", refined.entries, e.sigma.entries)
        out.append(build_anf_branch(p, e, spec))
    return out


def build_mpcc_branch(mp: MpccProgram, point: MpccPoint, spec: BranchSpec) -> SmoothBranchProblem:
    dim = mp.dim
    eqs = list(mp.eq_funcs)
    ineqs = list(mp.ci_funcs)
    for i, sg in enumerate(spec.signs):
        u_row = unit_vec(dim, mp.u_index(i))
        v_row = unit_vec(dim, mp.v_index(i))
        if sg > 0:
            eqs.append(QuadraticFunc.affine(dim, 0, v_row))
            ineqs.append(QuadraticFunc.affine(dim, 0, u_row))
        else:
            eqs.append(QuadraticFunc.affine(dim, 0, u_row))
            ineqs.append(QuadraticFunc.affine(dim, 0, v_row))
    return SmoothBranchProblem(
        n_vars=dim,
        objective=mp.objective,
        eqs=tuple(eqs),
        ineqs=tuple(ineqs),
        spec=spec,
        anchor=point.coords,
        form="mpcc",
    )


def enumerate_mpcc_branches(
    mp: MpccProgram, point: MpccPoint, cap: int = DEFAULT_BRANCH_CAP
) -> list[SmoothBranchProblem]:
    """One branch per subset of degenerate pairs, aligned with the signature order."""
    base = point.base_signature
    _check_cap(len(point.degenerate), cap)
    out = []
    for refined in base.refinements():
        spec = BranchSpec("partition", refined.entries, base.entries)
        out.append(build_mpcc_branch(mp, point, spec))
    return out


# ---------------------------------------------------------------------------
# direction homeomorphisms


def merge_direction_matrix(n_x: int, s: int) -> RatMatrix:
    """(dx, du, dv) -> (dx, du - dv)."""
    dim = n_x + 2 * s
    rows = [unit_vec(dim, i) for i in range(n_x)]
    for i in range(s):
        row = [ZERO] * dim
        row[n_x + i] = ONE
        row[n_x + s + i] = -ONE
        rows.append(tuple(row))
    return RatMatrix.from_rows(rows, dim)


def split_direction_matrix(n_x: int, s: int, spec: BranchSpec) -> RatMatrix:
    """(dx, dz) -> (dx, du, dv) restricted to one branch, where it is linear.

    On the branch with signature ``signs``, positive indices carry the whole
    direction in the u-part and negative indices in the v-part.
    """
    dim_in = n_x + s
    rows = [unit_vec(dim_in, i) for i in range(n_x)]
    for i in range(s):
        rows.append(unit_vec(dim_in, n_x + i) if spec.signs[i] > 0 else zero_vec(dim_in))
    for i in range(s):
        rows.append(
            vec_neg(unit_vec(dim_in, n_x + i)) if spec.signs[i] < 0 else zero_vec(dim_in)
        )
    return RatMatrix.from_rows(rows, dim_in)


def split_direction(
    direction_x: Vec, direction_z: Vec, base_signs: tuple[int, ...]
) -> tuple[Vec, Vec, Vec]:
    """The inverse direction map on the full nonconvex cones (piecewise linear).

    Inactive indices keep their sign, degenerate ones are split into positive
    and negative parts.
    """
    du = []
    dv = []
    for i, sg in enumerate(base_signs):
        d = direction_z[i]
        if sg > 0:
            du.append(d)
            dv.append(ZERO)
        elif sg < 0:
            du.append(ZERO)
            dv.append(-d)
        else:
            du.append(max(d, ZERO))
            dv.append(max(-d, ZERO))
    return vec(direction_x), tuple(du), tuple(dv)


def merge_direction(direction: Vec, n_x: int, s: int) -> Vec:
    """(dx, du, dv) -> (dx, du - dv) applied to a concrete vector."""
    if len(direction) != n_x + 2 * s:
        raise ProgramError("direction has the wrong dimension")
    dx = direction[:n_x]
    du = direction[n_x : n_x + s]
    dv = direction[n_x + s :]
    return dx + tuple(a - b for a, b in zip(du, dv))
