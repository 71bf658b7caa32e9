"""Deciders for Abadie/Guignard kink and complementarity qualifications.

Everything reduces to exact cone comparisons over the branch decomposition:

* a branch Abadie condition compares the certified branch tangent cone with
  the branch linearized cone,
* the kink-level conditions compare the unions (respectively the duals of the
  unions) over all branches,
* the four formulations are analyzed with the same engine, with tangent
  knowledge transported along the branch homeomorphisms where a branch cannot
  certify its own tangent cone.

Verdicts are tri-state.  Holds and Fails always rest on re-checkable material
(certificates, witness rays, dual vectors); Unknown names the blocking
branches instead of guessing.  Problem files may supply trusted tangent-cone
annotations for branches outside every certificate class; those are
sanity-checked against the branch linearized cone on load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .anf import AbsNormalProgram, EvalResult, constraint_jacobians, evaluate
from .cones import (
    PolyCone,
    SubdivisionDepthExceeded,
    TangentCertificate,
    cone_contains,
    cone_image,
    dual_cone,
    dual_union,
    lin_cone_branch,
    tangent_cone_branch,
    union_covers,
)
from .ratmath import Vec, vec_neg
from .transforms import (
    DEFAULT_BRANCH_CAP,
    MpccPoint,
    MpccProgram,
    SlackProgram,
    SmoothBranchProblem,
    enumerate_branches,
    enumerate_mpcc_branches,
    mpcc_point_from_eval,
    split_direction_matrix,
    to_mpcc,
    to_slack,
)

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"

ABS_I = "abs-i"
ABS_E = "abs-e"
MPCC_I = "mpcc-i"
MPCC_E = "mpcc-e"

FORMULATIONS = (ABS_I, ABS_E, MPCC_I, MPCC_E)


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class CQVerdict:
    kind: str  # "akq" | "gkq" | "mpcc-acq" | "mpcc-gcq" | "branch-acq" | "branch-gcq"
    formulation: str
    status: str
    branch: str | None = None
    witness: Vec | None = None
    blocking: tuple[str, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class BranchAnalysis:
    problem: SmoothBranchProblem
    lin: PolyCone
    tangent_pieces: tuple[PolyCone, ...] | None
    tangent_source: str | None
    certificate: TangentCertificate

    @property
    def label(self) -> str:
        return self.problem.label

    @property
    def tangent_known(self) -> bool:
        return self.tangent_pieces is not None


@dataclass(frozen=True)
class FormulationAnalysis:
    key: str
    dim: int
    branches: tuple[BranchAnalysis, ...]

    def upper_members(self) -> list[PolyCone]:
        """Pieces of the tightest known superset of the tangent union."""
        out: list[PolyCone] = []
        for ba in self.branches:
            out.extend(ba.tangent_pieces if ba.tangent_known else (ba.lin,))
        return out

    def lower_members(self) -> list[PolyCone]:
        """Pieces of the known subset of the tangent union (certified branches only)."""
        out: list[PolyCone] = []
        for ba in self.branches:
            if ba.tangent_known:
                out.extend(ba.tangent_pieces)
        return out

    def blocking(self) -> tuple[str, ...]:
        return tuple(ba.label for ba in self.branches if not ba.tangent_known)


# ---------------------------------------------------------------------------
# tangent resolution (certificates first, then transported annotations)


def _validated_pieces(pieces, lin: PolyCone, label: str) -> tuple[PolyCone, ...]:
    for piece in pieces:
        if piece.dim != lin.dim:
            raise AnnotationError(f"annotation for branch {label} has wrong dimension")
        if not cone_contains(lin, piece):
            raise AnnotationError(
                f"annotation for branch {label} is not contained in the branch linearized cone"
            )
    return tuple(pieces)


def analyze_branch(
    b: SmoothBranchProblem, annotation_pieces=None
) -> BranchAnalysis:
    lin = lin_cone_branch(b)
    cone, cert = tangent_cone_branch(b)
    if cone is not None:
        return BranchAnalysis(b, lin, (cone,), cert.status, cert)
    if annotation_pieces is not None:
        pieces = _validated_pieces(annotation_pieces, lin, b.label)
        return BranchAnalysis(b, lin, pieces, "annotation", cert)
    return BranchAnalysis(b, lin, None, None, cert)


def check_branch_cq(ba: BranchAnalysis | SmoothBranchProblem, which: str) -> CQVerdict:
    """Abadie ("acq") or Guignard ("gcq") for one smooth branch problem."""
    if isinstance(ba, SmoothBranchProblem):
        ba = analyze_branch(ba)
    kind = "branch-acq" if which == "acq" else "branch-gcq"
    if not ba.tangent_known:
        return CQVerdict(
            kind,
            ba.problem.form,
            UNKNOWN,
            branch=ba.label,
            blocking=(ba.label,),
            note="branch tangent cone not certified (not affine, no full-rank or strict-direction certificate)",
        )
    if which == "acq":
        try:
            ok, witness = union_covers(list(ba.tangent_pieces), ba.lin)
        except SubdivisionDepthExceeded:
            return CQVerdict(kind, ba.problem.form, UNKNOWN, branch=ba.label, blocking=(ba.label,), note="subdivision depth cap exceeded")
        if ok:
            return CQVerdict(kind, ba.problem.form, HOLDS, branch=ba.label, note=f"tangent source: {ba.tangent_source}")
        return CQVerdict(kind, ba.problem.form, FAILS, branch=ba.label, witness=witness)
    dual_t = dual_union(list(ba.tangent_pieces), ba.lin.dim)
    dual_l = dual_cone(ba.lin)
    witness = containment_witness(dual_l, dual_t)
    if witness is None:
        return CQVerdict(kind, ba.problem.form, HOLDS, branch=ba.label, note=f"tangent source: {ba.tangent_source}")
    return CQVerdict(kind, ba.problem.form, FAILS, branch=ba.label, witness=witness)


def containment_witness(outer: PolyCone, inner: PolyCone) -> Vec | None:
    """A generator of ``inner`` outside ``outer``, or None if contained."""
    rays, lin = inner.generators()
    for r in rays:
        if not outer.contains_point(r):
            return r
    for l in lin:
        if not outer.contains_point(l):
            return l
        if not outer.contains_point(vec_neg(l)):
            return vec_neg(l)
    return None


def decide_kink_cq(fa: FormulationAnalysis, which: str) -> CQVerdict:
    """Equality of the tangent union with the linearized union ("abadie"), or of
    their duals ("guignard"), with sound bounds when some branches are uncertified."""
    kind = {
        ("abadie", ABS_I): "akq",
        ("abadie", ABS_E): "akq",
        ("guignard", ABS_I): "gkq",
        ("guignard", ABS_E): "gkq",
        ("abadie", MPCC_I): "mpcc-acq",
        ("abadie", MPCC_E): "mpcc-acq",
        ("guignard", MPCC_I): "mpcc-gcq",
        ("guignard", MPCC_E): "mpcc-gcq",
    }[(which, fa.key)]
    upper = fa.upper_members()
    all_known = not fa.blocking()
    if which == "abadie":
        for ba in fa.branches:
            try:
                ok, witness = union_covers(upper, ba.lin)
            except SubdivisionDepthExceeded:
                return CQVerdict(kind, fa.key, UNKNOWN, blocking=(ba.label,), note="subdivision depth cap exceeded")
            if not ok:
                # the witness lies in a linearized piece but outside every
                # possible tangent piece, so equality fails no matter how the
                # uncertified branches resolve
                return CQVerdict(kind, fa.key, FAILS, witness=witness, branch=ba.label)
        if all_known:
            return CQVerdict(kind, fa.key, HOLDS)
        return CQVerdict(kind, fa.key, UNKNOWN, blocking=fa.blocking())
    # Guignard: compare duals of the unions
    lin_dual = dual_union([ba.lin for ba in fa.branches], fa.dim)
    lower = fa.lower_members()
    lower_dual = dual_union(lower, fa.dim)  # full space when nothing is certified
    if containment_witness(lin_dual, lower_dual) is None:
        # dual of the tangent union is squeezed between lower_dual and lin_dual
        return CQVerdict(kind, fa.key, HOLDS)
    upper_dual = dual_union(upper, fa.dim)
    witness = containment_witness(lin_dual, upper_dual)
    if witness is not None:
        return CQVerdict(kind, fa.key, FAILS, witness=witness)
    if all_known:
        raise AssertionError("dual comparison must be decisive when all branches are certified")
    return CQVerdict(kind, fa.key, UNKNOWN, blocking=fa.blocking())


# ---------------------------------------------------------------------------
# formulation assembly


def _transport_pieces_to_mpcc(anf_ba: BranchAnalysis, mpcc_branch: SmoothBranchProblem, n_x: int, s: int):
    m = split_direction_matrix(n_x, s, mpcc_branch.spec)
    return tuple(cone_image(piece, m) for piece in anf_ba.tangent_pieces)


def lift_tangent_piece(
    base: AbsNormalProgram,
    base_eval: EvalResult,
    piece: PolyCone,
    z_signs: tuple[int, ...],
    w_signs: tuple[int, ...],
) -> PolyCone:
    """Tangent piece of a slack-form branch from the base-form piece.

    On the branch, the slack switching block solves to
    ``z_w = Sigma_w c_i(t, Sigma z)``, so the lifted feasible set is the graph
    of a smooth map over the base branch and its tangent cone is the graph of
    the differential over the base tangent cone.
    """
    n_t, s, m2 = base.n_t, base.s, base.m2
    new_dim = n_t + m2 + s + m2
    jac = constraint_jacobians(base, base_eval)

    def embed(row: Vec) -> Vec:
        out = [Fraction(0)] * new_dim
        for j in range(n_t):
            out[j] = row[j]
        for i in range(s):
            out[n_t + m2 + i] = row[n_t + i]
        return tuple(out)

    eq = [embed(r) for r in piece.eq_rows]
    ineq = [embed(r) for r in piece.ineq_rows]
    for k in range(m2):
        row = [Fraction(0)] * new_dim
        for j in range(n_t):
            row[j] = w_signs[k] * jac.d1_ci.entry(k, j)
        for i in range(s):
            row[n_t + m2 + i] = w_signs[k] * jac.d2_ci.entry(k, i) * z_signs[i]
        row[n_t + m2 + s + k] = Fraction(-1)
        eq.append(tuple(row))
    for k in range(m2):
        row = [Fraction(0)] * new_dim
        row[n_t + k] = Fraction(1)
        row[n_t + m2 + s + k] = Fraction(-1)
        eq.append(tuple(row))
    return PolyCone(new_dim, tuple(eq), tuple(ineq))


@dataclass(frozen=True)
class PointAnalysis:
    """All four formulations of one program anchored at one evaluation point."""

    program: AbsNormalProgram
    point_eval: EvalResult
    slack: SlackProgram
    slack_eval: EvalResult
    mpcc: MpccProgram
    mpcc_point: MpccPoint
    slack_mpcc: MpccProgram
    slack_mpcc_point: MpccPoint
    formulations: dict[str, FormulationAnalysis] = field(hash=False, default_factory=dict)

    def branch_pairs_abs_to_mpcc(self, slack_form: bool):
        """Aligned (abs branch, mpcc branch) analyses; alignment is positional
        because both enumerations refine the same base signature in the same order."""
        a = self.formulations[ABS_E if slack_form else ABS_I].branches
        m = self.formulations[MPCC_E if slack_form else MPCC_I].branches
        return list(zip(a, m, strict=True))

    def branch_pairs_i_to_e(self):
        """Aligned (inequality-form branch, slack-form branch) analyses: the
        slack branch restricted to the first switching block."""
        by_label = {ba.label: ba for ba in self.formulations[ABS_I].branches}
        s = self.program.s
        out = []
        for ba in self.formulations[ABS_E].branches:
            base_label = "σ=" + "".join(
                "+" if sg > 0 else "-" for sg in ba.problem.spec.signs[:s]
            )
            out.append((by_label[base_label], ba))
        return out


def analyze_point(
    p: AbsNormalProgram,
    t,
    annotations: dict[str, tuple[PolyCone, ...]] | None = None,
    w_signs: tuple[int, ...] | None = None,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> PointAnalysis:
    """Build and cross-link the four formulations at a point.

    ``annotations`` maps inequality-form branch labels to trusted tangent
    unions; they are transported to the other three formulations along the
    branch homeomorphisms whenever a branch cannot certify its own tangent
    cone.  ``w_signs`` chooses the slack representative (default nonnegative).
    """
    e = evaluate(p, t)
    if not e.is_feasible():
        raise ValueError("point is not feasible")
    annotations = annotations or {}

    slack = to_slack(p)
    ts = slack.lift_smooth_point(e, w_signs)
    se = evaluate(slack.program, ts)
    assert se.is_feasible(), "slack lifting must preserve feasibility"

    mpcc = to_mpcc(p)
    mpcc_point = mpcc_point_from_eval(e)
    mpcc_e = to_mpcc(slack.program)
    mpcc_e_point = mpcc_point_from_eval(se)

    abs_i_branches = enumerate_branches(p, e, branch_cap)
    abs_i = []
    for b in abs_i_branches:
        abs_i.append(analyze_branch(b, annotations.get(b.label)))

    abs_i_by_label = {ba.label: ba for ba in abs_i}

    abs_e_branches = enumerate_branches(slack.program, se, branch_cap)
    abs_e = []
    for b in abs_e_branches:
        signs = b.spec.signs
        base_label = "σ=" + "".join("+" if sg > 0 else "-" for sg in signs[: p.s])
        pieces = None
        base_ba = abs_i_by_label[base_label]
        if base_ba.tangent_pieces is not None and base_ba.tangent_source is not None:
            lifted = tuple(
                lift_tangent_piece(p, e, piece, signs[: p.s], signs[p.s :])
                for piece in base_ba.tangent_pieces
            )
            pieces = lifted
        ba = analyze_branch(b)
        if not ba.tangent_known and pieces is not None:
            lin = ba.lin
            pieces = _validated_pieces(pieces, lin, b.label)
            ba = BranchAnalysis(b, lin, pieces, f"lift:{base_ba.tangent_source}", ba.certificate)
        abs_e.append(ba)

    def mpcc_side(mp, point, anf_analyses, branches):
        out = []
        for anf_ba, b in zip(anf_analyses, branches, strict=True):
            assert anf_ba.problem.spec.signs == b.spec.signs
            ba = analyze_branch(b)
            if not ba.tangent_known and anf_ba.tangent_known:
                pieces = _transport_pieces_to_mpcc(anf_ba, b, mp.n_x, mp.s)
                pieces = _validated_pieces(pieces, ba.lin, b.label)
                ba = BranchAnalysis(
                    b, ba.lin, pieces, f"transport:{anf_ba.tangent_source}", ba.certificate
                )
            out.append(ba)
        return out

    mpcc_i = mpcc_side(mpcc, mpcc_point, abs_i, enumerate_mpcc_branches(mpcc, mpcc_point, branch_cap))
    mpcc_ee = mpcc_side(
        mpcc_e, mpcc_e_point, abs_e, enumerate_mpcc_branches(mpcc_e, mpcc_e_point, branch_cap)
    )

    formulations = {
        ABS_I: FormulationAnalysis(ABS_I, p.n_t + p.s, tuple(abs_i)),
        ABS_E: FormulationAnalysis(ABS_E, slack.program.n_t + slack.program.s, tuple(abs_e)),
        MPCC_I: FormulationAnalysis(MPCC_I, mpcc.dim, tuple(mpcc_i)),
        MPCC_E: FormulationAnalysis(MPCC_E, mpcc_e.dim, tuple(mpcc_ee)),
    }
    return PointAnalysis(
        p, e, slack, se, mpcc, mpcc_point, mpcc_e, mpcc_e_point, formulations
    )


# ---------------------------------------------------------------------------
# public entry points per the module contract


def check_akq(p: AbsNormalProgram, e: EvalResult, annotations=None) -> CQVerdict:
    pa = analyze_point(p, e.t, annotations)
    return decide_kink_cq(pa.formulations[ABS_I], "abadie")


def check_gkq(p: AbsNormalProgram, e: EvalResult, annotations=None) -> CQVerdict:
    pa = analyze_point(p, e.t, annotations)
    return decide_kink_cq(pa.formulations[ABS_I], "guignard")


def check_mpcc_cq(
    mp: MpccProgram,
    point: MpccPoint,
    which: str,
    tangent_overrides: dict[str, tuple[PolyCone, ...]] | None = None,
) -> CQVerdict:
    """MPCC Abadie ("acq") or Guignard ("gcq") at the point.

    ``tangent_overrides`` may supply trusted tangent pieces per branch label
    (already in counterpart coordinates)."""
    branches = enumerate_mpcc_branches(mp, point)
    overrides = tangent_overrides or {}
    analyses = tuple(analyze_branch(b, overrides.get(b.label)) for b in branches)
    fa = FormulationAnalysis(MPCC_I, mp.dim, analyses)
    return decide_kink_cq(fa, "abadie" if which == "acq" else "guignard")


# ---------------------------------------------------------------------------
# the relations diagram


@dataclass(frozen=True)
class RelationArrow:
    arrow_id: str
    kind: str  # "iff" | "implies"
    lhs: str
    lhs_status: str
    rhs: str
    rhs_status: str
    consistent: bool
    converse_observation: str | None = None
    note: str = ""


@dataclass(frozen=True)
class RelationReport:
    arrows: tuple[RelationArrow, ...]

    @property
    def consistent(self) -> bool:
        return all(a.consistent for a in self.arrows)

    def inconsistencies(self) -> list[RelationArrow]:
        return [a for a in self.arrows if not a.consistent]


def _implies_consistent(lhs: str, rhs: str) -> bool:
    return not (lhs == HOLDS and rhs == FAILS)


def _iff_consistent(lhs: str, rhs: str) -> bool:
    if UNKNOWN in (lhs, rhs):
        return True
    return lhs == rhs


def _aggregate(statuses) -> str:
    statuses = list(statuses)
    if any(s == FAILS for s in statuses):
        return FAILS
    if any(s == UNKNOWN for s in statuses):
        return UNKNOWN
    return HOLDS


def _converse(lhs: str, rhs: str) -> str:
    # for a proved implication lhs <= rhs (rhs => lhs is NOT proved): observe
    # whether the unproved direction happened to hold at this point
    if UNKNOWN in (lhs, rhs):
        return "untestable"
    return "agrees" if lhs == rhs else "disagrees"


def verify_relations(
    pa: PointAnalysis,
) -> tuple[RelationReport, dict[tuple[str, str], CQVerdict], dict[str, list[tuple[CQVerdict, CQVerdict]]]]:
    """Evaluate every qualification in all four formulations and check each
    proved implication; one-sided results are only tested in the proved
    direction, with the converse observation logged as data."""
    kink: dict[tuple[str, str], CQVerdict] = {}
    for key in FORMULATIONS:
        fa = pa.formulations[key]
        kink[("abadie", key)] = decide_kink_cq(fa, "abadie")
        kink[("guignard", key)] = decide_kink_cq(fa, "guignard")

    branch_verdicts: dict[str, list[tuple[CQVerdict, CQVerdict]]] = {}
    for key in FORMULATIONS:
        fa = pa.formulations[key]
        branch_verdicts[key] = [
            (check_branch_cq(ba, "acq"), check_branch_cq(ba, "gcq")) for ba in fa.branches
        ]

    arrows: list[RelationArrow] = []

    def implies(arrow_id, lhs_name, lhs_status, rhs_name, rhs_status, one_sided=False, note=""):
        arrows.append(
            RelationArrow(
                arrow_id,
                "implies",
                lhs_name,
                lhs_status,
                rhs_name,
                rhs_status,
                _implies_consistent(lhs_status, rhs_status),
                _converse(lhs_status, rhs_status) if one_sided else None,
                note,
            )
        )

    def iff(arrow_id, lhs_name, lhs_status, rhs_name, rhs_status, note=""):
        arrows.append(
            RelationArrow(
                arrow_id,
                "iff",
                lhs_name,
                lhs_status,
                rhs_name,
                rhs_status,
                _iff_consistent(lhs_status, rhs_status),
                None,
                note,
            )
        )

    for key, tag in ((ABS_I, "AKQ"), (ABS_E, "AKQ")):
        acq_all = _aggregate(v.status for v, _ in branch_verdicts[key])
        gcq_all = _aggregate(v.status for _, v in branch_verdicts[key])
        implies(
            f"branch-acq-all=>abadie[{key}]",
            f"ACQ for all branches ({key})",
            acq_all,
            f"{tag} ({key})",
            kink[("abadie", key)].status,
        )
        implies(
            f"branch-gcq-all=>guignard[{key}]",
            f"GCQ for all branches ({key})",
            gcq_all,
            f"GKQ ({key})",
            kink[("guignard", key)].status,
        )
    for key in (MPCC_I, MPCC_E):
        acq_all = _aggregate(v.status for v, _ in branch_verdicts[key])
        gcq_all = _aggregate(v.status for _, v in branch_verdicts[key])
        implies(
            f"branch-acq-all=>abadie[{key}]",
            f"ACQ for all branches ({key})",
            acq_all,
            f"MPCC-ACQ ({key})",
            kink[("abadie", key)].status,
        )
        implies(
            f"branch-gcq-all=>guignard[{key}]",
            f"GCQ for all branches ({key})",
            gcq_all,
            f"MPCC-GCQ ({key})",
            kink[("guignard", key)].status,
        )

    iff(
        "abadie[abs-i]<=>abadie[mpcc-i]",
        "AKQ (abs-i)",
        kink[("abadie", ABS_I)].status,
        "MPCC-ACQ (mpcc-i)",
        kink[("abadie", MPCC_I)].status,
    )
    iff(
        "abadie[abs-e]<=>abadie[mpcc-e]",
        "AKQ (abs-e)",
        kink[("abadie", ABS_E)].status,
        "MPCC-ACQ (mpcc-e)",
        kink[("abadie", MPCC_E)].status,
    )
    iff(
        "abadie[abs-i]<=>abadie[abs-e]",
        "AKQ (abs-i)",
        kink[("abadie", ABS_I)].status,
        "AKQ (abs-e)",
        kink[("abadie", ABS_E)].status,
    )
    iff(
        "abadie[mpcc-i]<=>abadie[mpcc-e]",
        "MPCC-ACQ (mpcc-i)",
        kink[("abadie", MPCC_I)].status,
        "MPCC-ACQ (mpcc-e)",
        kink[("abadie", MPCC_E)].status,
        note="implied by the other Abadie equivalences",
    )
    implies(
        "guignard[abs-e]=>guignard[abs-i]",
        "GKQ (abs-e)",
        kink[("guignard", ABS_E)].status,
        "GKQ (abs-i)",
        kink[("guignard", ABS_I)].status,
        one_sided=True,
    )
    implies(
        "guignard[mpcc-e]=>guignard[mpcc-i]",
        "MPCC-GCQ (mpcc-e)",
        kink[("guignard", MPCC_E)].status,
        "MPCC-GCQ (mpcc-i)",
        kink[("guignard", MPCC_I)].status,
        one_sided=True,
    )
    implies(
        "guignard[mpcc-i]=>guignard[abs-i]",
        "MPCC-GCQ (mpcc-i)",
        kink[("guignard", MPCC_I)].status,
        "GKQ (abs-i)",
        kink[("guignard", ABS_I)].status,
        one_sided=True,
    )
    implies(
        "guignard[mpcc-e]=>guignard[abs-e]",
        "MPCC-GCQ (mpcc-e)",
        kink[("guignard", MPCC_E)].status,
        "GKQ (abs-e)",
        kink[("guignard", ABS_E)].status,
        one_sided=True,
    )

    for slack_form in (False, True):
        abs_key = ABS_E if slack_form else ABS_I
        mpcc_key = MPCC_E if slack_form else MPCC_I
        abs_list = branch_verdicts[abs_key]
        mpcc_list = branch_verdicts[mpcc_key]
        for (a_acq, a_gcq), (m_acq, m_gcq) in zip(abs_list, mpcc_list, strict=True):
            iff(
                f"branch-acq[{abs_key}:{a_acq.branch}]<=>branch-acq[{mpcc_key}:{m_acq.branch}]",
                f"ACQ {abs_key} {a_acq.branch}",
                a_acq.status,
                f"ACQ {mpcc_key} {m_acq.branch}",
                m_acq.status,
            )
            iff(
                f"branch-gcq[{abs_key}:{a_gcq.branch}]<=>branch-gcq[{mpcc_key}:{m_gcq.branch}]",
                f"GCQ {abs_key} {a_gcq.branch}",
                a_gcq.status,
                f"GCQ {mpcc_key} {m_gcq.branch}",
                m_gcq.status,
            )

    abs_i_verdicts = {
        v.branch: (v, g) for v, g in branch_verdicts[ABS_I]
    }
    for base_ba, e_ba in pa.branch_pairs_i_to_e():
        e_index = [ba.label for ba in pa.formulations[ABS_E].branches].index(e_ba.label)
        e_acq, e_gcq = branch_verdicts[ABS_E][e_index]
        i_acq, i_gcq = abs_i_verdicts[base_ba.label]
        iff(
            f"branch-acq[abs-i:{base_ba.label}]<=>branch-acq[abs-e:{e_ba.label}]",
            f"ACQ abs-i {base_ba.label}",
            i_acq.status,
            f"ACQ abs-e {e_ba.label}",
            e_acq.status,
        )
        iff(
            f"branch-gcq[abs-i:{base_ba.label}]<=>branch-gcq[abs-e:{e_ba.label}]",
            f"GCQ abs-i {base_ba.label}",
            i_gcq.status,
            f"GCQ abs-e {e_ba.label}",
            e_gcq.status,
        )

    return RelationReport(tuple(arrows)), kink, branch_verdicts
