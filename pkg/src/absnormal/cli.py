"""Command line interface: batch verification with self-contained JSON reports.

Subcommands: eval, branches, reformulate, cones, check-cq,
check-stationarity, verify-relations, and corpus run.  Reports are
deterministic (stable ordering, canonical rational strings, no timestamps):
identical inputs produce byte-identical output.  ``--recheck`` re-validates
every inline certificate and witness against the problem data by substitution.

Exit codes: 0 all holds/consistent, 1 some verdict fails (for ``corpus run``:
some expectation missed), 2 some verdict unknown, 3 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .anf import AbsNormalProgram, evaluate
from .cones import PolyCone, dual_cone, dual_union, lin_cone_branch
from .cq import (
    ABS_E,
    ABS_I,
    FAILS,
    FORMULATIONS,
    HOLDS,
    MPCC_E,
    MPCC_I,
    UNKNOWN,
    CQVerdict,
    PointAnalysis,
    analyze_point,
    check_branch_cq,
    decide_kink_cq,
    verify_relations,
)
from .problemfile import (
    CORPUS_NAMES,
    ProblemFile,
    ProblemFileError,
    ProblemPoint,
    load_corpus_problem,
    parse_problem,
)
from .ratmath import LpCertificate, LpResult, dot, rat, vec, verify_certificate
from .stationarity import (
    BranchDualCertificate,
    MultiplierSet,
    StationarityVerdict,
    build_case_problem,
    check_b_stationary,
    check_m_stationary_anf,
    check_m_stationary_mpcc,
    multiplier_system,
    verify_branch_dual_certificate,
    verify_multipliers,
)
from .transforms import (
    BranchLimitError,
    enumerate_branches,
    enumerate_mpcc_branches,
    mpcc_point_from_eval,
    to_mpcc,
    to_slack,
)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


# ---------------------------------------------------------------------------
# serialization helpers


def _s(x) -> str:
    return str(Fraction(x))


def _svec(v) -> list[str]:
    return [_s(x) for x in v]


def _ser_func(func) -> dict:
    out = {"constant": _s(func.constant), "linear": _svec(func.linear)}
    if func.quadratic is not None and not func.quadratic.is_zero():
        out["quadratic"] = [_svec(r) for r in func.quadratic.rows]
    return out


def _ser_cone(cone: PolyCone) -> dict:
    return {"eq": [_svec(r) for r in cone.eq_rows], "ineq": [_svec(r) for r in cone.ineq_rows]}


def _ser_cone_with_generators(cone: PolyCone) -> dict:
    out = _ser_cone(cone)
    rays, lineality = cone.generators()
    out["rays"] = [_svec(r) for r in rays]
    out["lineality"] = [_svec(l) for l in lineality]
    return out


def _parse_cone(data: dict, dim: int) -> PolyCone:
    return PolyCone.from_rows(dim, data.get("eq", []), data.get("ineq", []))


def _ser_lp_certificate(cert: LpCertificate) -> dict:
    out = {"kind": cert.kind}
    if cert.point is not None:
        out["point"] = _svec(cert.point)
    if cert.ray is not None:
        out["ray"] = _svec(cert.ray)
    if cert.dual_eq is not None:
        out["dual_eq"] = _svec(cert.dual_eq)
    if cert.dual_ineq is not None:
        out["dual_ineq"] = _svec(cert.dual_ineq)
    if cert.margin is not None:
        out["margin"] = _s(cert.margin)
    return out


def _parse_lp_certificate(data: dict) -> LpCertificate:
    return LpCertificate(
        kind=data["kind"],
        point=vec(data["point"]) if "point" in data else None,
        ray=vec(data["ray"]) if "ray" in data else None,
        dual_eq=vec(data["dual_eq"]) if "dual_eq" in data else None,
        dual_ineq=vec(data["dual_ineq"]) if "dual_ineq" in data else None,
        margin=rat(data["margin"]) if "margin" in data else None,
    )


def _ser_cq_verdict(v: CQVerdict) -> dict:
    out = {"kind": v.kind, "formulation": v.formulation, "status": v.status}
    if v.branch is not None:
        out["branch"] = v.branch
    if v.witness is not None:
        out["witness"] = _svec(v.witness)
    if v.blocking:
        out["blocking"] = list(v.blocking)
    if v.note:
        out["note"] = v.note
    return out


def _ser_multipliers(ms: MultiplierSet) -> dict:
    return {
        "lam_e": _svec(ms.lam_e),
        "lam_i": _svec(ms.lam_i),
        "lam_z": _svec(ms.lam_z),
        "mu_u": _svec(ms.mu_u),
        "mu_v": _svec(ms.mu_v),
    }


def _ser_stationarity(v: StationarityVerdict) -> dict:
    out = {"kind": v.kind, "status": v.status}
    if v.multipliers is not None:
        out["multipliers"] = _ser_multipliers(v.multipliers)
    if v.case is not None:
        out["case"] = list(v.case)
    if v.failing_branch is not None:
        out["failing_branch"] = v.failing_branch
    if v.descent is not None:
        out["descent"] = _svec(v.descent)
    if v.branch_certificates:
        out["branch_certificates"] = [
            {"branch": c.branch, "dual_eq": _svec(c.dual_eq), "dual_ineq": _svec(c.dual_ineq)}
            for c in v.branch_certificates
        ]
    if v.failed_cases:
        out["failed_cases"] = [
            {"assignment": list(c.assignment), "certificate": _ser_lp_certificate(c.certificate)}
            for c in v.failed_cases
        ]
    if v.note:
        out["note"] = v.note
    return out


# ---------------------------------------------------------------------------
# report sections


def _eval_section(pf: ProblemFile, point: ProblemPoint) -> dict:
    e = evaluate(pf.program, point.t)
    return {
        "label": point.label,
        "t": _svec(e.t),
        "z": _svec(e.z),
        "signature": list(e.sigma.entries),
        "active_switches": [i + 1 for i in e.alpha],
        "active_inequalities": [k + 1 for k in e.active_i],
        "equality_residuals": _svec(e.residual_e),
        "inequality_values": _svec(e.value_i),
        "feasible": e.is_feasible(),
    }


def _cones_section(pa: PointAnalysis, include_dual: bool, forms, with_generators: bool = False) -> dict:
    ser = _ser_cone_with_generators if with_generators else _ser_cone
    out = {}
    for key in FORMULATIONS:
        if forms and key not in forms:
            continue
        fa = pa.formulations[key]
        branches = []
        for ba in fa.branches:
            entry = {
                "branch": ba.label,
                "lin": ser(ba.lin),
                "tangent": [ser(p) for p in ba.tangent_pieces] if ba.tangent_known else None,
                "tangent_source": ba.tangent_source,
            }
            if include_dual:
                entry["lin_dual"] = _ser_cone(dual_cone(ba.lin))
                if ba.tangent_known:
                    entry["tangent_dual"] = _ser_cone(dual_union(list(ba.tangent_pieces), fa.dim))
            branches.append(entry)
        section = {"dim": fa.dim, "branches": branches}
        if include_dual:
            section["lin_union_dual"] = _ser_cone(dual_union([b.lin for b in fa.branches], fa.dim))
        out[key] = section
    return out


def _cq_section(pa: PointAnalysis, which: set[str], include_branches: bool) -> dict:
    out = {}
    if "akq" in which:
        out["akq"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[ABS_I], "abadie"))
    if "gkq" in which:
        out["gkq"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[ABS_I], "guignard"))
    if "mpcc-acq" in which:
        out["mpcc-acq"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[MPCC_I], "abadie"))
    if "mpcc-gcq" in which:
        out["mpcc-gcq"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[MPCC_I], "guignard"))
    if "slack" in which:
        out["akq-slack"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[ABS_E], "abadie"))
        out["gkq-slack"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[ABS_E], "guignard"))
        out["mpcc-acq-slack"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[MPCC_E], "abadie"))
        out["mpcc-gcq-slack"] = _ser_cq_verdict(decide_kink_cq(pa.formulations[MPCC_E], "guignard"))
    if include_branches:
        branch_out = {}
        for key in FORMULATIONS:
            branch_out[key] = [
                {
                    "branch": ba.label,
                    "acq": _ser_cq_verdict(check_branch_cq(ba, "acq")),
                    "gcq": _ser_cq_verdict(check_branch_cq(ba, "gcq")),
                }
                for ba in pa.formulations[key].branches
            ]
        out["branches"] = branch_out
    return out


def _stationarity_section(pa: PointAnalysis, which: set[str], forms: set[str]) -> dict:
    out = {}
    if "m" in which:
        if "anf" in forms:
            out["m-anf"] = _ser_stationarity(check_m_stationary_anf(pa.program, pa.point_eval))
        if "mpcc" in forms:
            out["m-mpcc"] = _ser_stationarity(check_m_stationary_mpcc(pa.mpcc, pa.mpcc_point))
    if "b" in which:
        if "anf" in forms:
            out["b-anf"] = _ser_stationarity(check_b_stationary(pa.program, pa.point_eval, "anf"))
        if "mpcc" in forms:
            out["b-mpcc"] = _ser_stationarity(
                check_b_stationary(pa.mpcc, pa.mpcc_point, "mpcc")
            )
    return out


def _relations_section(pa: PointAnalysis) -> dict:
    report, kink, branch_verdicts = verify_relations(pa)
    arrows = []
    for a in report.arrows:
        entry = {
            "id": a.arrow_id,
            "kind": a.kind,
            "lhs": {"name": a.lhs, "status": a.lhs_status},
            "rhs": {"name": a.rhs, "status": a.rhs_status},
            "consistent": a.consistent,
        }
        if a.converse_observation is not None:
            entry["converse_observation"] = a.converse_observation
        if a.note:
            entry["note"] = a.note
        arrows.append(entry)
    kink_out = {}
    for (which, key), verdict in sorted(kink.items()):
        kink_out[f"{which}[{key}]"] = _ser_cq_verdict(verdict)
    return {"consistent": report.consistent, "arrows": arrows, "kink_verdicts": kink_out}


def _branches_section(pa: PointAnalysis, forms) -> dict:
    out = {}
    for key in FORMULATIONS:
        if forms and key not in forms:
            continue
        fa = pa.formulations[key]
        out[key] = [
            {
                "branch": ba.label,
                "variables": ba.problem.n_vars,
                "equalities": len(ba.problem.eqs),
                "inequalities": len(ba.problem.ineqs),
                "anchor": _svec(ba.problem.anchor),
                "anchor_feasible": ba.problem.anchor_feasible(),
            }
            for ba in fa.branches
        ]
    return out


# ---------------------------------------------------------------------------
# verdict aggregation and rechecking


def _collect_statuses(node, out: list[str]) -> None:
    if isinstance(node, dict):
        for key, value in node.items():
            if key == "status" and isinstance(value, str):
                out.append(value)
            elif key == "consistent" and value is False:
                out.append(FAILS)
            else:
                _collect_statuses(value, out)
    elif isinstance(node, list):
        for item in node:
            _collect_statuses(item, out)


def exit_code_for_report(report: dict) -> int:
    statuses: list[str] = []
    _collect_statuses(report, statuses)
    if any(s == FAILS for s in statuses):
        return EXIT_FAILS
    if any(s == UNKNOWN for s in statuses):
        return EXIT_UNKNOWN
    return EXIT_OK


def recheck_report(pf: ProblemFile, report: dict) -> list[str]:
    """Re-validate every certificate and witness in the report by substitution."""
    errors: list[str] = []
    for point_entry in report.get("points", []):
        label = point_entry.get("label", "?")
        t = vec(point_entry["t"]) if "t" in point_entry else pf.point(label).t
        e = evaluate(pf.program, t)
        prefix = f"point {label}"
        if "eval" in point_entry:
            ev = point_entry["eval"]
            if vec(ev["z"]) != e.z:
                errors.append(f"{prefix}: reported switching solution does not re-solve")
            if tuple(ev["signature"]) != e.sigma.entries:
                errors.append(f"{prefix}: reported signature mismatch")
        cones = point_entry.get("cones", {})
        cq = point_entry.get("cq", {})
        for name, verdict in cq.items():
            if name == "branches":
                continue
            errors.extend(_recheck_kink_verdict(prefix + f" {name}", verdict, cones))
        stat = point_entry.get("stationarity", {})
        for name, verdict in stat.items():
            errors.extend(_recheck_stationarity(pf, e, prefix + f" {name}", verdict))
    return errors


def _recheck_kink_verdict(prefix: str, verdict: dict, cones: dict) -> list[str]:
    errors: list[str] = []
    status = verdict.get("status")
    witness = verdict.get("witness")
    if status == FAILS and witness is None:
        errors.append(f"{prefix}: fails without a witness")
    if witness is None:
        return errors
    w = vec(witness)
    form = verdict.get("formulation")
    section = cones.get(form)
    if section is None:
        return errors  # witness not re-checkable without the cone section
    dim = section["dim"]
    branches = section["branches"]
    kind = verdict.get("kind", "")
    if kind in ("akq", "mpcc-acq", "branch-acq"):
        # a valid Abadie witness is linearized-feasible somewhere but escapes
        # the tangent upper bound of every branch
        in_lin = False
        for entry in branches:
            lin = _parse_cone(entry["lin"], dim)
            if lin.contains_point(w):
                in_lin = True
            pieces = entry["tangent"]
            upper = [_parse_cone(p, dim) for p in pieces] if pieces is not None else [lin]
            if any(piece.contains_point(w) for piece in upper):
                errors.append(
                    f"{prefix}: witness lies inside the tangent bound of branch {entry['branch']}"
                )
        if not in_lin:
            errors.append(f"{prefix}: witness is not linearized-feasible")
    elif kind in ("gkq", "mpcc-gcq", "branch-gcq"):
        # a valid Guignard witness pairs nonnegatively with the whole tangent
        # upper bound and strictly negatively with some linearized direction
        escapes_lin_dual = False
        for entry in branches:
            lin = _parse_cone(entry["lin"], dim)
            pieces = entry["tangent"]
            upper = [_parse_cone(p, dim) for p in pieces] if pieces is not None else [lin]
            for piece in upper:
                if _escapes_dual(w, piece):
                    errors.append(
                        f"{prefix}: witness is not in the dual of the tangent bound "
                        f"of branch {entry['branch']}"
                    )
            if _escapes_dual(w, lin):
                escapes_lin_dual = True
        if not escapes_lin_dual:
            errors.append(f"{prefix}: witness does not escape the linearized dual")
    return errors


def _escapes_dual(w, cone: PolyCone) -> bool:
    """Whether some generator of the cone pairs negatively with w."""
    rays, lineality = cone.generators()
    for g in rays:
        if dot(w, g) < 0:
            return True
    for l in lineality:
        if dot(w, l) != 0:
            return True
    return False


def _recheck_stationarity(pf: ProblemFile, e, prefix: str, verdict: dict) -> list[str]:
    errors: list[str] = []
    kind = verdict.get("kind", "")
    status = verdict.get("status")
    if kind.startswith("m-"):
        if kind == "m-anf":
            system = multiplier_system(pf.program, e)
        else:
            mp = to_mpcc(pf.program)
            system = multiplier_system(mp, mpcc_point_from_eval(e))
        if status == HOLDS:
            ms_data = verdict["multipliers"]
            ms = MultiplierSet(
                vec(ms_data["lam_e"]),
                vec(ms_data["lam_i"]),
                vec(ms_data["lam_z"]),
                vec(ms_data["mu_u"]),
                vec(ms_data["mu_v"]),
            )
            for msg in verify_multipliers(system, ms):
                errors.append(f"{prefix}: {msg}")
        elif status == FAILS:
            for case in verdict.get("failed_cases", []):
                problem = build_case_problem(system, tuple(case["assignment"]))
                cert = _parse_lp_certificate(case["certificate"])
                result = _result_for_infeasibility(cert)
                for msg in verify_certificate(problem, result):
                    errors.append(f"{prefix} case {case['assignment']}: {msg}")
    elif kind.startswith("b-"):
        if kind == "b-anf":
            branches = enumerate_branches(pf.program, e)
        else:
            mp = to_mpcc(pf.program)
            branches = enumerate_mpcc_branches(mp, mpcc_point_from_eval(e))
        by_label = {b.label: b for b in branches}
        if status == HOLDS:
            for entry in verdict.get("branch_certificates", []):
                b = by_label[entry["branch"]]
                cone = lin_cone_branch(b)
                gradient = b.objective.gradient(b.anchor)
                cert = BranchDualCertificate(
                    entry["branch"], vec(entry["dual_eq"]), vec(entry["dual_ineq"])
                )
                for msg in verify_branch_dual_certificate(cert, cone, gradient):
                    errors.append(f"{prefix} branch {entry['branch']}: {msg}")
        elif status == FAILS:
            b = by_label[verdict["failing_branch"]]
            cone = lin_cone_branch(b)
            descent = vec(verdict["descent"])
            if not cone.contains_point(descent):
                errors.append(f"{prefix}: descent direction is not linearized-feasible")
            if dot(b.objective.gradient(b.anchor), descent) >= 0:
                errors.append(f"{prefix}: descent direction does not descend")
    return errors


def _result_for_infeasibility(cert: LpCertificate) -> LpResult:
    return LpResult("infeasible", None, cert)


# ---------------------------------------------------------------------------
# commands


def _report_skeleton(command: str, pf: ProblemFile | None) -> dict:
    out = {"tool": {"name": "absnormal", "version": __version__}, "command": command}
    if pf is not None:
        out["problem"] = {"name": pf.name, "digest": pf.digest}
    return out


def _selected_points(pf: ProblemFile, point_arg: str | None) -> list[ProblemPoint]:
    if point_arg is not None:
        return [pf.point(point_arg)]
    if not pf.points:
        raise ProblemFileError("the problem file lists no points; pass --point")
    return list(pf.points)


def _analyze(pf: ProblemFile, point: ProblemPoint, cap: int) -> PointAnalysis:
    return analyze_point(pf.program, point.t, pf.annotations, branch_cap=cap)


def cmd_eval(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("eval", pf)
    report["points"] = [
        {"label": p.label, "t": _svec(p.t), "eval": _eval_section(pf, p)}
        for p in _selected_points(pf, args.point)
    ]
    return report


def cmd_branches(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("branches", pf)
    forms = {args.form} if args.form else None
    points = []
    for p in _selected_points(pf, args.point):
        pa = _analyze(pf, p, args.branch_cap)
        points.append(
            {"label": p.label, "t": _svec(p.t), "branches": _branches_section(pa, forms)}
        )
    report["points"] = points
    return report


def cmd_reformulate(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("reformulate", pf)
    p = pf.program
    if args.slack or args.slack_mpcc:
        lifted = to_slack(p).program
        report["slack"] = _ser_program(lifted)
    if args.mpcc:
        report["mpcc"] = _ser_mpcc(to_mpcc(p))
    if args.slack_mpcc:
        report["slack-mpcc"] = _ser_mpcc(to_mpcc(to_slack(p)))
    return report


def _ser_program(p: AbsNormalProgram) -> dict:
    return {
        "dimensions": {"n_t": p.n_t, "s": p.s, "m1": p.m1, "m2": p.m2},
        "objective": _ser_func(p.f),
        "equalities": [_ser_func(f) for f in p.c_e],
        "inequalities": [_ser_func(f) for f in p.c_i],
        "switching": [_ser_func(f) for f in p.c_z],
    }


def _ser_mpcc(mp) -> dict:
    return {
        "variables": {"n_x": mp.n_x, "pairs": mp.s},
        "objective": _ser_func(mp.objective),
        "equalities": [_ser_func(f) for f in mp.ce_funcs],
        "switching": [_ser_func(f) for f in mp.cz_funcs],
        "inequalities": [_ser_func(f) for f in mp.ci_funcs],
        "complementarity_pairs": [
            {"u": mp.u_index(i) + 1, "v": mp.v_index(i) + 1} for i in range(mp.s)
        ],
    }


def cmd_cones(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("cones", pf)
    forms = {args.form} if args.form else None
    points = []
    for p in _selected_points(pf, args.point):
        pa = _analyze(pf, p, args.branch_cap)
        points.append(
            {
                "label": p.label,
                "t": _svec(p.t),
                "cones": _cones_section(pa, args.dual, forms, with_generators=True),
            }
        )
    report["points"] = points
    return report


def cmd_check_cq(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("check-cq", pf)
    which: set[str] = set()
    if args.all:
        which = {"akq", "gkq", "mpcc-acq", "mpcc-gcq", "slack"}
    if args.akq:
        which.add("akq")
    if args.gkq:
        which.add("gkq")
    if args.mpcc_acq:
        which.add("mpcc-acq")
    if args.mpcc_gcq:
        which.add("mpcc-gcq")
    include_branches = args.branches or args.all
    if not which and not include_branches:
        which = {"akq", "gkq", "mpcc-acq", "mpcc-gcq"}
    points = []
    for p in _selected_points(pf, args.point):
        pa = _analyze(pf, p, args.branch_cap)
        points.append(
            {
                "label": p.label,
                "t": _svec(p.t),
                "eval": _eval_section(pf, p),
                "cq": _cq_section(pa, which, include_branches),
                "cones": _cones_section(pa, False, None),
            }
        )
    report["points"] = points
    return report


def cmd_check_stationarity(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("check-stationarity", pf)
    which = set()
    if args.m:
        which.add("m")
    if args.b:
        which.add("b")
    if not which:
        which = {"m", "b"}
    forms = {args.form} if args.form else {"anf", "mpcc"}
    points = []
    for p in _selected_points(pf, args.point):
        pa = _analyze(pf, p, args.branch_cap)
        points.append(
            {
                "label": p.label,
                "t": _svec(p.t),
                "stationarity": _stationarity_section(pa, which, forms),
            }
        )
    report["points"] = points
    return report


def cmd_verify_relations(pf: ProblemFile, args) -> dict:
    report = _report_skeleton("verify-relations", pf)
    points = []
    for p in _selected_points(pf, args.point):
        pa = _analyze(pf, p, args.branch_cap)
        points.append(
            {
                "label": p.label,
                "t": _svec(p.t),
                "eval": _eval_section(pf, p),
                "relations": _relations_section(pa),
                "cones": _cones_section(pa, False, None),
            }
        )
    report["points"] = points
    return report


# ---------------------------------------------------------------------------
# corpus verification


def _observed_verdicts(pf: ProblemFile, point: ProblemPoint, cap: int) -> tuple[dict, bool, bool]:
    pa = analyze_point(pf.program, point.t, pf.annotations, branch_cap=cap)
    relations, kink, _ = verify_relations(pa)
    m_anf = check_m_stationary_anf(pa.program, pa.point_eval)
    m_mpcc = check_m_stationary_mpcc(pa.mpcc, pa.mpcc_point)
    b_anf = check_b_stationary(pa.program, pa.point_eval, "anf")
    b_mpcc = check_b_stationary(pa.mpcc, pa.mpcc_point, "mpcc")
    observed = {
        "akq": kink[("abadie", ABS_I)].status,
        "gkq": kink[("guignard", ABS_I)].status,
        "mpcc-acq": kink[("abadie", MPCC_I)].status,
        "mpcc-gcq": kink[("guignard", MPCC_I)].status,
        "m-stationary": m_anf.status,
        "b-stationary": b_anf.status,
    }
    forms_agree = m_anf.status == m_mpcc.status and b_anf.status == b_mpcc.status
    return observed, relations.consistent, forms_agree


def cmd_corpus(args) -> dict:
    report = _report_skeleton("corpus run", None)
    problems = []
    table = [
        "problem  point     check          expected  observed  result",
        "-------  --------  -------------  --------  --------  ------",
    ]
    all_ok = True
    for name in CORPUS_NAMES:
        pf = load_corpus_problem(name)
        entry = {"name": pf.name, "digest": pf.digest, "points": []}
        for point in pf.points:
            observed, consistent, forms_agree = _observed_verdicts(pf, point, args.branch_cap)
            matches = all(observed.get(k) == v for k, v in point.expected.items())
            ok = matches and consistent and forms_agree
            all_ok = all_ok and ok
            for key, expected_value in point.expected.items():
                got = observed.get(key, "?")
                table.append(
                    f"{pf.name:<7}  {point.label:<8}  {key:<13}  {expected_value:<8}  "
                    f"{got:<8}  {'ok' if got == expected_value else 'MISMATCH'}"
                )
            table.append(
                f"{pf.name:<7}  {point.label:<8}  {'relations':<13}  {'holds':<8}  "
                f"{'holds' if consistent else 'fails':<8}  {'ok' if consistent else 'MISMATCH'}"
            )
            table.append(
                f"{pf.name:<7}  {point.label:<8}  {'form-agree':<13}  {'holds':<8}  "
                f"{'holds' if forms_agree else 'fails':<8}  {'ok' if forms_agree else 'MISMATCH'}"
            )
            entry["points"].append(
                {
                    "label": point.label,
                    "observed": observed,
                    "expected": point.expected,
                    "relations_consistent": consistent,
                    "stationarity_forms_agree": forms_agree,
                    "matches": ok,
                }
            )
        problems.append(entry)
    report["problems"] = problems
    report["table"] = table
    report["summary"] = {"all_matched": all_ok}
    return report


def corpus_exit_code(report: dict) -> int:
    return EXIT_OK if report["summary"]["all_matched"] else EXIT_FAILS


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="absnormal",
        description="Exact verification of kink/complementarity constraint "
        "qualifications and stationarity for nonsmooth programs in abs-normal form.",
    )
    parser.add_argument("--version", action="version", version=f"absnormal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_point=True):
        sp.add_argument("problem", help="problem file (JSON) or corpus name E1..E4")
        if with_point:
            sp.add_argument("--point", help="point label from the file or comma-separated coordinates")
        sp.add_argument("--out", help="write the report to this path instead of stdout")
        sp.add_argument("--recheck", action="store_true", help="re-validate all inline certificates")
        sp.add_argument(
            "--branch-cap",
            type=int,
            default=2**16,
            help="refuse enumerations beyond this many branches (default 65536)",
        )

    add_common(sub.add_parser("eval", help="solve the switching system and classify the point"))
    sp = sub.add_parser("branches", help="list the smooth branch problems at a point")
    add_common(sp)
    sp.add_argument("--form", choices=list(FORMULATIONS), help="restrict to one formulation")

    sp = sub.add_parser("reformulate", help="emit the slack and counterpart reformulations")
    add_common(sp, with_point=False)
    sp.add_argument("--slack", action="store_true")
    sp.add_argument("--mpcc", action="store_true")
    sp.add_argument("--slack-mpcc", action="store_true", dest="slack_mpcc")

    sp = sub.add_parser("cones", help="emit branch linearized/tangent cones")
    add_common(sp)
    sp.add_argument("--dual", action="store_true", help="include dual cones")
    sp.add_argument("--form", choices=list(FORMULATIONS))

    sp = sub.add_parser("check-cq", help="decide the kink and counterpart qualifications")
    add_common(sp)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--akq", action="store_true")
    sp.add_argument("--gkq", action="store_true")
    sp.add_argument("--mpcc-acq", action="store_true", dest="mpcc_acq")
    sp.add_argument("--mpcc-gcq", action="store_true", dest="mpcc_gcq")
    sp.add_argument("--branches", action="store_true", help="include per-branch verdicts")

    sp = sub.add_parser("check-stationarity", help="decide M-/B-stationarity")
    add_common(sp)
    sp.add_argument("--m", action="store_true")
    sp.add_argument("--b", action="store_true")
    sp.add_argument("--form", choices=["anf", "mpcc"])

    add_common(sub.add_parser("verify-relations", help="cross-check every proved implication"))

    sp = sub.add_parser("corpus", help="bundled corpus operations")
    sp.add_argument("action", choices=["run"])
    sp.add_argument("--out")
    sp.add_argument("--recheck", action="store_true")
    sp.add_argument("--branch-cap", type=int, default=2**16)

    return parser


def _load_problem_arg(arg: str) -> ProblemFile:
    if arg in CORPUS_NAMES:
        return load_corpus_problem(arg)
    return parse_problem(arg)


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for usage errors
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "corpus":
            report = cmd_corpus(args)
            code = corpus_exit_code(report)
            if args.recheck:
                report["recheck"] = {"errors": [], "note": "corpus reports carry no inline certificates"}
            _emit(report, args.out)
            return code

        pf = _load_problem_arg(args.problem)
        handlers = {
            "eval": cmd_eval,
            "branches": cmd_branches,
            "reformulate": cmd_reformulate,
            "cones": cmd_cones,
            "check-cq": cmd_check_cq,
            "check-stationarity": cmd_check_stationarity,
            "verify-relations": cmd_verify_relations,
        }
        report = handlers[args.command](pf, args)
        if getattr(args, "recheck", False):
            errors = recheck_report(pf, report)
            report["recheck"] = {"errors": errors}
            if errors:
                _emit(report, args.out)
                return EXIT_USAGE
        _emit(report, args.out)
        return exit_code_for_report(report)
    except (ProblemFileError, BranchLimitError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
