import pytest

from absnormal.anf import AbsNormalProgram, QuadraticFunc, evaluate
from absnormal.cones import lin_cone_branch
from absnormal.cq import FAILS, HOLDS
from absnormal.ratmath import dot, vec
from absnormal.stationarity import (
    check_b_stationary,
    check_m_stationary_anf,
    check_m_stationary_mpcc,
    multiplier_system,
    translate_multipliers,
    verify_branch_dual_certificate,
    verify_multipliers,
)
from absnormal.transforms import (
    enumerate_branches,
    mpcc_point_from_eval,
    to_mpcc,
)

from conftest import affine, make_e1


def with_objective(p: AbsNormalProgram, linear) -> AbsNormalProgram:
    return AbsNormalProgram(
        n_t=p.n_t,
        s=p.s,
        m1=p.m1,
        m2=p.m2,
        f=affine(p.n_t, 0, linear),
        c_e=p.c_e,
        c_i=p.c_i,
        c_z=p.c_z,
    )


def test_m_stationary_mpcc_e1_holds(e1):
    # hand multipliers: lam_e = -1, lam_z = 0, pair multipliers (1, 1)
    e = evaluate(e1, [0, 0])
    mp = to_mpcc(e1)
    verdict = check_m_stationary_mpcc(mp, mpcc_point_from_eval(e))
    assert verdict.status == HOLDS
    ms = verdict.multipliers
    assert ms.lam_e == vec([-1])
    assert ms.mu_u[0] > 0 and ms.mu_v[0] > 0


def test_m_stationary_zero_gradient_all_zero_multipliers(e1):
    p = with_objective(e1, [0, 0])
    e = evaluate(p, [0, 0])
    verdict = check_m_stationary_anf(p, e)
    assert verdict.status == HOLDS
    ms = verdict.multipliers
    assert ms.lam_e == vec([0]) and ms.lam_z == vec([0])


def test_m_stationary_fails_for_reversed_objective(e1):
    p = with_objective(e1, [0, -1])  # minimize -t2: descent along the kink
    e = evaluate(p, [0, 0])
    mp = to_mpcc(p)
    v_mpcc = check_m_stationary_mpcc(mp, mpcc_point_from_eval(e))
    v_anf = check_m_stationary_anf(p, e)
    assert v_mpcc.status == FAILS
    assert v_anf.status == FAILS
    # every multiplier case carries its own refutation certificate
    assert len(v_mpcc.failed_cases) == 3
    for outcome in v_mpcc.failed_cases:
        assert outcome.certificate is not None


def test_m_stationary_anf_e1_holds_and_translates(e1):
    e = evaluate(e1, [0, 0])
    mp = to_mpcc(e1)
    point = mpcc_point_from_eval(e)
    v = check_m_stationary_anf(e1, e)
    assert v.status == HOLDS
    translated = translate_multipliers(v.multipliers, "anf->mpcc", (e1, e), (mp, point))
    assert verify_multipliers(multiplier_system(mp, point), translated) == []
    back = translate_multipliers(translated, "mpcc->anf", (mp, point), (e1, e))
    assert back == v.multipliers  # round trip is the identity


def test_m_stationarity_agrees_across_forms_on_corpus(e1, e2, e3, e4):
    cases = [(e1, [0, 0]), (e1, [2, 2]), (e2, [0, 0]), (e2, [1, 0]), (e3, [0, 0]), (e4, [0, 0])]
    for p, t in cases:
        e = evaluate(p, t)
        mp = to_mpcc(p)
        v_anf = check_m_stationary_anf(p, e)
        v_mpcc = check_m_stationary_mpcc(mp, mpcc_point_from_eval(e))
        assert v_anf.status == v_mpcc.status


def test_m_stationary_smooth_point_reduces_to_kkt(e1):
    # definite signature, no disjunctions: plain KKT of the smooth branch;
    # minimizing t2 on t2 = |t1| away from the kink is not stationary
    e = evaluate(e1, [2, 2])
    assert check_m_stationary_anf(e1, e).status == FAILS
    p = with_objective(e1, [1, 1])  # gradient (1,1): stationary at (.,.)? t1-descent exists
    assert check_m_stationary_anf(p, evaluate(p, [2, 2])).status == FAILS
    # objective t2 - t1 has a one-sided minimum along the positive branch
    p2 = with_objective(e1, [-1, 1])
    assert check_m_stationary_anf(p2, evaluate(p2, [2, 2])).status == HOLDS


def test_b_stationary_e1_holds(e1):
    e = evaluate(e1, [0, 0])
    v = check_b_stationary(e1, e, "anf")
    assert v.status == HOLDS
    assert len(v.branch_certificates) == 2
    # each certificate proves dual-cone membership of the gradient by substitution
    branches = enumerate_branches(e1, e)
    for cert, b in zip(v.branch_certificates, branches):
        cone = lin_cone_branch(b)
        gradient = b.objective.gradient(b.anchor)
        assert verify_branch_dual_certificate(cert, cone, gradient) == []


def test_b_stationary_zero_gradient_trivial(e1):
    p = with_objective(e1, [0, 0])
    e = evaluate(p, [0, 0])
    assert check_b_stationary(p, e, "anf").status == HOLDS


def test_b_stationary_fails_with_descent(e1):
    # minimizing t1 at the kink: the negative branch admits d = (-1, 1, -1)
    p = with_objective(e1, [1, 0])
    e = evaluate(p, [0, 0])
    v = check_b_stationary(p, e, "anf")
    assert v.status == FAILS
    assert v.failing_branch == "σ=-"
    gradient = vec([1, 0, 0])
    assert dot(gradient, v.descent) < 0


def test_b_stationarity_agrees_across_forms(e1, e2, e3, e4):
    cases = [(e1, [0, 0]), (e1, [2, 2]), (e2, [0, 0]), (e2, [1, 0]), (e3, [0, 0]), (e4, [0, 0])]
    for p, t in cases:
        e = evaluate(p, t)
        mp = to_mpcc(p)
        v_anf = check_b_stationary(p, e, "anf")
        v_mpcc = check_b_stationary(mp, mpcc_point_from_eval(e), "mpcc")
        assert v_anf.status == v_mpcc.status
        if v_anf.status == FAILS:
            assert v_anf.failing_branch.startswith("σ")
            assert v_mpcc.failing_branch.startswith("P")


def test_b_stationary_unconstrained_kink_needs_no_qualification():
    # pure unconstrained kink minimization: branches are affine, so the check
    # is always decisive
    p = AbsNormalProgram(
        n_t=1,
        s=1,
        m1=0,
        m2=0,
        f=affine(1, 0, [0]),
        c_e=(),
        c_i=(),
        c_z=(affine(2, 0, [1, 0]),),
    )
    e = evaluate(p, [0])
    assert check_b_stationary(p, e, "anf").status == HOLDS
    mp = to_mpcc(p)
    assert check_b_stationary(mp, mpcc_point_from_eval(e), "mpcc").status == HOLDS


def test_minimizers_with_akq_are_m_stationary(e1, e2):
    # necessity at the annotated minimizers (origins) where AKQ holds
    for p in (e1, e2):
        e = evaluate(p, [0, 0])
        assert check_m_stationary_anf(p, e).status == HOLDS
        assert check_b_stationary(p, e, "anf").status == HOLDS


def test_translate_rejects_invalid_multipliers(e1):
    from absnormal.stationarity import MultiplierSet

    e = evaluate(e1, [0, 0])
    mp = to_mpcc(e1)
    point = mpcc_point_from_eval(e)
    bogus = MultiplierSet(vec([5]), vec([]), vec([0]), vec([0]), vec([0]))
    with pytest.raises(ValueError):
        translate_multipliers(bogus, "anf->mpcc", (e1, e), (mp, point))
