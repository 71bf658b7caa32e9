import pytest

from absnormal.anf import evaluate, validate
from absnormal.ratmath import rat, vec
from absnormal.transforms import (
    BranchLimitError,
    BranchSpec,
    branch_correspondence,
    enumerate_branches,
    enumerate_mpcc_branches,
    merge_direction,
    mpcc_feasible,
    mpcc_point_from_eval,
    phi,
    phi_inv,
    split_direction,
    to_mpcc,
    to_slack,
)

from conftest import make_e1, make_e2


def test_slack_of_program_without_inequalities_is_identity_shaped(e1):
    sp = to_slack(e1)
    assert sp.program.n_t == e1.n_t
    assert sp.program.s == e1.s
    assert sp.program.m1 == e1.m1
    assert sp.program.m2 == 0


def test_slack_of_e2_structure(e2):
    sp = to_slack(e2)
    lifted = sp.program
    assert lifted.s == 3  # one original switch plus two slack switches
    assert lifted.m1 == 3 and lifted.m2 == 0
    assert validate(lifted) == []
    # the new equality rows read c_i_k(t, |z|) - zeta_w_k
    e = evaluate(e2, ["1/2", 0])
    point = sp.lift_smooth_point(e)
    se = evaluate(lifted, point)
    assert se.is_feasible()
    assert se.z == vec(["1/2", "1/2", 0])  # (z, w1, w2) with w = c_i values


def test_slack_lift_any_sign_choice_is_feasible(e2):
    e = evaluate(e2, [2, 0])
    sp = to_slack(e2)
    for signs in ((1, 1), (-1, 1), (1, -1), (-1, -1)):
        se = evaluate(sp.program, sp.lift_smooth_point(e, signs))
        assert se.is_feasible()
        assert tuple(abs(w) for w in se.z[1:]) == e.value_i


def test_mpcc_of_e1_constraints(e1):
    mp = to_mpcc(e1)
    assert mp.dim == 4  # (t1, t2, u1, v1)
    # equality rows: t2 - (u + v) = 0 and t1 - (u - v) = 0
    assert mp.ce_funcs[0].linear == vec([0, 1, -1, -1])
    assert mp.cz_funcs[0].linear == vec([1, 0, -1, 1])
    assert mp.m2 == 0 and not mp.ci_funcs


def test_mpcc_with_no_switches_is_smooth():
    from absnormal.anf import AbsNormalProgram

    from conftest import affine

    p = AbsNormalProgram(
        n_t=1, s=0, m1=0, m2=1, f=affine(1, 0, [1]), c_e=(), c_i=(affine(1, 0, [1]),), c_z=()
    )
    mp = to_mpcc(p)
    assert mp.s == 0 and mp.dim == 1
    assert not mp.cz_funcs


def test_mpcc_of_slack_e2_has_three_pairs(e2):
    mp = to_mpcc(to_slack(e2))
    assert mp.s == 3
    assert mp.dim == 4 + 6  # (t, w) plus three (u, v) pairs


def test_phi_roundtrip(e1):
    # positive part split: z = 3 -> (u, v) = (3, 0); z = 0 -> (0, 0); (u,v) = (0,2) -> z = -2
    pt = phi_inv(vec([1, 3]), vec([3]))
    assert pt.u == vec([3]) and pt.v == vec([0])
    assert phi(pt) == vec([1, 3, 3])
    pt0 = phi_inv(vec([0, 0]), vec([0]))
    assert pt0.u == vec([0]) and pt0.v == vec([0])
    pt2 = phi_inv(vec([0, 0]), vec([-2]))
    assert (pt2.u, pt2.v) == (vec([0]), vec([2]))
    assert phi(pt2)[-1] == rat(-2)


def test_phi_preserves_feasibility(e1, e2):
    for p, t in ((e1, [-5, 5]), (e2, [0, 3])):
        e = evaluate(p, t)
        assert e.is_feasible()
        mp = to_mpcc(p)
        point = mpcc_point_from_eval(e)
        assert mpcc_feasible(mp, point)
        assert phi(point) == e.t + e.z


def test_index_sets():
    pt = phi_inv(vec([0]), vec([2, -3, 0]))
    assert pt.u_plus == (0,)
    assert pt.v_plus == (1,)
    assert pt.degenerate == (2,)
    assert pt.base_signature.entries == (1, -1, 0)


def test_branch_count_at_kink(e1):
    e = evaluate(e1, [0, 0])
    branches = enumerate_branches(e1, e)
    assert len(branches) == 2
    assert [b.label for b in branches] == ["σ=+", "σ=-"]
    for b in branches:
        assert b.anchor_feasible()


def test_branch_count_definite_point(e1):
    e = evaluate(e1, [2, 2])
    branches = enumerate_branches(e1, e)
    assert len(branches) == 1


def test_branch_count_slack_mpcc_e2(e2):
    # |alpha| = 1 and both inequalities active: 2^3 = 8 branches in the slack counterpart
    sp = to_slack(e2)
    se = evaluate(sp.program, sp.lift_smooth_point(evaluate(e2, [0, 0])))
    mp = to_mpcc(sp)
    point = mpcc_point_from_eval(se)
    branches = enumerate_mpcc_branches(mp, point)
    assert len(branches) == 8
    for b in branches:
        assert b.anchor_feasible()


def test_branch_cap_refused(e2):
    sp = to_slack(e2)
    se = evaluate(sp.program, sp.lift_smooth_point(evaluate(e2, [0, 0])))
    mp = to_mpcc(sp)
    point = mpcc_point_from_eval(se)
    with pytest.raises(BranchLimitError):
        enumerate_mpcc_branches(mp, point, cap=4)


def test_branch_problem_rows_e1_plus(e1):
    e = evaluate(e1, [0, 0])
    plus = enumerate_branches(e1, e)[0]
    # equalities: t2 - z = 0 and t1 - z = 0; inequality: z >= 0
    assert [f.linear for f in plus.eqs] == [vec([0, 1, -1]), vec([1, 0, -1])]
    assert [f.linear for f in plus.ineqs] == [vec([0, 0, 1])]


def test_branch_correspondence_labels():
    spec = BranchSpec("signature", (1,), (0,))
    assert spec.label == "σ=+"
    assert branch_correspondence(spec).label == "P={}"
    spec = BranchSpec("signature", (-1, -1), (0, 0))
    assert branch_correspondence(spec).label == "P={1,2}"
    # first switch fixed negative by the anchor, second resolved negative
    spec = BranchSpec("signature", (1, -1), (1, 0))
    assert branch_correspondence(spec).label == "P={2}"
    assert branch_correspondence(branch_correspondence(spec)) == spec


def test_mpcc_branch_fixings(e1):
    e = evaluate(e1, [0, 0])
    mp = to_mpcc(e1)
    branches = enumerate_mpcc_branches(mp, mpcc_point_from_eval(e))
    assert [b.label for b in branches] == ["P={}", "P={1}"]
    plus = branches[0]
    # P = {}: v fixed to zero, u kept nonnegative
    assert vec([0, 0, 0, 1]) in [f.linear for f in plus.eqs]
    assert vec([0, 0, 1, 0]) in [f.linear for f in plus.ineqs]


def test_direction_split_cases():
    # inactive positive index keeps the direction on the u side
    dx, du, dv = split_direction(vec([0]), vec([-4]), (1,))
    assert (du, dv) == (vec([-4]), vec([0]))
    # degenerate index splits by sign: -4 goes to the v side
    dx, du, dv = split_direction(vec([0]), vec([-4]), (0,))
    assert (du, dv) == (vec([0]), vec([4]))
    dx, du, dv = split_direction(vec([0]), vec([3]), (0,))
    assert (du, dv) == (vec([3]), vec([0]))


def test_direction_split_merge_roundtrip():
    for signs, dz in (((1,), ["5/3"]), ((-1,), [-2]), ((0,), [7]), ((0,), [-7])):
        dx, du, dv = split_direction(vec([1, 2]), vec(dz), signs)
        merged = merge_direction(dx + du + dv, 2, 1)
        assert merged == vec([1, 2] + dz)
