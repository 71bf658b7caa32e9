"""Shared corpus builders: the four bundled verification problems.

Expected verdicts for these are derived by hand; the worksheets live in
src/absnormal/corpus/WORKSHEETS.md.
"""

from fractions import Fraction

import pytest

from absnormal.anf import AbsNormalProgram, QuadraticFunc
from absnormal.cones import PolyCone
from absnormal.ratmath import RatMatrix


def affine(dim, constant, linear):
    return QuadraticFunc.affine(dim, constant, linear)


def make_e1() -> AbsNormalProgram:
    """Kink equality t2 = |t1| with objective t2; origin is a minimizer."""
    return AbsNormalProgram(
        n_t=2,
        s=1,
        m1=1,
        m2=0,
        f=affine(2, 0, [0, 1]),
        c_e=(affine(3, 0, [0, 1, -1]),),
        c_i=(),
        c_z=(affine(3, 0, [1, 0, 0]),),
    )


def make_e2() -> AbsNormalProgram:
    """min(t1,t2) = 0 via (t1 + t2 - |t1 - t2|)/2, with t1, t2 >= 0."""
    return AbsNormalProgram(
        n_t=2,
        s=1,
        m1=1,
        m2=2,
        f=affine(2, 0, [1, 1]),
        c_e=(affine(3, 0, ["1/2", "1/2", "-1/2"]),),
        c_i=(affine(3, 0, [1, 0, 0]), affine(3, 0, [0, 1, 0])),
        c_z=(affine(3, 0, [1, -1, 0]),),
    )


def make_e3() -> AbsNormalProgram:
    """Equality zeta^2 = 0 with switching z = t1: the feasible set is the line t1 = 0."""
    quad = RatMatrix.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
    return AbsNormalProgram(
        n_t=2,
        s=1,
        m1=1,
        m2=0,
        f=affine(2, 0, [1, 0]),
        c_e=(QuadraticFunc(3, Fraction(0), (Fraction(0),) * 3, quad),),
        c_i=(),
        c_z=(affine(3, 0, [1, 0, 0]),),
    )


def make_e4() -> AbsNormalProgram:
    """Equality t2 * zeta = 0 with z = t1: two crossing lines t1 = 0 and t2 = 0."""
    quad = RatMatrix.from_rows([[0, 0, 0], [0, 0, "1/2"], [0, "1/2", 0]])
    return AbsNormalProgram(
        n_t=2,
        s=1,
        m1=1,
        m2=0,
        f=affine(2, 0, [0, 1]),
        c_e=(QuadraticFunc(3, Fraction(0), (Fraction(0),) * 3, quad),),
        c_i=(),
        c_z=(affine(3, 0, [1, 0, 0]),),
    )


def e3_annotations():
    # hand tangent cone of both branches at the origin: the line
    # {dt1 = 0, dz = 0} in (dt1, dt2, dz) coordinates
    line = PolyCone.from_rows(3, eq=[[1, 0, 0], [0, 0, 1]])
    return {"σ=+": (line,), "σ=-": (line,)}


def e4_annotations():
    # per branch, the tangent set is the union of the line {dt1 = dz = 0}
    # and the half-line {dt2 = 0, dt1 = dz, sign(dt1) = branch sign}
    line = PolyCone.from_rows(3, eq=[[1, 0, 0], [0, 0, 1]])
    plus_ray = PolyCone.from_rows(3, eq=[[0, 1, 0], [1, 0, -1]], ineq=[[1, 0, 0]])
    minus_ray = PolyCone.from_rows(3, eq=[[0, 1, 0], [1, 0, -1]], ineq=[[-1, 0, 0]])
    return {"σ=+": (line, plus_ray), "σ=-": (line, minus_ray)}


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def e2():
    return make_e2()


@pytest.fixture
def e3():
    return make_e3()


@pytest.fixture
def e4():
    return make_e4()
