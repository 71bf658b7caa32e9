"""Data model and evaluation of programs in abs-normal form.

A program couples a smooth objective over variables ``t`` with constraint
families over the block ``(t, zeta)``, where ``zeta`` stands for the absolute
values of the switching vector ``z``.  The switching constraint is strictly
lower triangular in ``zeta``, so ``z`` is computed by forward substitution and
every derived quantity (signature, active sets, Jacobians) is exact.

Constraint functions are quadratic polynomials with rational coefficients;
that keeps point-wise Jacobians rational and downstream cone computations
exact.  Higher smoothness classes are a documented extension point of the data
model, not implemented.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .ratmath import (
    ZERO,
    RatMatrix,
    Vec,
    dot,
    rat,
    vec,
    vec_add,
    zero_vec,
)


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticFunc:
    """``constant + linear . x + x . quadratic . x`` with symmetric quadratic part."""

    dim: int
    constant: Fraction
    linear: Vec
    quadratic: RatMatrix | None = None

    def __post_init__(self) -> None:
        if len(self.linear) != self.dim:
            raise ProgramError("linear coefficient length does not match dimension")
        if self.quadratic is not None and self.quadratic.shape != (self.dim, self.dim):
            raise ProgramError("quadratic matrix shape does not match dimension")

    @staticmethod
    def affine(dim: int, constant, linear) -> "QuadraticFunc":
        return QuadraticFunc(dim, rat(constant), vec(linear))

    @staticmethod
    def zero(dim: int) -> "QuadraticFunc":
        return QuadraticFunc(dim, ZERO, zero_vec(dim))

    def is_affine(self) -> bool:
        return self.quadratic is None or self.quadratic.is_zero()

    def value(self, x: Vec) -> Fraction:
        v = self.constant + dot(self.linear, x)
        if self.quadratic is not None:
            v += dot(x, self.quadratic.mat_vec(x))
        return v

    def gradient(self, x: Vec) -> Vec:
        g = self.linear
        if self.quadratic is not None:
            g = vec_add(g, tuple(2 * y for y in self.quadratic.mat_vec(x)))
        return g

    def embed(self, new_dim: int, positions: tuple[int, ...]) -> "QuadraticFunc":
        """Same function over a larger block; old variable i sits at ``positions[i]``."""
        if len(positions) != self.dim:
            raise ProgramError("need one position per variable")
        linear = [ZERO] * new_dim
        for i, p in enumerate(positions):
            linear[p] += self.linear[i]
        quad = None
        if self.quadratic is not None and not self.quadratic.is_zero():
            rows = [[ZERO] * new_dim for _ in range(new_dim)]
            for i, pi in enumerate(positions):
                for j, pj in enumerate(positions):
                    rows[pi][pj] += self.quadratic.entry(i, j)
            quad = RatMatrix.from_rows(rows, new_dim)
        return QuadraticFunc(new_dim, self.constant, tuple(linear), quad)

    def compose_linear(self, m: RatMatrix) -> "QuadraticFunc":
        """The function ``y -> f(m y)`` (m has ``dim`` rows)."""
        if m.n_rows != self.dim:
            raise ProgramError("substitution matrix must have one row per variable")
        linear = m.transpose().mat_vec(self.linear)
        quad = None
        if self.quadratic is not None and not self.quadratic.is_zero():
            quad = m.transpose().mat_mul(self.quadratic).mat_mul(m)
        return QuadraticFunc(m.cols, self.constant, linear, quad)

    def add_linear(self, extra: Vec, constant=ZERO) -> "QuadraticFunc":
        return QuadraticFunc(self.dim, self.constant + constant, vec_add(self.linear, extra), self.quadratic)


@dataclass(frozen=True)
class SignatureVector:
    """Component-wise signs of the switching vector, with the dominance order."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(e not in (-1, 0, 1) for e in self.entries):
            raise ProgramError("signature entries must be -1, 0, or 1")

    @property
    def definite(self) -> bool:
        return all(e != 0 for e in self.entries)

    def dominates(self, other: "SignatureVector") -> bool:
        """Whether this signature fixes every nonzero entry of ``other`` (entrywise s*o >= o*o)."""
        return all(s * o >= o * o for s, o in zip(self.entries, other.entries, strict=True))

    def refinements(self):
        """All definite signatures dominating this one, zeros resolved in +/- order."""
        free = [i for i, e in enumerate(self.entries) if e == 0]
        for choice in itertools.product((1, -1), repeat=len(free)):
            entries = list(self.entries)
            for i, c in zip(free, choice):
                entries[i] = c
            yield SignatureVector(tuple(entries))

    def label(self) -> str:
        return "σ=" + "".join("+" if e > 0 else "-" if e < 0 else "0" for e in self.entries)


@dataclass(frozen=True)
class AbsNormalProgram:
    """min f(t) over (t, z) with c_e(t,|z|) = 0, c_i(t,|z|) >= 0, c_z(t,|z|) = z."""

    n_t: int
    s: int
    m1: int
    m2: int
    f: QuadraticFunc
    c_e: tuple[QuadraticFunc, ...]
    c_i: tuple[QuadraticFunc, ...]
    c_z: tuple[QuadraticFunc, ...]

    @property
    def block_dim(self) -> int:
        """Dimension of the constraint argument block (t, zeta)."""
        return self.n_t + self.s

    def zeta_index(self, i: int) -> int:
        return self.n_t + i


@dataclass(frozen=True)
class EvalResult:
    t: Vec
    z: Vec
    sigma: SignatureVector
    alpha: tuple[int, ...]
    active_i: tuple[int, ...]
    residual_e: Vec
    value_i: Vec

    @property
    def abs_z(self) -> Vec:
        return tuple(abs(x) for x in self.z)

    @property
    def point(self) -> Vec:
        """The full feasible-space point (t, z)."""
        return self.t + self.z

    def is_feasible(self) -> bool:
        return all(r == 0 for r in self.residual_e) and all(v >= 0 for v in self.value_i)


@dataclass(frozen=True)
class JacobianBlocks:
    """All constraint Jacobians at (t, |z|), split into t- and zeta-columns."""

    d1_ce: RatMatrix
    d2_ce: RatMatrix
    d1_ci: RatMatrix
    d2_ci: RatMatrix
    d1_cz: RatMatrix
    d2_cz: RatMatrix


def validate(p: AbsNormalProgram) -> list[str]:
    """Structural validation; returns the list of violations (empty = valid)."""
    issues: list[str] = []
    if p.n_t < 0 or p.s < 0 or p.m1 < 0 or p.m2 < 0:
        issues.append("negative dimension")
    if p.f.dim != p.n_t:
        issues.append(f"objective has dimension {p.f.dim}, expected {p.n_t}")
    for name, funcs, count in (("c_e", p.c_e, p.m1), ("c_i", p.c_i, p.m2), ("c_z", p.c_z, p.s)):
        if len(funcs) != count:
            issues.append(f"{name} has {len(funcs)} rows, expected {count}")
        for k, func in enumerate(funcs):
            if func.dim != p.block_dim:
                issues.append(f"{name}[{k}] has dimension {func.dim}, expected {p.block_dim}")
            if func.quadratic is not None and not func.quadratic.is_symmetric():
                issues.append(f"{name}[{k}] has an asymmetric quadratic matrix")
    for i, func in enumerate(p.c_z):
        if func.dim != p.block_dim:
            continue
        for j in range(i, p.s):
            col = p.zeta_index(j)
            if func.linear[col] != 0:
                issues.append(f"triangularity violation: c_z[{i}] depends linearly on zeta[{j}]")
            if func.quadratic is not None and any(
                func.quadratic.entry(col, k) != 0 for k in range(p.block_dim)
            ):
                issues.append(f"triangularity violation: c_z[{i}] depends quadratically on zeta[{j}]")
    return issues


def require_valid(p: AbsNormalProgram) -> None:
    issues = validate(p)
    if issues:
        raise ProgramError("; ".join(issues))


def evaluate(p: AbsNormalProgram, t) -> EvalResult:
    """Solve the switching system by forward substitution and classify the point."""
    require_valid(p)
    t = vec(t)
    if len(t) != p.n_t:
        raise ProgramError(f"point has {len(t)} coordinates, expected {p.n_t}")
    zeta = list(zero_vec(p.s))
    z: list[Fraction] = []
    for i in range(p.s):
        zi = p.c_z[i].value(t + tuple(zeta))
        z.append(zi)
        zeta[i] = abs(zi)
    block = t + tuple(zeta)
    signs = SignatureVector(tuple(0 if x == 0 else (1 if x > 0 else -1) for x in z))
    alpha = tuple(i for i, x in enumerate(z) if x == 0)
    residual_e = tuple(func.value(block) for func in p.c_e)
    value_i = tuple(func.value(block) for func in p.c_i)
    active_i = tuple(k for k, v in enumerate(value_i) if v == 0)
    return EvalResult(t, tuple(z), signs, alpha, active_i, residual_e, value_i)


def constraint_jacobians(p: AbsNormalProgram, e: EvalResult) -> JacobianBlocks:
    block = e.t + e.abs_z

    def split(funcs) -> tuple[RatMatrix, RatMatrix]:
        grads = [func.gradient(block) for func in funcs]
        d1 = RatMatrix.from_rows([g[: p.n_t] for g in grads], p.n_t)
        d2 = RatMatrix.from_rows([g[p.n_t :] for g in grads], p.s)
        return d1, d2

    d1_ce, d2_ce = split(p.c_e)
    d1_ci, d2_ci = split(p.c_i)
    d1_cz, d2_cz = split(p.c_z)
    return JacobianBlocks(d1_ce, d2_ce, d1_ci, d2_ci, d1_cz, d2_cz)


def jacobian_z(p: AbsNormalProgram, e: EvalResult, signs: SignatureVector) -> RatMatrix:
    """Jacobian of the fixed-signature switching solve: (I - d2 Sigma)^(-1) d1.

    The inverse exists because ``d2 Sigma`` is strictly lower triangular, so the
    system solves row by row.
    """
    if not signs.definite or not signs.dominates(e.sigma):
        raise ProgramError("signature must be definite and dominate the signature at the point")
    jac = constraint_jacobians(p, e)
    rows: list[Vec] = []
    for i in range(p.s):
        row = jac.d1_cz.row(i)
        for j in range(i):
            coeff = jac.d2_cz.entry(i, j) * signs.entries[j]
            if coeff:
                row = vec_add(row, tuple(coeff * x for x in rows[j]))
        rows.append(row)
    return RatMatrix.from_rows(rows, p.n_t) if rows else RatMatrix.zeros(0, p.n_t)


def objective_gradient(p: AbsNormalProgram, e: EvalResult) -> Vec:
    return p.f.gradient(e.t)


def quadratic_from_strings(dim: int, data: dict) -> QuadraticFunc:
    """Build a function from string/int coefficient data ({"constant", "linear", "quadratic"})."""
    constant = rat(data.get("constant", 0))
    linear = vec(data.get("linear", [0] * dim))
    if len(linear) != dim:
        raise ProgramError(f"linear part has {len(linear)} entries, expected {dim}")
    quad = None
    if data.get("quadratic") is not None:
        quad = RatMatrix.from_rows(data["quadratic"], dim)
        if quad.shape != (dim, dim):
            raise ProgramError(f"quadratic part must be {dim}x{dim}")
        if not quad.is_symmetric():
            raise ProgramError("quadratic part must be symmetric")
    return QuadraticFunc(dim, constant, linear, quad)
