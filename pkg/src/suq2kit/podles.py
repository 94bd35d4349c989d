"""The standard Podles sphere and its Fredholm module.

The sphere algebra sits inside the quantum group as the subalgebra generated
by A = gamma* gamma and B = alpha* gamma.  Both act by three-term recursions
in the spin label; the tables here are keyed in independently of the
generator tables in :mod:`suq2kit.peterweyl`, so agreement of the two routes
is a genuine consistency check and is exposed as such.

The Fredholm module lives on the pair of line-bundle spaces with winding
+1 and -1, with the symmetry F swapping the two identified copies; its
truncated index data and the commutator-tail decay proxies are computed
here as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .qarith import HalfInt, QParam
from .peterweyl import (BandedOperator, TruncatedSpace, bundle_space,
                        generator_op, operator_norm, _idx_arrays, _src_ok,
                        _masked_sqrt_ratio)

__all__ = [
    "PodlesOperator",
    "FredholmModule",
    "podles_op",
    "check_podles_relations",
    "commutator_tail",
    "fredholm_index",
    "swap_operator",
    "index_pair_operator",
    "fit_geometric",
]


# ---------------------------------------------------------------------------
# coefficient tables (twice units; masks encode the boundary convention)
# ---------------------------------------------------------------------------

def _iratio(q, num_exp, l2):
    """(1 - q^num) / (1 - q^(2*l2)) with its removable limit 1/2 at l2 = 0.

    The l2 = 0 branch is only ever multiplied by factors that vanish there,
    so any finite completion gives the same product; 1/(1 + q^l2) is the
    continuous one.
    """
    l2 = np.asarray(l2)
    safe = np.where(l2 > 0, 1.0 - q ** (2 * l2), 1.0)
    return np.where(l2 > 0, (1.0 - q ** np.asarray(num_exp)) / safe,
                    1.0 / (1.0 + q ** l2))


def sphere_a_minus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2) & (np.abs(i2) != l2) & (np.abs(j2) != l2)
    rad = _masked_sqrt_ratio(q, (l2 - j2, l2 + i2, l2 + j2, l2 - i2),
                             (2 * l2 - 2, 2 * l2 + 2), mask)
    den = np.where(mask, 1.0 - q ** (2 * l2), 1.0)
    return np.where(mask, -q ** ((2 * l2 + i2 + j2) // 2 - 1) * rad / den, 0.0)


def sphere_a_diag(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2)
    t1 = (q ** (l2 + j2) * (1.0 - q ** (l2 - j2 + 2)) * (1.0 - q ** (l2 + i2 + 2))
          / ((1.0 - q ** (2 * l2 + 2)) * (1.0 - q ** (2 * l2 + 4))))
    t2 = (q ** (l2 + i2) * (1.0 - q ** (l2 + j2)) * _iratio(q, l2 - i2, l2)
          / (1.0 - q ** (2 * l2 + 2)))
    return np.where(mask, t1 + t2, 0.0)


def sphere_a_plus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2)
    rad = _masked_sqrt_ratio(q, (l2 + j2 + 2, l2 - i2 + 2, l2 - j2 + 2, l2 + i2 + 2),
                             (2 * l2 + 2, 2 * l2 + 6), mask)
    den = np.where(mask, 1.0 - q ** (2 * l2 + 4), 1.0)
    return np.where(mask, -q ** ((2 * l2 + i2 + j2) // 2 + 1) * rad / den, 0.0)


def sphere_b_minus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2) & (np.abs(j2) != l2) & (i2 <= l2 - 4)
    rad = _masked_sqrt_ratio(q, (l2 - j2, l2 - i2 - 2, l2 + j2, l2 - i2),
                             (2 * l2 - 2, 2 * l2 + 2), mask)
    den = np.where(mask, 1.0 - q ** (2 * l2), 1.0)
    return np.where(mask, q ** ((3 * l2 + 2 * i2 + j2) // 2) * rad / den, 0.0)


def sphere_b_diag(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2) & (i2 <= l2 - 2)
    rad = _masked_sqrt_ratio(q, (l2 + i2 + 2, l2 - i2), (), mask)
    t1 = q ** ((l2 + i2) // 2) * _iratio(q, l2 + j2, l2) / (1.0 - q ** (2 * l2 + 2))
    t2 = (q ** ((3 * l2 + i2 + 2 * j2) // 2 + 2) * (1.0 - q ** (l2 - j2 + 2))
          / ((1.0 - q ** (2 * l2 + 2)) * (1.0 - q ** (2 * l2 + 4))))
    return np.where(mask, rad * (t1 - t2), 0.0)


def sphere_b_plus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2)
    rad = _masked_sqrt_ratio(q, (l2 + j2 + 2, l2 + i2 + 4, l2 - j2 + 2, l2 + i2 + 2),
                             (2 * l2 + 2, 2 * l2 + 6), mask)
    den = np.where(mask, 1.0 - q ** (2 * l2 + 4), 1.0)
    return np.where(mask, -q ** ((l2 + j2) // 2) * rad / den, 0.0)


_SPHERE_RULES = {
    "A": (((-2, 0, 0), sphere_a_minus), ((0, 0, 0), sphere_a_diag),
          ((2, 0, 0), sphere_a_plus)),
    "B": (((-2, 2, 0), sphere_b_minus), ((0, 2, 0), sphere_b_diag),
          ((2, 2, 0), sphere_b_plus)),
}


@dataclass(frozen=True)
class PodlesOperator:
    """One of the sphere generators A, B, B* as a banded operator."""

    which: str
    q: float
    op: BandedOperator

    @property
    def matrix(self):
        return self.op.matrix


def podles_op(which: str, q, space: TruncatedSpace) -> PodlesOperator:
    """Materialize the printed three-term table of A or B on a space.

    B* is not keyed in separately: adjointness is its definition, so it is
    the transpose of B's table.
    """
    qp = QParam.of(q).require_strict()
    if which == "B*":
        b = podles_op("B", qp, space)
        return PodlesOperator("B*", qp.q, b.op.adjoint())
    if which not in _SPHERE_RULES:
        raise ValueError(f"unknown sphere generator {which!r}")
    op = BandedOperator.from_shift_rules(space, space, _SPHERE_RULES[which],
                                         HalfInt(2), q=qp.q)
    return PodlesOperator(which, qp.q, op)


def check_podles_relations(q, lmax, tol_identity: float = 1e-10):
    """Interior residuals of the four sphere relations on the full space.

    Returns a dict name -> residual; every residual below tol_identity means
    the keyed-in tables close under the sphere algebra.
    """
    from .peterweyl import full_space

    qp = QParam.of(q).require_strict()
    lmax = HalfInt.of(lmax)
    if lmax < HalfInt.of(3):
        raise ValueError("need lmax >= 3 for a meaningful interior")
    space = full_space(lmax.twice)
    A = podles_op("A", qp, space).op
    B = podles_op("B", qp, space).op
    Bs = podles_op("B*", qp, space).op
    one = BandedOperator.identity(space)
    qq = qp.q
    residuals = {
        "A = A*": operator_norm(A.matrix - A.matrix.T),
        "AB = q^2 BA": (A @ B - qq**2 * (B @ A)).interior_residual_norm(),
        "BB* = q^-2 A(1-A)": (B @ Bs - qq**-2 * (A @ (one - A))).interior_residual_norm(),
        "B*B = A(1-q^2 A)": (Bs @ B - A @ (one - qq**2 * A)).interior_residual_norm(),
    }
    residuals["pass"] = all(v < tol_identity for k, v in residuals.items() if k != "pass")
    return residuals


# ---------------------------------------------------------------------------
# Fredholm module and index data
# ---------------------------------------------------------------------------

def swap_operator(domain: TruncatedSpace, codomain: TruncatedSpace) -> BandedOperator:
    """Spin-preserving map e^(l)_{i, k/2} -> e^(l)_{i, k'/2} between bundles.

    Entries exist wherever both spaces carry the spin level; for the module
    pair (k=1, k=-1) this is a bijection, for (k=0, k=-2) the bottom vector
    e^(0)_{0,0} is annihilated.
    """
    dj2 = codomain.k - domain.k
    rule = (((0, 0, dj2), lambda _q, l2, i2, j2: np.ones_like(l2, dtype=float)),)
    return BandedOperator.from_shift_rules(domain, codomain, rule, HalfInt(0), q=0.5)


@dataclass(frozen=True)
class FredholmModule:
    """Graded module on the winding +1 / -1 bundle pair with the swap F."""

    q: float
    lmax: HalfInt
    plus_space: TruncatedSpace
    minus_space: TruncatedSpace
    F: BandedOperator

    @classmethod
    def standard(cls, q, lmax) -> "FredholmModule":
        qp = QParam.of(q).require_strict()
        lmax = HalfInt.of(lmax)
        plus = bundle_space(1, lmax.twice)
        minus = bundle_space(-1, lmax.twice)
        return cls(qp.q, lmax, plus, minus, swap_operator(plus, minus))

    def unitary_defect(self) -> float:
        """max(|F*F - 1|, |FF* - 1|) on the truncation; F is a unitary."""
        ft = self.F.matrix
        d1 = operator_norm(ft.T @ ft - sp.identity(self.plus_space.dim))
        d2 = operator_norm(ft @ ft.T - sp.identity(self.minus_space.dim))
        return max(d1, d2)


def index_pair_operator(q, lmax, pair=(0, -2)) -> BandedOperator:
    """The off-diagonal corner of F for a bundle pair (domain k, codomain k')."""
    lmax = HalfInt.of(lmax)
    dom = bundle_space(pair[0], max(lmax.twice, abs(pair[0])))
    cod = bundle_space(pair[1], max(lmax.twice, abs(pair[1])))
    return swap_operator(dom, cod)


def fredholm_index(op, sv_threshold: float = 1e-8, guard: float = 10.0) -> int:
    """dim ker - dim coker of a truncated corner, by singular value counting.

    Raises when the rank decision is ill conditioned, i.e. the smallest kept
    singular value is within ``guard`` times the threshold.
    """
    mat = op.matrix if isinstance(op, BandedOperator) else sp.csr_matrix(op)
    dense = np.asarray(mat.todense(), dtype=float)
    if min(dense.shape) == 0:
        rank = 0
    else:
        svals = np.linalg.svd(dense, compute_uv=False)
        kept = svals[svals > sv_threshold]
        rank = int(kept.size)
        if rank and kept[-1] < guard * sv_threshold:
            raise ArithmeticError(
                f"rank decision ill conditioned: smallest kept singular value "
                f"{kept[-1]:.3e} within {guard}x of threshold {sv_threshold:.1e}")
    n_cols, n_rows = dense.shape[1], dense.shape[0]
    return (n_cols - rank) - (n_rows - rank)


# ---------------------------------------------------------------------------
# commutator tails
# ---------------------------------------------------------------------------

def _module_action(module: FredholmModule, x):
    """Matrices of x on the two bundle sectors, rows/cols aligned by the swap.

    x is a sphere generator name, "1", or a word (sequence of names) whose
    product acts by left multiplication on both sectors.
    """
    if isinstance(x, str):
        x = (x,)
    plus = sp.identity(module.plus_space.dim, format="csr")
    minus = sp.identity(module.minus_space.dim, format="csr")
    for letter in x:
        if letter == "1":
            continue
        if letter not in ("A", "B", "B*"):
            raise TypeError("word letters must be 'A', 'B', 'B*' or '1'")
        plus = podles_op(letter, module.q, module.plus_space).matrix @ plus
        minus = podles_op(letter, module.q, module.minus_space).matrix @ minus
    return plus, minus


def commutator_tail(module: FredholmModule, x, l_from) -> float:
    """Operator norm of [F, phi(x)] restricted to spins >= l_from.

    phi acts block diagonally on the two sectors and F identifies their
    bases, so the commutator reduces to the difference of the two sector
    matrices; its tail decaying to zero is the finite-truncation proxy for
    compactness of the commutator.
    """
    plus, minus = _module_action(module, x)
    f = module.F.matrix
    diff = f @ plus - minus @ f
    cols = sp.diags(module.plus_space.tail_mask(l_from).astype(float))
    return operator_norm(diff @ cols)


def fit_geometric(xs, values):
    """Least-squares fit log|v| = log c + x log r; returns (rate, r2).

    Used for the decay-rate regressions on commutator tails and coefficient
    difference families.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.log(np.asarray(values, dtype=float))
    if xs.size < 3:
        raise ValueError("need at least three points for a decay fit")
    coeffs = np.polyfit(xs, ys, 1)
    fitted = np.polyval(coeffs, xs)
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(np.exp(coeffs[0])), r2
