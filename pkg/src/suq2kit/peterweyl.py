"""Truncated Peter-Weyl model of L^2(SU_q(2)).

The Hilbert space carries the orthonormal basis e^(l)_{i,j} indexed by a spin
l and two weights i, j, all half-integers with l - i and l - j integral.  The
generators alpha and gamma of the quantum group act by tridiagonal tables in
the spin label; this module stores those tables as sparse banded operators on
finite truncations l <= lmax and provides the Haar state through the cyclic
vector e^(0)_{0,0}.

Index bookkeeping is done in "twice" units (integers 2l, 2i, 2j) so every
exponent appearing in a coefficient formula is an exact integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .qarith import HalfInt, QParam, qnumber

__all__ = [
    "BasisIndex",
    "TruncatedSpace",
    "StateVector",
    "BandedOperator",
    "full_space",
    "bundle_space",
    "coeff_reg",
    "generator_op",
    "involution",
    "haar_state",
    "spectral_project",
    "quantum_dimension",
    "operator_norm",
    "GENERATORS",
]

GENERATORS = ("alpha", "alpha*", "gamma", "gamma*")


# ---------------------------------------------------------------------------
# indices and spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisIndex:
    """A single Peter-Weyl basis vector e^(l)_{i,j}."""

    l: HalfInt
    i: HalfInt
    j: HalfInt

    def __post_init__(self):
        l, i, j = HalfInt.of(self.l), HalfInt.of(self.i), HalfInt.of(self.j)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        if abs(i) > l or abs(j) > l:
            raise ValueError(f"weights out of range: l={l}, i={i}, j={j}")
        if not (l.integer_distance(i) and l.integer_distance(j)):
            raise ValueError(f"parity violation: l={l}, i={i}, j={j}")

    @property
    def key(self):
        return (self.l.twice, self.i.twice, self.j.twice)

    def __str__(self):
        return f"e^({self.l})_({self.i},{self.j})"


class TruncatedSpace:
    """Finite slice of the Peter-Weyl basis.

    In bundle mode (``full=False``) the column weight is pinned at j = k/2,
    modeling the line-bundle section space with winding k; spins then run
    over |k|/2, |k|/2 + 1, ..., lmax.  In full mode all weights with
    |i|, |j| <= l <= lmax are admitted, modeling L^2(SU_q(2)) itself.
    """

    def __init__(self, lmax, k: int = 0, full: bool = False):
        self.lmax = HalfInt.of(lmax)
        self.k = int(k)
        self.full = bool(full)
        if not full and self.lmax.twice < abs(self.k):
            raise ValueError(f"lmax={self.lmax} below the bottom spin |k|/2 of bundle k={self.k}")
        self._build()

    def _build(self):
        lmax2 = self.lmax.twice
        if self.full:
            levels = np.arange(0, lmax2 + 1)
        else:
            levels = np.arange(abs(self.k), lmax2 + 1, 2)
        self.levels2 = levels
        if self.full:
            sizes = (levels + 1) ** 2
        else:
            sizes = levels + 1
        self.level_base = np.concatenate(([0], np.cumsum(sizes)))
        self.dim = int(self.level_base[-1])

        l_parts, i_parts, j_parts = [], [], []
        for l2, size in zip(levels, sizes):
            i2 = np.arange(-l2, l2 + 1, 2)
            if self.full:
                li = np.repeat(i2, l2 + 1)
                lj = np.tile(i2, l2 + 1)
            else:
                li = i2
                lj = np.full(l2 + 1, self.k)
            l_parts.append(np.full(size, l2))
            i_parts.append(li)
            j_parts.append(lj)
        self.l2 = np.concatenate(l_parts).astype(np.int64)
        self.i2 = np.concatenate(i_parts).astype(np.int64)
        self.j2 = np.concatenate(j_parts).astype(np.int64)

    # -- lookup -------------------------------------------------------------

    def contains(self, l2, i2, j2):
        """Vectorized admissibility test in twice units."""
        l2 = np.asarray(l2)
        ok = (l2 >= 0) & (l2 <= self.lmax.twice)
        ok &= (np.abs(i2) <= l2) & (np.abs(j2) <= l2)
        if self.full:
            ok &= ((l2 - i2) % 2 == 0) & ((l2 - j2) % 2 == 0)
        else:
            ok &= (j2 == self.k) & ((l2 - self.k) % 2 == 0) & ((l2 - i2) % 2 == 0)
        return ok

    def locate(self, l2, i2, j2):
        """Positions of (possibly invalid) indices; -1 where not contained."""
        l2 = np.asarray(l2, dtype=np.int64)
        i2 = np.asarray(i2, dtype=np.int64)
        j2 = np.asarray(j2, dtype=np.int64)
        ok = self.contains(l2, i2, j2)
        l2s = np.where(ok, l2, self.levels2[0])
        if self.full:
            level_idx = l2s
            within = ((i2 + l2s) // 2) * (l2s + 1) + (j2 + l2s) // 2
        else:
            level_idx = (l2s - abs(self.k)) // 2
            within = (i2 + l2s) // 2
        pos = self.level_base[level_idx] + within
        return np.where(ok, pos, -1)

    def position(self, idx: BasisIndex) -> int:
        pos = int(self.locate(*[np.array([v]) for v in idx.key])[0])
        if pos < 0:
            raise KeyError(f"{idx} not in this space")
        return pos

    def basis_index(self, pos: int) -> BasisIndex:
        return BasisIndex(HalfInt(int(self.l2[pos])), HalfInt(int(self.i2[pos])),
                          HalfInt(int(self.j2[pos])))

    def indices(self):
        return [self.basis_index(p) for p in range(self.dim)]

    def interior_mask(self, margin) -> np.ndarray:
        """Vectors far enough below lmax that a margin-banded operator is
        truncation exact on them."""
        m2 = HalfInt.of(margin).twice
        return self.l2 <= self.lmax.twice - m2

    def tail_mask(self, l_from) -> np.ndarray:
        return self.l2 >= HalfInt.of(l_from).twice

    def __eq__(self, other):
        return (isinstance(other, TruncatedSpace)
                and (self.lmax, self.k, self.full) == (other.lmax, other.k, other.full))

    def __hash__(self):
        return hash((self.lmax, self.k, self.full))

    def __repr__(self):
        kind = "full" if self.full else f"k={self.k}"
        return f"TruncatedSpace({kind}, lmax={self.lmax}, dim={self.dim})"


@lru_cache(maxsize=None)
def full_space(lmax2: int) -> TruncatedSpace:
    return TruncatedSpace(HalfInt(lmax2), full=True)


@lru_cache(maxsize=None)
def bundle_space(k: int, lmax2: int) -> TruncatedSpace:
    return TruncatedSpace(HalfInt(lmax2), k=k)


@dataclass(frozen=True)
class StateVector:
    """Finitely supported vector in a truncated space."""

    space: TruncatedSpace
    amplitudes: dict

    def __post_init__(self):
        for idx in self.amplitudes:
            if not bool(self.space.contains(*[np.array([v]) for v in idx.key])[0]):
                raise ValueError(f"{idx} not supported by {self.space}")

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.space.dim, dtype=complex)
        for idx, amp in self.amplitudes.items():
            out[self.space.position(idx)] = amp
        return out

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))


# ---------------------------------------------------------------------------
# regular representation coefficient tables
# ---------------------------------------------------------------------------
#
# Boundary convention: a coefficient is zero whenever the source or target
# basis vector does not exist.  The masks below encode exactly that; at every
# masked point the printed closed form is either zero or an indeterminate
# 0/0, so masking is the unique continuous completion.

def _idx_arrays(l2, i2, j2):
    return (np.asarray(l2, dtype=np.int64), np.asarray(i2, dtype=np.int64),
            np.asarray(j2, dtype=np.int64))


def _src_ok(l2, i2, j2):
    return (l2 >= 0) & (np.abs(i2) <= l2) & (np.abs(j2) <= l2)


def _masked_sqrt_ratio(q, num_exps, den_exps, mask):
    """sqrt(prod(1-q^n) / prod(1-q^d)) with zeros where mask is false."""
    num = np.ones(np.broadcast(*[np.asarray(e) for e in num_exps]).shape)
    for e in num_exps:
        num = num * (1.0 - q ** np.asarray(e))
    den = np.ones_like(num)
    for e in den_exps:
        den = den * (1.0 - q ** np.asarray(e))
    inner = np.where(mask, num / np.where(mask, den, 1.0), 0.0)
    return np.sqrt(np.maximum(inner, 0.0))


def reg_a_plus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2)
    rad = _masked_sqrt_ratio(q, (l2 - j2 + 2, l2 - i2 + 2), (2 * l2 + 2, 2 * l2 + 4), mask)
    return np.where(mask, q ** ((2 * l2 + i2 + j2) // 2 + 1) * rad, 0.0)


def reg_a_minus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2) & (i2 != -l2) & (j2 != -l2)
    return _masked_sqrt_ratio(q, (l2 + j2, l2 + i2), (2 * l2, 2 * l2 + 2), mask)


def reg_c_plus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2)
    rad = _masked_sqrt_ratio(q, (l2 - j2 + 2, l2 + i2 + 2), (2 * l2 + 2, 2 * l2 + 4), mask)
    return np.where(mask, -q ** ((l2 + j2) // 2) * rad, 0.0)


def reg_c_minus(q, l2, i2, j2):
    l2, i2, j2 = _idx_arrays(l2, i2, j2)
    mask = _src_ok(l2, i2, j2) & (i2 != l2) & (j2 != -l2)
    rad = _masked_sqrt_ratio(q, (l2 + j2, l2 - i2), (2 * l2, 2 * l2 + 2), mask)
    return np.where(mask, q ** ((l2 + i2) // 2) * rad, 0.0)


_REG_CORES = {"a+": reg_a_plus, "a-": reg_a_minus, "c+": reg_c_plus, "c-": reg_c_minus}


def coeff_reg(sym: str, q, l, i, j) -> float:
    """Regular-representation coefficient a_+/a_-/c_+/c_- at one index.

    Returns 0 whenever the transition target does not exist (which is exactly
    where the closed form degenerates).
    """
    if sym not in _REG_CORES:
        raise ValueError(f"unknown coefficient symbol {sym!r}")
    qp = QParam.of(q).require_strict()
    l, i, j = HalfInt.of(l), HalfInt.of(i), HalfInt.of(j)
    if not (l.integer_distance(i) and l.integer_distance(j)):
        raise ValueError(f"parity violation: l={l}, i={i}, j={j}")
    return float(_REG_CORES[sym](qp.q, l.twice, i.twice, j.twice))


# shifts in twice units: (dl2, di2, dj2) and the coefficient evaluated at the
# argument printed in the generator tables (source for alpha/gamma, target
# for their adjoints).
_GEN_RULES = {
    "alpha": (
        ((1, -1, -1), lambda q, l2, i2, j2: reg_a_plus(q, l2, i2, j2)),
        ((-1, -1, -1), lambda q, l2, i2, j2: reg_a_minus(q, l2, i2, j2)),
    ),
    "gamma": (
        ((1, 1, -1), lambda q, l2, i2, j2: reg_c_plus(q, l2, i2, j2)),
        ((-1, 1, -1), lambda q, l2, i2, j2: reg_c_minus(q, l2, i2, j2)),
    ),
    "alpha*": (
        ((-1, 1, 1), lambda q, l2, i2, j2: reg_a_plus(q, l2 - 1, i2 + 1, j2 + 1)),
        ((1, 1, 1), lambda q, l2, i2, j2: reg_a_minus(q, l2 + 1, i2 + 1, j2 + 1)),
    ),
    "gamma*": (
        ((-1, -1, 1), lambda q, l2, i2, j2: reg_c_plus(q, l2 - 1, i2 - 1, j2 + 1)),
        ((1, -1, 1), lambda q, l2, i2, j2: reg_c_minus(q, l2 + 1, i2 - 1, j2 + 1)),
    ),
}


# ---------------------------------------------------------------------------
# banded operators
# ---------------------------------------------------------------------------

class BandedOperator:
    """Sparse operator with band width <= interior_margin in the spin label.

    Stored as a CSR matrix between two truncated spaces.  Applying it to a
    vector supported on l <= lmax - interior_margin is truncation exact.
    """

    def __init__(self, domain: TruncatedSpace, codomain: TruncatedSpace,
                 matrix, interior_margin):
        self.domain = domain
        self.codomain = codomain
        self.matrix = sp.csr_matrix(matrix)
        self.interior_margin = HalfInt.of(interior_margin)
        if self.matrix.shape != (codomain.dim, domain.dim):
            raise ValueError("matrix shape does not match the spaces")

    @classmethod
    def from_shift_rules(cls, domain, codomain, rules, margin, q=None):
        """Assemble from (shift, coefficient) rules.

        Each rule is ((dl2, di2, dj2), fn) with fn vectorized over the twice
        arrays of the domain; entries whose target leaves the codomain are
        dropped (that is the truncation).
        """
        rows, cols, vals = [], [], []
        l2, i2, j2 = domain.l2, domain.i2, domain.j2
        for (dl2, di2, dj2), fn in rules:
            coeff = np.asarray(fn(q, l2, i2, j2) if q is not None else fn(l2, i2, j2),
                               dtype=float)
            tgt = codomain.locate(l2 + dl2, i2 + di2, j2 + dj2)
            keep = (tgt >= 0) & (coeff != 0.0)
            rows.append(tgt[keep])
            cols.append(np.nonzero(keep)[0])
            vals.append(coeff[keep])
        mat = sp.coo_matrix(
            (np.concatenate(vals) if vals else [],
             (np.concatenate(rows) if rows else [], np.concatenate(cols) if cols else [])),
            shape=(codomain.dim, domain.dim))
        return cls(domain, codomain, mat.tocsr(), margin)

    @classmethod
    def identity(cls, space):
        return cls(space, space, sp.identity(space.dim, format="csr"), HalfInt(0))

    def shift_set(self):
        """Set of (dl2, di2, dj2) shifts present in the stored entries."""
        coo = self.matrix.tocoo()
        out = set()
        d, c = self.codomain, self.domain
        for r, s in zip(coo.row, coo.col):
            out.add((int(d.l2[r] - c.l2[s]), int(d.i2[r] - c.i2[s]), int(d.j2[r] - c.j2[s])))
        return out

    def apply(self, vec: StateVector) -> StateVector:
        if vec.space is not self.domain and vec.space != self.domain:
            raise ValueError("vector lives in a different space")
        out = self.matrix @ vec.to_array()
        amps = {}
        for pos in np.nonzero(out)[0]:
            amps[self.codomain.basis_index(int(pos))] = complex(out[pos])
        return StateVector(self.codomain, amps)

    # sparse algebra; margins add under composition
    def __matmul__(self, other):
        if isinstance(other, BandedOperator):
            if other.codomain != self.domain:
                raise ValueError("composition domain mismatch")
            return BandedOperator(other.domain, self.codomain,
                                  self.matrix @ other.matrix,
                                  self.interior_margin + other.interior_margin)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, BandedOperator):
            return BandedOperator(self.domain, self.codomain,
                                  self.matrix + other.matrix,
                                  max(self.interior_margin, other.interior_margin))
        return NotImplemented

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        return BandedOperator(self.domain, self.codomain, scalar * self.matrix,
                              self.interior_margin)

    def adjoint(self) -> "BandedOperator":
        # all tables are real, so the adjoint is the transpose
        return BandedOperator(self.codomain, self.domain, self.matrix.T.tocsr(),
                              self.interior_margin)

    def restrict_cols(self, mask: np.ndarray) -> sp.csr_matrix:
        keep = sp.diags(mask.astype(float))
        return (self.matrix @ keep).tocsr()

    def interior_residual_norm(self, margin=None) -> float:
        """Operator norm restricted to interior columns."""
        m = self.interior_margin if margin is None else HalfInt.of(margin)
        return operator_norm(self.restrict_cols(self.domain.interior_mask(m)))


def operator_norm(mat, exact_dim: int = 1200) -> float:
    """Largest singular value of a sparse matrix.

    Exact dense SVD up to exact_dim; beyond that an ARPACK largest singular
    value with a deterministic start vector, falling back to the rigorous
    upper bound sqrt(norm_1 * norm_inf) for matrices that are numerically
    zero (where ARPACK cannot converge and the bound already certifies any
    realistic threshold).
    """
    mat = sp.csr_matrix(mat)
    if min(mat.shape) == 0 or mat.nnz == 0:
        return 0.0
    upper = float(np.sqrt(spla.norm(mat, 1) * spla.norm(mat, np.inf)))
    if upper < 1e-13:
        return upper
    if min(mat.shape) <= exact_dim:
        return float(np.linalg.norm(mat.toarray(), 2))
    try:
        v0 = np.ones(mat.shape[1]) / np.sqrt(mat.shape[1])
        s = spla.svds(mat, k=1, v0=v0, return_singular_vectors=False)
        return float(s[0])
    except Exception:
        return upper


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def generator_op(gen: str, q, space: TruncatedSpace, codomain: TruncatedSpace = None
                 ) -> BandedOperator:
    """Banded operator of a generator on a truncated space.

    alpha and gamma lower the column weight by 1/2 (bundle winding k -> k-1),
    their adjoints raise it.  For a full space the codomain is the space
    itself; for bundles it is the neighbouring bundle with the same cutoff.
    """
    if gen not in _GEN_RULES:
        raise ValueError(f"unknown generator {gen!r}")
    qp = QParam.of(q).require_strict()
    if codomain is None:
        if space.full:
            codomain = space
        else:
            dk = -1 if gen in ("alpha", "gamma") else 1
            codomain = bundle_space(space.k + dk, space.lmax.twice)
    return BandedOperator.from_shift_rules(space, codomain, _GEN_RULES[gen],
                                           HalfInt(1), q=qp.q)


def involution(vec: StateVector, q) -> StateVector:
    """The *-involution on basis expansions.

    e^(l)_{i,j} is sent to (-1)^(2l+i+j) q^(i+j) e^(l)_{-i,-j}; amplitudes are
    conjugated.  Bundle-supported vectors land in the opposite bundle.
    """
    qp = QParam.of(q)
    if vec.space.full:
        target = vec.space
    else:
        target = bundle_space(-vec.space.k, vec.space.lmax.twice)
    amps = {}
    for idx, amp in vec.amplitudes.items():
        l2, i2, j2 = idx.key
        phase = (-1.0) ** ((2 * l2 + i2 + j2) // 2) * qp.q ** ((i2 + j2) // 2)
        tgt = BasisIndex(HalfInt(l2), HalfInt(-i2), HalfInt(-j2))
        amps[tgt] = amps.get(tgt, 0.0) + phase * np.conj(amp)
    return StateVector(target, amps)


def _apply_gen_dict(gen: str, q: float, amps: dict) -> dict:
    """Apply one generator to a raw {key: amplitude} dict, untruncated."""
    out = {}
    for (l2, i2, j2), amp in amps.items():
        for (dl2, di2, dj2), fn in _GEN_RULES[gen]:
            c = float(fn(q, l2, i2, j2))
            if c != 0.0:
                key = (l2 + dl2, i2 + di2, j2 + dj2)
                out[key] = out.get(key, 0.0) + c * amp
    return {k: v for k, v in out.items() if v != 0.0}


def haar_state(word, q, lmax) -> complex:
    """Haar state of a product of generators, via the GNS cyclic vector.

    ``word`` is a sequence over {"alpha", "alpha*", "gamma", "gamma*"}; the
    product is applied right to left to e^(0)_{0,0} and paired with it again.
    The orbit of a length-n word stays below spin n/2, so the computation is
    truncation exact; lmax only expresses the caller's truncation budget and
    must satisfy 2*lmax >= len(word).
    """
    word = tuple(word)
    for g in word:
        if g not in GENERATORS:
            raise ValueError(f"unknown generator {g!r} in word")
    lmax = HalfInt.of(lmax)
    if lmax.twice < len(word):
        raise ValueError(f"word of length {len(word)} needs lmax >= {len(word)}/2")
    qp = QParam.of(q).require_strict()
    amps = {(0, 0, 0): 1.0}
    for g in reversed(word):
        amps = _apply_gen_dict(g, qp.q, amps)
    return complex(amps.get((0, 0, 0), 0.0))


def spectral_project(vec: StateVector, l) -> StateVector:
    """Restrict a vector to its spin-l component."""
    l2 = HalfInt.of(l).twice
    amps = {idx: amp for idx, amp in vec.amplitudes.items() if idx.l.twice == l2}
    return StateVector(vec.space, amps)


def quantum_dimension(q, l) -> float:
    """q-deformed dimension [2l+1] of the spin-l irreducible."""
    l = HalfInt.of(l)
    if l.twice < 0:
        raise ValueError("spin must be nonnegative")
    return qnumber(q, l.twice + 1)
