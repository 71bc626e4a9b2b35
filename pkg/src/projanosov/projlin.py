"""Projective linear algebra on PGL_d(R).

Matrices are handled up to scale: every element is stored with
``|det| = 1`` and a recorded determinant sign. Eigenvalue moduli are
always reported for the normalized matrix, so they multiply to one.

Eigenvalues come from LAPACK's ``geev`` (Hessenberg reduction followed by
Francis double-shift QR). For long words the smallest moduli of a product
lose relative accuracy, so :func:`spectrum` can take the exactly evaluated
inverse as well and read each modulus from whichever side is better
conditioned.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import BadRank, EigenFailure, SingularMatrix

MAX_DIM = 64
PROXIMALITY_TOL = 1e-6
REAL_TOL = 1e-8
TIE_TOL = 1e-8
MAX_CONDITION = 1e14


@dataclass(frozen=True, eq=False)
class ProjMat:
    """A d x d real matrix with ``|det| = 1`` standing for its class in PGL_d(R)."""

    entries: np.ndarray
    det_sign: int = 1

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __matmul__(self, other):
        return normalize(self.entries @ np.asarray(other), check_condition=False)

    def inverse(self) -> "ProjMat":
        return normalize(np.linalg.inv(self.entries), check_condition=False)

    def __repr__(self):
        return f"ProjMat(dim={self.dim}, det_sign={self.det_sign:+d})"


def normalize(m, *, check_condition: bool = True) -> ProjMat:
    """Scale ``m`` by ``|det m|^(-1/d)``.

    Raises SingularMatrix when the determinant is zero or not finite, or when
    ``check_condition`` is set and the 2-norm condition number exceeds 1e14.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SingularMatrix(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SingularMatrix("matrix has non-finite entries")
    d = a.shape[0]
    sign, logdet = np.linalg.slogdet(a)
    if sign == 0 or not np.isfinite(logdet) or logdet < np.log(1e-300):
        raise SingularMatrix("determinant vanishes")
    if check_condition and np.linalg.cond(a) > MAX_CONDITION:
        raise SingularMatrix("condition number exceeds 1e14")
    if abs(logdet) > 1e-14:
        # already-normalized input is kept bit-for-bit
        a *= np.exp(-logdet / d)
    return ProjMat(a, int(sign))


def as_array(g) -> np.ndarray:
    return np.asarray(g, dtype=float)


def same_projective(g, h, tol: float = 1e-8) -> bool:
    """Entrywise equality up to a global sign, after |det| normalization.

    ``h`` is matched to the normalized ``g`` by the least-squares scalar
    rather than by its own determinant: for ill-conditioned matrices the
    computed determinant is far less accurate than the entries.
    """
    a = as_array(normalize(g, check_condition=False))
    b = np.asarray(h, dtype=float)
    if a.shape != b.shape:
        return False
    bb = float(np.sum(b * b))
    if bb == 0.0 or not np.isfinite(bb):
        return False
    b = b * (float(np.sum(a * b)) / bb)
    scale = max(1.0, np.abs(a).max())
    return bool(np.abs(a - b).max() <= tol * scale)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalue moduli plus attracting data.

    ``attracting_line`` is the top eigenvector when the element is proximal.
    ``attracting_functional`` is the attracting point of the dual action
    ``f -> f o g^{-1}``: the left eigenvector for the smallest modulus, whose
    kernel is the span of the top d-1 eigendirections. It is present when
    ``g^{-1}`` is proximal.
    """

    moduli: np.ndarray
    top_real: bool
    top_sign: int
    attracting_line: np.ndarray | None = None
    attracting_functional: np.ndarray | None = None
    gaps: np.ndarray = field(default=None)

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @property
    def proximal(self) -> bool:
        return self.attracting_line is not None

    @property
    def biproximal(self) -> bool:
        return self.attracting_line is not None and self.attracting_functional is not None

    @property
    def positively_proximal(self) -> bool:
        return self.proximal and self.top_sign > 0

    def log_gap(self, i: int = 1) -> float:
        """log(lambda_i / lambda_{i+1}), 1-based."""
        return float(np.log(self.gaps[i - 1]))

    def half_log_spread(self) -> float:
        """(1/2) log(lambda_1 / lambda_d)."""
        return 0.5 * float(np.log(self.moduli[0] / self.moduli[-1]))


def _unit(v: np.ndarray) -> np.ndarray:
    v = np.real_if_close(v, tol=1e6).real.astype(float)
    v = v / np.linalg.norm(v)
    k = np.argmax(np.abs(v))
    return v if v[k] > 0 else -v


def _eig(a: np.ndarray):
    try:
        vals, vecs = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(vals)):
        raise EigenFailure("non-finite eigenvalues")
    return vals, vecs


def _tied_gaps(moduli: np.ndarray, tie_tol: float) -> np.ndarray:
    ratios = moduli[:-1] / moduli[1:]
    ratios[ratios - 1.0 < tie_tol] = 1.0
    return ratios


def spectrum(
    g,
    inverse=None,
    *,
    proximality_tol: float = PROXIMALITY_TOL,
    real_tol: float = REAL_TOL,
    tie_tol: float = TIE_TOL,
) -> Spectrum:
    """Eigenvalue moduli (descending) of a normalized matrix with attracting data.

    ``inverse``, when given, must be the inverse of ``g`` computed
    independently (for a word, the product of inverse generators in reverse
    order). Moduli below the geometric middle are then read off the inverse,
    and the single worst-conditioned isolated modulus is closed from
    ``prod(moduli) = 1``. Such a pair is taken to be |det|-normalized already:
    a long product is too ill-conditioned for its determinant to be recomputed.
    """
    a = as_array(g)
    d = a.shape[0]
    if d > MAX_DIM:
        raise BadRank(f"dimension {d} exceeds {MAX_DIM}")
    if not isinstance(g, ProjMat) and inverse is None:
        _, logdet = np.linalg.slogdet(a)
        if abs(logdet) > 1e-6:
            a = as_array(normalize(a, check_condition=False))
    vals, vecs = _eig(a)
    mods = np.abs(vals)
    order = np.argsort(-mods, kind="stable")
    vals, vecs, mods = vals[order], vecs[:, order], mods[order]
    if inverse is None and mods[-1] <= 0:
        raise SingularMatrix("zero eigenvalue")

    moduli = mods.copy()
    ivals = ivecs = None
    if inverse is not None:
        ivals, ivecs = _eig(as_array(inverse))
        iorder = np.argsort(-np.abs(ivals), kind="stable")
        ivals, ivecs = ivals[iorder], ivecs[:, iorder]
        with np.errstate(divide="ignore"):
            from_inverse = np.sort(1.0 / np.abs(ivals))[::-1]
        # relative error of the i-th modulus is about eps * lam_1 / lam_i read
        # from g and eps * lam_i / lam_d read from the inverse; values at the
        # noise floor of one side show up as huge estimates on that side
        with np.errstate(divide="ignore", invalid="ignore"):
            err_g = moduli[0] / moduli
            err_inv = from_inverse / from_inverse[-1]
        moduli = np.where(err_g <= err_inv, moduli, from_inverse)
        moduli = np.sort(moduli)[::-1]
    moduli = _close_determinant(moduli)

    top = vals[0]
    top_real = bool(abs(top.imag) <= real_tol * abs(top))
    gaps = _tied_gaps(moduli, tie_tol)

    line = None
    top_sign = 0
    if top_real:
        v = _unit(vecs[:, 0])
        rq = float(v @ a @ v)
        top_sign = 1 if rq > 0 else -1
        if d > 1 and gaps[0] > 1.0 + proximality_tol:
            line = v

    functional = None
    if d > 1 and gaps[-1] > 1.0 + proximality_tol:
        if ivals is not None:
            bottom = ivals[0]
            if abs(bottom.imag) <= real_tol * abs(bottom):
                # top eigenvector of (g^{-1})^T
                lvals, lvecs = _eig(as_array(inverse).T)
                k = int(np.argmax(np.abs(lvals)))
                functional = _unit(lvecs[:, k])
        else:
            bottom = vals[-1]
            if abs(bottom.imag) <= real_tol * abs(bottom):
                lvals, lvecs = _eig(a.T)
                k = int(np.argmin(np.abs(lvals)))
                functional = _unit(lvecs[:, k])

    return Spectrum(
        moduli=moduli,
        top_real=top_real,
        top_sign=top_sign,
        attracting_line=line,
        attracting_functional=functional,
        gaps=gaps,
    )


def _close_determinant(moduli: np.ndarray) -> np.ndarray:
    """Replace the worst-conditioned isolated modulus using prod = 1.

    The relative error of modulus i read from g is about eps * lam_1/lam_i
    and from the inverse eps * lam_i/lam_d; the middle of the spectrum is
    worst on both sides.
    """
    d = len(moduli)
    if d < 2:
        return moduli
    err = np.minimum(moduli[0] / moduli, moduli / moduli[-1])
    k = int(np.argmax(err))
    if err[k] < 1e4:
        return moduli
    lo = moduli[k - 1] / moduli[k] if k > 0 else np.inf
    hi = moduli[k] / moduli[k + 1] if k < d - 1 else np.inf
    if min(lo, hi) < 1.0 + 1e-6:
        return moduli
    out = moduli.copy()
    others = np.delete(moduli, k)
    out[k] = np.exp(-np.sum(np.log(others)))
    return out


def is_proximal(g, **kwargs) -> tuple[bool, np.ndarray | None]:
    """Whether g has a unique real eigenvalue of maximal modulus, and its line."""
    s = spectrum(g, **kwargs)
    return s.proximal, s.attracting_line


def exterior_power(g, k: int) -> ProjMat:
    """Matrix of the induced action on wedge^k R^d, lexicographic basis."""
    a = as_array(g)
    d = a.shape[0]
    if not 1 <= k <= d:
        raise BadRank(f"k={k} out of range for d={d}")
    subsets = list(itertools.combinations(range(d), k))
    n = len(subsets)
    idx = np.array(subsets)
    # minors[I, J] = det(a[I][:, J])
    blocks = a[idx[:, None, :, None], idx[None, :, None, :]]
    with np.errstate(divide="ignore", invalid="ignore"):
        # singular minors are expected and evaluate to 0
        minors = np.linalg.det(blocks.reshape(n * n, k, k)).reshape(n, n)
    assert n == comb(d, k)
    return normalize(minors, check_condition=False)


def sym_basis(d: int) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of Sym_d(R): E_ii and (E_ij + E_ji)/sqrt 2, i < j.

    Ordered row-major over the upper triangle.
    """
    basis = []
    for i in range(d):
        for j in range(i, d):
            m = np.zeros((d, d))
            if i == j:
                m[i, i] = 1.0
            else:
                m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(m)
    return basis


def sym_coords(x: np.ndarray) -> np.ndarray:
    """Coordinates of a symmetric matrix in :func:`sym_basis`."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    iu = np.triu_indices(d)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return x[iu] * w


def sym_matrix(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`sym_coords`."""
    c = np.asarray(c, dtype=float)
    d = int(round((np.sqrt(8 * len(c) + 1) - 1) / 2))
    iu = np.triu_indices(d)
    w = np.where(iu[0] == iu[1], 1.0, 1.0 / np.sqrt(2.0))
    x = np.zeros((d, d))
    x[iu] = c * w
    return x + np.triu(x, 1).T


def sym_square(g) -> ProjMat:
    """Matrix of X -> g X g^T on Sym_d(R) in the basis of :func:`sym_basis`."""
    a = as_array(g)
    cols = [sym_coords(a @ b @ a.T) for b in sym_basis(a.shape[0])]
    return normalize(np.column_stack(cols), check_condition=False)
