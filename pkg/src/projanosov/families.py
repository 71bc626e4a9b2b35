"""Explicit representations and matrix families.

Includes the irreducible representations tau_d of SL_2(R), planar Schottky
groups, the reducible and block-doubled examples, the Sp / SO / G_2
elements with prescribed eigenvalues, and split octonions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .errors import BadInput
from .projlin import ProjMat, as_array, normalize, sym_square
from .wordgroup import Representation

# ---------------------------------------------------------------- tau_d


def tau_d(g, d: int) -> ProjMat:
    """Action ``P -> P o g^{-1}`` of SL_2(R) on binary forms of degree d-1.

    Basis ``u^{d-1}, u^{d-2} w, ..., w^{d-1}``.
    """
    g = as_array(g)
    if g.shape != (2, 2):
        raise BadInput("tau_d expects a 2x2 matrix")
    if d < 2:
        raise BadInput("tau_d needs d >= 2")
    if abs(np.linalg.det(g) - 1.0) > 1e-10:
        raise BadInput(f"det g = {np.linalg.det(g)!r}, expected 1")
    (a, b), (c, e) = np.linalg.inv(g)
    # coefficient arrays indexed by the power of w
    u_img = np.array([a, b])
    w_img = np.array([c, e])
    cols = []
    for k in range(d):
        p = np.array([1.0])
        for _ in range(d - 1 - k):
            p = np.convolve(p, u_img)
        for _ in range(k):
            p = np.convolve(p, w_img)
        cols.append(p)
    return normalize(np.column_stack(cols), check_condition=False)


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def schottky_sl2(mu: float, theta: float, *, signs=(1, 1)) -> Representation:
    """Rank-two group generated by diag(mu, 1/mu) and its conjugate by a rotation.

    ``signs`` multiplies each generator by +-1; a negative sign gives a
    generator of negative trace, the same element of PSL_2(R).
    """
    if not mu > 1:
        raise BadInput("need mu > 1")
    # multiples of pi/2 make b = a or a^{-1}
    k = theta / (np.pi / 2)
    if abs(k - round(k)) < 1e-9:
        raise BadInput("theta must not be a multiple of pi/2")
    a = np.diag([mu, 1.0 / mu])
    r = rotation(theta)
    b = r @ a @ r.T
    return Representation(
        [signs[0] * a, signs[1] * b], label=f"schottky(mu={mu:g}, theta={theta:g})"
    )


def tau_rep(rep: Representation, d: int) -> Representation:
    return Representation(
        [tau_d(as_array(g), d) for g in rep.images], label=f"tau_{d} o {rep.label}"
    )


def sym_square_rep(rep: Representation) -> Representation:
    return rep.map(sym_square, label=f"Sym^2 o {rep.label}")


def example_reducible(mu: float = 3.0, theta: float = np.pi / 4) -> Representation:
    """Images ``diag(g, 1)`` of a planar Schottky group in dimension 3."""
    base = schottky_sl2(mu, theta)
    return Representation(
        [block_diag(as_array(g), 1.0) for g in base.images], label=f"reducible o {base.label}"
    )


def example_block_double(phi_rep: Representation | None = None) -> Representation:
    """Images ``diag(phi, phi)``.

    ``phi_rep`` defaults to ``Sym^2`` of the standard Schottky group, a
    convex cocompact stand-in for a lattice in SO_0(1, 2).
    """
    if phi_rep is None:
        phi_rep = sym_square_rep(schottky_sl2(3.0, np.pi / 4))
    return Representation(
        [block_diag(as_array(g), as_array(g)) for g in phi_rep.images],
        label=f"block-double o {phi_rep.label}",
    )


def cyclic_rep(g, label: str = "") -> Representation:
    return Representation([g], label=label)


# ---------------------------------------------------------- Sp, SO, G2


def _strictly_decreasing(xs, lower: float) -> bool:
    return all(x > y for x, y in zip(xs, xs[1:])) and xs[-1] > lower


def sp_element(sigma) -> ProjMat:
    """``diag(s_1, ..., s_n, 1/s_1, ..., 1/s_n)`` in Sp(2n, R)."""
    sigma = [float(x) for x in sigma]
    if len(sigma) < 2 or not _strictly_decreasing(sigma, 1.0):
        raise BadInput("sp needs n >= 2 and s_1 > ... > s_n > 1")
    s = np.array(sigma)
    return normalize(np.diag(np.concatenate([s, 1.0 / s])))


def so_element(sigma) -> ProjMat:
    """cosh/sinh blocks for each s_i followed by a trailing 1, size 2n+1."""
    sigma = [float(x) for x in sigma]
    if len(sigma) < 2 or not _strictly_decreasing(sigma, 0.0):
        raise BadInput("so needs n >= 2 and s_1 > ... > s_n > 0")
    blocks = [np.array([[np.cosh(x), np.sinh(x)], [np.sinh(x), np.cosh(x)]]) for x in sigma]
    return normalize(block_diag(*blocks, 1.0))


def so_form(n: int) -> np.ndarray:
    """Quadratic form preserved by :func:`so_element`: diag(1, -1) per block, then 1."""
    return np.diag([1.0, -1.0] * n + [1.0])


def g2_element(t: float, s: float, *, as_printed: bool = False) -> ProjMat:
    """Hyperbolic element of split G_2 on the imaginary split octonions.

    Basis ``(i, j, k, e, ie, je, ke)``. The element boosts the planes
    (i, ie), (j, je), (k, ke) by t, s and -(s + t), with eigenvalues
    e^{+-t}, e^{+-s}, e^{+-(s+t)}, 1. The third boost must be -(s + t) for
    the map to preserve the octonion product; ``as_printed=True`` builds the
    variant with +(s + t), which has the same eigenvalues but is not an
    automorphism.
    """
    third = (s + t) if as_printed else -(s + t)
    m = np.eye(7)
    for (p, q), x in zip([(0, 4), (1, 5), (2, 6)], [t, s, third]):
        m[p, p] = m[q, q] = np.cosh(x)
        m[p, q] = m[q, p] = np.sinh(x)
    return normalize(m)


def appendix_b(family: str, *params, **kwargs) -> ProjMat:
    """Dispatch to :func:`sp_element`, :func:`so_element` or :func:`g2_element`."""
    if family == "sp":
        return sp_element(params[0] if len(params) == 1 else params)
    if family == "so":
        return so_element(params[0] if len(params) == 1 else params)
    if family == "g2":
        return g2_element(*params, **kwargs)
    raise BadInput(f"unknown family {family!r}")


# ----------------------------------------------------------- octonions


def quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product in the basis (1, i, j, k)."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ]
    )


def quat_conj(p: np.ndarray) -> np.ndarray:
    return p * np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True, eq=False)
class Octonion:
    """Split octonion ``a + b e`` with quaternions a, b.

    Coordinates in the basis ``(1, i, j, k, e, ie, je, ke)``.
    """

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float).reshape(8))

    @classmethod
    def basis(cls, n: int) -> "Octonion":
        return cls(np.eye(8)[n])

    def __mul__(self, other: "Octonion") -> "Octonion":
        return octonion_mul(self, other)

    def conj(self) -> "Octonion":
        return Octonion(np.concatenate([quat_conj(self.coords[:4]), -self.coords[4:]]))

    def norm(self) -> float:
        """``x * conj(x)``, a real number of signature (4, 4)."""
        return float((self * self.conj()).coords[0])


def octonion_mul(x: Octonion, y: Octonion) -> Octonion:
    """``(a + b e)(c + d e) = (a c + conj(d) b) + (b conj(c) + d a) e``."""
    a, b = x.coords[:4], x.coords[4:]
    c, d = y.coords[:4], y.coords[4:]
    first = quat_mul(a, c) + quat_mul(quat_conj(d), b)
    second = quat_mul(b, quat_conj(c)) + quat_mul(d, a)
    return Octonion(np.concatenate([first, second]))


def structure_constants() -> np.ndarray:
    """``T[p, q]`` = coordinates of ``basis(p) * basis(q)``."""
    t = np.zeros((8, 8, 8))
    for p, q in itertools.product(range(8), repeat=2):
        t[p, q] = octonion_mul(Octonion.basis(p), Octonion.basis(q)).coords
    return t


def verify_g2(m, tol: float = 1e-8) -> bool:
    """Whether ``1 (+) m`` is an algebra automorphism of the split octonions."""
    m = as_array(m)
    if m.shape != (7, 7):
        return False
    full = np.eye(8)
    full[1:, 1:] = m
    t = structure_constants()
    # alpha(e_p e_q) against alpha(e_p) alpha(e_q), for all 64 pairs
    lhs = np.einsum("ij,pqj->pqi", full, t)
    rhs = np.einsum("ap,bq,abi->pqi", full, full, t)
    scale = max(1.0, np.abs(lhs).max())
    return bool(np.abs(lhs - rhs).max() <= tol * scale)
