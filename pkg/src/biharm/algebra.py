"""Arithmetic in the biharmonic algebra B.

B is the commutative algebra over C spanned by ``e1`` (the identity) and
``e2`` with ``e2 * e2 = e1 + 2i e2``.  The element ``rho = 2 e1 + 2i e2``
is nilpotent, so every element can also be written as ``alpha + beta*rho``
with complex ``alpha, beta`` -- a complex dual number.  Inversion goes
through that form.

Coefficients may be complex scalars or numpy arrays of matching (or
broadcastable) shape; all operations act elementwise in that case.
"""

from __future__ import annotations

from typing import NamedTuple, Union

import numpy as np

from .errors import NotInvertible

Scalar = Union[complex, float, int, np.ndarray]

INVERT_RTOL = 1e-14


class PlanePoint(NamedTuple):
    x: float
    y: float


class ComponentQuad(NamedTuple):
    """Real components of ``u1 e1 + u2 i e1 + u3 e2 + u4 i e2``."""

    u1: Scalar
    u2: Scalar
    u3: Scalar
    u4: Scalar


def _coef(v):
    if isinstance(v, np.ndarray):
        return v.astype(complex, copy=False)
    return complex(v)


class BElement:
    """``c1 e1 + c2 e2`` with complex (or complex-array) coefficients."""

    __slots__ = ("c1", "c2")

    def __init__(self, c1: Scalar = 0.0, c2: Scalar = 0.0, *, check: bool = True):
        c1 = _coef(c1)
        c2 = _coef(c2)
        if check and not (np.all(np.isfinite(c1)) and np.all(np.isfinite(c2))):
            raise ValueError("BElement coefficients must be finite")
        self.c1 = c1
        self.c2 = c2

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = as_belement(other)
        return BElement(self.c1 + other.c1, self.c2 + other.c2, check=False)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_belement(other)
        return BElement(self.c1 - other.c1, self.c2 - other.c2, check=False)

    def __rsub__(self, other):
        return as_belement(other) - self

    def __neg__(self):
        return BElement(-self.c1, -self.c2, check=False)

    def __mul__(self, other):
        if isinstance(other, BElement):
            return mul(self, other)
        if np.isscalar(other) or isinstance(other, np.ndarray):
            return BElement(self.c1 * other, self.c2 * other, check=False)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BElement):
            return NotImplemented
        return bool(np.array_equal(self.c1, other.c1) and np.array_equal(self.c2, other.c2))

    def __hash__(self):
        if isinstance(self.c1, np.ndarray) or isinstance(self.c2, np.ndarray):
            raise TypeError("array-valued BElement is unhashable")
        return hash((self.c1, self.c2))

    def __repr__(self):
        return f"BElement({self.c1!r}, {self.c2!r})"

    def __getitem__(self, idx):
        return BElement(np.asarray(self.c1)[idx], np.asarray(self.c2)[idx], check=False)

    @property
    def shape(self):
        return np.broadcast(self.c1, self.c2).shape

    def norm(self):
        """Euclidean norm ``sqrt(|c1|^2 + |c2|^2)``."""
        return np.sqrt(np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2)

    def isclose(self, other, atol: float = 1e-12) -> bool:
        other = as_belement(other)
        return bool(
            np.all(np.abs(self.c1 - other.c1) <= atol)
            and np.all(np.abs(self.c2 - other.c2) <= atol)
        )


def as_belement(v) -> BElement:
    if isinstance(v, BElement):
        return v
    # scalars embed along the identity
    return BElement(v, 0.0, check=False)


E1 = BElement(1.0, 0.0)
E2 = BElement(0.0, 1.0)
RHO = BElement(2.0, 2.0j)


def mul(a: BElement, b: BElement) -> BElement:
    a1, a2, b1, b2 = a.c1, a.c2, b.c1, b.c2
    return BElement(a1 * b1 + a2 * b2, a1 * b2 + a2 * b1 + 2j * a2 * b2, check=False)


def to_dual(a: BElement):
    """Return ``(alpha, beta)`` with ``a = alpha*e1 + beta*rho``."""
    return a.c1 + 1j * a.c2, -0.5j * a.c2


def from_dual(alpha, beta) -> BElement:
    return BElement(alpha + 2.0 * beta, 2j * beta, check=False)


def inv(a: BElement, rtol: float = INVERT_RTOL) -> BElement:
    """Inverse of ``a``.

    In dual form ``(alpha + beta*rho)^-1 = 1/alpha - beta/alpha**2 * rho``, so
    ``a`` is invertible exactly when ``alpha = c1 + i c2`` is nonzero.
    ``NotInvertible`` is raised when ``|alpha| <= rtol * max(1, ||a||)``.
    """
    alpha, beta = to_dual(a)
    floor = rtol * np.maximum(1.0, a.norm())
    if np.any(np.abs(alpha) <= floor):
        raise NotInvertible("element has no component along the identity (alpha = c1 + i c2 = 0)")
    ainv = 1.0 / alpha
    return from_dual(ainv, -beta * ainv * ainv)


def embed_point(p) -> BElement:
    """``(x, y) -> x e1 + y e2``; accepts a PlanePoint or array pair."""
    x, y = p
    return BElement(np.asarray(x, dtype=float) if isinstance(x, np.ndarray) else float(x),
                    np.asarray(y, dtype=float) if isinstance(y, np.ndarray) else float(y))


def components(a: BElement) -> ComponentQuad:
    return ComponentQuad(a.c1.real, a.c1.imag, a.c2.real, a.c2.imag)


def from_components(q) -> BElement:
    u1, u2, u3, u4 = q
    return BElement(np.asarray(u1) + 1j * np.asarray(u2), np.asarray(u3) + 1j * np.asarray(u4))


def resolvent(x, y) -> BElement:
    """``(x e1 + y e2)^-1`` for real arrays ``x, y`` with ``x + iy != 0``.

    Closed form ``(1/z + i y/z^2) e1 - (y/z^2) e2`` where ``z = x + iy``.
    No invertibility check; callers guarantee separation from zero.
    """
    z = x + 1j * y
    rz = 1.0 / z
    yz2 = y * rz * rz
    return BElement(rz + 1j * yz2, -yz2, check=False)
