"""Closed-form monogenic functions used as manufactured solutions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import BElement, components, embed_point, inv, mul


def zeta_power(x, y, p: int) -> BElement:
    z = embed_point((np.asarray(x, dtype=float), np.asarray(y, dtype=float)))
    out = z
    for _ in range(p - 1):
        out = mul(out, z)
    return out


@dataclass(frozen=True)
class Manufactured:
    """A monogenic ``Phi`` with an antiderivative ``Psi`` (so ``V = U1[Psi]``)."""

    name: str
    phi: Callable
    psi: Callable

    def boundary_data(self, x, y):
        c = components(self.phi(x, y))
        return c.u1, c.u3

    def potential(self, x, y):
        return components(self.psi(x, y)).u1


def _power(p: int) -> Manufactured:
    return Manufactured(
        name="zeta" if p == 1 else f"zeta{p}",
        phi=lambda x, y: zeta_power(x, y, p),
        psi=lambda x, y: zeta_power(x, y, p + 1) * (1.0 / (p + 1)),
    )


def pole(x0: float, y0: float = 0.0) -> Manufactured:
    """``(zeta - zeta0)^-1`` for a point ``zeta0`` outside the domain.

    The potential is not provided (the antiderivative is a logarithm).
    """
    def phi(x, y):
        return inv(embed_point((np.asarray(x, dtype=float) - x0, np.asarray(y, dtype=float) - y0)))

    def psi(x, y):
        raise NotImplementedError("no closed-form potential for a pole")

    return Manufactured(name="pole", phi=phi, psi=psi)


MANUFACTURED = {"zeta": _power(1), "zeta2": _power(2), "zeta3": _power(3)}
