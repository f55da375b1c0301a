"""Reference computations that do not share code paths with the solver."""

from __future__ import annotations

import numpy as np


def laurent_coefficients(samples: np.ndarray) -> dict[int, complex]:
    """Coefficients ``c_m`` of ``sum_m c_m exp(i m theta)`` from uniform samples."""
    n = samples.size
    c = np.fft.fft(samples) / n
    m = np.fft.fftfreq(n, 1.0 / n).astype(int)
    return {int(k): complex(v) for k, v in zip(m, c) if abs(v) > 1e-14}


def _cauchy_side(coefs: dict[int, complex], z, inside: bool):
    """Complex Cauchy integral of a Laurent polynomial on the unit circle."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for m, c in coefs.items():
        if inside and m >= 0:
            out = out + c * z**m
        elif not inside and m < 0:
            out = out - c * z**m
    return out


def identity_map_limits(g1: np.ndarray, g3: np.ndarray, inside: bool):
    """Exact one-sided boundary limits on the unit circle for density samples.

    Works in dual form ``phi = A + B rho`` with ``A = g1 + i g3`` and
    ``B = -i g3 / 2``.  On the unit circle the resolvent integral splits as

        (tau~ - zeta)^-1 dtau~ = dtau/w - (i/2) rho d(b/w),

    ``w = tau - z``, ``b = Im w``.  After integration by parts this gives
    ``alpha = C[A]`` and ``beta = C[B] - (C[A'/tau] - conj(z) C[A'])/4``
    with ``C`` the complex Cauchy integral.  At the boundary ``conj(z) = 1/tau``.
    Returns ``(c1, c2)`` coefficient arrays at the nodes.
    """
    n = g1.size
    tau = np.exp(2j * np.pi * np.arange(n) / n)
    A = laurent_coefficients(g1 + 1j * g3)
    B = laurent_coefficients(-0.5j * g3)
    dA = {m - 1: m * c for m, c in A.items() if m != 0}
    dA_over_tau = {m - 1: c for m, c in dA.items()}
    alpha = _cauchy_side(A, tau, inside)
    beta = (_cauchy_side(B, tau, inside)
            - 0.25 * (_cauchy_side(dA_over_tau, tau, inside) - np.conj(tau) * _cauchy_side(dA, tau, inside)))
    # alpha + beta rho -> c1 e1 + c2 e2
    return alpha + 2 * beta, 2j * beta


def richardson_limit(fn, t: float, hs=(1e-2, 5e-3, 2.5e-3)) -> complex:
    """Limit of ``fn(t + h)`` as ``h -> 0`` from symmetric samples.

    Averaging ``h`` and ``-h`` removes the odd terms; two Richardson steps in
    ``h^2`` then remove the ``h^2`` and ``h^4`` terms.
    """
    sym = [0.5 * (fn(t + h) + fn(t - h)) for h in hs]
    r1 = [(4 * sym[i + 1] - sym[i]) / 3 for i in range(len(sym) - 1)]
    return (16 * r1[1] - r1[0]) / 15 if len(r1) > 1 else r1[0]


def kernel_direct(sigma, dsigma, t: float, s: float):
    """``k1, k2`` straight from their defining formulas (no limits, no charts)."""
    T = (t - 1j) / (t + 1j)
    S = (s - 1j) / (s + 1j)
    tau_t = sigma(T)
    tau_s = sigma(S)
    dtau_s = dsigma(S) * 2j / (s + 1j) ** 2
    D = tau_s - tau_t
    k1 = dtau_s / D - (1 + s * t) / ((s - t) * (s * s + 1))
    k2 = dtau_s * (tau_s.imag - tau_t.imag) / (2 * D * D) - dtau_s.imag / (2 * D)
    return k1, k2


def kernel_mp(coefs, t, s, dps: int = 40):
    """``k1, k2`` for ``sigma(T) = sum_k coefs[k-1] T^k`` in extended precision."""
    import mpmath as mp

    with mp.workdps(dps):
        t = mp.mpf(t)
        s = mp.mpf(s)
        T = (t - 1j) / (t + 1j)
        S = (s - 1j) / (s + 1j)
        c = [mp.mpc(complex(v)) for v in coefs]
        ts = sum(cc * S ** (k + 1) for k, cc in enumerate(c))
        tt = sum(cc * T ** (k + 1) for k, cc in enumerate(c))
        dts = sum((k + 1) * cc * S**k for k, cc in enumerate(c)) * 2j / (s + 1j) ** 2
        D = ts - tt
        k1 = dts / D - (1 + s * t) / ((s - t) * (s * s + 1))
        k2 = dts * (mp.im(ts) - mp.im(tt)) / (2 * D * D) - mp.im(dts) / (2 * D)
        return complex(k1), complex(k2)
