"""
The renormalized potential and both variational objectives.

``potential`` evaluates the normalized interaction density

    V^f_T(phi)/|Lambda| = f(phi) + mean( lam [[phi^4]]
                                         + (lam^2 gamma_T / 2) [[phi^2]] )
                          - delta_T,

with gamma = delta = 0 in d = 2 (the quartic pair a_T = 6 c_T, b_T =
3 c_T^2 is absorbed into the Wick polynomial).  The orientation of the
quadratic counterterm is fixed by the requirement that the change of
variables balances exactly: the available gamma-term must assemble the
bounded object W^2 o W^[3] - gamma W, which pins the coefficient
+lam^2 gamma/2 on [[phi^2]].

``bare_objective`` is the direct evaluator V^f_T(W_T + Z_T)/|Lambda| +
||u||^2_H / 2 (the d = 2 functional, and the d = 3 pre-change-of-variables
form kept for the ledger-consistency test).  ``upsilon_terms`` and
``renormalized_objective`` implement the six-term renormalized functional;
both evaluators agree in expectation, which is the strongest correctness
check in the acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drift import ControlledPath
from .flow import wick_quartic, wick_square
from .paracalc import k1, k2, lp_all, para_gt, resonant
from .renorm import RenormConstants
from .stochvec import StochasticVector


@dataclass(frozen=True)
class PotentialConfig:
    """Coupling and test functional; f is either zero or phi -> mean(phi g)."""

    lam: float
    f_g: np.ndarray | None = None  # linear test function, normalized pairing

    def f_value(self, phi: np.ndarray) -> float:
        if self.f_g is None:
            return 0.0
        return float(np.mean(phi * self.f_g))


def potential(phi: np.ndarray, cfg: PotentialConfig, constants: RenormConstants) -> float:
    """Normalized potential density at the final scale of the constants."""
    lam = cfg.lam
    c = constants.c_T
    val = cfg.f_value(phi) + lam * float(np.mean(wick_quartic(phi, c)))
    if constants.grid.d == 3 and lam != 0.0:
        val += 0.5 * lam**2 * constants.gamma_T * float(np.mean(wick_square(phi, c)))
        val -= constants.delta
    return val


def bare_objective(sv: StochasticVector, cpath: ControlledPath,
                   cfg: PotentialConfig, constants: RenormConstants) -> float:
    """Pathwise V^f_T(W_T + Z_T)/|Lambda| + ||u||^2_H / 2."""
    grid, tg = sv.grid, sv.timegrid
    Y = sv.W_T + grid.inverse(cpath.Z_hat[-1])
    un = tg.integrate(np.array([float(np.sum(np.abs(u) ** 2)) for u in cpath.u_hat]))
    return potential(Y, cfg, constants) + 0.5 * un


# -- the six renormalized terms ---------------------------------------------


def upsilon_terms(sv: StochasticVector, cpath: ControlledPath, lam: float,
                  cfg: PotentialConfig, mode: str = "finite",
                  per_term_tail: bool = False) -> dict[str, float]:
    """
    Evaluate Upsilon^(1)..Upsilon^(6) and the f-term for one sample.

    ``mode="finite"`` is the scale-T functional; ``mode="limit"`` evaluates
    the T->infinity form: Upsilon^(2) drops, Upsilon^(5) keeps only the
    running gamma integral, and the plain products of Upsilon^(4) are
    expanded through paraproducts with the stored resonant components.

    With ``per_term_tail`` the two scale integrals of Upsilon^(6) are
    computed from their displays (the renormalized square object and the
    K3 commutator separately); otherwise their algebraically identical
    combined form is used, which skips one resonant product per knot.
    """
    if mode not in ("finite", "limit"):
        raise ValueError(f"unknown mode {mode!r}")
    grid, tg, part = sv.grid, sv.timegrid, sv.part
    kernels = sv.constants.kernels
    knots = tg.knots
    w = tg.weights
    out = {f"ups{i}": 0.0 for i in range(1, 7)}

    W_T = sv.W_T
    Z_T = grid.inverse(cpath.Z_hat[-1])
    K_T = grid.inverse(cpath.K_hat[-1])
    out["fterm"] = cfg.f_value(W_T + Z_T)
    if lam == 0.0:
        return out

    Zflat_T = grid.inverse(cpath.Zflat_hat[-1])
    Zdiff_T = Z_T - Zflat_T
    W2b = sv.W2_T_blocks
    Kb = lp_all(part, K_T)
    W3intb = lp_all(part, sv.W3int_T)
    gamma = sv.constants.gamma
    gamma_dot = sv.constants.gamma_dot

    # (1): -lam/2 K2(W^2, K, K) + lam/2 <W^2 < K, K> - lam^2 <W^2 < W^[3], K>
    out["ups1"] = (
        -0.5 * lam * k2(part, sv.W2_T, K_T, K_T, fb=W2b, gb=Kb, hb=Kb)
        + 0.5 * lam * grid.inner(para_gt(part, K_T, sv.W2_T, fb=Kb, gb=W2b), K_T)
        - lam**2 * grid.inner(para_gt(part, sv.W3int_T, sv.W2_T, fb=W3intb, gb=W2b), K_T)
    )

    # (2): lam <W^2 > (Z - Zflat), K>, vanishing in the limit functional
    if mode == "finite":
        out["ups2"] = lam * grid.inner(para_gt(part, sv.W2_T, Zdiff_T, fb=W2b), K_T)

    # (4): the cubic block
    if mode == "finite":
        out["ups4"] = (
            4.0 * lam * float(np.mean(W_T * K_T**3))
            - 12.0 * lam**2 * float(np.mean(W_T * sv.W3int_T * K_T**2))
            + 12.0 * lam**3 * float(np.mean(W_T * sv.W3int_T**2 * K_T))
        )
    else:
        Wb = lp_all(part, W_T)
        w1w3 = (para_gt(part, W_T, sv.W3int_T, fb=Wb, gb=W3intb)
                + para_gt(part, sv.W3int_T, W_T, fb=W3intb, gb=Wb)
                + sv.res13_T)
        gtgt = para_gt(part, sv.W3int_T, sv.W3int_T, fb=W3intb, gb=W3intb)
        gtb = lp_all(part, gtgt)
        w1w3sq = (
            W_T * resonant(part, sv.W3int_T, sv.W3int_T, fb=W3intb, gb=W3intb)
            + 2.0 * sv.res13_T * sv.W3int_T
            + 2.0 * k1(part, sv.W3int_T, sv.W3int_T, W_T, fb=W3intb, gb=W3intb, hb=Wb)
            + 2.0 * para_gt(part, W_T, gtgt, fb=Wb, gb=gtb)
            + 2.0 * para_gt(part, gtgt, W_T, fb=gtb, gb=Wb)
        )
        out["ups4"] = (
            4.0 * lam * float(np.mean(W_T * K_T**3))
            - 12.0 * lam**2 * grid.inner(w1w3, K_T**2)
            + 12.0 * lam**3 * grid.inner(w1w3sq, K_T)
        )

    # (5): the gamma ledger residue; spectral shortcut for the time integral
    zz = np.abs(cpath.Z_hat[-1]) ** 2
    run = 0.0
    for k in range(1, len(knots)):
        tdot = kernels.theta_dot_symbol(grid, knots[k])
        if tdot.max() <= 0.0:
            continue
        theta = kernels.theta_symbol(grid, knots[k])
        run += w[k] * gamma[k] * float(np.sum(theta * tdot * zz))
    out["ups5"] = lam**2 * run
    if mode == "finite":
        out["ups5"] += lam**2 * gamma[-1] * (
            float(np.mean(Zflat_T * Zdiff_T)) + 0.5 * float(np.mean(Zdiff_T**2))
        )

    # (3) and the scale integrals of (6)
    ups3 = 0.0
    tail = 0.0
    for k in range(1, len(knots)):
        t = knots[k]
        zflat_k = cpath.Zflat_hat[k]
        have_flat = bool(np.any(zflat_k))
        tdot = kernels.theta_dot_symbol(grid, t)
        have_dot = tdot.max() > 0.0
        if not (have_flat or have_dot):
            continue
        K_k = grid.inverse(cpath.K_hat[k])
        w2b_k = lp_all(part, sv.W2_at(k))
        if have_dot:
            zdot_k = grid.inverse(tdot * cpath.Z_hat[-1])
            ups3 += w[k] * grid.inner(
                para_gt(part, None, None, fb=w2b_k, gb=lp_all(part, zdot_k)), K_k
            )
        if have_flat:
            zflat_field = grid.inverse(zflat_k)
            zflat_sq = float(np.sum(np.abs(zflat_k) ** 2))
            if per_term_tail:
                jsym = kernels.jay(grid, t)
                jw2 = grid.inverse(grid.forward(sv.W2_at(k)) * jsym)
                w22 = resonant(part, jw2, jw2) - gamma_dot[k]
                A = para_gt(part, None, None, fb=w2b_k, gb=lp_all(part, zflat_field))
                ja_sq = float(np.sum(np.abs(grid.forward(A) * jsym) ** 2))
                kk3 = ja_sq - float(np.mean(resonant(part, jw2, jw2) * zflat_field**2))
                tail += w[k] * (float(np.mean(w22 * zflat_field**2)) + kk3)
            else:
                # identical sum: mean((J A)^2) - gamma_dot * mean(Zflat^2)
                ja_hat = (cpath.l_hat[k] - cpath.w_hat[k]) / lam
                tail += w[k] * (float(np.sum(np.abs(ja_hat) ** 2))
                                - gamma_dot[k] * zflat_sq)
    out["ups3"] = lam * ups3
    out["ups6"] = (-(lam**2) * grid.inner(sv.W2o3_T, K_T) - 0.5 * lam**2 * tail)
    return out


def renormalized_objective(sv: StochasticVector, cpath: ControlledPath,
                           cfg: PotentialConfig, mode: str = "finite",
                           per_term_tail: bool = False) -> dict[str, float]:
    """
    Pathwise renormalized objective

        Phi_T + lam ||Z_T||_{L^4}^4 + ||l||^2_H / 2,

    returned with its term breakdown.
    """
    grid, tg = sv.grid, sv.timegrid
    lam = cfg.lam
    ups = upsilon_terms(sv, cpath, lam, cfg, mode=mode, per_term_tail=per_term_tail)
    Z_T = grid.inverse(cpath.Z_hat[-1])
    z4 = lam * float(np.mean(Z_T**4))
    ln = 0.5 * tg.integrate(np.array([float(np.sum(np.abs(v) ** 2)) for v in cpath.l_hat]))
    phi = sum(ups[f"ups{i}"] for i in range(1, 7)) + ups["fterm"]
    ups.update(phi=phi, z4=z4, lcost=ln, value=phi + z4 + ln)
    return ups
