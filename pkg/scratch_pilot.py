"""Pilot validation of core conventions (not part of the package)."""
import numpy as np
from scipy.integrate import quad

from phi4lab import (
    make_grid, ScaleKernels, make_timegrid, DyadicPartition,
    para_gt, para_lt, resonant, lp_all, sample_flow, sample_marginal,
    c_constant, wick_square, wick_cube, gamma_dot, gamma_value,
)
from phi4lab.renorm import w3j_mean_square, kernels_jay

rng = np.random.default_rng(0)
ker = ScaleKernels()

# 1. kernel identity int sigma^2 = rho^2 (x > 0), via adaptive quadrature
print("== kernel identity ==")
for x in [0.3, 1.0, 2.7, 5.0]:
    for T in [2.0, 8.0]:
        val, _ = quad(lambda s: ker.sigma_sq_t(s, np.array([x]))[0], x * 0.99, min(2 * x * 1.01, max(2*x*1.01, T)), limit=200)
        # integrate over the actual support [x, 2x] intersect [0, T]
        hi = min(2 * x, T)
        if hi <= x:
            val = 0.0
        else:
            val, _ = quad(lambda s: ker.sigma_sq_t(s, np.array([x]))[0], x, hi, limit=200)
        target = ker.rho_t(T, np.array([x]))[0] ** 2
        print(f"  x={x} T={T}: int={val:.10f} rho^2={target:.10f} err={abs(val-target):.2e}")

# 2. Bony on random fields
print("== bony ==")
g2 = make_grid(2, 1.0, 16)
part = DyadicPartition(g2)
print("  partition sum err:", np.max(np.abs(part.symbols.sum(axis=0) - 1.0)))
f = rng.standard_normal(g2.shape); g = rng.standard_normal(g2.shape)
lhs = para_lt(part, f, g) + resonant(part, f, g) + para_gt(part, f, g)
print("  bony rel err:", np.max(np.abs(lhs - f * g)) / np.max(np.abs(f * g)))
# support separation
for i in range(-1, part.jmax + 1):
    for j in range(-1, part.jmax + 1):
        if abs(i - j) > 1:
            assert np.max(part.symbol(i) * part.symbol(j)) == 0.0, (i, j)
print("  support separation ok")

# 3. flow marginal law (small MC)
print("== flow law ==")
g3 = make_grid(3, 1.0, 8)
tg = make_timegrid(2.0, M=8)
S = 2000
acc = np.zeros(g3.shape)
for s in range(S):
    p = sample_flow(g3, ker, tg, seed=42, stream=s)
    acc += np.abs(p.W_hat[-1]) ** 2
emp = acc / S
target = ker.flow_variance(g3, 2.0) / g3.volume
z = (emp - target) / (target + 1e-300) * np.sqrt(S / 2.0)  # rough z-score
mask = target > 0
print(f"  max |z| over modes: {np.max(np.abs(z[mask])):.2f}  (zero-mode var: emp={emp[0,0,0]:.5f} target={target[0,0,0]:.5f})")
c2 = c_constant(g3, ker, 2.0)
means = [np.mean(wick_square(sample_marginal(g3, ker, 2.0, 7, s), c2)) for s in range(4000)]
print(f"  E mean [[W^2]] = {np.mean(means):.5f} +- {np.std(means)/np.sqrt(len(means)):.5f}")

# 4. THE gamma convention check: E[J W^2 o J W^2] vs gamma_dot
print("== gamma conventions ==")
t = 2.0
part3 = DyadicPartition(g3)
jd = kernels_jay(ker, g3, t)
vals = []
for s in range(1500):
    W = sample_marginal(g3, ker, t, 11, s)
    W2 = 12.0 * wick_square(W, c_constant(g3, ker, t))
    JW2 = g3.inverse(g3.forward(W2) * jd)
    vals.append(np.mean(resonant(part3, JW2, JW2)))
vals = np.array(vals)
gd = gamma_dot(g3, ker, t)
print(f"  MC E[JW2 o JW2] = {np.mean(vals):.5f} +- {np.std(vals)/np.sqrt(len(vals)):.5f}   gamma_dot = {gd:.5f}")

# 5. first-chaos coefficient of W^2 o W^[3] at k=0 vs gamma_T
T = 2.0
tgf = make_timegrid(T, M=24)
gam_T = gamma_value(g3, ker, T)
c_tab = np.array([c_constant(g3, ker, t_) for t_ in tgf.knots])
prods = []
for s in range(1500):
    p = sample_flow(g3, ker, tgf, seed=13, stream=s)
    w3int = g3.zeros(spectral=True)
    prev = g3.zeros(spectral=True)
    for k in range(1, len(tgf.knots)):
        jsym = kernels_jay(ker, g3, tgf.knots[k])
        W = p.W_at(k)
        w3hat = g3.forward(wick_cube(W, c_tab[k])) * 4.0
        integ = w3hat * jsym * jsym
        dt = tgf.knots[k] - tgf.knots[k-1]
        w3int += 0.5 * dt * (prev + integ)
        prev = integ
    W_T = p.W_at(len(tgf.knots)-1)
    W2_T = 12.0 * wick_square(W_T, c_tab[-1])
    R = resonant(part3, W2_T, g3.inverse(w3int))
    prods.append(np.mean(R) * np.mean(W_T) * g3.volume)  # |Lambda| E[R0 W0]
prods = np.array(prods)
print(f"  MC beta(0) = {np.mean(prods):.5f} +- {np.std(prods)/np.sqrt(len(prods)):.5f}   gamma_T = {gam_T:.5f}")
print(f"  w3j_mean_square exact at t=2: {w3j_mean_square(g3, ker, 2.0):.6f}")
mcw = []
for s in range(1000):
    W = sample_marginal(g3, ker, 2.0, 5, s)
    w3j = g3.inverse(g3.forward(wick_cube(W, c2)) * 4.0 * jd)
    mcw.append(np.mean(w3j ** 2))
print(f"  MC  E mean (W<3>)^2    at t=2: {np.mean(mcw):.6f} +- {np.std(mcw)/np.sqrt(len(mcw)):.6f}")
