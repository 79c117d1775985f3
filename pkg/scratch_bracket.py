"""Pilot: d=2 variational bracket and oracle agreement (criterion 5 shape)."""
import time
import numpy as np
from scipy.integrate import quad

from phi4lab import make_grid, ScaleKernels, make_timegrid
from phi4lab.renorm import build_constants
from phi4lab.functional import PotentialConfig
from phi4lab.oracle import mc_partition, quadrature_partition, compare_report
from phi4lab.policy import DriftPolicy
from phi4lab.optimize import optimize, estimate_objective

ker = ScaleKernels()

# --- tiny-grid oracle cross-checks ---
g = make_grid(2, 1.0, 2)
tg = make_timegrid(2.0, M=8)
consts = build_constants(g, ker, tg, 0.5)
cfg = PotentialConfig(lam=0.5)
t0 = time.time()
oq = quadrature_partition(g, ker, 2.0, cfg, consts)
print(f"quadrature N=2: logZ={oq.logZ:.8f} fe={oq.free_energy:.8f} trunc={oq.truncation:.2e} ({time.time()-t0:.1f}s)")
om = mc_partition(g, ker, 2.0, cfg, consts, n_samples=40000, seed=5)
print(f"mc         N=2: fe={om.free_energy:.8f} +- {om.se:.8f}  z={(om.free_energy-oq.free_energy)/om.se:.2f}")

# lam=0 -> logZ = 0
oq0 = quadrature_partition(g, ker, 2.0, PotentialConfig(lam=0.0), build_constants(g, ker, tg, 0.0))
print(f"lam=0 quadrature logZ: {oq0.logZ:.2e}")

# single-dof: T below the smallest nonzero mode
g1 = make_grid(2, 1.0, 4)
tg1 = make_timegrid(0.9, M=8)
c1 = build_constants(g1, ker, tg1, 0.5)
o1 = quadrature_partition(g1, ker, 0.9, PotentialConfig(lam=0.5), c1)
vol = g1.volume
cc = c1.c_T
f = lambda x: np.exp(-vol * 0.5 * (x**4 - 6*cc*x**2 + 3*cc**2)) * np.exp(-x**2/(2*cc)) / np.sqrt(2*np.pi*cc)
ref, _ = quad(f, -10*np.sqrt(cc), 10*np.sqrt(cc), limit=400)
print(f"single-dof: quadrature logZ={o1.logZ:.10f} scipy ref={np.log(ref):.10f} diff={abs(o1.logZ-np.log(ref)):.2e}")

# --- d=2 bracket at N=16, T=4, lam=0.5 ---
g16 = make_grid(2, 1.0, 16)
tg16 = make_timegrid(4.0, M=32)
c16 = build_constants(g16, ker, tg16, 0.5)
cfg16 = PotentialConfig(lam=0.5)

t0 = time.time()
zed, zse = estimate_objective(g16, ker, tg16, c16, cfg16, DriftPolicy("zero"), 400, seed=2)
print(f"zero-drift: {zed:.5f} +- {zse:.5f}  ({time.time()-t0:.1f}s)")

t0 = time.time()
res = optimize(DriftPolicy("wick3"), g16, ker, tg16, c16, cfg16,
               n_samples=64, iterations=8, seed=3, final_samples=400)
print(f"optimized:  {res.estimate:.5f} +- {res.se:.5f}  gain={res.policy.params}  ({time.time()-t0:.1f}s)")
for row in res.trace:
    print("   ", row)

t0 = time.time()
omc = mc_partition(g16, ker, 4.0, cfg16, c16, n_samples=40000, seed=7)
print(f"oracle:     {omc.free_energy:.5f} +- {omc.se:.5f}  ({time.time()-t0:.1f}s)")
rep = compare_report(res.estimate, res.se, omc)
print(f"gap = {rep.gap:.5f} +- {rep.combined_se:.5f}  bracket_ok={rep.bracket_ok}")
