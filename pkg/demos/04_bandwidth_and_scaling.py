"""How the initial memory shapes the learning method's behaviour.

Two experiments on the fan problem:

1. Bandwidth: start from forward bands of width N/4, N/2 and N-1 (the last
   admits every transition).  Narrow bands learn fast but cap the payoff;
   wide bands pay a longer exploration phase for better long-run speed.

2. Scaling: with entries far above the real step lengths the method first
   behaves like the shuffled baseline, then locks on (good).  With entries
   far below, the first recorded step dominates its row forever and the
   method can lock onto a mediocre transition early (risky).

Run:  python demos/04_bandwidth_and_scaling.py
"""
import numpy as np

from memproj import concentration_step, run_preset

print("=== bandwidth sweep (432 projections, 20 seeds) ===\n")
rows = []
for omega in (2, 4, 6):
    rep = run_preset("sparse_forward", seeds=range(20), omega=omega,
                     iterations=432)
    res = rep.method(f"pam_omega{omega}").residuals_at_budget()
    conc = [concentration_step(t.set_indices, 9)
            for t in rep.method(f"pam_omega{omega}").traces]
    rows.append((omega, np.median(res), np.median(conc)))
mcp_res = rep.method("mcp").residuals_at_budget()[0]

print("  width   median residual   median transitions until concentrated")
for omega, med, conc in rows:
    print(f"  {omega:5d}   {med:15.4f}   {conc:20.0f}")
print(f"\n  fixed cyclic order for reference: residual {mcp_res:.4f}")
print("  narrow bands concentrate almost immediately but gain little;")
print("  wide bands explore longer and end far lower.\n")

print("=== scaling the initial entries (315 projections, 20 seeds) ===\n")
for preset, label in (("scaling_large", "entries 1.0 (well above steps)"),
                      ("scaling_small", "entries 0.01 (below early steps)")):
    rep = run_preset(preset, seeds=range(20))
    pam = rep.method("pam").residuals_at_budget()
    mrp = rep.method("mrp").residuals_at_budget()
    worse = int((pam > np.median(mrp)).sum())
    print(f"  {label}")
    print(f"    memory median {np.median(pam):.4f}   "
          f"shuffled median {np.median(mrp):.4f}   "
          f"seeds worse than shuffled median: {worse}/20")
print("\n  oversized entries are safe: the method explores first, like the")
print("  shuffled baseline, and then accelerates.  Undersized entries make")
print("  early random choices self-reinforcing, so some seeds underperform.")
