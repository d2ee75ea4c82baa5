"""
Large-RIS SNR laws for the running example
==========================================

How much SNR does a hybrid surface give up against a fully active one, and
where does a passive surface take over?
"""
import numpy as np

from hybrid_ris import asymptotics as asy
from hybrid_ris.units import lin_to_db

p = asy.AsymptoticParams.running_example()
P_t, P_r = p.equal_split()

# active/passive split of a 256-element surface
N = 256
ga = asy.gamma_active(N, P_t, P_r, p)
print(f"active RIS, N={N}: {lin_to_db(ga):.2f} dB")
for a in (0.125, 0.5, 0.875):
    d = asy.gamma_active_passive(N, a, p)
    print(f"  a={a:<5}  total {lin_to_db(d.total):6.2f} dB  "
          f"(active term {lin_to_db(d.active):6.2f}, passive term {lin_to_db(d.passive):6.2f})")

# several active sub-surfaces sharing the reflect budget
for S in (2, 4, 8):
    loss = lin_to_db(ga / asy.gamma_active_active(N, S, p))
    print(f"S={S} active surfaces: {loss:.2f} dB below one active RIS")

# crossover sizes
print(f"passive beats active beyond N = {asy.size_thresholds('passive_vs_active', p):.3g}")
for S in (2, 4, 8):
    r = asy.size_thresholds("active_active_vs_active", p, S=S)
    print(f"S={S} needs {r:.1f}x the elements of a single active RIS")

# a quick Monte-Carlo look at what the optimal SISO design actually realizes
rng = np.random.default_rng(0)
N = 2 ** 14
mc = asy.mc_siso_snr("active_active", N, p, 10, rng, S=2)
print(f"N={N}, S=2: Monte-Carlo {lin_to_db(mc.mean):.2f} dB, "
      f"realized-SNR limit {lin_to_db(asy.gamma_active_active(N, 2, p, realized=True)):.2f} dB, "
      f"reported law {lin_to_db(asy.gamma_active_active(N, 2, p)):.2f} dB")
