"""The difference functor, cross effects, degrees and the polynomial filtration.

Run:  python3 demos/04_difference_calculus.py
"""

import numpy as np

from functorlab import elcat as ec
from functorlab import sfunctor as sf
from functorlab import vfunctor as vf

print("== plain vector spaces as an element category (constant base, cap 4) ==")
sk = ec.Skeleton(sf.RepresentableFunctor(2, 0, 4))

print()
print("== degrees via vanishing differences ==")
for n in range(4):
    F = vf.forgetful_lift(sk, vf.TensorPower(n, 2)) if n else vf.constant_functor(sk)
    deg, window = vf.polynomial_degree(F)
    print(f"{F.name}: degree {deg} (vanishing checked on window {window})")

print()
print("== the difference of the identity lift is the constant line ==")
T1 = vf.forgetful_lift(sk, vf.TensorPower(1, 2))
D = vf.delta_bar(T1)
print(f"value dims of the difference: {[d for (_, _, d) in D.dims_list()]}")
print(f"second difference vanishes: {vf.delta_bar(D).is_zero()}")

print()
print("== iterated differences are cross effects, with the symmetric action ==")
T2 = vf.forgetful_lift(sk, vf.TensorPower(2, 2))
cr = vf.cross_effect(T2, sk.index[(0, 0)], (1, 1))
print(f"second cross effect of the tensor square at the point: dim {cr.dim}")
print(f"the transposition acts as {cr.sigma_matrix((1, 0)).tolist()}")
d2 = vf.delta_bar_power(T2, 2)
print(f"matches the iterated difference: {d2.dim(sk.index[(0, 0)]) == cr.dim}")

print()
print("== additivity in each cross-effect slot ==")
whole = vf.cross_effect(T2, sk.index[(0, 0)], (2, 1))
print(f"splitting a two-dimensional slot doubles the dimension: {whole.dim} = 2 * {cr.dim}")

print()
print("== the greatest polynomial subfunctor ==")
both = vf.direct_sum(T2, T1)
p1 = vf.p_n(both, 1, known_degree_bound=2)
print(f"inside T^2 + T^1 the degree-<=1 part has dims {[p1.bases[i].shape[0] for i in both.object_indices()]}")
print(f"(exactly the identity summand: {[T1.dim(i) for i in T1.object_indices()]})")

print()
print("== differencing a short exact sequence keeps it exact ==")
rng = np.random.default_rng(5)
F = vf.forgetful_lift(sk, vf.TensorPower(2, 2), window=3)
sub = vf.random_subfunctor(F, rng)
print(f"a random stable family with total dim {sub.total_dim()}: exactness preserved = {vf.ses_delta_exactness(F, sub)}")
