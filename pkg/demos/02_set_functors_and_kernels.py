"""Finite-set-valued functors, element kernels and noetherianity reports.

Run:  python3 demos/02_set_functors_and_kernels.py
"""

from functorlab.gf import LinearMap
from functorlab import sfunctor as sf

print("== the representable functor S(W) = Hom(W, F_2^2), capped at dimension 3 ==")
S = sf.RepresentableFunctor(2, 2, 3)
print(f"set sizes per dimension: {[S.size(d) for d in range(4)]}")
print(f"functor laws validate: {bool(sf.validate(S))}")

print()
print("== the kernel of an element: the largest trivial-direction subspace ==")
m = LinearMap.from_array([[1, 0], [0, 0]], 2)
s = sf.SElement(2, S._index[2][m.data])
ker = sf.kernel_of(S, s)
print(f"the element {m.arr.tolist()} of S(F_2^2) has kernel {ker.basis_arr.tolist()}")
t = sf.tilde(S, s)
print(f"its regular reduction lives in dimension {t.dim} and is {S.element_map(t).arr.tolist()}")
print(f"regular elements per dimension: {[len(sf.regular_set(S, d)) for d in range(4)]}")

print()
print("== noetherianity: the certificate and a crafted counterexample ==")
print(f"S_U satisfies the kernel-preimage condition: {bool(sf.check_weak_noetherian(S))}")
noeth = sf.check_noetherian(S)
print(f"regular elements vanish above dimension {noeth.last_regular_dim} (cap {noeth.window})")

K = sf.kernel_mismatch_example()
print(f"the crafted table is still a functor: {bool(sf.validate(K))}")
bad = sf.check_weak_noetherian(K)
alpha, elt, lhs, rhs = bad.witness
print(f"but ker(alpha^* s) != alpha^inv(ker s) at alpha = {alpha.arr.tolist()}, s = {tuple(elt)}:")
print(f"  kernel of the pullback has dim {lhs.dim}, preimage of the kernel has dim {rhs.dim}")

print()
print("== subspace functor: weakly noetherian but regular elements never vanish ==")
Sub = sf.SubspaceFunctor(2, 3)
print(f"condition holds: {bool(sf.check_weak_noetherian(Sub))}")
print(f"regular counts: {sf.check_noetherian(Sub).regular_counts} (the zero subspace is always regular)")

print()
print("== connectedness and the box-sum ==")
print(f"S_U is connected: {sf.is_connected(S)}")
psi = sf.SElement(2, S._index[2][LinearMap.identity(2, 2).data])
res = sf.boxplus(S, psi, 1, check_unique=True)
print(f"the identity element padded by one trivial direction: {S.element_map(res).arr.tolist()}")
both = sf.disjoint_union(S, S)
print(f"a disjoint union splits into {len(sf.split_components(both))} components")
