"""Simple modules of small groups over F_p and the partition combinatorics.

Run:  python3 demos/05_group_modules.py
"""

from functorlab import modrep as mr

print("== simple modules via splitting the regular module ==")
for n, p in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)]:
    G = mr.FiniteGroup.symmetric(n)
    rep = mr.simple_modules(G, p)
    dims = [m.dim for m in rep.simples]
    parts = [lam.parts for lam in mr.p_regular_partitions(n, p)]
    print(
        f"Sym({n}) over F_{p}: simple dims {dims}, multiplicities {rep.multiplicities}, "
        f"accounting to |G| = {rep.group_order}: {rep.accounting_ok}; "
        f"{p}-regular partitions: {parts}"
    )

print()
print("== symmetrizer products realize the simples as right ideals ==")
for n, p in [(3, 2), (4, 3)]:
    for lam in mr.p_regular_partitions(n, p):
        M = mr.epsilon_lambda_module(lam, n, p)
        print(f"partition {lam.parts} over F_{p}: ideal of dim {M.dim}, irreducible: {mr.is_irreducible(M)}")

print()
print("== the plain row-column-row product vanishes where it must not ==")
elt = mr.epsilon_lambda(mr.Partition((2,)), 2, 2, variant="rcr")
print(f"row*column*row for the one-row partition of 2 over F_2: {elt or 'the zero element'}")

print()
print("== symmetrizer images inside tensor powers ==")
img = mr.TensorSymmetrizerImage(mr.epsilon_lambda(mr.Partition((2,)), 2, 2), 2, 2)
print(f"image functor of the partition (2) on squares: dims {[img.dim(d) for d in range(5)]} (the exterior square)")
img3 = mr.TensorSymmetrizerImage(mr.epsilon_lambda(mr.Partition((2, 1)), 3, 2), 3, 2)
print(f"image functor of (2,1) on cubes: dims {[img3.dim(d) for d in range(5)]}")
