"""Finite-set-valued contravariant functors on F_p-vector spaces, up to a cap.

A ``SetFunctor`` assigns a finite set S(F_p^d) to every dimension d <= cap and
a pullback map alpha^*: S(F_p^m) -> S(F_p^n) to every linear map
alpha: F_p^n -> F_p^m.  Elements are addressed as (dim, index) pairs.

On top of the raw tables sits the kernel calculus: the kernel of an element,
its regular reduction, regularity, the two noetherianity conditions, the
connected-component splitting and the box-sum of an element with a trivial
block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .gf import (
    DEFAULT_MAP_BUDGET,
    BudgetExceeded,
    LinearMap,
    Subspace,
    check_prime,
    count_maps,
    enumerate_maps,
    enumerate_subspaces,
    preimage,
    proj_with_kernel,
)


class SElement(NamedTuple):
    dim: int
    index: int


class InvalidFunctorData(RuntimeError):
    """Raised when tables contradict the functor laws or kernel uniqueness."""


class WeakNoetherianityViolation(RuntimeError):
    """Raised when an operation needs condition ker(a* s) = a^{-1}(ker s) but it fails."""


# ---------------------------------------------------------------------------
# the functor itself


class SetFunctor:
    """Base class; concrete functors implement size() and _act()."""

    def __init__(self, p: int, cap: int, name: str = "S"):
        self.p = check_prime(p)
        self.cap = cap
        self.name = name
        self._act_cache: dict = {}
        self._table_cache: dict = {}
        self._kernel_cache: dict[SElement, Subspace] = {}

    def size(self, d: int) -> int:
        raise NotImplementedError

    def _act(self, alpha: LinearMap, s: int) -> int:
        raise NotImplementedError

    def act(self, alpha: LinearMap, s: SElement | int) -> SElement:
        """Pullback along alpha: F^n -> F^m of an element of S(F^m)."""
        idx = s.index if isinstance(s, SElement) else s
        if isinstance(s, SElement) and s.dim != alpha.rows:
            raise ValueError("element lives at the wrong dimension")
        if alpha.rows > self.cap or alpha.cols > self.cap:
            raise ValueError("map exceeds the cap")
        key = (alpha.cols, alpha.rows, alpha.data, idx)
        hit = self._act_cache.get(key)
        if hit is None:
            hit = self._act(alpha, idx)
            self._act_cache[key] = hit
        return SElement(alpha.cols, hit)

    def act_table(self, alpha: LinearMap) -> np.ndarray:
        """Pullback along alpha as an index array S(rows) -> S(cols)."""
        key = (alpha.cols, alpha.rows, alpha.data)
        hit = self._table_cache.get(key)
        if hit is None:
            hit = np.asarray(
                [self.act(alpha, i).index for i in range(self.size(alpha.rows))],
                dtype=np.int64,
            )
            self._table_cache[key] = hit
        return hit

    def elements(self, d: int):
        return [SElement(d, i) for i in range(self.size(d))]

    def all_elements(self):
        for d in range(self.cap + 1):
            yield from self.elements(d)

    # -- optional hooks ----------------------------------------------------

    def describe(self) -> dict:
        return {"name": self.name, "p": self.p, "cap": self.cap}


class TableFunctor(SetFunctor):
    """Explicit tables: sizes per dimension plus one index array per map."""

    def __init__(self, p: int, cap: int, sizes: list[int], action: dict, name: str = "table"):
        super().__init__(p, cap, name)
        self.sizes = list(sizes)
        if len(self.sizes) != cap + 1:
            raise InvalidFunctorData("need one set size per dimension 0..cap")
        self.action = action  # (cols, rows, data) -> tuple of indices

    def size(self, d: int) -> int:
        return self.sizes[d]

    def _act(self, alpha: LinearMap, s: int) -> int:
        tab = self.action[(alpha.cols, alpha.rows, alpha.data)]
        return tab[s]


class RepresentableFunctor(SetFunctor):
    """S_U(W) = Hom(W, U) with pullback by precomposition."""

    def __init__(self, p: int, u_dim: int, cap: int):
        super().__init__(p, cap, name=f"representable(U=F_{p}^{u_dim})")
        self.u_dim = u_dim
        self._elts: dict[int, list[LinearMap]] = {}
        self._index: dict[int, dict[bytes, int]] = {}

    def _table(self, d: int):
        if d not in self._elts:
            elts = list(enumerate_maps(self.p, d, self.u_dim))
            self._elts[d] = elts
            self._index[d] = {e.data: i for i, e in enumerate(elts)}
        return self._elts[d]

    def size(self, d: int) -> int:
        return count_maps(self.p, d, self.u_dim)

    def element_map(self, s: SElement) -> LinearMap:
        return self._table(s.dim)[s.index]

    def _act(self, alpha: LinearMap, s: int) -> int:
        m = self._table(alpha.rows)[s]
        res = m @ alpha
        self._table(alpha.cols)
        return self._index[alpha.cols][res.data]


class OrbitFunctor(SetFunctor):
    """Hom(W, U) modulo a subgroup of GL(U) acting by postcomposition."""

    def __init__(self, p: int, u_dim: int, generators: list[LinearMap], cap: int):
        super().__init__(p, cap, name=f"orbit(U=F_{p}^{u_dim})")
        self.u_dim = u_dim
        self.group = _mulclose([LinearMap.identity(u_dim, p)] + list(generators))
        self._orbits: dict[int, list[tuple[bytes, ...]]] = {}
        self._orbit_of: dict[int, dict[bytes, int]] = {}
        self._rep: dict[int, list[LinearMap]] = {}

    def _table(self, d: int):
        if d not in self._orbits:
            maps = list(enumerate_maps(self.p, d, self.u_dim))
            seen: dict[bytes, int] = {}
            orbits: list[tuple[bytes, ...]] = []
            reps: list[LinearMap] = []
            for m in maps:
                if m.data in seen:
                    continue
                orb = sorted({(g @ m).data for g in self.group})
                oid = len(orbits)
                for datum in orb:
                    seen[datum] = oid
                orbits.append(tuple(orb))
                reps.append(m)
            self._orbits[d] = orbits
            self._orbit_of[d] = seen
            self._rep[d] = reps
        return self._orbits[d]

    def size(self, d: int) -> int:
        self._table(d)
        return len(self._orbits[d])

    def _act(self, alpha: LinearMap, s: int) -> int:
        self._table(alpha.rows)
        rep = self._rep[alpha.rows][s]
        res = rep @ alpha
        self._table(alpha.cols)
        return self._orbit_of[alpha.cols][res.data]


class SubspaceFunctor(SetFunctor):
    """S(W) = set of subspaces of W, pullback by preimage.

    A valid functor that satisfies the weaker noetherianity condition but is
    not noetherian: the zero subspace is regular in every dimension.
    """

    def __init__(self, p: int, cap: int):
        super().__init__(p, cap, name="subspaces")
        self._elts = {d: enumerate_subspaces(p, d) for d in range(cap + 1)}
        self._index = {d: {s: i for i, s in enumerate(elts)} for d, elts in self._elts.items()}

    def size(self, d: int) -> int:
        return len(self._elts[d])

    def _act(self, alpha: LinearMap, s: int) -> int:
        u = self._elts[alpha.rows][s]
        return self._index[alpha.cols][preimage(alpha, u)]


def _mulclose(gens: list[LinearMap]) -> list[LinearMap]:
    els = {g.data: g for g in gens}
    frontier = list(els.values())
    while frontier:
        new = []
        for a in gens:
            for b in frontier:
                c = a @ b
                if c.data not in els:
                    els[c.data] = c
                    new.append(c)
        frontier = new
    return sorted(els.values(), key=lambda m: m.data)


def disjoint_union(a: SetFunctor, b: SetFunctor) -> SetFunctor:
    """Coproduct of two set functors with the same field and cap."""
    if (a.p, a.cap) != (b.p, b.cap):
        raise ValueError("mismatched functors")

    class _Union(SetFunctor):
        def size(self, d):
            return a.size(d) + b.size(d)

        def _act(self, alpha, s):
            na = a.size(alpha.rows)
            if s < na:
                return a.act(alpha, s).index
            return a.size(alpha.cols) + b.act(alpha, s - na).index

    return _Union(a.p, a.cap, name=f"{a.name}+{b.name}")


def kernel_mismatch_example(p: int = 2) -> TableFunctor:
    """A genuine functor on dimensions <= 2 that fails the weaker noetherianity
    condition: S(2) holds a regular element whose pullbacks all collapse onto
    the other element, so rank-one endomorphisms produce kernels bigger than
    the preimage of the kernel.

    Only defined for p = 2 (the table is hand-built).
    """
    if p != 2:
        raise ValueError("the crafted table is built for p = 2")
    cap = 2
    sizes = [1, 1, 2]
    action: dict = {}
    for n in range(cap + 1):
        for m in range(cap + 1):
            for alpha in enumerate_maps(p, n, m):
                if m < 2:
                    tab = tuple(0 for _ in range(sizes[m]))
                elif n < 2:
                    tab = (0, 0)
                else:  # endomorphisms of F_2^2 acting on {b, c}
                    tab = (0, 1) if alpha.is_invertible() else (0, 0)
                action[(n, m, alpha.data)] = tab
    return TableFunctor(p, cap, sizes, action, name="kernel-mismatch")


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    checked_pairs: int
    total_pairs: int
    exhaustive: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def validate(S: SetFunctor, pair_budget: int = 1 << 21, seed: int = 0) -> ValidationReport:
    """Check the identity and composition laws within the cap.

    Every identity is always checked.  Composition triples (alpha, beta, s)
    are checked exhaustively when their count fits the budget, otherwise by
    seeded sampling; the report says which.
    """
    for d in range(S.cap + 1):
        ident = LinearMap.identity(d, S.p)
        for s in S.elements(d):
            if S.act(ident, s) != s:
                return ValidationReport(False, 0, 0, True, ("identity", d, s.index))

    dims = range(S.cap + 1)
    total = 0
    for n in dims:
        for m in dims:
            for x in dims:
                total += count_maps(S.p, n, m) * count_maps(S.p, m, x)

    exhaustive = total <= pair_budget
    checked = 0
    if exhaustive:
        for n in dims:
            for m in dims:
                betas = list(enumerate_maps(S.p, n, m))
                for x in dims:
                    for alpha in enumerate_maps(S.p, m, x):
                        t_alpha = S.act_table(alpha)
                        for beta in betas:
                            checked += 1
                            lhs = S.act_table(beta)[t_alpha]
                            rhs = S.act_table(alpha @ beta)
                            if not np.array_equal(lhs, rhs):
                                bad = int(np.nonzero(lhs != rhs)[0][0])
                                return ValidationReport(
                                    False, checked, total, True, (alpha, beta, SElement(x, bad))
                                )
    else:
        rng = np.random.default_rng(seed)
        for _ in range(min(pair_budget, 200_000)):
            n, m, x = (int(v) for v in rng.integers(0, S.cap + 1, size=3))
            beta = _random_map(rng, S.p, n, m)
            alpha = _random_map(rng, S.p, m, x)
            checked += 1
            lhs = S.act_table(beta)[S.act_table(alpha)]
            rhs = S.act_table(alpha @ beta)
            if not np.array_equal(lhs, rhs):
                bad = int(np.nonzero(lhs != rhs)[0][0])
                return ValidationReport(False, checked, total, False, (alpha, beta, SElement(x, bad)))
    return ValidationReport(True, checked, total, exhaustive)


def _random_map(rng, p, dom, cod) -> LinearMap:
    return LinearMap.from_array(rng.integers(0, p, size=(cod, dom)), p)


# ---------------------------------------------------------------------------
# kernel calculus


def kernel_of(S: SetFunctor, s: SElement) -> Subspace:
    """The unique maximal subspace U with s in the image of the pullback of
    the canonical projection along U.  Verifies maximality; a pair of
    incomparable maximal candidates means the tables are not a functor.
    """
    hit = S._kernel_cache.get(s)
    if hit is not None:
        return hit
    d = s.dim
    candidates = []
    for u in enumerate_subspaces(S.p, d):
        projm, _ = proj_with_kernel(u)
        if any(S.act(projm, t) == s for t in S.elements(d - u.dim)):
            candidates.append(u)
    best = max(candidates, key=lambda u: u.dim)
    for u in candidates:
        if not best.contains(u):
            raise InvalidFunctorData(
                f"kernel ambiguity at {s}: incomparable maximal factorizations {best} and {u}"
            )
    S._kernel_cache[s] = best
    return best


def tilde(S: SetFunctor, s: SElement) -> SElement:
    """The regular reduction: the unique t with proj^* t = s for the canonical
    projection along ker(s)."""
    u = kernel_of(S, s)
    projm, _ = proj_with_kernel(u)
    matches = [t for t in S.elements(s.dim - u.dim) if S.act(projm, t) == s]
    if len(matches) != 1:
        raise InvalidFunctorData(f"expected exactly one reduction of {s}, found {len(matches)}")
    t = matches[0]
    if kernel_of(S, t).dim != 0:
        raise WeakNoetherianityViolation(f"reduction of {s} is not regular")
    return t


def is_regular(S: SetFunctor, s: SElement) -> bool:
    return kernel_of(S, s).dim == 0

def regular_set(S: SetFunctor, d: int) -> list[SElement]:
    return [s for s in S.elements(d) if is_regular(S, s)]


@dataclass
class WeakNoetherianReport:
    ok: bool
    checked: int
    window: int
    witness: tuple | None = None
    partial: bool = False

    def __bool__(self):
        return self.ok


def check_weak_noetherian(S: SetFunctor, budget: int = DEFAULT_MAP_BUDGET) -> WeakNoetherianReport:
    """Compare ker(alpha^* s) with alpha^{-1}(ker s), exhaustively within the cap.

    When the map enumeration for the full cap exceeds the budget, the check
    runs on the largest affordable window instead and the certificate is
    marked partial, carrying that window.
    """
    window = S.cap
    while window > 0 and any(
        count_maps(S.p, n, m) > budget for n in range(window + 1) for m in range(window + 1)
    ):
        window -= 1
    checked = 0
    for m in range(window + 1):
        for s in S.elements(m):
            ker_s = kernel_of(S, s)
            for n in range(window + 1):
                for alpha in enumerate_maps(S.p, n, m, budget):
                    checked += 1
                    lhs = kernel_of(S, S.act(alpha, s))
                    rhs = preimage(alpha, ker_s)
                    if lhs != rhs:
                        return WeakNoetherianReport(
                            False, checked, window, (alpha, s, lhs, rhs), window < S.cap
                        )
    return WeakNoetherianReport(True, checked, window, None, window < S.cap)


@dataclass
class NoetherianReport:
    regular_counts: list[int]
    last_regular_dim: int
    vanishes_before_cap: bool
    window: int

    @property
    def certified_within_cap(self) -> bool:
        return self.vanishes_before_cap


def check_noetherian(S: SetFunctor) -> NoetherianReport:
    """Report where regular elements live.  The vanishing condition is only
    certified inside the cap; the report carries the window explicitly."""
    counts = [len(regular_set(S, d)) for d in range(S.cap + 1)]
    last = max((d for d, c in enumerate(counts) if c), default=-1)
    return NoetherianReport(counts, last, last < S.cap, S.cap)


# ---------------------------------------------------------------------------
# connectedness and the box-sum


def is_connected(S: SetFunctor) -> bool:
    return S.size(0) == 1


def epsilon(S: SetFunctor, d: int) -> SElement:
    """The pullback of the unique element of S(0) to dimension d."""
    if not is_connected(S):
        raise ValueError("epsilon needs a connected functor")
    return S.act(LinearMap.zero(0, d, S.p), SElement(0, 0))


def split_components(S: SetFunctor) -> list[SetFunctor]:
    """The partition of S by the component of S(0) each element restricts to."""
    comps = []
    for gamma in range(S.size(0)):
        maps_by_dim: dict[int, list[int]] = {}
        for d in range(S.cap + 1):
            incl0 = LinearMap.zero(d, 0, S.p)  # the inclusion of 0 into F^d
            maps_by_dim[d] = [
                s.index for s in S.elements(d) if S.act(incl0, s).index == gamma
            ]

        class _Component(SetFunctor):
            def __init__(self, base, members, gamma_idx):
                super().__init__(base.p, base.cap, name=f"{base.name}^{gamma_idx}")
                self.base = base
                self.members = members
                self.position = {
                    d: {orig: k for k, orig in enumerate(idxs)} for d, idxs in members.items()
                }

            def size(self, d):
                return len(self.members[d])

            def _act(self, alpha, s):
                orig = self.members[alpha.rows][s]
                res = self.base.act(alpha, SElement(alpha.rows, orig))
                return self.position[alpha.cols][res.index]

        comps.append(_Component(S, maps_by_dim, gamma))
    return comps


def boxplus(S: SetFunctor, psi: SElement, extra_dim: int, check_unique: bool = False) -> SElement:
    """The unique element of S(W + V) restricting to psi on W and to the
    trivial element on V; concretely the pullback of psi along the projection."""
    w, v = psi.dim, extra_dim
    if w + v > S.cap:
        raise ValueError("box-sum exceeds the cap")
    proj = LinearMap.from_array(
        np.concatenate([np.eye(w, dtype=np.int64), np.zeros((w, v), dtype=np.int64)], axis=1), S.p
    )
    res = S.act(proj, psi)
    incl_w = LinearMap.from_array(
        np.concatenate([np.eye(w, dtype=np.int64), np.zeros((v, w), dtype=np.int64)], axis=0), S.p
    )
    incl_v = LinearMap.from_array(
        np.concatenate([np.zeros((w, v), dtype=np.int64), np.eye(v, dtype=np.int64)], axis=0), S.p
    )
    if S.act(incl_w, res) != psi or S.act(incl_v, res) != epsilon(S, v):
        raise InvalidFunctorData("box-sum restrictions failed")
    if check_unique:
        hits = [
            t
            for t in S.elements(w + v)
            if S.act(incl_w, t) == psi and S.act(incl_v, t) == epsilon(S, v)
        ]
        if len(hits) != 1:
            raise WeakNoetherianityViolation(
                f"box-sum of {psi} (+{v}) is not unique: {len(hits)} candidates"
            )
    return res


# ---------------------------------------------------------------------------
# JSON interchange


def to_json_dict(S: SetFunctor, map_budget: int = DEFAULT_MAP_BUDGET) -> dict:
    """Materialize the action tables into the sfunctor.json layout."""
    total = sum(
        count_maps(S.p, n, m) for n in range(S.cap + 1) for m in range(S.cap + 1)
    )
    if total > map_budget:
        raise BudgetExceeded("maps", total, map_budget)
    action = {}
    for n in range(S.cap + 1):
        for m in range(S.cap + 1):
            for alpha in enumerate_maps(S.p, n, m):
                key = f"{alpha.rows}x{alpha.cols}:" + "".join(str(x) for x in alpha.arr.flatten())
                action[key] = [S.act(alpha, s).index for s in S.elements(m)]
    return {
        "p": S.p,
        "cap": S.cap,
        "sets": [S.size(d) for d in range(S.cap + 1)],
        "action": action,
    }


def from_json_dict(doc: dict, name: str = "table") -> TableFunctor:
    p, cap, sizes = doc["p"], doc["cap"], doc["sets"]
    action = {}
    for key, tab in doc["action"].items():
        shape, digits = key.split(":")
        rows, cols = (int(x) for x in shape.split("x"))
        arr = np.asarray([int(c) for c in digits], dtype=np.int64).reshape(rows, cols) if digits else np.zeros((rows, cols), dtype=np.int64)
        lm = LinearMap.from_array(arr, p)
        action[(lm.cols, lm.rows, lm.data)] = tuple(tab)
    return TableFunctor(p, cap, sizes, action, name=name)


def from_builtin_spec(doc: dict, cap: int) -> SetFunctor:
    """Builtins are specified as {"type": "representable"|"orbit", "p": ..., "U_dim": ...,
    "gamma_generators": [...]}, with the raw-table layout handled by from_json_dict."""
    p = doc.get("p", 2)
    kind = doc["type"]
    if kind == "representable":
        return RepresentableFunctor(p, doc["U_dim"], cap)
    if kind == "orbit":
        gens = [LinearMap.from_array(g, p) for g in doc.get("gamma_generators", [])]
        return OrbitFunctor(p, doc["U_dim"], gens, cap)
    if kind == "subspaces":
        return SubspaceFunctor(p, cap)
    if kind == "table":
        return from_json_dict(doc)
    raise ValueError(f"unknown builtin type {kind!r}")
