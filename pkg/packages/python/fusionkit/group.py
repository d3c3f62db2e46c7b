from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from .constants import max_order
from .errors import CapExceeded, InvalidPermutation, PreconditionViolated
from .perm import Permutation

logger = logging.getLogger(__name__)

_HASH_SEED = 0x5EEDF05E


def _point_dtype(degree: int) -> type:
    return np.int16 if degree < 2**15 else np.int32


def _as_rows(perms: Iterable, degree: Optional[int] = None) -> np.ndarray:
    rows = []
    for p in perms:
        images = p.images if isinstance(p, Permutation) else tuple(int(x) for x in p)
        if degree is not None and len(images) != degree:
            raise InvalidPermutation(f"expected degree {degree}, got {len(images)}")
        if sorted(images) != list(range(len(images))):
            raise InvalidPermutation(f"not a bijection: {list(images)}")
        rows.append(images)
    if not rows:
        return np.zeros((0, degree or 0), dtype=_point_dtype(degree or 1))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidPermutation("DEGREE_MISMATCH")
    return np.asarray(rows, dtype=_point_dtype(width))


class GroupTable:
    """A fully enumerated permutation group.

    `perms[i]` holds the images of element i; element 0 is the identity.
    Membership lookups go through a hashed, sorted key index, so products of
    whole batches of elements are resolved without a Cayley table.
    """

    def __init__(self, perms: np.ndarray, generators: Sequence[int] = ()) -> None:
        perms = np.array(perms, dtype=_point_dtype(perms.shape[1] if np.ndim(perms) == 2 else 1))
        if perms.ndim != 2 or perms.shape[0] == 0 or perms.shape[1] == 0:
            raise InvalidPermutation("EMPTY_GROUP_TABLE")
        if not np.array_equal(perms[0], np.arange(perms.shape[1])):
            raise InvalidPermutation("IDENTITY_NOT_FIRST")
        perms.setflags(write=False)
        self.perms = perms
        self.degree = int(perms.shape[1])
        self.generators: Tuple[int, ...] = tuple(int(g) for g in generators)
        self._build_index()

    @classmethod
    def from_elements(cls, elements: Sequence, generators: Sequence[int] = ()) -> "GroupTable":
        """Table over an explicit element list (identity first); closure is not re-checked."""
        if isinstance(elements, np.ndarray):
            return cls(elements, generators)
        return cls(_as_rows(elements), generators)

    def _build_index(self) -> None:
        rng = np.random.default_rng(_HASH_SEED)
        for _ in range(4):
            w = rng.integers(1, 2**63, size=self.degree, dtype=np.uint64)
            keys = self.perms.astype(np.uint64) @ w
            order = np.argsort(keys, kind="stable")
            sk = keys[order]
            if not np.any(sk[1:] == sk[:-1]):
                self._w, self._sorted_keys, self._key_order = w, sk, order
                return
            if len(np.unique(self.perms, axis=0)) != len(self.perms):
                raise InvalidPermutation("DUPLICATE_ELEMENTS")
        raise RuntimeError("HASH_COLLISION")

    def __len__(self) -> int:
        return int(self.perms.shape[0])

    @property
    def order(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return f"GroupTable(order={self.order}, degree={self.degree})"

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.perms[i]))

    @cached_property
    def elements(self) -> List[Permutation]:
        return [self.element(i) for i in range(self.order)]

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Element indices of the given permutation rows, -1 where a row is not in the group."""
        rows = np.asarray(rows).reshape(-1, self.degree)
        keys = rows.astype(np.uint64) @ self._w
        pos = np.minimum(np.searchsorted(self._sorted_keys, keys), len(self._sorted_keys) - 1)
        cand = self._key_order[pos]
        ok = (self._sorted_keys[pos] == keys) & np.all(self.perms[cand] == rows, axis=1)
        return np.where(ok, cand, -1)

    def index_of(self, perm: Union[Permutation, Sequence[int]]) -> int:
        images = perm.images if isinstance(perm, Permutation) else tuple(perm)
        if len(images) != self.degree:
            raise InvalidPermutation(f"expected degree {self.degree}, got {len(images)}")
        idx = int(self.lookup(np.asarray(images))[0])
        if idx < 0:
            raise PreconditionViolated(f"permutation {list(images)} is not in the group")
        return idx

    def product_rows(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp))
        return np.take_along_axis(self.perms[b.ravel()], self.perms[a.ravel()].astype(np.intp), axis=1)

    def mul_many(self, a, b) -> np.ndarray:
        """Elementwise products a[k] * b[k] (apply a first)."""
        return self.lookup(self.product_rows(a, b))

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_many([a], [b])[0])

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = self.lookup(np.argsort(self.perms, axis=1))
        inv.setflags(write=False)
        return inv

    def conj_rows(self, x, g) -> np.ndarray:
        """Rows of x^g = g^-1 x g, elementwise over broadcast x and g."""
        x, g = np.broadcast_arrays(np.asarray(x, dtype=np.intp), np.asarray(g, dtype=np.intp))
        x, g = x.ravel(), g.ravel()
        t = np.take_along_axis(self.perms[x], self.perms[self.inverse[g]].astype(np.intp), axis=1)
        return np.take_along_axis(self.perms[g], t.astype(np.intp), axis=1)

    def conj_many(self, x, g) -> np.ndarray:
        return self.lookup(self.conj_rows(x, g))

    def commutators(self, x, y) -> np.ndarray:
        """[x, y] = x^-1 y^-1 x y, elementwise."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.intp), np.asarray(y, dtype=np.intp))
        x, y = x.ravel(), y.ravel()
        left = self.mul_many(self.inverse[x], self.inverse[y])
        return self.mul_many(self.mul_many(left, x), y)

    def power(self, x: int, k: int) -> int:
        return int(self.power_many([x], k)[0])

    def power_many(self, xs, k: int) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.intp)
        if k < 0:
            xs, k = self.inverse[xs], -k
        rows = np.broadcast_to(np.arange(self.degree, dtype=np.intp), (len(xs), self.degree))
        base = self.perms[xs].astype(np.intp)
        while k:
            if k & 1:
                rows = np.take_along_axis(base, rows, axis=1)
            base = np.take_along_axis(base, base, axis=1)
            k >>= 1
        return self.lookup(rows)

    @cached_property
    def orders(self) -> np.ndarray:
        ident = np.arange(self.degree)
        out = np.zeros(self.order, dtype=np.int64)
        live = np.arange(self.order)
        cur = self.perms.astype(np.intp)
        k = 1
        while len(live):
            done = np.all(cur == ident, axis=1)
            out[live[done]] = k
            live, cur = live[~done], cur[~done]
            cur = np.take_along_axis(self.perms[live].astype(np.intp), cur, axis=1)
            k += 1
        out.setflags(write=False)
        return out

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, np.ones(self.order, dtype=bool), self.generators or None)

    def trivial(self) -> "SubgroupHandle":
        flags = np.zeros(self.order, dtype=bool)
        flags[0] = True
        return SubgroupHandle(self, flags, ())

    def verify_closure(self) -> bool:
        """Exhaustive check that the element list is closed under products and inverses."""
        if np.any(self.inverse < 0):
            return False
        for i in range(self.order):
            rows = self.perms[:, self.perms[i].astype(np.intp)]
            if np.any(self.lookup(rows) < 0):
                return False
        return True


def enumerate_group(degree: int, generator_permutations: Sequence, cap: Optional[int] = None) -> GroupTable:
    """Closure of the generators, breadth-first from the identity.

    Each element is right-multiplied by the generators in input order, so the
    element order is reproducible.
    """
    cap = max_order(cap)
    if cap < 1:
        raise PreconditionViolated("cap must be >= 1")
    gens = _as_rows(generator_permutations, degree)
    dtype = _point_dtype(degree)
    gens = gens.astype(dtype).reshape(-1, degree)
    ident = np.arange(degree, dtype=dtype)
    found = [ident]
    seen = {ident.tobytes(): 0}
    frontier = ident[None, :]
    while len(frontier) and len(gens):
        # prods[k, j] = frontier[k] * gens[j]
        prods = gens[np.arange(len(gens))[None, :, None], frontier[:, None, :].astype(np.intp)]
        nxt = []
        for row in prods.reshape(-1, degree):
            key = row.tobytes()
            if key in seen:
                continue
            seen[key] = len(found)
            found.append(row)
            nxt.append(row)
            if len(found) > cap:
                raise CapExceeded(f"closure exceeds {cap} elements")
        frontier = np.asarray(nxt, dtype=dtype).reshape(-1, degree)
    gen_idx = [seen[g.tobytes()] for g in gens]
    logger.debug("enumerated group of order %d on %d points", len(found), degree)
    return GroupTable(np.asarray(found, dtype=dtype), gen_idx)


class SubgroupHandle:
    """A subgroup of a GroupTable, stored as membership flags over element indices."""

    def __init__(self, parent: GroupTable, flags: np.ndarray, generators: Optional[Sequence[int]] = None) -> None:
        flags = np.array(flags, dtype=bool)
        if flags.shape != (parent.order,):
            raise PreconditionViolated("membership flags do not match the parent group")
        if not flags[0]:
            raise PreconditionViolated("subgroup must contain the identity")
        flags.setflags(write=False)
        self.parent = parent
        self.flags = flags
        self._generators = None if generators is None else tuple(int(g) for g in generators if g != 0)

    @cached_property
    def members(self) -> np.ndarray:
        m = np.flatnonzero(self.flags)
        m.setflags(write=False)
        return m

    @cached_property
    def key(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.members)

    @cached_property
    def mask(self) -> int:
        return int.from_bytes(np.packbits(self.flags, bitorder="little").tobytes(), "little")

    @property
    def order(self) -> int:
        return int(len(self.members))

    def __len__(self) -> int:
        return self.order

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.order, self.key)

    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        if self._generators is not None:
            return self._generators
        gens: List[int] = []
        cur = np.zeros(self.parent.order, dtype=bool)
        cur[0] = True
        for x in self.members.tolist():
            if not cur[x]:
                gens.append(x)
                cur = _close(self.parent, cur, gens, np.flatnonzero(cur))
        return tuple(gens)

    def __contains__(self, i: int) -> bool:
        return bool(self.flags[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.parent is other.parent and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def __le__(self, other: "SubgroupHandle") -> bool:
        return self.parent is other.parent and not bool(np.any(self.flags & ~other.flags))

    def __lt__(self, other: "SubgroupHandle") -> bool:
        return self <= other and self.order < other.order

    def __repr__(self) -> str:
        shown = list(self.key[:8])
        tail = ", ..." if self.order > 8 else ""
        return f"SubgroupHandle(order={self.order}, members={shown}{tail})"


GroupLike = Union[GroupTable, SubgroupHandle]


@dataclass(frozen=True)
class CentralSeries:
    terms: Tuple[SubgroupHandle, ...]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class QuotientMap:
    """Action of `source` on the right cosets of a normal subgroup `kernel`."""

    source: SubgroupHandle
    kernel: SubgroupHandle
    table: GroupTable
    image: np.ndarray  # quotient index of each element of source.members

    def image_of(self, i: int) -> int:
        pos = int(np.searchsorted(self.source.members, i))
        if pos >= self.source.order or self.source.members[pos] != i:
            raise PreconditionViolated(f"element {i} is not in the quotient source")
        return int(self.image[pos])


def as_subgroup(x: GroupLike) -> SubgroupHandle:
    return x.whole() if isinstance(x, GroupTable) else x


def table_of(x: GroupLike) -> GroupTable:
    return x if isinstance(x, GroupTable) else x.parent


def _close(parent: GroupTable, flags: np.ndarray, gens: Sequence[int], frontier: np.ndarray) -> np.ndarray:
    flags = flags.copy()
    gens = np.asarray(gens, dtype=np.intp)
    frontier = np.asarray(frontier, dtype=np.intp)
    while len(frontier) and len(gens):
        prod = np.unique(parent.mul_many(np.repeat(frontier, len(gens)), np.tile(gens, len(frontier))))
        new = prod[~flags[prod]]
        flags[new] = True
        frontier = new
    return flags


def subgroup_from_indices(parent: GroupTable, indices: Iterable[int], generators: Optional[Sequence[int]] = None) -> SubgroupHandle:
    flags = np.zeros(parent.order, dtype=bool)
    flags[np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.intp)] = True
    flags[0] = True
    return SubgroupHandle(parent, flags, generators)


def subgroup_generated(parent: GroupTable, element_indices: Iterable[int]) -> SubgroupHandle:
    """Smallest subgroup containing the given elements."""
    flags = np.zeros(parent.order, dtype=bool)
    flags[0] = True
    gens: List[int] = []
    for x in np.asarray(list(element_indices) if not isinstance(element_indices, np.ndarray) else element_indices, dtype=np.intp).tolist():
        if not 0 <= x < parent.order:
            raise PreconditionViolated(f"element index {x} out of range")
        if flags[x]:
            continue
        gens.append(x)
        flags = _close(parent, flags, gens, np.flatnonzero(flags))
    return SubgroupHandle(parent, flags, gens)


def extend_subgroup(K: SubgroupHandle, y: int) -> SubgroupHandle:
    """<K, y>, closing outward from the members of K."""
    if K.flags[y]:
        return K
    gens = list(K.generators) + [int(y)]
    return SubgroupHandle(K.parent, _close(K.parent, K.flags, gens, K.members), gens)


def _require_same_parent(table: GroupTable, *hs: SubgroupHandle) -> None:
    for h in hs:
        if h.parent is not table:
            raise PreconditionViolated("subgroups live in different group tables")


def centralizer(parent: GroupLike, target: Union[SubgroupHandle, int]) -> SubgroupHandle:
    U = as_subgroup(parent)
    table = U.parent
    if isinstance(target, SubgroupHandle):
        _require_same_parent(table, target)
        xs = target.generators
    else:
        xs = (int(target),)
    u = U.members
    keep = np.ones(len(u), dtype=bool)
    for x in xs:
        keep &= np.all(table.conj_rows(x, u) == table.perms[x], axis=1)
    return subgroup_from_indices(table, u[keep])


def normalizer(parent: GroupLike, target: SubgroupHandle) -> SubgroupHandle:
    U = as_subgroup(parent)
    table = U.parent
    _require_same_parent(table, target)
    u = U.members
    keep = np.ones(len(u), dtype=bool)
    for x in target.generators:
        keep &= target.flags[table.conj_many(x, u)]
    return subgroup_from_indices(table, u[keep])


def center(parent: GroupLike) -> SubgroupHandle:
    return centralizer(parent, as_subgroup(parent))


def conjugate_subgroup(H: SubgroupHandle, g: int) -> SubgroupHandle:
    table = H.parent
    members = table.conj_many(H.members, g)
    gens = table.conj_many(np.asarray(H.generators, dtype=np.intp), g) if H.generators else []
    return subgroup_from_indices(table, members, [int(x) for x in gens])


def element_order(parent: GroupTable, index: int) -> int:
    return int(parent.orders[index])


def exponent(H: GroupLike) -> int:
    H = as_subgroup(H)
    return int(np.lcm.reduce(H.parent.orders[H.members]))


def is_abelian(H: GroupLike) -> bool:
    H = as_subgroup(H)
    gens = np.asarray(H.generators, dtype=np.intp)
    if len(gens) < 2:
        return True
    a, b = np.repeat(gens, len(gens)), np.tile(gens, len(gens))
    return bool(np.array_equal(H.parent.product_rows(a, b), H.parent.product_rows(b, a)))


def is_cyclic(H: GroupLike) -> bool:
    H = as_subgroup(H)
    return bool(np.any(H.parent.orders[H.members] == H.order))


def is_elementary_abelian(H: GroupLike, p: int) -> bool:
    H = as_subgroup(H)
    return is_abelian(H) and bool(np.all(H.parent.orders[H.members[1:]] == p))


def are_conjugate(parent: GroupLike, H: SubgroupHandle, K: SubgroupHandle) -> Tuple[bool, Optional[int]]:
    """Scan the ambient group for g with H^g = K; returns the first such g in index order."""
    U = as_subgroup(parent)
    table = U.parent
    _require_same_parent(table, H, K)
    if H.order != K.order or exponent(H) != exponent(K) or is_abelian(H) != is_abelian(K):
        return False, None
    u = U.members
    keep = np.ones(len(u), dtype=bool)
    for x in H.generators:
        keep &= K.flags[table.conj_many(x, u)]
    hits = np.flatnonzero(keep)
    if len(hits) == 0:
        return False, None
    return True, int(u[hits[0]])


def intersection(H: SubgroupHandle, K: SubgroupHandle) -> SubgroupHandle:
    _require_same_parent(H.parent, K)
    return SubgroupHandle(H.parent, H.flags & K.flags)


def join(H: SubgroupHandle, K: SubgroupHandle) -> SubgroupHandle:
    _require_same_parent(H.parent, K)
    return subgroup_generated(H.parent, list(H.generators) + list(K.generators))


def is_subgroup(H: SubgroupHandle, K: SubgroupHandle) -> bool:
    return H <= K


def is_normal(parent: GroupLike, H: SubgroupHandle) -> bool:
    U = as_subgroup(parent)
    table = U.parent
    _require_same_parent(table, H)
    gens = np.asarray(U.generators, dtype=np.intp)
    if not len(gens):
        return True
    for x in H.generators:
        if not np.all(H.flags[table.conj_many(x, gens)]):
            return False
    return True


def normal_closure(parent: GroupLike, X: Union[SubgroupHandle, Sequence[int]]) -> SubgroupHandle:
    U = as_subgroup(parent)
    table = U.parent
    K = X if isinstance(X, SubgroupHandle) else subgroup_generated(table, X)
    gens = np.asarray(U.generators, dtype=np.intp)
    while len(gens):
        new: List[int] = []
        for x in K.generators:
            idx = table.conj_many(x, gens)
            new.extend(int(y) for y in idx[~K.flags[idx]])
        if not new:
            break
        K = subgroup_generated(table, list(K.generators) + new)
    return K


def commutator(parent: GroupTable, x: int, y: int) -> int:
    return int(parent.commutators([x], [y])[0])


def commutator_subgroup(A: SubgroupHandle, B: SubgroupHandle) -> SubgroupHandle:
    """[A, B]: normal closure in <A, B> of the commutators of generators."""
    table = A.parent
    _require_same_parent(table, B)
    a, b = np.asarray(A.generators, dtype=np.intp), np.asarray(B.generators, dtype=np.intp)
    if not len(a) or not len(b):
        return table.trivial()
    comms = table.commutators(np.repeat(a, len(b)), np.tile(b, len(a)))
    return normal_closure(join(A, B), comms.tolist())


def derived_subgroup(H: GroupLike) -> SubgroupHandle:
    H = as_subgroup(H)
    return commutator_subgroup(H, H)


def upper_central_series(P: GroupLike) -> CentralSeries:
    P = as_subgroup(P)
    table = P.parent
    terms = [table.trivial()]
    u = P.members
    while True:
        Z = terms[-1]
        keep = np.ones(len(u), dtype=bool)
        for g in P.generators:
            keep &= Z.flags[table.commutators(u, g)]
        nxt = subgroup_from_indices(table, u[keep])
        if nxt == Z:
            break
        terms.append(nxt)
    return CentralSeries(tuple(terms))


def reindex(H: GroupLike) -> Tuple[GroupTable, np.ndarray]:
    """H as a table of its own; element k of the new table is H.members[k] in the parent."""
    H = as_subgroup(H)
    emb = H.members.copy()
    gens = np.searchsorted(emb, np.asarray(H.generators, dtype=np.intp)).tolist()
    return GroupTable.from_elements(H.parent.perms[emb], gens), emb


def quotient(H: SubgroupHandle, N: SubgroupHandle) -> QuotientMap:
    table = H.parent
    _require_same_parent(table, N)
    if not N <= H or not is_normal(H, N):
        raise PreconditionViolated("quotient kernel must be a normal subgroup")
    coset = np.full(table.order, -1, dtype=np.intp)
    reps: List[int] = []
    for h in H.members.tolist():
        if coset[h] >= 0:
            continue
        coset[table.mul_many(N.members, h)] = len(reps)
        reps.append(h)
    rep_arr = np.asarray(reps, dtype=np.intp)

    def action_rows(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.intp)
        prods = table.mul_many(np.tile(rep_arr, len(xs)), np.repeat(xs, len(rep_arr)))
        return coset[prods].reshape(len(xs), len(rep_arr))

    gens = np.asarray(H.generators, dtype=np.intp)
    qtable = enumerate_group(len(reps), [tuple(r) for r in action_rows(gens).tolist()], cap=H.order)
    image = qtable.lookup(action_rows(H.members))
    image.setflags(write=False)
    return QuotientMap(H, N, qtable, image)
