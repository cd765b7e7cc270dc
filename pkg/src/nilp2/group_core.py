"""Finite groups of nilpotency class at most 2 and odd prime exponent p.

A presentation is the data (p, n, m, c): generators x_1..x_n spanning the
group modulo its derived subgroup, the derived subgroup identified with
F_p^m, and c(j, i) in F_p^m the coordinates of [x_j, x_i] for
1 <= i < j <= n.  Every element has a unique normal form

    x_1^{v_1} ... x_n^{v_n} * z^w,    v in F_p^n, w in F_p^m,

and multiplication collects the left factor's high-index generators past
the right factor's low-index generators:

    (v, w) (v', w') = (v + v', w + w' + delta(v, v')),
    delta(v, v') = sum over j > i of v_j * v'_i * c(j, i).

The commutator pairing kappa extends c antisymmetrically: kappa(j, i) is
c(j, i) for j > i, -c(i, j) for j < i, and zero on the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import itertools

import numpy as np

from .errors import (
    AmbientMismatch,
    BadIndex,
    EntryOutOfRange,
    InconsistentMap,
    Nilp2Error,
    OrderExceedsCap,
    PresentationMismatch,
    SpanDeficit,
)
from .fplinalg import Subspace, check_odd_prime, kernel_basis, rref, solve_matrix

__all__ = [
    "DEFAULT_ORDER_CAP",
    "CenterInfo",
    "GeneratorMap",
    "GroupElement",
    "GroupPresentation",
    "MonoResult",
    "Subgroup",
    "center",
    "commutator",
    "elementary_abelian",
    "enumerate_subgroups",
    "hom_from_images",
    "identity_map",
    "inverse",
    "is_monomorphism",
    "multiply",
    "power",
    "quotient_by_central",
    "validate",
]

# Subgroup enumeration and brute-force scans refuse groups above this order.
DEFAULT_ORDER_CAP = 243


class GroupPresentation:
    """Validated presentation (p, n, m, c) of a class-<=2 exponent-p group.

    Immutable; the commutator map c is canonicalized to its nonzero
    entries, sorted by (j, i).  Equality and hashing ignore the label and
    provenance so that structurally identical presentations compare equal.
    """

    __slots__ = ("p", "n", "m", "c_items", "label", "provenance", "_kappa", "_delta", "_hash")

    def __init__(self, p, n, m, c=None, label="", provenance=None):
        self.p = check_odd_prime(p)
        n = int(n)
        m = int(m)
        if n < 0 or m < 0:
            raise Nilp2Error("generator and commutator counts must be nonnegative")
        self.n = n
        self.m = m
        items = []
        for key, vec in dict(c or {}).items():
            j, i = (int(key[0]), int(key[1]))
            if not (1 <= i < j <= n):
                raise BadIndex(
                    f"commutator index ({j}, {i}) must satisfy 1 <= i < j <= {n}"
                )
            entries = tuple(int(e) for e in vec)
            if len(entries) != m:
                raise AmbientMismatch(
                    f"commutator vector for ({j}, {i}) has {len(entries)} entries, expected {m}"
                )
            for e in entries:
                if not (0 <= e < self.p):
                    raise EntryOutOfRange(
                        f"entry {e} for commutator ({j}, {i}) is outside [0, {self.p})"
                    )
            if any(entries):
                items.append(((j, i), entries))
        items.sort()
        if m > 0:
            vectors = np.array([vec for _, vec in items], dtype=np.int64).reshape(-1, m)
            _, pivots = rref(vectors, self.p)
            if len(pivots) != m:
                raise SpanDeficit(len(pivots), m)
        self.c_items = tuple(items)
        self.label = str(label)
        self.provenance = provenance
        self._kappa = None
        self._delta = None
        self._hash = None

    # -- basic structure -------------------------------------------------

    @property
    def c(self) -> dict:
        """Nonzero commutator coordinates as {(j, i): vector}."""
        return dict(self.c_items)

    @property
    def order_exp(self) -> int:
        return self.n + self.m

    @property
    def order(self) -> int:
        return self.p ** (self.n + self.m)

    @property
    def is_abelian(self) -> bool:
        # The c-vectors span F_p^m, so m = 0 iff every commutator vanishes.
        return self.m == 0

    def with_meta(self, label=None, provenance=None) -> "GroupPresentation":
        return GroupPresentation(
            self.p,
            self.n,
            self.m,
            self.c,
            label=self.label if label is None else label,
            provenance=self.provenance if provenance is None else provenance,
        )

    def kappa_table(self) -> np.ndarray:
        """Full antisymmetric pairing, shape (n, n, m)."""
        if self._kappa is None:
            k = np.zeros((self.n, self.n, self.m), dtype=np.int64)
            for (j, i), vec in self.c_items:
                a = np.array(vec, dtype=np.int64)
                k[j - 1, i - 1] = a
                k[i - 1, j - 1] = np.mod(-a, self.p)
            k.flags.writeable = False
            self._kappa = k
        return self._kappa

    def delta_table(self) -> np.ndarray:
        """Collection table: c(j, i) at slot (j-1, i-1) for j > i, else zero."""
        if self._delta is None:
            d = np.zeros((self.n, self.n, self.m), dtype=np.int64)
            for (j, i), vec in self.c_items:
                d[j - 1, i - 1] = np.array(vec, dtype=np.int64)
            d.flags.writeable = False
            self._delta = d
        return self._delta

    # -- elements ---------------------------------------------------------

    def element(self, v=(), w=()) -> "GroupElement":
        vv = tuple(int(x) % self.p for x in v)
        ww = tuple(int(x) % self.p for x in w)
        if len(vv) != self.n or len(ww) != self.m:
            raise AmbientMismatch(
                f"element coordinates must have shape ({self.n}, {self.m})"
            )
        return GroupElement(self, vv, ww)

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.n, (0,) * self.m)

    def generator(self, index: int) -> "GroupElement":
        """The generator x_index, 1-based."""
        if not (1 <= index <= self.n):
            raise BadIndex(f"generator index {index} out of range 1..{self.n}")
        v = [0] * self.n
        v[index - 1] = 1
        return GroupElement(self, tuple(v), (0,) * self.m)

    def generators(self):
        return tuple(self.generator(i) for i in range(1, self.n + 1))

    def elements(self):
        """All elements in lexicographic normal-form order (use at desk scale)."""
        for v in itertools.product(range(self.p), repeat=self.n):
            for w in itertools.product(range(self.p), repeat=self.m):
                yield GroupElement(self, v, w)

    def random_element(self, rng) -> "GroupElement":
        v = tuple(rng.randrange(self.p) for _ in range(self.n))
        w = tuple(rng.randrange(self.p) for _ in range(self.m))
        return GroupElement(self, v, w)

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, GroupPresentation):
            return NotImplemented
        return (
            self.p == other.p
            and self.n == other.n
            and self.m == other.m
            and self.c_items == other.c_items
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.n, self.m, self.c_items))
        return self._hash

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<GroupPresentation{tag} p={self.p} n={self.n} m={self.m} order=p^{self.order_exp}>"


def validate(p, n, m, c=None, label="") -> GroupPresentation:
    """Check raw presentation data and return the validated presentation."""
    return GroupPresentation(p, n, m, c, label=label)


def elementary_abelian(p, n, label=None) -> GroupPresentation:
    return GroupPresentation(p, n, 0, {}, label=label if label is not None else f"C{p}^{n}")


def cyclic(p) -> GroupPresentation:
    return elementary_abelian(p, 1, label=f"C{p}")


def _same_group(a: "GroupElement", b: "GroupElement"):
    if a.group is not b.group and a.group != b.group:
        raise PresentationMismatch("elements belong to different presentations")


def _delta(group: GroupPresentation, va, vb) -> np.ndarray:
    if group.m == 0 or group.n == 0:
        return np.zeros(group.m, dtype=np.int64)
    out = np.einsum("j,i,jit->t", va, vb, group.delta_table())
    return np.mod(out, group.p)


def _kappa(group: GroupPresentation, va, vb) -> np.ndarray:
    if group.m == 0 or group.n == 0:
        return np.zeros(group.m, dtype=np.int64)
    out = np.einsum("j,i,jit->t", va, vb, group.kappa_table())
    return np.mod(out, group.p)


class GroupElement:
    """Normal form (v, w); immutable value tied to its presentation."""

    __slots__ = ("group", "v", "w")

    def __init__(self, group: GroupPresentation, v: tuple, w: tuple):
        self.group = group
        self.v = v
        self.w = w

    @property
    def is_identity(self) -> bool:
        return not any(self.v) and not any(self.w)

    def v_array(self) -> np.ndarray:
        return np.array(self.v, dtype=np.int64)

    def w_array(self) -> np.ndarray:
        return np.array(self.w, dtype=np.int64)

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return multiply(self, other)

    def __pow__(self, k):
        return power(self, k)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def commutator(self, other: "GroupElement") -> "GroupElement":
        return commutator(self, other)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.v == other.v and self.w == other.w and self.group == other.group

    def __hash__(self):
        return hash((self.v, self.w))

    def __repr__(self):
        return f"GroupElement(v={self.v}, w={self.w})"


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Normal form of a*b via the collection rule."""
    _same_group(a, b)
    g = a.group
    p = g.p
    v = tuple((x + y) % p for x, y in zip(a.v, b.v))
    if g.m == 0:
        return GroupElement(g, v, ())
    w = np.mod(a.w_array() + b.w_array() + _delta(g, a.v_array(), b.v_array()), p)
    return GroupElement(g, v, tuple(int(x) for x in w))


def inverse(a: GroupElement) -> GroupElement:
    g = a.group
    p = g.p
    v = tuple((-x) % p for x in a.v)
    if g.m == 0:
        return GroupElement(g, v, ())
    w = np.mod(-a.w_array() + _delta(g, a.v_array(), a.v_array()), p)
    return GroupElement(g, v, tuple(int(x) for x in w))


def power(a: GroupElement, k: int) -> GroupElement:
    """a^k by the closed form with the binomial coefficient C(k, 2)."""
    g = a.group
    p = g.p
    k = int(k)
    kv = k % p
    v = tuple((kv * x) % p for x in a.v)
    if g.m == 0:
        return GroupElement(g, v, ())
    binom = (k * (k - 1) // 2) % p
    w = np.mod(kv * a.w_array() + binom * _delta(g, a.v_array(), a.v_array()), p)
    return GroupElement(g, v, tuple(int(x) for x in w))


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """[a, b] = a b a^-1 b^-1; central, so only the v-parts matter."""
    _same_group(a, b)
    g = a.group
    w = _kappa(g, a.v_array(), b.v_array())
    return GroupElement(g, (0,) * g.n, tuple(int(x) for x in w))


# -- structural subgroups --------------------------------------------------


@dataclass(frozen=True)
class CenterInfo:
    """The center as seen in abelianized coordinates."""

    radical: Subspace
    center_equals_derived: bool
    center_order_exp: int


def center(group: GroupPresentation) -> CenterInfo:
    """Radical of the commutator pairing; the center is its preimage times z-space.

    The returned subspace R <= F_p^n is the image of the center in the
    abelianized coordinates; |Z(G)| = p^(dim R + m), and Z(G) = [G, G]
    exactly when R = 0.
    """
    n, m = group.n, group.m
    kap = group.kappa_table()
    # v is central iff kappa(v, e_i) = 0 for every i.
    mat = kap.transpose(1, 2, 0).reshape(n * m, n)
    radical = Subspace(group.p, n, kernel_basis(mat, group.p))
    return CenterInfo(radical, radical.dim == 0, radical.dim + m)


def quotient_by_central(group: GroupPresentation, sub: Subspace, label=None, provenance=None):
    """Quotient by a subspace of the derived coordinates.

    Returns (quotient, projection) where the projection is the canonical
    generator map x_i -> x_i.  The surviving derived coordinates are the
    non-pivot coordinates of sub's echelon basis, so the construction is
    reproducible bit for bit.
    """
    if sub.p != group.p or sub.ambient != group.m:
        raise AmbientMismatch(
            f"subspace lives in F_{sub.p}^{sub.ambient}, derived space is F_{group.p}^{group.m}"
        )
    q = sub.complement_projection()
    new_c = {}
    for (j, i), vec in group.c_items:
        new_c[(j, i)] = tuple(int(x) for x in np.mod(q @ np.array(vec, dtype=np.int64), group.p))
    quotient = GroupPresentation(
        group.p,
        group.n,
        group.m - sub.dim,
        new_c,
        label=label if label is not None else (f"{group.label}/N" if group.label else ""),
        provenance=provenance,
    )
    projection = hom_from_images(group, quotient, quotient.generators())
    return quotient, projection


# -- homomorphisms -----------------------------------------------------------


class GeneratorMap:
    """Generator images plus the induced linear map on derived coordinates.

    When no linear map is compatible with the images, the map is recorded
    as inconsistent (commutator_matrix is None); this is a value, not an
    error, so callers can report it.
    """

    __slots__ = ("domain", "codomain", "images", "commutator_matrix", "abelianized_matrix")

    def __init__(self, domain, codomain, images, commutator_matrix, abelianized_matrix):
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        self.commutator_matrix = commutator_matrix
        self.abelianized_matrix = abelianized_matrix

    @property
    def consistent(self) -> bool:
        return self.commutator_matrix is not None

    def apply(self, element: GroupElement) -> GroupElement:
        if element.group is not self.domain and element.group != self.domain:
            raise PresentationMismatch("element does not belong to the map's domain")
        if not self.consistent:
            raise InconsistentMap("cannot apply an inconsistent generator map")
        acc = self.codomain.identity()
        for img, exponent in zip(self.images, element.v):
            if exponent:
                acc = multiply(acc, power(img, exponent))
        if self.domain.m:
            w = np.mod(self.commutator_matrix @ element.w_array(), self.codomain.p)
            acc = multiply(acc, self.codomain.element((0,) * self.codomain.n, w))
        return acc

    def then(self, second: "GeneratorMap") -> "GeneratorMap":
        """Composite map: first self, then second."""
        if second.domain != self.codomain:
            raise PresentationMismatch("composition endpoints do not match")
        return hom_from_images(self.domain, second.codomain, [second.apply(im) for im in self.images])

    def push_derived(self, vectors) -> Subspace:
        """Image under the induced derived-coordinate map of the span of vectors."""
        if not self.consistent:
            raise InconsistentMap("inconsistent generator map has no derived image")
        rows = [
            np.mod(self.commutator_matrix @ np.array([int(x) for x in vec], dtype=np.int64), self.codomain.p)
            for vec in vectors
        ]
        return Subspace(self.codomain.p, self.codomain.m, rows)

    def derived_image(self) -> Subspace:
        return self.push_derived(np.eye(self.domain.m, dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, GeneratorMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.images))

    def __repr__(self):
        state = "consistent" if self.consistent else "inconsistent"
        return f"<GeneratorMap {self.domain!r} -> {self.codomain!r} ({state})>"


def hom_from_images(dom: GroupPresentation, cod: GroupPresentation, images) -> GeneratorMap:
    """Solve for the homomorphism sending x_i to images[i].

    The induced linear map L on derived coordinates must satisfy
    L(c_dom(j, i)) = coords([img_j, img_i]) for every pair j > i; since the
    c-vectors span, L is unique when the system is consistent.
    """
    if dom.p != cod.p:
        raise PresentationMismatch("presentations have different moduli")
    images = tuple(images)
    if len(images) != dom.n:
        raise AmbientMismatch(f"expected {dom.n} generator images, got {len(images)}")
    for img in images:
        if img.group is not cod and img.group != cod:
            raise PresentationMismatch("generator image lies in the wrong presentation")

    pairs = [(j, i) for j in range(2, dom.n + 1) for i in range(1, j)]
    cmap = dom.c
    dom_cols = np.zeros((dom.m, len(pairs)), dtype=np.int64)
    img_cols = np.zeros((cod.m, len(pairs)), dtype=np.int64)
    for k, (j, i) in enumerate(pairs):
        vec = cmap.get((j, i))
        if vec is not None:
            dom_cols[:, k] = vec
        img_cols[:, k] = _kappa(cod, images[j - 1].v_array(), images[i - 1].v_array())

    solution = solve_matrix(dom_cols.T, img_cols.T, dom.p)
    if solution is None:
        matrix = None
    else:
        matrix = np.mod(solution.T, dom.p)
        matrix.flags.writeable = False

    abelianized = np.zeros((cod.n, dom.n), dtype=np.int64)
    for i, img in enumerate(images):
        abelianized[:, i] = img.v
    abelianized.flags.writeable = False
    return GeneratorMap(dom, cod, images, matrix, abelianized)


def identity_map(group: GroupPresentation) -> GeneratorMap:
    return hom_from_images(group, group, group.generators())


@dataclass(frozen=True)
class MonoResult:
    """Outcome of an injectivity check: mono, not_mono (with witness), or undetermined."""

    status: str
    witness: GroupElement | None = None


def _rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, pivots = rref(a, p)
    return len(pivots)


def is_monomorphism(f: GeneratorMap, cap: int = DEFAULT_ORDER_CAP) -> MonoResult:
    """Injectivity certificate for a consistent generator map.

    If both the abelianized map and the induced derived map are injective
    the map is a monomorphism (normal forms map to distinct normal forms).
    Otherwise fall back to a brute-force kernel scan when the domain order
    is within cap; above the cap the status is undetermined.
    """
    if not f.consistent:
        raise InconsistentMap("injectivity is undefined for inconsistent maps")
    p = f.domain.p
    if (
        _rank(f.abelianized_matrix, p) == f.domain.n
        and _rank(f.commutator_matrix, p) == f.domain.m
    ):
        return MonoResult("mono")
    if f.domain.order <= cap:
        for x in f.domain.elements():
            if x.is_identity:
                continue
            if f.apply(x).is_identity:
                return MonoResult("not_mono", x)
        return MonoResult("mono")
    return MonoResult("undetermined")


# -- small-order element tables and subgroup enumeration ---------------------


class _ElementTables:
    """Dense index tables for one small presentation.

    Elements are numbered by the mixed-radix value of their digits
    (v_1..v_n, w_1..w_m), so index 0 is the identity.  mul[a, b] is the
    index of the product, comm[a, b] the index of the commutator.
    """

    __slots__ = ("group", "size", "identity", "vecs", "mul", "comm", "n", "m")

    def __init__(self, group: GroupPresentation):
        p, n, m = group.p, group.n, group.m
        size = group.order
        vecs = np.array(
            list(itertools.product(range(p), repeat=n + m)), dtype=np.int64
        ).reshape(size, n + m)
        v = vecs[:, :n]
        w = vecs[:, n:]
        if n and m:
            cross = np.mod(np.einsum("aj,bi,jit->abt", v, v, group.delta_table()), p)
            cw = np.mod(np.einsum("aj,bi,jit->abt", v, v, group.kappa_table()), p)
        else:
            cross = np.zeros((size, size, m), dtype=np.int64)
            cw = cross
        weights = p ** np.arange(n + m - 1, -1, -1, dtype=np.int64)
        vv = np.mod(v[:, None, :] + v[None, :, :], p)
        ww = np.mod(w[:, None, :] + w[None, :, :] + cross, p)
        self.group = group
        self.size = size
        self.identity = 0
        self.vecs = vecs
        self.mul = (vv @ weights[:n] + ww @ weights[n:]).astype(np.int32)
        self.comm = (np.mod(cw, p) @ weights[n:]).astype(np.int32)
        self.n = n
        self.m = m

    def decode(self, index: int) -> GroupElement:
        row = self.vecs[index]
        return GroupElement(
            self.group,
            tuple(int(x) for x in row[: self.n]),
            tuple(int(x) for x in row[self.n :]),
        )


@lru_cache(maxsize=16)
def _tables(group: GroupPresentation) -> _ElementTables:
    return _ElementTables(group)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a small presentation, as element indices plus generators."""

    group: GroupPresentation
    element_indices: frozenset
    generator_indices: tuple

    @property
    def order(self) -> int:
        return len(self.element_indices)

    def generators(self):
        t = _tables(self.group)
        return tuple(t.decode(i) for i in self.generator_indices)

    def elements(self):
        t = _tables(self.group)
        return tuple(t.decode(i) for i in sorted(self.element_indices))

    def contains(self, other: "Subgroup") -> bool:
        return other.element_indices <= self.element_indices

    def derived_subspace(self) -> Subspace:
        """Span of the commutators of the stored generators."""
        t = _tables(self.group)
        gens = [t.vecs[i][: self.group.n] for i in self.generator_indices]
        rows = [
            _kappa(self.group, a, b)
            for idx, a in enumerate(gens)
            for b in gens[idx + 1 :]
        ]
        return Subspace(self.group.p, self.group.m, rows)

    def sort_key(self):
        return (len(self.element_indices), tuple(sorted(self.element_indices)))


def enumerate_subgroups(group: GroupPresentation, cap: int = DEFAULT_ORDER_CAP):
    """Complete, canonically sorted list of subgroups of a small group.

    Grows subgroups layer by layer: a subgroup of order p^(k+1) is always
    generated by one of its (normal, index-p) subgroups of order p^k plus
    one extra element that normalizes it, which in class 2 reduces to the
    commutator test [h, g] in H on generators.
    """
    if group.order > cap:
        raise OrderExceedsCap(f"group order {group.order} exceeds enumeration cap {cap}")
    t = _tables(group)
    size = t.size
    trivial = Subgroup(group, frozenset((t.identity,)), ())
    found = {trivial.element_indices: trivial}
    layer = [trivial]
    while layer:
        fresh = {}
        for sub in sorted(layer, key=Subgroup.sort_key):
            fs = sub.element_indices
            members = np.zeros(size, dtype=bool)
            members[list(fs)] = True
            candidates = ~members
            for h in sub.generator_indices:
                candidates &= members[t.comm[h]]
            base = np.array(sorted(fs), dtype=np.int64)
            covered = set()
            for g in np.nonzero(candidates)[0].tolist():
                if g in covered:
                    continue
                col = t.mul[:, g]
                elems = set(fs)
                cur = base
                for _ in range(group.p - 1):
                    cur = col[cur]
                    elems.update(cur.tolist())
                key = frozenset(elems)
                covered.update(elems)
                if key not in found and key not in fresh:
                    fresh[key] = Subgroup(group, key, sub.generator_indices + (g,))
        found.update(fresh)
        layer = list(fresh.values())
    return tuple(sorted(found.values(), key=Subgroup.sort_key))
