"""Preperiodic portraits, their skeleta, and the reference classification.

A skeleton keeps the vertices that have a rational preimage and replaces
the preimage fiber of each kept vertex with no kept preimage by one merged
vertex.  Vertices carry a kind (zero, root of unity, other) so that graphs
that differ only in where 0 sits are told apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import UnicriticalMap
from .errors import NotClosed, ViolationDetected
from .numdom import FieldContext
from .preper import solve_fixed_source

ZERO = "zero"
ROU = "rou"
OTHER = "other"
ANY = "any"

UNKNOWN = "Unknown"
EMPTY = "Empty"


@dataclass
class Portrait:
    points: list
    succ: list[int]
    ctx: FieldContext

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(enumerate(self.succ))

    def labels(self) -> list[str]:
        return [self.ctx.format(p) for p in self.points]

    def to_dot(self, name: str = "portrait") -> str:
        labels = self.labels()
        lines = [f"digraph {name} {{"]
        for i, lab in enumerate(labels):
            lines.append(f'  v{i} [label="{lab}"];')
        for i, j in self.edges:
            lines.append(f"  v{i} -> v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_portrait(phi: UnicriticalMap, points) -> Portrait:
    ctx = phi.ctx
    pts = [ctx.embed(p) for p in points]
    index = {p: i for i, p in enumerate(pts)}
    succ = []
    for p in pts:
        image = phi(p)
        if image not in index:
            raise NotClosed(f"image {ctx.format(image)} of {ctx.format(p)} is not in the set")
        succ.append(index[image])
    return Portrait(pts, succ, ctx)


@dataclass
class SkeletonVertex:
    kind: str
    point: object = None
    members: tuple = ()

    @property
    def merged(self) -> bool:
        return self.point is None


@dataclass
class Skeleton:
    vertices: list[SkeletonVertex]
    succ: list[int]
    ctx: FieldContext = None

    def __len__(self):
        return len(self.vertices)

    @property
    def kinds(self) -> list[str]:
        return [v.kind for v in self.vertices]

    def labels(self) -> list[str]:
        out = []
        for v in self.vertices:
            if v.merged:
                inner = ", ".join(self.ctx.format(m) for m in v.members) if self.ctx else ""
                out.append(f"[{inner}]")
            else:
                out.append(self.ctx.format(v.point) if self.ctx else str(v.point))
        return out

    def to_dot(self, name: str = "skeleton") -> str:
        lines = [f"digraph {name} {{"]
        for i, (lab, v) in enumerate(zip(self.labels(), self.vertices)):
            shape = "box" if v.merged else "ellipse"
            lines.append(f'  v{i} [label="{lab}", shape={shape}];')
        for i, j in enumerate(self.succ):
            lines.append(f"  v{i} -> v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def point_kind(x, ctx: FieldContext) -> str:
    if x == 0:
        return ZERO
    if ctx.unit_exponent(x) is not None:
        return ROU
    return OTHER


def _fiber_kind(members, ctx: FieldContext) -> str:
    if len(members) == 1 and members[0] == 0:
        return ZERO
    if all(point_kind(m, ctx) == ROU for m in members):
        return ROU
    return OTHER


def skeletonize(portrait: Portrait) -> Skeleton:
    ctx = portrait.ctx
    n = len(portrait.points)
    preimages = [[] for _ in range(n)]
    for i, j in portrait.edges:
        preimages[j].append(i)
    kept = [i for i in range(n) if preimages[i]]
    new_index = {old: k for k, old in enumerate(kept)}
    vertices = [SkeletonVertex(point_kind(portrait.points[i], ctx), portrait.points[i]) for i in kept]
    succ = [new_index[portrait.succ[i]] for i in kept]
    for i in kept:
        if not any(p in new_index for p in preimages[i]):
            members = tuple(portrait.points[p] for p in preimages[i])
            vertices.append(SkeletonVertex(_fiber_kind(members, ctx), None, members))
            succ.append(new_index[i])
    return Skeleton(vertices, succ, ctx)


# -- reference graphs ---------------------------------------------------------

R, Z, A = ROU, ZERO, ANY

REFERENCE_GRAPHS: dict[str, tuple[list[str], list[int]]] = {
    EMPTY: ([], []),
    "(1)a": ([A], [0]),
    "(1)b": ([R, R, R], [0, 0, 1]),
    "(1)c": ([R, R, Z], [0, 0, 1]),
    "(1)d": ([R, R, R, Z, R], [0, 0, 0, 1, 2]),
    "(1)e": ([R, R, R, Z, R, R], [0, 0, 0, 1, 2, 3]),
    "(1,1)": ([R, R], [0, 1]),
    "(2)a": ([R, R], [1, 0]),
    "(2)b": ([Z, R], [1, 0]),
    "(2)c": ([Z, R, R, R, R, R], [1, 0, 0, 0, 2, 3]),
    "(2,1,1)": ([Z, R, R, R], [1, 0, 2, 3]),
    "(2,2)": ([Z, R, R, R], [1, 0, 3, 2]),
    "(3)": ([Z, R, R], [1, 2, 0]),
}


def _compatible(actual: str, pattern: str) -> bool:
    return pattern == ANY or actual == pattern


def isomorphic(kinds, succ, ref_kinds, ref_succ) -> bool:
    """Kind-respecting isomorphism of two functional graphs (backtracking)."""
    n = len(kinds)
    if n != len(ref_kinds):
        return False
    mapping: dict[int, int] = {}
    used = set()

    def consistent(u: int) -> bool:
        r = mapping[u]
        su = succ[u]
        if su in mapping and mapping[su] != ref_succ[r]:
            return False
        for w, rw in mapping.items():
            if succ[w] == u and ref_succ[rw] != r:
                return False
        return True

    def extend(u: int) -> bool:
        if u == n:
            return True
        for r in range(n):
            if r in used or not _compatible(kinds[u], ref_kinds[r]):
                continue
            mapping[u] = r
            used.add(r)
            if consistent(u) and extend(u + 1):
                return True
            del mapping[u]
            used.discard(r)
        return False

    return extend(0)


def classify_skeleton(skeleton: Skeleton) -> str:
    for label, (ref_kinds, ref_succ) in REFERENCE_GRAPHS.items():
        if isomorphic(skeleton.kinds, skeleton.succ, ref_kinds, ref_succ):
            return label
    return UNKNOWN


def reference_skeleton(label: str) -> Skeleton:
    kinds, succ = REFERENCE_GRAPHS[label]
    return Skeleton([SkeletonVertex(ROU if k == ANY else k, f"v{i}") for i, k in enumerate(kinds)], list(succ))


# -- prediction from the parameter --------------------------------------------


@dataclass
class Prediction:
    label: str
    certificate: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _fmt(ctx, *values):
    return [ctx.format(v) for v in values]


def predicted_skeleton(d: int, c, ctx: FieldContext, hints=()) -> Prediction:
    """Skeleton label predicted from (d, c) by the decision tree over mu_K."""
    c = ctx.embed(c)
    if c == 0:
        raise ValueError("prediction needs c != 0")
    notes = []
    D1 = ctx.constants.D1
    if D1 is None or d <= D1:
        notes.append("degree not above a configured D1; positive-height points may add structure")
    in_mu = ctx.unit_exponent(c) is not None
    zeta6 = ctx.primitive_root_of_unity(6)

    def unit_order(x):
        return ctx.is_root_of_unity(x)[1]

    y = solve_fixed_source(d, c, ctx, hints, positive_height=True)
    if y is not None:
        return Prediction("(1)a", {"criterion": "fixed-source fiber", "y": ctx.format(y)}, notes)

    if in_mu and d % 6 == 1:
        u = c ** (d - 1)
        if unit_order(u) == 3:
            z6 = -(u ** -1)
            w1 = z6 * c
            cert = {"criterion": "three-cycle", "cycle": _fmt(ctx, 0, c, w1), "zeta6": ctx.format(z6)}
            return Prediction("(3)", cert, notes)

    if in_mu and c ** (d - 1) == -1:
        cert = {"criterion": "two-cycle through zero", "cycle": _fmt(ctx, 0, c)}
        if zeta6 is None:
            return Prediction("(2)b", cert, notes)
        w1, w2 = zeta6 * c, zeta6**-1 * c
        cert["companions"] = _fmt(ctx, w1, w2)
        if d % 6 == 1:
            return Prediction("(2,2)", cert, notes)
        if d % 6 == 5:
            return Prediction("(2,1,1)", cert, notes)
        if d % 6 == 0:
            z3 = zeta6**2
            r4 = ctx.unit_dth_roots(z3 * c, d)
            r5 = ctx.unit_dth_roots(z3**-1 * c, d)
            if r4 and r5:
                cert["tails"] = _fmt(ctx, r4[0], r5[0])
                return Prediction("(2)c", cert, notes)
        return Prediction("(2)b", cert, notes)

    pair = _unit_pairs(c, ctx)
    for w1, w2 in pair:
        if w1 != w2 and w1 ** (d - 1) == -1 and w2 ** (d - 1) == -1:
            cert = {"criterion": "two-cycle of roots of unity", "cycle": _fmt(ctx, w1, w2)}
            if d % 6 == 1 and in_mu:
                return Prediction("(2,2)", cert, notes)
            return Prediction("(2)a", cert, notes)

    fixed = [w for w in ctx.roots_of_unity() if w - w**d == c]
    if len(fixed) >= 2:
        cert = {"criterion": "two fixed roots of unity", "fixed": _fmt(ctx, *fixed)}
        if d % 6 == 5 and in_mu:
            return Prediction("(2,1,1)", cert, notes)
        return Prediction("(1,1)", cert, notes)
    if len(fixed) == 1:
        w1 = fixed[0]
        if d % 6 == 0 and in_mu and unit_order(w1 / c) == 6:
            z6 = w1 / c
            z3 = z6**2
            cert = {"criterion": "fixed root of unity with zero in its tail", "fixed": ctx.format(w1)}
            if not ctx.is_dth_power_of_unit(z3, d):
                return Prediction("(1)c", cert, notes)
            if not ctx.is_dth_power_of_unit(z6, d):
                return Prediction("(1)d", cert, notes)
            return Prediction("(1)e", cert, notes)
        w2 = -(w1**d)
        if w2 != w1 and w2 ** (d - 1) == -1:
            tails = [w for w in ctx.unit_dth_roots(-w1, d) if w not in (w1, w2)]
            if tails:
                cert = {"criterion": "fixed root of unity with a tail of length two", "chain": _fmt(ctx, tails[0], w2, w1)}
                return Prediction("(1)b", cert, notes)
        return Prediction("(1)a", {"criterion": "single fixed root of unity", "fixed": ctx.format(w1)}, notes)

    return Prediction(EMPTY, {"criterion": "no periodic point of height zero"}, notes)


def _unit_pairs(c, ctx: FieldContext) -> list[tuple]:
    mu = ctx.roots_of_unity()
    index = {w: k for k, w in enumerate(mu)}
    pairs = []
    for k, x in enumerate(mu):
        y = c - x
        j = index.get(y)
        if j is not None and j >= k:
            pairs.append((x, y))
    return pairs


def unit_circle_sum(c, ctx: FieldContext):
    """The unordered pair {x, y} of roots of unity with x + y == c, or None."""
    c = ctx.embed(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    pairs = _unit_pairs(c, ctx)
    if len(pairs) > 1:
        raise ViolationDetected(f"{len(pairs)} ways to write {ctx.format(c)} as a sum of two roots of unity")
    if not pairs:
        return None
    x, y = pairs[0]
    zeta6 = ctx.primitive_root_of_unity(6)
    if ctx.unit_exponent(c) is not None:
        expected = {zeta6 * c, zeta6**-1 * c} if zeta6 is not None else set()
        if {x, y} != expected:
            raise ViolationDetected(f"pair for root of unity {ctx.format(c)} is not the sixth-root rotation")
    return pairs[0]


def two_images_check(phi: UnicriticalMap) -> list:
    """phi(mu_K) intersected with mu_K; at most two elements summing to c."""
    ctx = phi.ctx
    mu = set(ctx.roots_of_unity())
    images = sorted({phi(w) for w in mu} & mu, key=ctx.sort_key)
    if len(images) > 2:
        raise ViolationDetected(f"{len(images)} roots of unity are images of roots of unity")
    if len(images) == 2:
        w1, w2 = images
        if w1 + w2 != phi.c:
            raise ViolationDetected("the two image roots of unity do not sum to c")
        if phi.c in mu:
            zeta6 = ctx.primitive_root_of_unity(6)
            if zeta6 is None or {w1, w2} != {zeta6 * phi.c, zeta6**-1 * phi.c}:
                raise ViolationDetected("image pair is not the sixth-root rotation of c")
    return images
