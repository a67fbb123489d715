"""Finite-dimensional representations of finite acyclic quivers.

A representation assigns a vector space over a fixed prime field to each
vertex and a matrix to each arrow.  Morphisms are vertexwise matrices that
commute with every arrow map exactly (the intertwiner law).  Everything here
is checked at construction time; a RepMap that typechecks is a morphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Mat, PrimeField, image_basis, kernel_basis, quotient, solve

__all__ = [
    "Quiver",
    "QuiverRep",
    "RepMap",
    "rep_hom_basis",
    "rep_kernel",
    "rep_cokernel",
    "rep_image",
    "direct_sum",
    "random_rep",
    "random_rep_map",
]


@dataclass(frozen=True)
class Quiver:
    """A finite quiver with named vertices, required to be acyclic."""

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        for src, tgt in self.arrows:
            if src not in self.vertices or tgt not in self.vertices:
                raise ValueError(f"arrow ({src}, {tgt}) mentions unknown vertex")
        if self._has_cycle():
            raise ValueError("quiver has an oriented cycle")

    def _has_cycle(self) -> bool:
        # Kahn peeling; anything left over sits on a cycle
        indeg = {v: 0 for v in self.vertices}
        for _, tgt in self.arrows:
            indeg[tgt] += 1
        queue = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for src, tgt in self.arrows:
                if src == v:
                    indeg[tgt] -= 1
                    if indeg[tgt] == 0:
                        queue.append(tgt)
        return seen != len(self.vertices)

    def index(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    @classmethod
    def point(cls) -> "Quiver":
        """One vertex, no arrows: plain vector spaces."""
        return cls(("v",), ())

    @classmethod
    def a2(cls) -> "Quiver":
        """Two vertices joined by one arrow."""
        return cls(("a", "b"), (("a", "b"),))


class QuiverRep:
    """A representation: dims per vertex, one matrix per arrow."""

    __slots__ = ("quiver", "field", "dims", "arrow_maps")

    def __init__(
        self,
        quiver: Quiver,
        field: PrimeField,
        dims: tuple[int, ...],
        arrow_maps: tuple[Mat, ...],
    ):
        if len(dims) != len(quiver.vertices):
            raise ValueError("one dimension per vertex required")
        if len(arrow_maps) != len(quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for (src, tgt), m in zip(quiver.arrows, arrow_maps):
            want = (dims[quiver.index(tgt)], dims[quiver.index(src)])
            if m.shape != want:
                raise ValueError(
                    f"arrow ({src}, {tgt}) map has shape {m.shape}, expected {want}"
                )
            if m.field != field:
                raise ValueError("arrow map over the wrong field")
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        object.__setattr__(self, "arrow_maps", tuple(arrow_maps))

    def __setattr__(self, name, value):
        raise AttributeError("QuiverRep is immutable")

    @classmethod
    def zero(cls, quiver: Quiver, field: PrimeField) -> "QuiverRep":
        dims = tuple(0 for _ in quiver.vertices)
        maps = tuple(Mat.zeros(field, 0, 0) for _ in quiver.arrows)
        return cls(quiver, field, dims, maps)

    def dim(self, vertex: str) -> int:
        return self.dims[self.quiver.index(vertex)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuiverRep):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.field == other.field
            and self.dims == other.dims
            and self.arrow_maps == other.arrow_maps
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"QuiverRep({self.field}, dims={self.dims})"


class RepMap:
    """An intertwiner between two representations of the same quiver."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: QuiverRep, target: QuiverRep, components: tuple[Mat, ...]):
        if source.quiver != target.quiver:
            raise ValueError("intertwiner between different quivers")
        if source.field != target.field:
            raise ValueError("intertwiner between different fields")
        quiver = source.quiver
        if len(components) != len(quiver.vertices):
            raise ValueError("one component per vertex required")
        for v, c in zip(quiver.vertices, components):
            want = (target.dim(v), source.dim(v))
            if c.shape != want:
                raise ValueError(f"component at {v} has shape {c.shape}, expected {want}")
        for (src, tgt), a_s, a_t in zip(quiver.arrows, source.arrow_maps, target.arrow_maps):
            i, j = quiver.index(src), quiver.index(tgt)
            if (a_t @ components[i]) != (components[j] @ a_s):
                raise ValueError(f"intertwiner law fails on arrow ({src}, {tgt})")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", tuple(components))

    def __setattr__(self, name, value):
        raise AttributeError("RepMap is immutable")

    @classmethod
    def zero(cls, source: QuiverRep, target: QuiverRep) -> "RepMap":
        comps = tuple(
            Mat.zeros(source.field, target.dims[i], source.dims[i])
            for i in range(len(source.quiver.vertices))
        )
        return cls(source, target, comps)

    @classmethod
    def identity(cls, rep: QuiverRep) -> "RepMap":
        comps = tuple(Mat.identity(rep.field, d) for d in rep.dims)
        return cls(rep, rep, comps)

    def component(self, vertex: str) -> Mat:
        return self.components[self.source.quiver.index(vertex)]

    def compose(self, other: "RepMap") -> "RepMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        comps = tuple(a @ b for a, b in zip(self.components, other.components))
        return RepMap(other.source, self.target, comps)

    def __add__(self, other: "RepMap") -> "RepMap":
        comps = tuple(a + b for a, b in zip(self.components, other.components))
        return RepMap(self.source, self.target, comps)

    def __sub__(self, other: "RepMap") -> "RepMap":
        comps = tuple(a - b for a, b in zip(self.components, other.components))
        return RepMap(self.source, self.target, comps)

    def __neg__(self) -> "RepMap":
        return RepMap(self.source, self.target, tuple(-c for c in self.components))

    def scale(self, c: int) -> "RepMap":
        return RepMap(self.source, self.target, tuple(m.scale(c) for m in self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    __hash__ = None

    def flat(self) -> np.ndarray:
        """Row-major flattening of all components, vertex order."""
        pieces = [c.a.reshape(-1) for c in self.components]
        if not pieces:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(pieces)

    def __repr__(self) -> str:
        return f"RepMap({self.source!r} -> {self.target!r})"


def flat_dim(source: QuiverRep, target: QuiverRep) -> int:
    return sum(t * s for t, s in zip(target.dims, source.dims))


def map_from_flat(source: QuiverRep, target: QuiverRep, vec: np.ndarray) -> RepMap:
    """Inverse of RepMap.flat; the result must satisfy the intertwiner law."""
    comps = []
    off = 0
    for t, s in zip(target.dims, source.dims):
        comps.append(Mat(source.field, vec[off : off + t * s], shape=(t, s)))
        off += t * s
    return RepMap(source, target, tuple(comps))


def graded_from_flat(
    source: QuiverRep, target: QuiverRep, vec: np.ndarray
) -> tuple[Mat, ...]:
    """Like map_from_flat but without imposing the intertwiner law."""
    comps = []
    off = 0
    for t, s in zip(target.dims, source.dims):
        comps.append(Mat(source.field, vec[off : off + t * s], shape=(t, s)))
        off += t * s
    return tuple(comps)


def post_op(m: RepMap, source: QuiverRep) -> np.ndarray:
    """Matrix of (phi -> m . phi) on flat graded maps source -> m.source."""
    blocks = []
    for v_idx, sdim in enumerate(source.dims):
        blocks.append(np.kron(m.components[v_idx].a, np.eye(sdim, dtype=np.int64)))
    return _block_diag(blocks)


def pre_op(m: RepMap, target: QuiverRep) -> np.ndarray:
    """Matrix of (phi -> phi . m) on flat graded maps m.target -> target."""
    blocks = []
    for v_idx, tdim in enumerate(target.dims):
        blocks.append(np.kron(np.eye(tdim, dtype=np.int64), m.components[v_idx].a.T))
    return _block_diag(blocks)


def _block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def hom_constraint_matrix(a: QuiverRep, b: QuiverRep) -> Mat:
    """Rows cut out the intertwiners inside the flat graded maps a -> b."""
    quiver = a.quiver
    n = flat_dim(a, b)
    offsets = []
    off = 0
    for t, s in zip(b.dims, a.dims):
        offsets.append(off)
        off += t * s
    rows = []
    for (src, tgt), a_map, b_map in zip(quiver.arrows, a.arrow_maps, b.arrow_maps):
        i, j = quiver.index(src), quiver.index(tgt)
        # b_map . phi_src - phi_tgt . a_map = 0
        r = b.dims[j] * a.dims[i]
        block = np.zeros((r, n), dtype=np.int64)
        left = np.kron(b_map.a, np.eye(a.dims[i], dtype=np.int64))
        right = np.kron(np.eye(b.dims[j], dtype=np.int64), a_map.a.T)
        block[:, offsets[i] : offsets[i] + left.shape[1]] += left
        block[:, offsets[j] : offsets[j] + right.shape[1]] -= right
        rows.append(block)
    if not rows:
        return Mat.zeros(a.field, 0, n)
    return Mat(a.field, np.concatenate(rows, axis=0))


def rep_hom_basis(a: QuiverRep, b: QuiverRep) -> list[RepMap]:
    """Deterministic basis of the intertwiner space Hom(a, b)."""
    ker = kernel_basis(hom_constraint_matrix(a, b))
    return [map_from_flat(a, b, ker.a[:, j]) for j in range(ker.cols)]


def rep_hom_basis_flat(a: QuiverRep, b: QuiverRep) -> Mat:
    """Same basis as rep_hom_basis, packed as flat column vectors."""
    return kernel_basis(hom_constraint_matrix(a, b))


def rep_kernel(f: RepMap) -> tuple[QuiverRep, RepMap]:
    """Vertexwise kernel with induced arrow maps and its inclusion."""
    quiver = f.source.quiver
    field = f.source.field
    kmats = [kernel_basis(c) for c in f.components]
    dims = tuple(k.cols for k in kmats)
    arrow_maps = []
    for (src, tgt), a_map in zip(quiver.arrows, f.source.arrow_maps):
        i, j = quiver.index(src), quiver.index(tgt)
        # arrow map sends kernel vectors to kernel vectors; rewrite in the
        # kernel basis at the target vertex
        img = a_map @ kmats[i]
        sol = solve(kmats[j], img)
        if sol is None:
            raise AssertionError("kernel is not arrow-stable; intertwiner law broken")
        arrow_maps.append(sol[0])
    ker = QuiverRep(quiver, field, dims, tuple(arrow_maps))
    inc = RepMap(ker, f.source, tuple(kmats))
    return ker, inc


def rep_cokernel(f: RepMap) -> tuple[QuiverRep, RepMap]:
    """Vertexwise cokernel with induced arrow maps and its projection."""
    coker, proj, _ = quotient_rep(f.target, tuple(image_basis(c) for c in f.components))
    return coker, proj


def quotient_rep(
    rep: QuiverRep, sub_mats: tuple[Mat, ...]
) -> tuple[QuiverRep, RepMap, tuple[Mat, ...]]:
    """Quotient of rep by an arrow-stable vertexwise subspace.

    sub_mats gives an independent column basis of the subspace at each
    vertex.  Returns (quotient rep, projection, section matrices); sections
    are plain matrices, not intertwiners.
    """
    quiver = rep.quiver
    field = rep.field
    projs, sects, dims = [], [], []
    for v_idx, sub in enumerate(sub_mats):
        q, s = quotient(field, rep.dims[v_idx], sub)
        projs.append(q)
        sects.append(s)
        dims.append(q.rows)
    arrow_maps = []
    for (src, tgt), a_map in zip(quiver.arrows, rep.arrow_maps):
        i, j = quiver.index(src), quiver.index(tgt)
        arrow_maps.append(projs[j] @ a_map @ sects[i])
    out = QuiverRep(quiver, field, tuple(dims), tuple(arrow_maps))
    proj = RepMap(rep, out, tuple(projs))
    return out, proj, tuple(sects)


def rep_image(f: RepMap) -> tuple[QuiverRep, RepMap]:
    """Vertexwise image with induced arrow maps and its inclusion."""
    quiver = f.source.quiver
    field = f.source.field
    imats = [image_basis(c) for c in f.components]
    dims = tuple(m.cols for m in imats)
    arrow_maps = []
    for (src, tgt), a_map in zip(quiver.arrows, f.target.arrow_maps):
        i, j = quiver.index(src), quiver.index(tgt)
        sol = solve(imats[j], a_map @ imats[i])
        if sol is None:
            raise AssertionError("image is not arrow-stable; intertwiner law broken")
        arrow_maps.append(sol[0])
    img = QuiverRep(quiver, field, dims, tuple(arrow_maps))
    inc = RepMap(img, f.target, tuple(imats))
    return img, inc


def direct_sum(
    a: QuiverRep, b: QuiverRep
) -> tuple[QuiverRep, RepMap, RepMap, RepMap, RepMap]:
    """Biproduct with injections and projections (inj_a, inj_b, proj_a, proj_b)."""
    if a.quiver != b.quiver or a.field != b.field:
        raise ValueError("direct sum over mismatched quiver or field")
    quiver, field = a.quiver, a.field
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    arrow_maps = []
    for idx, (src, tgt) in enumerate(quiver.arrows):
        i, j = quiver.index(src), quiver.index(tgt)
        block = np.zeros((dims[j], dims[i]), dtype=np.int64)
        block[: a.dims[j], : a.dims[i]] = a.arrow_maps[idx].a
        block[a.dims[j] :, a.dims[i] :] = b.arrow_maps[idx].a
        arrow_maps.append(Mat(field, block))
    s = QuiverRep(quiver, field, dims, tuple(arrow_maps))

    def _inj(rep, before):
        comps = []
        for v_idx in range(len(quiver.vertices)):
            m = np.zeros((dims[v_idx], rep.dims[v_idx]), dtype=np.int64)
            off = before[v_idx]
            m[off : off + rep.dims[v_idx], :] = np.eye(rep.dims[v_idx], dtype=np.int64)
            comps.append(Mat(field, m))
        return RepMap(rep, s, tuple(comps))

    def _proj(rep, before):
        comps = []
        for v_idx in range(len(quiver.vertices)):
            m = np.zeros((rep.dims[v_idx], dims[v_idx]), dtype=np.int64)
            off = before[v_idx]
            m[:, off : off + rep.dims[v_idx]] = np.eye(rep.dims[v_idx], dtype=np.int64)
            comps.append(Mat(field, m))
        return RepMap(s, rep, tuple(comps))

    zeros = tuple(0 for _ in quiver.vertices)
    inj_a = _inj(a, zeros)
    inj_b = _inj(b, a.dims)
    proj_a = _proj(a, zeros)
    proj_b = _proj(b, a.dims)
    return s, inj_a, inj_b, proj_a, proj_b


def random_rep(
    quiver: Quiver, field: PrimeField, max_dim: int, rng: np.random.Generator
) -> QuiverRep:
    """Uniform dims in [0, max_dim], uniform arrow matrices."""
    dims = tuple(int(rng.integers(0, max_dim + 1)) for _ in quiver.vertices)
    arrow_maps = []
    for src, tgt in quiver.arrows:
        i, j = quiver.index(src), quiver.index(tgt)
        arrow_maps.append(Mat(field, rng.integers(0, field.p, size=(dims[j], dims[i]))))
    return QuiverRep(quiver, field, dims, tuple(arrow_maps))


def random_rep_map(a: QuiverRep, b: QuiverRep, rng: np.random.Generator) -> RepMap:
    """Uniform draw from the intertwiner space Hom(a, b)."""
    basis = rep_hom_basis_flat(a, b)
    coeffs = rng.integers(0, a.field.p, size=(basis.cols, 1))
    vec = (basis.a @ coeffs) % a.field.p
    return map_from_flat(a, b, vec.reshape(-1))
