"""Bounded chain complexes of quiver representations.

Grading is homological: the differential lowers degree, d_n : X_n -> X_{n-1},
and d_{n} d_{n+1} = 0 is enforced at construction.  The conventions below are
part of the API contract; all higher constructions are derived from them and
the tests pin them bit for bit.

  shift         X[k]_n = X_{n-k}, differential scaled by (-1)^k
  cone(f)_n   = X_{n-1} (+) Y_n          d(x, y) = (-dx, fx + dy)
  fib(f)      = cone(f)[-1], so fib(f)_n = X_n (+) Y_{n+1} with
                                          d(x, y) = (dx, -fx - dy)
  cofib(f)    = cone(f)
  hom(X, Y)_n = (+)_i Hom(X_i, Y_{i+n})   (d phi) = d_Y phi - (-1)^n phi d_X

A homotopy h from g to f has components h_n : X_n -> Y_{n+1} and satisfies
f - g = d h + h d.  H_n of the hom complex is the space of degree-n maps up
to homotopy; in particular H_0 is chain maps modulo chain homotopy.

Equivalences are never inverted: a map is a quasi-isomorphism exactly when
its cone is acyclic, and all "X equals Y in the homotopy category" claims
are expressed through an explicit comparison map plus that test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Mat, PrimeField, image_basis, kernel_basis, quotient, rank, solve
from .quiver import (
    Quiver,
    QuiverRep,
    RepMap,
    direct_sum,
    graded_from_flat,
    map_from_flat,
    post_op,
    pre_op,
    random_rep,
    rep_hom_basis_flat,
    flat_dim,
)

__all__ = [
    "Complex",
    "ChainMap",
    "Homotopy",
    "Triangle",
    "CommutingSquare",
    "Cone",
    "Fiber",
    "Cofiber",
    "Pullback",
    "Pushout",
    "HomComplex",
    "HomologyData",
    "zero_complex",
    "identity_map",
    "zero_map",
    "compose",
    "shift",
    "shift_map",
    "homology",
    "homology_data",
    "homology_dims",
    "induced_homology_map",
    "is_acyclic",
    "cone",
    "fib",
    "cofib",
    "triangle_of",
    "is_quasi_iso",
    "direct_sum_complex",
    "hom_complex",
    "homotopy_pullback",
    "homotopy_pushout",
    "is_pullout",
    "is_cartesian",
    "is_cocartesian",
    "homotopic",
    "lift_through",
    "chain_map_basis",
    "random_complex",
    "random_chain_map",
]


class Complex:
    """A bounded complex.  Support is trimmed to the minimal window."""

    __slots__ = ("quiver", "field", "lo", "terms", "diffs")

    def __init__(
        self,
        quiver: Quiver,
        field: PrimeField,
        lo: int,
        terms: tuple[QuiverRep, ...],
        diffs: tuple[RepMap, ...],
    ):
        if terms and len(diffs) != len(terms) - 1:
            raise ValueError("need exactly one differential between adjacent degrees")
        if not terms and diffs:
            raise ValueError("differentials without terms")
        for t in terms:
            if t.quiver != quiver or t.field != field:
                raise ValueError("term over the wrong quiver or field")
        for i, d in enumerate(diffs):
            if d.source != terms[i + 1] or d.target != terms[i]:
                raise ValueError(f"differential {i} does not match adjacent terms")
        for i in range(len(diffs) - 1):
            if not diffs[i].compose(diffs[i + 1]).is_zero():
                raise ValueError("d-squared law fails")
        # trim zero boundary terms so equal objects have equal supports
        start, stop = 0, len(terms)
        while start < stop and terms[start].is_zero():
            start += 1
        while stop > start and terms[stop - 1].is_zero():
            stop -= 1
        if start == stop:
            lo, terms, diffs = 0, (), ()
        else:
            lo = lo + start
            terms = terms[start:stop]
            diffs = diffs[start : stop - 1]
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "diffs", diffs)

    def __setattr__(self, name, value):
        raise AttributeError("Complex is immutable")

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def support(self) -> range:
        return range(self.lo, self.lo + len(self.terms))

    def term(self, n: int) -> QuiverRep:
        if n in self.support:
            return self.terms[n - self.lo]
        return QuiverRep.zero(self.quiver, self.field)

    def diff(self, n: int) -> RepMap:
        """The differential X_n -> X_{n-1}."""
        if n - 1 in self.support and n in self.support:
            return self.diffs[n - 1 - self.lo]
        return RepMap.zero(self.term(n), self.term(n - 1))

    @property
    def total_dim(self) -> int:
        return sum(t.total_dim for t in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.field == other.field
            and self.lo == other.lo
            and self.terms == other.terms
            and self.diffs == other.diffs
        )

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_zero():
            return f"Complex({self.field}, 0)"
        dims = {n: sum(self.term(n).dims) for n in self.support}
        return f"Complex({self.field}, dims={dims})"


def zero_complex(quiver: Quiver, field: PrimeField) -> Complex:
    return Complex(quiver, field, 0, (), ())


class ChainMap:
    """A degreewise intertwiner commuting with the differentials."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Complex, target: Complex, comps: dict[int, RepMap]):
        if source.quiver != target.quiver or source.field != target.field:
            raise ValueError("chain map between incompatible complexes")
        kept: dict[int, RepMap] = {}
        for n, c in comps.items():
            if c.source != source.term(n) or c.target != target.term(n):
                raise ValueError(f"component at degree {n} has wrong endpoints")
            if not c.is_zero():
                kept[n] = c
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "comps", kept)
        for n in self._window():
            lhs = target.diff(n).compose(self.comp(n))
            rhs = self.comp(n - 1).compose(source.diff(n))
            if lhs != rhs:
                raise ValueError(f"chain-map law fails at degree {n}")

    def _window(self) -> range:
        degs = [self.source.lo, self.source.hi, self.target.lo, self.target.hi]
        return range(min(degs), max(degs) + 2)

    def __setattr__(self, name, value):
        raise AttributeError("ChainMap is immutable")

    def comp(self, n: int) -> RepMap:
        got = self.comps.get(n)
        if got is not None:
            return got
        return RepMap.zero(self.source.term(n), self.target.term(n))

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum of chain maps with different endpoints")
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in degs})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -c for n, c in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"


def identity_map(x: Complex) -> ChainMap:
    return ChainMap(x, x, {n: RepMap.identity(x.term(n)) for n in x.support})

def zero_map(x: Complex, y: Complex) -> ChainMap:
    return ChainMap(x, y, {})


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """f after g."""
    if g.target != f.source:
        raise ValueError("composition endpoint mismatch")
    degs = set(f.comps) | set(g.comps)
    return ChainMap(g.source, f.target, {n: f.comp(n).compose(g.comp(n)) for n in degs})


class Homotopy:
    """Components h_n : X_n -> Y_{n+1} with  to - from = d h + h d."""

    __slots__ = ("from_map", "to_map", "comps")

    def __init__(self, from_map: ChainMap, to_map: ChainMap, comps: dict[int, RepMap]):
        if from_map.source != to_map.source or from_map.target != to_map.target:
            raise ValueError("homotopy between maps with different endpoints")
        x, y = from_map.source, from_map.target
        kept: dict[int, RepMap] = {}
        for n, c in comps.items():
            if c.source != x.term(n) or c.target != y.term(n + 1):
                raise ValueError(f"homotopy component at degree {n} has wrong endpoints")
            if not c.is_zero():
                kept[n] = c
        object.__setattr__(self, "from_map", from_map)
        object.__setattr__(self, "to_map", to_map)
        object.__setattr__(self, "comps", kept)
        degs = [x.lo, x.hi, y.lo, y.hi]
        for n in range(min(degs) - 1, max(degs) + 2):
            want = to_map.comp(n) - from_map.comp(n)
            got = y.diff(n + 1).compose(self.comp(n)) + self.comp(n - 1).compose(x.diff(n))
            if want != got:
                raise ValueError(f"homotopy law fails at degree {n}")

    def __setattr__(self, name, value):
        raise AttributeError("Homotopy is immutable")

    def comp(self, n: int) -> RepMap:
        got = self.comps.get(n)
        if got is not None:
            return got
        return RepMap.zero(self.from_map.source.term(n), self.from_map.target.term(n + 1))

    def __repr__(self) -> str:
        return f"Homotopy({self.from_map!r} => {self.to_map!r})"


def zero_homotopy(f: ChainMap) -> Homotopy:
    """Witness that f is homotopic to itself."""
    return Homotopy(f, f, {})


@dataclass(frozen=True)
class Triangle:
    """X --f--> Y --g--> Z --h--> X[1] with nullcomposite witnesses."""

    f: ChainMap
    g: ChainMap
    h: ChainMap
    w_gf: Homotopy
    w_hg: Homotopy
    w_fh: Homotopy

    def __post_init__(self):
        if self.g.source != self.f.target or self.h.source != self.g.target:
            raise ValueError("triangle maps do not chain")
        if self.h.target != shift(self.f.source, 1):
            raise ValueError("triangle does not land in the shifted source")
        for w, want in (
            (self.w_gf, compose(self.g, self.f)),
            (self.w_hg, compose(self.h, self.g)),
            (self.w_fh, compose(shift_map(self.f, 1), self.h)),
        ):
            if w.to_map != want or not w.from_map.is_zero():
                raise ValueError("triangle witness does not match its composite")


@dataclass(frozen=True)
class CommutingSquare:
    """top: W->X, left: W->Y, right: X->Z, bottom: Y->Z, commuting up to
    the recorded homotopy from bottom.left to right.top."""

    top: ChainMap
    left: ChainMap
    right: ChainMap
    bottom: ChainMap
    witness: Homotopy

    def __post_init__(self):
        if self.top.source != self.left.source:
            raise ValueError("square corners disagree at the source")
        if self.right.target != self.bottom.target:
            raise ValueError("square corners disagree at the sink")
        if self.top.target != self.right.source or self.left.target != self.bottom.source:
            raise ValueError("square edges do not chain")
        if self.witness.from_map != compose(self.bottom, self.left):
            raise ValueError("square witness starts at the wrong composite")
        if self.witness.to_map != compose(self.right, self.top):
            raise ValueError("square witness ends at the wrong composite")

    @classmethod
    def strict(cls, top, left, right, bottom) -> "CommutingSquare":
        """For squares commuting on the nose; witness is the zero homotopy."""
        lhs = compose(bottom, left)
        rhs = compose(right, top)
        if lhs != rhs:
            raise ValueError("square does not commute strictly")
        return cls(top, left, right, bottom, Homotopy(lhs, rhs, {}))


# -- shifting -----------------------------------------------------------------


def shift(x: Complex, k: int) -> Complex:
    """X[k]_n = X_{n-k}; odd shifts negate the differential."""
    if x.is_zero() or k == 0:
        return x if k == 0 else Complex(x.quiver, x.field, x.lo + k, x.terms, x.diffs)
    sgn = -1 if k % 2 else 1
    diffs = tuple(d.scale(sgn) for d in x.diffs)
    return Complex(x.quiver, x.field, x.lo + k, x.terms, diffs)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(
        shift(f.source, k), shift(f.target, k), {n + k: c for n, c in f.comps.items()}
    )


# -- homology -----------------------------------------------------------------


@dataclass(frozen=True)
class HomologyData:
    """H_n(X) together with chosen cycle representatives.

    reps[v] maps homology coordinates at vertex v to cycle vectors in X_n(v);
    class_of inverts it on cycles.
    """

    complex: Complex
    degree: int
    rep: QuiverRep
    kernels: tuple[Mat, ...]
    projections: tuple[Mat, ...]
    reps: tuple[Mat, ...]

    def class_of(self, v_idx: int, cycles: Mat) -> Mat:
        """Coordinates of homology classes of the given cycle columns."""
        sol = solve(self.kernels[v_idx], cycles)
        if sol is None:
            raise ValueError("vector is not a cycle")
        return self.projections[v_idx] @ sol[0]


def homology_data(x: Complex, n: int) -> HomologyData:
    quiver, field = x.quiver, x.field
    d_in = x.diff(n + 1)
    d_out = x.diff(n)
    kernels, projs, sects, dims = [], [], [], []
    for v_idx in range(len(quiver.vertices)):
        k = kernel_basis(d_out.components[v_idx])
        bd = image_basis(d_in.components[v_idx])
        coords = solve(k, bd)
        if coords is None:
            raise AssertionError("boundaries are not cycles; d-squared broken")
        q, s = quotient(field, k.cols, image_basis(coords[0]))
        kernels.append(k)
        projs.append(q)
        sects.append(s)
        dims.append(q.rows)
    reps = tuple(k @ s for k, s in zip(kernels, sects))
    arrow_maps = []
    term = x.term(n)
    for a_idx, (src, tgt) in enumerate(quiver.arrows):
        i, j = quiver.index(src), quiver.index(tgt)
        carried = term.arrow_maps[a_idx] @ reps[i]
        coords = solve(kernels[j], carried)
        if coords is None:
            raise AssertionError("arrow map does not preserve cycles")
        arrow_maps.append(projs[j] @ coords[0])
    h = QuiverRep(quiver, field, tuple(dims), tuple(arrow_maps))
    return HomologyData(x, n, h, tuple(kernels), tuple(projs), reps)


def homology(x: Complex, n: int) -> QuiverRep:
    return homology_data(x, n).rep


def homology_dims(x: Complex) -> dict[int, tuple[int, ...]]:
    """Vertexwise homology dimensions on the support, by rank counting."""
    out: dict[int, tuple[int, ...]] = {}
    for n in x.support:
        term = x.term(n)
        d_out = x.diff(n)
        d_in = x.diff(n + 1)
        dims = tuple(
            term.dims[v] - rank(d_out.components[v]) - rank(d_in.components[v])
            for v in range(len(x.quiver.vertices))
        )
        out[n] = dims
    return out


def is_acyclic(x: Complex) -> bool:
    return all(all(d == 0 for d in dims) for dims in homology_dims(x).values())


def induced_homology_map(f: ChainMap, n: int) -> RepMap:
    hx = homology_data(f.source, n)
    hy = homology_data(f.target, n)
    comps = []
    for v_idx in range(len(f.source.quiver.vertices)):
        carried = f.comp(n).components[v_idx] @ hx.reps[v_idx]
        comps.append(hy.class_of(v_idx, carried))
    return RepMap(hx.rep, hy.rep, tuple(comps))


# -- cones, fibers, cofibers --------------------------------------------------


@dataclass(frozen=True)
class Cone:
    complex: Complex
    into: ChainMap  # Y -> cone
    outof: ChainMap  # cone -> X[1]
    inj_x: dict[int, RepMap]  # X_{n-1} -> cone_n
    inj_y: dict[int, RepMap]
    proj_x: dict[int, RepMap]  # cone_n -> X_{n-1}
    proj_y: dict[int, RepMap]


def cone(f: ChainMap) -> Cone:
    x, y = f.source, f.target
    quiver, fld = x.quiver, x.field
    if x.is_zero() and y.is_zero():
        z = zero_complex(quiver, fld)
        zm = zero_map(y, z)
        return Cone(z, zm, zero_map(z, shift(x, 1)), {}, {}, {}, {})
    lo = min(y.lo if not y.is_zero() else x.lo + 1, x.lo + 1 if not x.is_zero() else y.lo)
    hi = max(y.hi if not y.is_zero() else x.hi + 1, x.hi + 1 if not x.is_zero() else y.hi)
    terms, ix, iy, px, py = {}, {}, {}, {}, {}
    for n in range(lo, hi + 1):
        s, ia, ib, pa, pb = direct_sum(x.term(n - 1), y.term(n))
        terms[n] = s
        ix[n], iy[n], px[n], py[n] = ia, ib, pa, pb
    diffs = []
    for n in range(lo + 1, hi + 1):
        d = (
            ix[n - 1].compose((-x.diff(n - 1)).compose(px[n]))
            + iy[n - 1].compose(f.comp(n - 1).compose(px[n]))
            + iy[n - 1].compose(y.diff(n).compose(py[n]))
        )
        diffs.append(d)
    z = Complex(quiver, fld, lo, tuple(terms[n] for n in range(lo, hi + 1)), tuple(diffs))
    into = ChainMap(y, z, {n: iy[n] for n in range(lo, hi + 1)})
    outof = ChainMap(z, shift(x, 1), {n: px[n] for n in range(lo, hi + 1)})
    return Cone(z, into, outof, ix, iy, px, py)


@dataclass(frozen=True)
class Cofiber:
    complex: Complex
    from_target: ChainMap  # Y -> cofib(f)
    null_wit: Homotopy  # from 0 to from_target . f
    cone: Cone


def cofib(f: ChainMap) -> Cofiber:
    c = cone(f)
    x = f.source
    wit = Homotopy(
        zero_map(x, c.complex),
        compose(c.into, f),
        {n: c.inj_x[n + 1] for n in x.support if n + 1 in c.inj_x},
    )
    return Cofiber(c.complex, c.into, wit, c)


@dataclass(frozen=True)
class Fiber:
    complex: Complex
    to_source: ChainMap  # fib(f) -> X
    null_wit: Homotopy  # from 0 to f . to_source
    inj_x: dict[int, RepMap]  # X_n -> fib_n
    inj_y: dict[int, RepMap]  # Y_{n+1} -> fib_n
    proj_x: dict[int, RepMap]
    proj_y: dict[int, RepMap]


def fib(f: ChainMap) -> Fiber:
    x, y = f.source, f.target
    quiver, fld = x.quiver, x.field
    if x.is_zero() and y.is_zero():
        z = zero_complex(quiver, fld)
        zm = zero_map(z, x)
        return Fiber(z, zm, Homotopy(zero_map(z, y), compose(f, zm), {}), {}, {}, {}, {})
    lo = min(x.lo if not x.is_zero() else y.lo - 1, y.lo - 1 if not y.is_zero() else x.lo)
    hi = max(x.hi if not x.is_zero() else y.hi - 1, y.hi - 1 if not y.is_zero() else x.hi)
    terms, ix, iy, px, py = {}, {}, {}, {}, {}
    for n in range(lo, hi + 1):
        s, ia, ib, pa, pb = direct_sum(x.term(n), y.term(n + 1))
        terms[n] = s
        ix[n], iy[n], px[n], py[n] = ia, ib, pa, pb
    diffs = []
    for n in range(lo + 1, hi + 1):
        d = (
            ix[n - 1].compose(x.diff(n).compose(px[n]))
            - iy[n - 1].compose(f.comp(n).compose(px[n]))
            - iy[n - 1].compose(y.diff(n + 1).compose(py[n]))
        )
        diffs.append(d)
    w = Complex(quiver, fld, lo, tuple(terms[n] for n in range(lo, hi + 1)), tuple(diffs))
    to_source = ChainMap(w, x, {n: px[n] for n in range(lo, hi + 1)})
    null_wit = Homotopy(
        zero_map(w, y),
        compose(f, to_source),
        {n: -py[n] for n in range(lo, hi + 1)},
    )
    return Fiber(w, to_source, null_wit, ix, iy, px, py)


def triangle_of(f: ChainMap) -> Triangle:
    """The cone triangle X -> Y -> cone(f) -> X[1] with its witnesses."""
    x, y = f.source, f.target
    c = cone(f)
    w_gf = Homotopy(
        zero_map(x, c.complex),
        compose(c.into, f),
        {n: c.inj_x[n + 1] for n in x.support if n + 1 in c.inj_x},
    )
    w_hg = Homotopy(zero_map(y, shift(x, 1)), compose(c.outof, c.into), {})
    w_fh = Homotopy(
        zero_map(c.complex, shift(y, 1)),
        compose(shift_map(f, 1), c.outof),
        {n: c.proj_y[n] for n in c.proj_y},
    )
    return Triangle(f, c.into, c.outof, w_gf, w_hg, w_fh)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f).complex)


# -- direct sums and (co)cartesian gadgets ------------------------------------


def direct_sum_complex(
    x: Complex, y: Complex
) -> tuple[Complex, ChainMap, ChainMap, ChainMap, ChainMap]:
    quiver, fld = x.quiver, x.field
    if x.is_zero() and y.is_zero():
        z = zero_complex(quiver, fld)
        zm = zero_map(z, z)
        return z, zm, zm, zm, zm
    lo = min(x.lo if not x.is_zero() else y.lo, y.lo if not y.is_zero() else x.lo)
    hi = max(x.hi if not x.is_zero() else y.hi, y.hi if not y.is_zero() else x.hi)
    terms, ix, iy, px, py = {}, {}, {}, {}, {}
    for n in range(lo, hi + 1):
        s, ia, ib, pa, pb = direct_sum(x.term(n), y.term(n))
        terms[n] = s
        ix[n], iy[n], px[n], py[n] = ia, ib, pa, pb
    diffs = []
    for n in range(lo + 1, hi + 1):
        d = ix[n - 1].compose(x.diff(n).compose(px[n])) + iy[n - 1].compose(
            y.diff(n).compose(py[n])
        )
        diffs.append(d)
    s = Complex(quiver, fld, lo, tuple(terms[n] for n in range(lo, hi + 1)), tuple(diffs))
    rng_all = range(lo, hi + 1)
    inj_x = ChainMap(x, s, {n: ix[n] for n in rng_all})
    inj_y = ChainMap(y, s, {n: iy[n] for n in rng_all})
    proj_x = ChainMap(s, x, {n: px[n] for n in rng_all})
    proj_y = ChainMap(s, y, {n: py[n] for n in rng_all})
    return s, inj_x, inj_y, proj_x, proj_y


@dataclass(frozen=True)
class Pullback:
    complex: Complex
    proj_first: ChainMap
    proj_second: ChainMap
    square: CommutingSquare
    inj_parts: tuple[dict[int, RepMap], dict[int, RepMap], dict[int, RepMap]]
    proj_parts: tuple[dict[int, RepMap], dict[int, RepMap], dict[int, RepMap]]


def homotopy_pullback(f: ChainMap, g: ChainMap) -> Pullback:
    """W with projections to the sources of f, g : * -> Z and the witness square."""
    if f.target != g.target:
        raise ValueError("pullback legs must share a target")
    x, y = f.source, g.source
    s, inj_x, inj_y, proj_x, proj_y = direct_sum_complex(x, y)
    diff_map = compose(f, proj_x) - compose(g, proj_y)
    fb = fib(diff_map)
    proj1 = compose(proj_x, fb.to_source)
    proj2 = compose(proj_y, fb.to_source)
    wit = Homotopy(compose(g, proj2), compose(f, proj1), dict(fb.null_wit.comps))
    square = CommutingSquare(proj1, proj2, f, g, wit)
    ix = {n: fb.inj_x[n].compose(inj_x.comp(n)) for n in fb.inj_x}
    iy = {n: fb.inj_x[n].compose(inj_y.comp(n)) for n in fb.inj_x}
    iz = dict(fb.inj_y)
    px = {n: proj_x.comp(n).compose(fb.proj_x[n]) for n in fb.proj_x}
    py = {n: proj_y.comp(n).compose(fb.proj_x[n]) for n in fb.proj_x}
    pz = dict(fb.proj_y)
    return Pullback(fb.complex, proj1, proj2, square, (ix, iy, iz), (px, py, pz))


def pullback_induced(
    pb_from: Pullback,
    pb_to: Pullback,
    on_first: ChainMap,
    on_second: ChainMap,
    on_base: ChainMap,
) -> ChainMap:
    """Functoriality of homotopy pullbacks along a strictly commuting cospan map.

    Requires on_base . (old legs) = (new legs) . on_first/on_second on the
    nose; the induced map carries each summand by the given maps.
    """
    for old, new, side in (
        (pb_from.square.right, pb_to.square.right, on_first),
        (pb_from.square.bottom, pb_to.square.bottom, on_second),
    ):
        if compose(on_base, old) != compose(new, side):
            raise ValueError("cospan map does not commute strictly")
    ix, iy, iz = pb_to.inj_parts
    px, py, pz = pb_from.proj_parts
    comps = {}
    for n in pb_from.complex.support:
        acc = RepMap.zero(pb_from.complex.term(n), pb_to.complex.term(n))
        if n in px and n in ix:
            acc = acc + ix[n].compose(on_first.comp(n).compose(px[n]))
            acc = acc + iy[n].compose(on_second.comp(n).compose(py[n]))
        if n in pz and n in iz:
            acc = acc + iz[n].compose(on_base.comp(n + 1).compose(pz[n]))
        comps[n] = acc
    return ChainMap(pb_from.complex, pb_to.complex, comps)


@dataclass(frozen=True)
class Pushout:
    complex: Complex
    inj_first: ChainMap
    inj_second: ChainMap
    square: CommutingSquare
    proj_parts: tuple[dict[int, RepMap], dict[int, RepMap], dict[int, RepMap]]


def homotopy_pushout(f: ChainMap, g: ChainMap) -> Pushout:
    """The double mapping cylinder of X <- W -> Y with its witness square."""
    if f.source != g.source:
        raise ValueError("pushout legs must share a source")
    w = f.source
    x, y = f.target, g.target
    s, inj_x, inj_y, proj_x, proj_y = direct_sum_complex(x, y)
    glue = compose(inj_x, f) - compose(inj_y, g)
    cn = cone(glue)
    inj1 = compose(cn.into, inj_x)
    inj2 = compose(cn.into, inj_y)
    wit = Homotopy(
        compose(inj2, g),
        compose(inj1, f),
        {n: cn.inj_x[n + 1] for n in w.support if n + 1 in cn.inj_x},
    )
    square = CommutingSquare(f, g, inj1, inj2, wit)
    px = {n: proj_x.comp(n).compose(cn.proj_y[n]) for n in cn.proj_y}
    py = {n: proj_y.comp(n).compose(cn.proj_y[n]) for n in cn.proj_y}
    pw = dict(cn.proj_x)
    return Pushout(cn.complex, inj1, inj2, square, (px, py, pw))


def _square_glue_map(sq: CommutingSquare) -> ChainMap:
    """The comparison cone(W -> X (+) Y) -> Z assembled with the witness."""
    w = sq.top.source
    x, y, z = sq.top.target, sq.left.target, sq.right.target
    s, inj_x, inj_y, proj_x, proj_y = direct_sum_complex(x, y)
    u = compose(inj_x, sq.top) + compose(inj_y, sq.left)
    cu = cone(u)
    v = compose(sq.right, proj_x) - compose(sq.bottom, proj_y)
    comps = {}
    for n in cu.complex.support:
        part = v.comp(n).compose(cu.proj_y[n])
        h = sq.witness.comp(n - 1)
        comps[n] = part + h.compose(cu.proj_x[n])
    return ChainMap(cu.complex, z, comps)


def is_pullout(sq: CommutingSquare) -> bool:
    """True iff the square's total complex is acyclic.

    This is the bicartesian test; is_cartesian and is_cocartesian decide the
    two universal properties separately through their comparison maps.
    """
    return is_acyclic(cone(_square_glue_map(sq)).complex)


def is_cartesian(sq: CommutingSquare) -> bool:
    pb = homotopy_pullback(sq.right, sq.bottom)
    ix, iy, iz = pb.inj_parts
    w = sq.top.source
    comps = {}
    for n in pb.complex.support:
        acc = RepMap.zero(w.term(n), pb.complex.term(n))
        if n in ix:
            acc = acc + ix[n].compose(sq.top.comp(n)) + iy[n].compose(sq.left.comp(n))
        if n in iz:
            acc = acc - iz[n].compose(sq.witness.comp(n))
        comps[n] = acc
    chi = ChainMap(w, pb.complex, comps)
    return is_quasi_iso(chi)


def is_cocartesian(sq: CommutingSquare) -> bool:
    po = homotopy_pushout(sq.top, sq.left)
    px, py, pw = po.proj_parts
    z = sq.right.target
    comps = {}
    for n in po.complex.support:
        acc = RepMap.zero(po.complex.term(n), z.term(n))
        if n in px:
            acc = acc + sq.right.comp(n).compose(px[n]) + sq.bottom.comp(n).compose(py[n])
        if n in pw:
            acc = acc + sq.witness.comp(n - 1).compose(pw[n])
        comps[n] = acc
    psi = ChainMap(po.complex, z, comps)
    return is_quasi_iso(psi)


# -- hom complexes ------------------------------------------------------------


@dataclass(frozen=True)
class HomComplex:
    """The mapping complex as a complex of plain vector spaces.

    The degree-n term is the intertwiner space (+)_i Hom(X_i, Y_{i+n}) over
    the one-vertex quiver, with the chosen per-slot bases retained so that
    coordinates can be decoded back into graded maps.
    """

    source: Complex
    target: Complex
    complex: Complex
    slots: dict[int, list[tuple[int, Mat]]]  # degree -> [(i, flat basis)]

    def decode(self, n: int, coeffs: np.ndarray) -> dict[int, tuple[Mat, ...]]:
        """Coordinates at degree n -> graded components X_i -> Y_{i+n}."""
        out: dict[int, tuple[Mat, ...]] = {}
        off = 0
        for i, basis in self.slots.get(n, []):
            width = basis.cols
            vec = (basis.a @ np.asarray(coeffs[off : off + width], dtype=np.int64)) % (
                self.source.field.p
            )
            out[i] = graded_from_flat(self.source.term(i), self.target.term(i + n), vec)
            off += width
        return out

    def cycle_to_chain_map(self, n: int, coeffs: np.ndarray) -> ChainMap:
        """A degree-n cycle is exactly a chain map X[n] -> Y."""
        graded = self.decode(n, coeffs)
        src = shift(self.source, n)
        comps = {}
        for i, mats in graded.items():
            comps[i + n] = RepMap(src.term(i + n), self.target.term(i + n), mats)
        return ChainMap(src, self.target, comps)

    def encode(self, n: int, graded: dict[int, RepMap]) -> np.ndarray:
        """Coordinates of a graded collection of maps X_i -> Y_{i+n}."""
        entries = self.slots.get(n, [])
        covered = {i for i, _ in entries}
        for i, g in graded.items():
            if i not in covered and not g.is_zero():
                raise ValueError("graded map has a component outside the hom complex")
        out = np.zeros(sum(b.cols for _, b in entries), dtype=np.int64)
        off = 0
        for i, basis in entries:
            g = graded.get(i)
            if g is not None and not g.is_zero():
                vec = Mat(self.source.field, g.flat().reshape(-1, 1))
                sol = solve(basis, vec)
                if sol is None:
                    raise ValueError("graded map is not an intertwiner collection")
                out[off : off + basis.cols] = sol[0].a[:, 0]
            off += basis.cols
        return out


def hom_complex(x: Complex, y: Complex) -> HomComplex:
    fld = x.field
    if x.quiver != y.quiver or x.field != y.field:
        raise ValueError("hom complex of incompatible complexes")
    point = Quiver.point()
    if x.is_zero() or y.is_zero():
        return HomComplex(x, y, zero_complex(point, fld), {})
    lo = y.lo - x.hi
    hi = y.hi - x.lo
    slots: dict[int, list[tuple[int, Mat]]] = {}
    for n in range(lo, hi + 1):
        entries = []
        for i in x.support:
            if x.term(i).is_zero() or y.term(i + n).is_zero():
                continue
            basis = rep_hom_basis_flat(x.term(i), y.term(i + n))
            entries.append((i, basis))
        slots[n] = entries
    dims = {n: sum(b.cols for _, b in slots[n]) for n in range(lo, hi + 1)}
    terms = {
        n: QuiverRep(point, fld, (dims[n],), ()) for n in range(lo, hi + 1)
    }
    diffs = []
    for n in range(lo + 1, hi + 1):
        sgn = 1 if n % 2 == 0 else -1
        src_slots = slots[n]
        tgt_slots = slots[n - 1]
        tgt_offsets = {}
        off = 0
        for i, b in tgt_slots:
            tgt_offsets[i] = (off, b)
            off += b.cols
        mat = np.zeros((dims[n - 1], dims[n]), dtype=np.int64)
        col = 0
        for i, b in src_slots:
            # post part lands in slot i, pre part in slot i + 1
            images: list[tuple[int, np.ndarray]] = []
            if i in tgt_offsets:
                post = post_op(y.diff(i + n), x.term(i)) @ b.a % fld.p
                images.append((i, post))
            if (i + 1) in tgt_offsets and not x.term(i + 1).is_zero():
                pre = pre_op(x.diff(i + 1), y.term(i + n)) @ b.a % fld.p
                images.append((i + 1, (-sgn * pre) % fld.p))
            for j, img in images:
                off_j, basis_j = tgt_offsets[j]
                sol = solve(basis_j, Mat(fld, img))
                if sol is None:
                    raise AssertionError("hom differential left the intertwiner space")
                mat[off_j : off_j + basis_j.cols, col : col + b.cols] = sol[0].a
            col += b.cols
        diffs.append(
            RepMap(terms[n], terms[n - 1], (Mat(fld, mat),))
        )
    cx = Complex(
        point, fld, lo, tuple(terms[n] for n in range(lo, hi + 1)), tuple(diffs)
    )
    return HomComplex(x, y, cx, slots)


def _hom_slot_transport(
    src: HomComplex, dst: HomComplex, carry
) -> ChainMap:
    """Slotwise linear map between mapping complexes; carry(n, i, basis) must
    return flat image columns inside the matching slot of dst."""
    fld = src.source.field
    comps = {}
    degs = set(src.slots) & set(dst.slots)
    for n in degs:
        dst_offsets = {}
        off = 0
        for i, b in dst.slots[n]:
            dst_offsets[i] = (off, b)
            off += b.cols
        rows = dst.complex.term(n).dims[0] if not dst.complex.term(n).is_zero() else 0
        cols = src.complex.term(n).dims[0] if not src.complex.term(n).is_zero() else 0
        if rows == 0 or cols == 0:
            continue
        mat = np.zeros((rows, cols), dtype=np.int64)
        col = 0
        for i, b in src.slots[n]:
            if i in dst_offsets:
                off_i, basis_i = dst_offsets[i]
                img = carry(n, i, b)
                sol = solve(basis_i, Mat(fld, img))
                if sol is None:
                    raise AssertionError("transport left the intertwiner space")
                mat[off_i : off_i + basis_i.cols, col : col + b.cols] = sol[0].a
            col += b.cols
        comps[n] = RepMap(
            src.complex.term(n), dst.complex.term(n), (Mat(fld, mat),)
        )
    return ChainMap(src.complex, dst.complex, comps)


def hom_postcompose(t: Complex, f: ChainMap) -> ChainMap:
    """hom(T, X) -> hom(T, Y) induced by f : X -> Y."""
    src = hom_complex(t, f.source)
    dst = hom_complex(t, f.target)
    fld = t.field
    return _hom_slot_transport(
        src,
        dst,
        lambda n, i, b: (post_op(f.comp(i + n), t.term(i)) @ b.a) % fld.p,
    )


def hom_precompose(f: ChainMap, t: Complex) -> ChainMap:
    """hom(Y, T) -> hom(X, T) induced by f : X -> Y."""
    src = hom_complex(f.target, t)
    dst = hom_complex(f.source, t)
    fld = t.field
    return _hom_slot_transport(
        src,
        dst,
        lambda n, i, b: (pre_op(f.comp(i), t.term(i + n)) @ b.a) % fld.p,
    )


# -- block linear systems over chain data -------------------------------------


def solve_block_system(
    fld: PrimeField,
    unknowns: list[tuple[object, int]],
    equations: list[tuple[int, list[tuple[object, np.ndarray]], np.ndarray]],
) -> tuple[dict[object, np.ndarray], int] | None:
    """Solve a dense block linear system over F_p.

    unknowns: (key, width) pairs; equations: (rowdim, [(key, coefficient
    matrix)], rhs).  Returns (assignment, kernel dimension) or None.
    """
    offsets = {}
    total = 0
    for key, width in unknowns:
        offsets[key] = (total, width)
        total += width
    rows = sum(r for r, _, _ in equations)
    m = np.zeros((rows, total), dtype=np.int64)
    rhs = np.zeros((rows, 1), dtype=np.int64)
    r = 0
    for rowdim, coefs, b in equations:
        for key, mat in coefs:
            off, width = offsets[key]
            if mat.shape != (rowdim, width):
                raise ValueError("block shape mismatch in linear system")
            m[r : r + rowdim, off : off + width] += mat
        rhs[r : r + rowdim, 0] = b
        r += rowdim
    sol = solve(Mat(fld, m % fld.p), Mat(fld, rhs % fld.p))
    if sol is None:
        return None
    x, ker = sol
    out = {}
    for key, (off, width) in ((k, offsets[k]) for k, _ in unknowns):
        out[key] = x.a[off : off + width, 0]
    return out, ker.cols


def block_matrix(
    fld: PrimeField,
    unknowns: list[tuple[object, int]],
    equations: list[tuple[int, list[tuple[object, np.ndarray]]]],
) -> tuple[Mat, dict[object, tuple[int, int]]]:
    """The homogeneous system matrix for the given blocks."""
    offsets = {}
    total = 0
    for key, width in unknowns:
        offsets[key] = (total, width)
        total += width
    rows = sum(r for r, _ in equations)
    m = np.zeros((rows, total), dtype=np.int64)
    r = 0
    for rowdim, coefs in equations:
        for key, mat in coefs:
            off, width = offsets[key]
            m[r : r + rowdim, off : off + width] += mat
        r += rowdim
    return Mat(fld, m % fld.p), offsets


# -- homotopies and lifts ------------------------------------------------------


def _hom_bases_for_homotopy(x: Complex, y: Complex, step: int) -> dict[int, Mat]:
    out = {}
    degs = set()
    if not x.is_zero() and not y.is_zero():
        for n in x.support:
            if not y.term(n + step).is_zero():
                degs.add(n)
    for n in degs:
        out[n] = rep_hom_basis_flat(x.term(n), y.term(n + step))
    return out


def homotopic(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A homotopy from g to f, or None when the maps are not homotopic."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("homotopy test needs shared endpoints")
    x, y = f.source, f.target
    delta = f - g
    bases = _hom_bases_for_homotopy(x, y, 1)
    unknowns = [(n, b.cols) for n, b in sorted(bases.items())]
    equations = []
    degs = set(x.support) | set(delta.comps)
    for n in sorted(degs):
        rowdim = flat_dim(x.term(n), y.term(n))
        if rowdim == 0:
            continue
        coefs = []
        if n in bases:
            coefs.append((n, post_op(y.diff(n + 1), x.term(n)) @ bases[n].a % y.field.p))
        if n - 1 in bases:
            coefs.append(
                (n - 1, pre_op(x.diff(n), y.term(n)) @ bases[n - 1].a % y.field.p)
            )
        equations.append((rowdim, coefs, delta.comp(n).flat()))
    got = solve_block_system(x.field, unknowns, equations)
    if got is None:
        return None
    assign, _ = got
    comps = {}
    for n, b in bases.items():
        vec = (b.a @ assign[n]) % x.field.p
        comps[n] = map_from_flat(x.term(n), y.term(n + 1), vec)
    return Homotopy(g, f, comps)


def chain_map_constraints(
    x: Complex, y: Complex
) -> tuple[dict[int, Mat], list[tuple[int, list[tuple[object, np.ndarray]]]]]:
    """Degreewise hom bases plus the homogeneous chain-map law blocks."""
    bases = _hom_bases_for_homotopy(x, y, 0)
    equations = []
    degs = set(x.support) | set(s + 1 for s in x.support)
    for n in sorted(degs):
        rowdim = flat_dim(x.term(n), y.term(n - 1))
        if rowdim == 0:
            continue
        coefs = []
        if n in bases:
            coefs.append((("u", n), post_op(y.diff(n), x.term(n)) @ bases[n].a % y.field.p))
        if n - 1 in bases:
            coefs.append(
                (("u", n - 1), (-(pre_op(x.diff(n), y.term(n - 1)) @ bases[n - 1].a)) % y.field.p)
            )
        equations.append((rowdim, coefs))
    return bases, equations


def chain_map_basis(x: Complex, y: Complex) -> list[ChainMap]:
    """Deterministic basis of the space of chain maps X -> Y."""
    bases, equations = chain_map_constraints(x, y)
    unknowns = [(("u", n), b.cols) for n, b in sorted(bases.items())]
    if not unknowns:
        return []
    m, offsets = block_matrix(x.field, unknowns, equations)
    ker = kernel_basis(m)
    out = []
    for j in range(ker.cols):
        comps = {}
        for n, b in bases.items():
            off, width = offsets[("u", n)]
            vec = (b.a @ ker.a[off : off + width, j]) % x.field.p
            comps[n] = map_from_flat(x.term(n), y.term(n), vec)
        out.append(ChainMap(x, y, comps))
    return out


def lift_through(m: ChainMap, g: ChainMap) -> tuple[ChainMap, Homotopy] | None:
    """Find u with m.u homotopic to g, returning u and the witness."""
    if m.target != g.target:
        raise ValueError("lift target mismatch")
    x = g.source
    s = m.source
    y = m.target
    fld = x.field
    u_bases = _hom_bases_for_homotopy(x, s, 0)
    h_bases = _hom_bases_for_homotopy(x, y, 1)
    unknowns = [(("u", n), b.cols) for n, b in sorted(u_bases.items())] + [
        (("h", n), b.cols) for n, b in sorted(h_bases.items())
    ]
    equations = []
    for n in sorted(set(x.support) | {s + 1 for s in x.support}):
        rowdim = flat_dim(x.term(n), s.term(n - 1))
        if rowdim == 0:
            continue
        coefs = []
        if n in u_bases:
            coefs.append((("u", n), post_op(s.diff(n), x.term(n)) @ u_bases[n].a % fld.p))
        if n - 1 in u_bases:
            coefs.append(
                (("u", n - 1), (-(pre_op(x.diff(n), s.term(n - 1)) @ u_bases[n - 1].a)) % fld.p)
            )
        equations.append((rowdim, coefs, np.zeros(rowdim, dtype=np.int64)))
    for n in sorted(set(x.support) | set(g.comps)):
        rowdim = flat_dim(x.term(n), y.term(n))
        if rowdim == 0:
            continue
        coefs = []
        if n in u_bases:
            coefs.append((("u", n), post_op(m.comp(n), x.term(n)) @ u_bases[n].a % fld.p))
        if n in h_bases:
            coefs.append(
                (("h", n), (-(post_op(y.diff(n + 1), x.term(n)) @ h_bases[n].a)) % fld.p)
            )
        if n - 1 in h_bases:
            coefs.append(
                (("h", n - 1), (-(pre_op(x.diff(n), y.term(n)) @ h_bases[n - 1].a)) % fld.p)
            )
        equations.append((rowdim, coefs, g.comp(n).flat()))
    got = solve_block_system(fld, unknowns, equations)
    if got is None:
        return None
    assign, _ = got
    u_comps = {}
    for n, b in u_bases.items():
        vec = (b.a @ assign[("u", n)]) % fld.p
        u_comps[n] = map_from_flat(x.term(n), s.term(n), vec)
    u = ChainMap(x, s, u_comps)
    h_comps = {}
    for n, b in h_bases.items():
        vec = (b.a @ assign[("h", n)]) % fld.p
        h_comps[n] = map_from_flat(x.term(n), y.term(n + 1), vec)
    wit = Homotopy(g, compose(m, u), h_comps)
    return u, wit


# -- random generation ---------------------------------------------------------


def random_complex(
    quiver: Quiver,
    field: PrimeField,
    rng: np.random.Generator,
    max_dim: int = 3,
    lo: int = -2,
    hi: int = 2,
) -> Complex:
    """Support drawn inside [lo, hi]; differentials drawn degree by degree
    from the kernel of postcomposition with the previous one, so the
    d-squared law holds by construction."""
    slo = int(rng.integers(lo, hi + 1))
    shi = int(rng.integers(slo, hi + 1))
    terms = [random_rep(quiver, field, max_dim, rng) for _ in range(slo, shi + 1)]
    diffs: list[RepMap] = []
    prev: RepMap | None = None
    for i in range(1, len(terms)):
        src, tgt = terms[i], terms[i - 1]
        basis = rep_hom_basis_flat(src, tgt)
        if prev is None or prev.is_zero():
            coeffs = rng.integers(0, field.p, size=basis.cols)
            vec = (basis.a @ coeffs) % field.p
        else:
            constraint = Mat(field, post_op(prev, src) @ basis.a % field.p)
            ker = kernel_basis(constraint)
            coeffs = rng.integers(0, field.p, size=ker.cols)
            vec = (basis.a @ ((ker.a @ coeffs) % field.p)) % field.p
        d = map_from_flat(src, tgt, vec)
        diffs.append(d)
        prev = d
    return Complex(quiver, field, slo, tuple(terms), tuple(diffs))


def random_chain_map(x: Complex, y: Complex, rng: np.random.Generator) -> ChainMap:
    """Uniform draw from the space of chain maps X -> Y."""
    bases, equations = chain_map_constraints(x, y)
    unknowns = [(("u", n), b.cols) for n, b in sorted(bases.items())]
    if not unknowns:
        return zero_map(x, y)
    m, offsets = block_matrix(x.field, unknowns, equations)
    ker = kernel_basis(m)
    coeffs = rng.integers(0, x.field.p, size=ker.cols)
    sol = (ker.a @ coeffs) % x.field.p
    comps = {}
    for n, b in bases.items():
        off, width = offsets[("u", n)]
        vec = (b.a @ sol[off : off + width]) % x.field.p
        comps[n] = map_from_flat(x.term(n), y.term(n), vec)
    return ChainMap(x, y, comps)
