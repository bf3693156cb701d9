"""Intersection chain complexes with stratified coefficients.

Chains are dicts from simplex tuples to rationals.  Internally each
degree uses simplex indices from the ambient complex, and a complex is a
*frame* per degree: a reduced basis of the allowable chains, optionally
taken modulo a killed subspace (relative and q̄/p̄ quotient complexes).
Representatives are always genuine chains of the numerator complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .complex import Perversity, StratifiedPseudomanifold, all_faces, boundary_faces
from .qlinalg import (ChainHomology, NotACycle, QMatrix, ReducedBasis, Subspace, axpy, image, kernel, q,
                      sparse_kernel)


class PerversityOrderError(ValueError):
    pass


class IncompatibleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# per-space tables


def _tables(X: StratifiedPseudomanifold) -> dict:
    t = X.cache.get("ichain")
    if t is None:
        t = {"contacts": {}, "bd0": {}, "allow": {}, "basis": {}}
        X.cache["ichain"] = t
    return t


def _contacts(X: StratifiedPseudomanifold, d: int) -> list:
    """Per d-simplex index: tuple of (stratum id, contact dim) pairs."""
    t = _tables(X)["contacts"]
    if d not in t:
        X.strata
        sid = X._sid
        out = []
        for s in X.simplices(d):
            best: dict = {}
            for f in all_faces(s):
                z = sid.get(f)
                if z is not None and best.get(z, -1) < len(f) - 1:
                    best[z] = len(f) - 1
            out.append(tuple(best.items()))
        t[d] = out
    return t[d]


def allowable(sigma: Sequence[int], i: int, p: Perversity, X: StratifiedPseudomanifold) -> bool:
    """dim(σ ∩ S) <= i − codim S + p̄(S) for every singular stratum S."""
    strata = X.strata
    for z, d in X.singular_contacts(tuple(sigma)).items():
        if d > i - strata[z].codim + p[z]:
            return False
    return True


def _allowed(X: StratifiedPseudomanifold, p: Perversity, d: int) -> list:
    """Per d-simplex index: regular and p̄-allowable."""
    key = (p.values, d)
    t = _tables(X)["allow"]
    if key not in t:
        if len(p) != len(X.strata):
            raise ValueError(f"perversity has {len(p)} values but the space has {len(X.strata)} singular strata")
        codim = [s.codim for s in X.strata]
        lvl = X._lvl
        out = []
        for s, con in zip(X.simplices(d), _contacts(X, d)):
            ok = s not in lvl
            if ok:
                for z, c in con:
                    if c > d - codim[z] + p.values[z]:
                        ok = False
                        break
            out.append(ok)
        t[key] = out
    return t[key]


def _bd0(X: StratifiedPseudomanifold, d: int) -> list:
    """∂₀ per d-simplex index: list of (face index, sign), regular faces only."""
    t = _tables(X)["bd0"]
    if d not in t:
        if d == 0:
            t[d] = [[] for _ in X.simplices(0)]
        else:
            idx = X.complex.index[d - 1]
            lvl = X._lvl
            out = []
            for s in X.simplices(d):
                out.append([(idx[f], sg) for sg, f in boundary_faces(s) if f not in lvl])
            t[d] = out
    return t[d]


def boundary0(X: StratifiedPseudomanifold, chain: Mapping, d: int | None = None) -> dict:
    """∂₀ of a chain keyed by simplex tuples."""
    out: dict = {}
    lvl = X._lvl
    for s, c in chain.items():
        for sg, f in boundary_faces(s):
            if f in lvl or len(f) == 0:
                continue
            v = out.get(f, 0) + sg * c
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def _support_mask(X: StratifiedPseudomanifold, support, d: int):
    if support is None:
        return None
    key = ("mask", id(support), d)
    t = _tables(X)["basis"]
    if key not in t:
        t[key] = (support, [s in support for s in X.simplices(d)])
    return t[key][1]


def _basis(X: StratifiedPseudomanifold, p: Perversity, d: int, support=None) -> list:
    """Reduced basis of I^p̄C_d (within support): list of (pivot, vector)."""
    key = (p.values, d, id(support) if support is not None else None)
    t = _tables(X)["basis"]
    if key in t:
        return t[key][1]
    n_d = len(X.simplices(d))
    if d < 0 or n_d == 0:
        t[key] = (support, [])
        return []
    ok = _allowed(X, p, d)
    mask = _support_mask(X, support, d)
    okf = _allowed(X, p, d - 1) if d >= 1 else []
    bd = _bd0(X, d)
    free, constrained = [], []
    for j in range(n_d):
        if not ok[j] or (mask is not None and not mask[j]):
            continue
        if any(not okf[f] for f, _ in bd[j]):
            constrained.append(j)
        else:
            free.append(j)
    out = [(j, {j: 1}) for j in free]
    if constrained:
        cols = []
        for j in constrained:
            cols.append({f: sg for f, sg in bd[j] if not okf[f]})
        for piv, v in sparse_kernel(cols):
            out.append((constrained[piv], {constrained[k]: c for k, c in v.items()}))
    out.sort(key=lambda x: x[0])
    t[key] = (support, out)
    return out


def normalize_support(X: StratifiedPseudomanifold, facets_or_simplices: Iterable) -> frozenset:
    """Subcomplex generated by the given simplices (closure under faces)."""
    out = set()
    for s in facets_or_simplices:
        out.update(all_faces(tuple(sorted(s))))
    return frozenset(out)


# ---------------------------------------------------------------------------
# frames and complexes


class _Frame:
    """Coordinates of one degree: W modulo U (U optional)."""

    def __init__(self, numerator: list, killed: list[list], track: bool):
        self.killed_rb = None
        if killed:
            rb = ReducedBasis(track_labels=track)
            for tag, vecs in enumerate(killed):
                for _, v in vecs:
                    rb.add(v, {(tag, k): c for k, c in v.items()} if track else None)
            self.killed_rb = rb
            w = ReducedBasis()
            for _, v in numerator:
                r, _ = rb.reduce(v)
                if r:
                    w.add(r)
            self.pivots = sorted(w.vec)
            self.vectors = [w.vec[p] for p in self.pivots]
            self._w = w
        else:
            self.pivots = [p for p, _ in numerator]
            self.vectors = [v for _, v in numerator]
            self._w = None
        self.pos = {p: k for k, p in enumerate(self.pivots)}

    def __len__(self):
        return len(self.pivots)

    def coords(self, v: Mapping, check: bool = True) -> dict:
        """Coordinates of v modulo the killed subspace, keyed by position."""
        if self.killed_rb is not None:
            v, _ = self.killed_rb.reduce(v)
            c = self._w.coords(v, check=check)
        else:
            c = {p: x for p, x in v.items() if p in self.pos}
            if check:
                back: dict = {}
                for p, x in c.items():
                    axpy(back, x, self.vectors[self.pos[p]])
                if back != {k: x for k, x in v.items() if x}:
                    raise NotACycle("chain is not in the complex")
        return {self.pos[p]: x for p, x in c.items()}

    def vector(self, coords: Mapping) -> dict:
        out: dict = {}
        for k, x in coords.items():
            axpy(out, x, self.vectors[k])
        return out


class IntersectionComplex:
    """Numerator I^q̄C(support) modulo the sum of killed I^p̄C(support') pieces.

    ``killed`` holds (perversity, support) pairs; every piece must sit
    inside the numerator.  Supports are subcomplexes given as frozensets
    of simplices (see ``normalize_support``), ``None`` meaning all of X.
    """

    def __init__(self, X: StratifiedPseudomanifold, perv: Perversity, support=None,
                 killed: Sequence[tuple] = (), label: str = ""):
        self.X = X
        self.perv = perv
        self.support = support
        self.killed = list(killed)
        for pk, sk in self.killed:
            if not pk <= perv:
                raise PerversityOrderError("killed perversity must be <= the numerator perversity")
            if support is not None and sk is not None and not sk <= support:
                raise IncompatibleError("killed support must lie inside the numerator support")
            if support is not None and sk is None:
                raise IncompatibleError("killed support must lie inside the numerator support")
        self.label = label
        self._frames: dict = {}
        self._tracked: dict = {}
        self._hom: dict = {}

    @property
    def top(self) -> int:
        return self.X.complex.dim

    def frame(self, i: int) -> _Frame:
        if i not in self._frames:
            num = _basis(self.X, self.perv, i, self.support) if 0 <= i <= self.top else []
            kil = [_basis(self.X, pk, i, sk) for pk, sk in self.killed] if 0 <= i <= self.top else []
            self._frames[i] = _Frame(num, kil, track=False)
        return self._frames[i]

    def _tracked_frame(self, i: int) -> _Frame:
        if i not in self._tracked:
            num = _basis(self.X, self.perv, i, self.support) if 0 <= i <= self.top else []
            kil = [_basis(self.X, pk, i, sk) for pk, sk in self.killed] if 0 <= i <= self.top else []
            self._tracked[i] = _Frame(num, kil, track=True)
        return self._tracked[i]

    def rank(self, i: int) -> int:
        return len(self.frame(i))

    def _simplex_keys(self, i: int) -> list:
        return self.X.simplices(i)

    def to_index(self, i: int, chain: Mapping) -> dict:
        idx = self.X.complex.index[i] if 0 <= i <= self.top else {}
        out = {}
        for s, c in chain.items():
            if c:
                j = idx.get(tuple(s))
                if j is None:
                    raise IncompatibleError(f"simplex {list(s)} is not in the complex")
                out[j] = q(c)
        return out

    def to_chain(self, i: int, vec: Mapping) -> dict:
        simp = self.X.simplices(i)
        return {simp[j]: c for j, c in sorted(vec.items()) if c}

    def _bd_index(self, i: int, vec: Mapping) -> dict:
        out: dict = {}
        bd = _bd0(self.X, i)
        for j, c in vec.items():
            for f, sg in bd[j]:
                v = out.get(f, 0) + sg * c
                if v:
                    out[f] = v
                else:
                    out.pop(f, None)
        return out

    def boundary_columns(self, i: int) -> list:
        """Columns of ∂₀: C_i -> C_{i-1} in frame coordinates."""
        fr, lo = self.frame(i), self.frame(i - 1)
        cols = []
        for v in fr.vectors:
            b = self._bd_index(i, v)
            cols.append(lo.coords(b, check=False) if b else {})
        return cols

    def homology(self, i: int) -> "HomologyResult":
        if i not in self._hom:
            if i < 0 or i > self.top:
                self._hom[i] = HomologyResult(self, i, None)
            else:
                dims = [0] * i + [len(self.frame(i))]
                bd = {}
                if i + 1 <= self.top:
                    dims.append(len(self.frame(i + 1)))
                    bd[i + 1] = self.boundary_columns(i + 1)
                if i >= 1:
                    bd[i] = self.boundary_columns(i)
                self._hom[i] = HomologyResult(self, i, ChainHomology(dims, bd, lowest=i))
        return self._hom[i]

    def betti(self) -> list[int]:
        return [self.homology(i).dim for i in range(self.top + 1)]

    def coords(self, i: int, chain: Mapping) -> dict:
        return self.frame(i).coords(self.to_index(i, chain))

    def contains(self, i: int, chain: Mapping) -> bool:
        try:
            self.coords(i, chain)
            return True
        except (ValueError, IncompatibleError):
            return False

    def is_cycle(self, i: int, chain: Mapping) -> bool:
        """Whether chain lies in the numerator and ∂₀ of it dies modulo the killed part."""
        try:
            self.coords(i, chain)
            b = boundary0(self.X, chain)
            return not b or not self.coords(i - 1, b)
        except (ValueError, IncompatibleError):
            return False

    def split_boundary(self, i: int, chain: Mapping) -> list[dict]:
        """Write ∂₀(chain) = Σ_k c_k with c_k in the k-th killed piece."""
        fr = self._tracked_frame(i - 1)
        b = self.to_index(i - 1, boundary0(self.X, chain))
        rb = fr.killed_rb
        if rb is None:
            raise IncompatibleError("nothing is killed in this complex")
        r, lab = rb.reduce(b, {})
        if r:
            raise NotACycle("boundary does not lie in the killed subspace")
        # b = Σ coef_p u_p; each u_p's label splits it across pieces
        parts = [dict() for _ in self.killed]
        c = {p: x for p, x in b.items() if p in rb.vec}
        for p, x in c.items():
            for (tag, k), y in rb.labels[p].items():
                v = parts[tag].get(k, 0) + x * y
                if v:
                    parts[tag][k] = v
                else:
                    parts[tag].pop(k, None)
        total: dict = {}
        for part in parts:
            axpy(total, 1, part)
        if total != b:
            raise ArithmeticError("boundary split does not add up")
        return [self.to_chain(i - 1, part) for part in parts]


@dataclass
class HomologyResult:
    complex: IntersectionComplex
    degree: int
    engine: ChainHomology | None
    _reps: list | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 0 if self.engine is None else self.engine.betti(self.degree)

    @property
    def reps(self) -> list[dict]:
        if self._reps is None:
            if self.engine is None:
                self._reps = []
            else:
                fr = self.complex.frame(self.degree)
                self._reps = [self.complex.to_chain(self.degree, fr.vector(c))
                              for c in self.engine.reps(self.degree)]
        return self._reps

    def classify(self, chain: Mapping) -> list:
        """Coordinates of the class of a cycle in the basis of ``reps``."""
        if self.engine is None:
            if any(chain.values()):
                raise NotACycle("degree out of range")
            return []
        c = self.complex.coords(self.degree, chain)
        return self.engine.classify(self.degree, c)

    def chain_of(self, coords: Sequence) -> dict:
        out: dict = {}
        for c, r in zip(coords, self.reps):
            if c:
                for s, x in r.items():
                    v = out.get(s, 0) + c * x
                    if v:
                        out[s] = q(v)
                    else:
                        out.pop(s, None)
        return out

    def report(self) -> str:
        lines = [f"degree {self.degree}", f"dim = {self.dim}"]
        for k, r in enumerate(self.reps):
            body = " ".join(f"{','.join(map(str, s))}:{_fmt(c)}" for s, c in sorted(r.items()))
            lines.append(f"rep {k}: {body}")
        return "\n".join(lines) + "\n"


def _fmt(c) -> str:
    c = q(c)
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# public builders


def _check_order(p: Perversity, qv: Perversity):
    if not p <= qv:
        raise PerversityOrderError("need p̄ <= q̄ on every stratum")


def build_complex(X: StratifiedPseudomanifold, p: Perversity, support=None) -> IntersectionComplex:
    return IntersectionComplex(X, p, support, (), label=f"I^{p.label()}C")


def build_relative(X: StratifiedPseudomanifold, Y, p: Perversity, support=None) -> IntersectionComplex:
    """I^p̄C(X, Y) = I^p̄C(X) / I^p̄C(Y); Y is a support set."""
    return IntersectionComplex(X, p, support, [(p, Y)], label=f"I^{p.label()}C(rel)")


def build_qp_quotient(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity, Y=None,
                      support=None) -> IntersectionComplex:
    """I^{q̄/p̄}C(support), or relative to Y: I^q̄C / (I^p̄C + I^q̄C(Y))."""
    _check_order(p, qv)
    killed = [(p, support)]
    if Y is not None:
        killed.append((qv, Y))
    return IntersectionComplex(X, qv, support, killed, label=f"I^{qv.label()}/{p.label()}C")


def homology(C: IntersectionComplex, i: int) -> HomologyResult:
    return C.homology(i)


def ordinary_homology(X: StratifiedPseudomanifold) -> list[int]:
    """Betti numbers of the underlying complex, ignoring strata."""
    Y = X.forget_strata()
    return build_complex(Y, Perversity(())).betti()


# ---------------------------------------------------------------------------
# maps


@dataclass
class HomologyMap:
    source: HomologyResult
    target: HomologyResult
    matrix: QMatrix
    kind: str = ""

    @property
    def rank(self) -> int:
        return self.matrix.rank()

    def kernel(self) -> Subspace:
        return kernel(self.matrix)

    def image(self) -> Subspace:
        return image(self.matrix)


def chain_map_matrix(source: HomologyResult, target: HomologyResult,
                     f: Callable[[dict], dict] | None = None, kind: str = "") -> HomologyMap:
    """Matrix of the map on homology induced by chain map f (identity by default)."""
    cols = []
    for r in source.reps:
        img = f(r) if f is not None else r
        cols.append(target.classify(img))
    m = QMatrix.from_columns(cols, target.dim) if cols else QMatrix.zeros(target.dim, 0)
    return HomologyMap(source, target, m, kind)


def induced_map(kind: str, source: HomologyResult, target: HomologyResult, subdivision=None) -> HomologyMap:
    """Induced maps of the standard diagram.

    kind: 'inclusion' (p̄→q̄ or subspace inclusion), 'projection'
    (quotient), 'd' (the part of ∂x in the first killed piece, or all of
    ∂x when the source has a single killed piece and an absolute target),
    'delta' (the part of ∂x in the last killed piece), 'subdivision'.
    """
    if kind in ("inclusion", "projection"):
        return chain_map_matrix(source, target, None, kind)
    if kind == "subdivision":
        if subdivision is None:
            raise IncompatibleError("subdivision map requires the SubdivisionMap")
        return chain_map_matrix(source, target, subdivision.apply, kind)
    C = source.complex
    i = source.degree
    if kind == "d":
        if len(C.killed) == 1:
            return chain_map_matrix(source, target, lambda x: boundary0(C.X, x), kind)
        return chain_map_matrix(source, target, lambda x: C.split_boundary(i, x)[0], kind)
    if kind == "delta":
        return chain_map_matrix(source, target, lambda x: C.split_boundary(i, x)[-1], kind)
    raise ValueError(f"unknown map kind {kind!r}")


@dataclass
class ExactnessSpot:
    position: str
    image_dim: int
    kernel_dim: int
    ok: bool


def les_check(maps: Sequence[HomologyMap], names: Sequence[str] | None = None) -> list[ExactnessSpot]:
    """Check im(maps[k]) = ker(maps[k+1]) for consecutive pairs."""
    out = []
    for k in range(len(maps) - 1):
        f, g = maps[k], maps[k + 1]
        if f.matrix.rows != g.matrix.cols:
            raise IncompatibleError("consecutive maps do not compose")
        im = image(f.matrix)
        ke = kernel(g.matrix)
        name = names[k] if names else f"spot {k}"
        out.append(ExactnessSpot(name, im.dim, ke.dim, im == ke))
    return out


def sequence3(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity, Y=None) -> tuple[list, list]:
    """Maps of  I^p̄H(X,Y) → I^q̄H(X,Y) → I^{q̄/p̄}H(X,Y) →d I^p̄H_{i-1}(X,Y)  over all degrees."""
    _check_order(p, qv)
    if Y is None:
        Cp, Cq = build_complex(X, p), build_complex(X, qv)
        Cqp = build_qp_quotient(X, p, qv)
    else:
        Cp, Cq = build_relative(X, Y, p), build_relative(X, Y, qv)
        Cqp = build_qp_quotient(X, p, qv, Y)
    maps, names = [], []
    for i in range(X.complex.dim, -1, -1):
        maps.append(induced_map("inclusion", Cp.homology(i), Cq.homology(i)))
        names.append(f"I^q H_{i}")
        maps.append(induced_map("projection", Cq.homology(i), Cqp.homology(i)))
        names.append(f"I^q/p H_{i}")
        maps.append(induced_map("d", Cqp.homology(i), Cp.homology(i - 1)))
        names.append(f"I^p H_{i - 1}")
    return maps, names


def sequence4(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity, Y) -> tuple[list, list]:
    """Maps of  I^{q̄/p̄}H(Y) → I^{q̄/p̄}H(X) → I^{q̄/p̄}H(X,Y) →δ I^{q̄/p̄}H_{i-1}(Y)."""
    _check_order(p, qv)
    CY = build_qp_quotient(X, p, qv, support=Y)
    CX = build_qp_quotient(X, p, qv)
    CXY = build_qp_quotient(X, p, qv, Y)
    maps, names = [], []
    for i in range(X.complex.dim, -1, -1):
        maps.append(induced_map("inclusion", CY.homology(i), CX.homology(i)))
        names.append(f"I^q/p H_{i}(X)")
        maps.append(induced_map("projection", CX.homology(i), CXY.homology(i)))
        names.append(f"I^q/p H_{i}(X,Y)")
        maps.append(induced_map("delta", CXY.homology(i), CY.homology(i - 1)))
        names.append(f"I^q/p H_{i - 1}(Y)")
    return maps, names


# ---------------------------------------------------------------------------
# image groups


@dataclass
class ImageGroup:
    """im(I^p̄H_i → target) with p̄-allowable representatives.

    ``coords`` holds the target coordinates of the chosen basis, one
    column per basis element.
    """

    source: HomologyResult
    target: HomologyResult
    reps: list
    coords: list
    subspace: Subspace

    @property
    def dim(self) -> int:
        return len(self.reps)

    def express(self, target_coords: Sequence) -> list:
        """Coordinates in the image basis of a target class lying in the image."""
        from .qlinalg import solve
        if not self.coords:
            if any(target_coords):
                raise ValueError("class is not in the image")
            return []
        m = QMatrix.from_columns(self.coords, self.target.dim)
        x = solve(m, target_coords)
        if x is None:
            raise ValueError("class is not in the image")
        return x


def image_from_map(f: HomologyMap) -> ImageGroup:
    cols = f.matrix.columns()
    chosen, reps, coords = [], [], []
    from .qlinalg import rref
    if cols:
        _, piv = rref(f.matrix.to_rows(), f.matrix.cols)
        chosen = list(piv)
    for j in chosen:
        reps.append(f.source.reps[j])
        coords.append(cols[j])
    return ImageGroup(f.source, f.target, reps, coords, Subspace(f.target.dim, coords))


def image_group(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity, i: int, rel=None,
                support=None) -> ImageGroup:
    """I^{p̄→q̄}H_i(X), or with ``rel`` = Y the image of I^p̄H_i(X) → I^q̄H_i(X, Y)."""
    _check_order(p, qv)
    src = build_complex(X, p, support).homology(i)
    if rel is None:
        tgt = build_complex(X, qv, support).homology(i)
    else:
        tgt = build_relative(X, rel, qv, support).homology(i)
    return image_from_map(induced_map("inclusion", src, tgt))
