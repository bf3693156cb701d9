"""Finite simplicial stratified pseudomanifolds.

A space is a simplicial complex whose simplices are sorted vertex
tuples, plus a *level* for every simplex: the least k with the simplex
inside the k-skeleton X^k.  Simplices of level n form the regular part.
Orientation is a sign per n-simplex relative to its sorted vertex order.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Simplex = tuple


class ComplexError(ValueError):
    """Raised by constructors on inputs that violate their preconditions."""


def perm_sign(seq: Sequence) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] > a[j]:
                s = -s
    return s


def oriented(vertices: Sequence) -> tuple[Simplex, int]:
    """Sorted simplex and the sign of the given vertex order against it."""
    return tuple(sorted(vertices)), perm_sign(vertices)


def boundary_faces(s: Simplex):
    for i in range(len(s)):
        yield (-1) ** i, s[:i] + s[i + 1:]


def all_faces(s: Simplex):
    """Every nonempty face, including s itself."""
    k = len(s)
    for r in range(1, k + 1):
        yield from itertools.combinations(s, r)


class SimplicialComplex:
    __slots__ = ("n_vertices", "simplices", "index")

    def __init__(self, simplices: Sequence[Iterable[Simplex]], n_vertices: int | None = None):
        self.simplices = [sorted(set(d)) for d in simplices]
        while self.simplices and not self.simplices[-1]:
            self.simplices.pop()
        self.index = [{s: i for i, s in enumerate(d)} for d in self.simplices]
        used = max((v for s in self.simplices[0] for v in s), default=-1) if self.simplices else -1
        self.n_vertices = n_vertices if n_vertices is not None else used + 1

    @classmethod
    def closure(cls, generators: Iterable[Simplex], n_vertices: int | None = None) -> "SimplicialComplex":
        by_dim: dict[int, set] = defaultdict(set)
        seen: set = set()
        for g in generators:
            g = tuple(sorted(g))
            if g in seen:
                continue
            seen.add(g)
            for f in all_faces(g):
                by_dim[len(f) - 1].add(f)
        top = max(by_dim, default=-1)
        return cls([by_dim[d] for d in range(top + 1)], n_vertices)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d < len(self.simplices) else 0

    def f_vector(self) -> list[int]:
        return [len(d) for d in self.simplices]

    def __contains__(self, s) -> bool:
        d = len(s) - 1
        return 0 <= d < len(self.index) and tuple(s) in self.index[d]

    def euler(self) -> int:
        return sum((-1) ** d * len(x) for d, x in enumerate(self.simplices))

    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices[0]] if self.simplices else []

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(tuple(tuple(d) for d in self.simplices))


@dataclass(frozen=True)
class Stratum:
    id: int
    level: int
    codim: int
    simplices: tuple

    def __repr__(self):
        return f"Stratum(id={self.id}, level={self.level}, codim={self.codim}, size={len(self.simplices)})"


class StratifiedPseudomanifold:
    """A stratified pseudomanifold, possibly with boundary.

    ``levels`` only needs entries for simplices below the regular level;
    anything missing is regular.  ``parts`` labels facets 1 or 2 when the
    space carries a decomposition.
    """

    def __init__(self, dim: int, orientation: Mapping[Simplex, int], levels: Mapping[Simplex, int] | None = None,
                 boundary: Iterable[Simplex] = (), collar: Iterable[tuple] = (), bicollar: Iterable[tuple] = (),
                 parts: Mapping[Simplex, int] | None = None, extra: Iterable[Simplex] = (),
                 n_vertices: int | None = None, note: str = ""):
        self.dim = dim
        self.orientation = {tuple(sorted(f)): (1 if o > 0 else -1) * perm_sign(f) for f, o in orientation.items()}
        gens = list(self.orientation) + [tuple(sorted(s)) for s in extra]
        self.complex = SimplicialComplex.closure(gens, n_vertices)
        self._lvl = {}
        for s, k in (levels or {}).items():
            s = tuple(sorted(s))
            if k < dim:
                self._lvl[s] = k
        self.boundary = frozenset(tuple(sorted(b)) for b in boundary)
        self.collar = tuple(sorted(tuple(c) for c in collar))
        self.bicollar = tuple(sorted(tuple(c) for c in bicollar))
        self.parts = {tuple(sorted(f)): p for f, p in parts.items()} if parts else None
        self.note = note
        self.meta: dict = {}
        self.cache: dict = {}
        self._strata = None
        self._cof = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_skeleta(cls, dim: int, orientation: Mapping, skeleton: Iterable[tuple[int, Simplex]] = (), **kw):
        """Build from `skeleton k simplex` declarations, propagating to faces."""
        lvl: dict = {}
        decl = [(k, tuple(sorted(s))) for k, s in skeleton]
        for k, s in decl:
            for f in all_faces(s):
                if lvl.get(f, dim) > k:
                    lvl[f] = k
        extra = [s for _, s in decl]
        return cls(dim, orientation, lvl, extra=extra, **kw)

    def replace(self, **kw) -> "StratifiedPseudomanifold":
        args = dict(dim=self.dim, orientation=dict(self.orientation), levels=dict(self._lvl),
                    boundary=self.boundary, collar=self.collar, bicollar=self.bicollar, parts=self.parts,
                    n_vertices=self.complex.n_vertices, note=self.note)
        args.update(kw)
        return StratifiedPseudomanifold(**args)

    # -- basic queries -------------------------------------------------------

    def level(self, s: Simplex) -> int:
        return self._lvl.get(s, self.dim)

    def is_regular(self, s: Simplex) -> bool:
        return s not in self._lvl

    @property
    def facets(self) -> list[Simplex]:
        return self.complex.simplices[self.dim] if self.complex.dim == self.dim else []

    def simplices(self, d: int) -> list[Simplex]:
        return self.complex.simplices[d] if 0 <= d <= self.complex.dim else []

    def cofaces(self, s: Simplex) -> list[Simplex]:
        if self._cof is None:
            cof = defaultdict(list)
            for d in range(1, self.complex.dim + 1):
                for t in self.complex.simplices[d]:
                    for _, f in boundary_faces(t):
                        cof[f].append(t)
            self._cof = cof
        return self._cof.get(s, [])

    @property
    def has_boundary(self) -> bool:
        return bool(self.boundary)

    def boundary_complex(self) -> SimplicialComplex:
        return SimplicialComplex.closure(self.boundary, self.complex.n_vertices)

    def singular_levels(self) -> dict:
        return dict(self._lvl)

    def fundamental_chain(self) -> dict:
        return {f: self.orientation.get(f, 0) for f in self.facets if self.is_regular(f)}

    def euler(self) -> int:
        return self.complex.euler()

    # -- strata --------------------------------------------------------------

    @property
    def strata(self) -> list[Stratum]:
        if self._strata is None:
            self._compute_strata()
        return self._strata

    def _compute_strata(self):
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self._lvl:
            parent[s] = s
        for s, k in self._lvl.items():
            if len(s) > 1:
                for _, f in boundary_faces(s):
                    if self._lvl.get(f) == k:
                        a, b = find(s), find(f)
                        if a != b:
                            parent[a] = b
        groups = defaultdict(list)
        for s in self._lvl:
            groups[find(s)].append(s)
        keyed = []
        for members in groups.values():
            members.sort(key=lambda t: (len(t), t))
            keyed.append((self._lvl[members[0]], (len(members[0]), members[0]), members))
        keyed.sort(key=lambda x: (x[0], x[1]))
        self._strata = [Stratum(i, lv, self.dim - lv, tuple(m)) for i, (lv, _, m) in enumerate(keyed)]
        self._sid = {s: st.id for st in self._strata for s in st.simplices}

    def stratum_of(self, s: Simplex) -> int | None:
        """Singular stratum id containing the open simplex s, or None if regular."""
        self.strata
        return self._sid.get(s)

    def singular_contacts(self, s: Simplex) -> dict:
        """stratum id -> dim(s ∩ stratum), over faces of s."""
        out: dict = {}
        self.strata
        sid = self._sid
        for f in all_faces(s):
            t = sid.get(f)
            if t is not None:
                d = len(f) - 1
                if out.get(t, -1) < d:
                    out[t] = d
        return out

    def is_full(self) -> bool:
        """Whether each skeleton is a full subcomplex (level = max vertex level)."""
        vl = {v[0]: self.level(v) for v in self.simplices(0)}
        for d in range(1, self.complex.dim + 1):
            for s in self.complex.simplices[d]:
                if self.level(s) != max(vl[v] for v in s):
                    return False
        return True

    def forget_strata(self) -> "StratifiedPseudomanifold":
        return self.replace(levels={})

    def reverse_orientation(self) -> "StratifiedPseudomanifold":
        return self.replace(orientation={f: -o for f, o in self.orientation.items()})

    def sub(self, facets: Iterable[Simplex], with_boundary: bool = True) -> "StratifiedPseudomanifold":
        """Subspace made of the given facets, keeping vertex ids and levels."""
        fs = [tuple(sorted(f)) for f in facets]
        cx = SimplicialComplex.closure(fs)
        lv = {s: k for s, k in self._lvl.items() if s in cx}
        bd: list = []
        if with_boundary:
            count = defaultdict(int)
            for f in fs:
                for _, t in boundary_faces(f):
                    count[t] += 1
            bd = [t for t, c in count.items() if c == 1 and self.is_regular(t)]
        return StratifiedPseudomanifold(self.dim, {f: self.orientation[f] for f in fs}, lv, boundary=bd,
                                        n_vertices=self.complex.n_vertices)

    def __repr__(self):
        return (f"StratifiedPseudomanifold(dim={self.dim}, f={self.complex.f_vector()}, "
                f"strata={len(self.strata)}, boundary={len(self.boundary)})")


# ---------------------------------------------------------------------------
# perversities


@dataclass(frozen=True)
class Perversity:
    values: tuple
    name: str = ""

    def __getitem__(self, sid: int) -> int:
        return self.values[sid]

    def __len__(self):
        return len(self.values)

    def __le__(self, other: "Perversity") -> bool:
        return len(self) == len(other) and all(a <= b for a, b in zip(self.values, other.values))

    def label(self) -> str:
        return self.name or "(" + ",".join(map(str, self.values)) + ")"


NAMED_PERVERSITIES = ("zero", "top", "lower-middle", "upper-middle")


def perversity(X: StratifiedPseudomanifold, name: str) -> Perversity:
    cod = [s.codim for s in X.strata]
    if name == "zero":
        vals = [0 for _ in cod]
    elif name == "top":
        vals = [c - 2 for c in cod]
    elif name == "lower-middle":
        vals = [(c - 2) // 2 for c in cod]
    elif name == "upper-middle":
        vals = [-((2 - c) // 2) for c in cod]
    else:
        raise ValueError(f"unknown perversity {name!r}; expected one of {', '.join(NAMED_PERVERSITIES)}")
    return Perversity(tuple(vals), name)


def complement(X: StratifiedPseudomanifold, p: Perversity) -> Perversity:
    """t̄ − p̄."""
    if len(p) != len(X.strata):
        raise ValueError("perversity does not match the strata of this space")
    names = {"zero": "top", "top": "zero", "lower-middle": "upper-middle", "upper-middle": "lower-middle"}
    return Perversity(tuple(s.codim - 2 - v for s, v in zip(X.strata, p.values)), names.get(p.name, ""))


def perversity_from_values(X: StratifiedPseudomanifold, values: Mapping[int, int], name: str = "") -> Perversity:
    ids = [s.id for s in X.strata]
    unknown = sorted(set(values) - set(ids))
    if unknown:
        raise KeyError(f"unknown stratum id(s) {unknown}; valid ids are {ids}")
    missing = [i for i in ids if i not in values]
    if missing:
        raise KeyError(f"no value for stratum id(s) {missing}; valid ids are {ids}")
    return Perversity(tuple(values[i] for i in ids), name)


def constant_perversity(X: StratifiedPseudomanifold, value: int) -> Perversity:
    return Perversity(tuple(value for _ in X.strata), str(value))


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    simplex: Simplex | None = None
    skipped: bool = False

    def line(self) -> str:
        status = "skip" if self.skipped else ("pass" if self.ok else "FAIL")
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.name}: {status}{tail}"


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def text(self) -> str:
        return "\n".join(c.line() for c in self.checks) + "\n"


def _fail(name: str, msg: str, s: Simplex | None = None) -> Check:
    return Check(name, False, msg + (f" at {list(s)}" if s is not None else ""), s)


def validate(X: StratifiedPseudomanifold, orientation: bool = True) -> ValidationReport:
    """Check each structural condition; failures carry the offending simplex."""
    n = X.dim
    rep = ValidationReport()
    cx = X.complex
    checks = rep.checks

    bad = next((f for f in X.orientation if len(f) != n + 1), None)
    checks.append(_fail("facet_dimension", f"facet is not {n}-dimensional", bad) if bad
                  else Check("facet_dimension", True))

    bad = next((s for s, k in X._lvl.items() if len(s) - 1 > k), None)
    checks.append(_fail("skeleton_dimension", "simplex declared in a skeleton of lower dimension", bad) if bad
                  else Check("skeleton_dimension", True))

    # purity: regular simplices are faces of n-simplices
    in_facet = set()
    for f in X.facets:
        in_facet.update(all_faces(f))
    bad = None
    for d in range(cx.dim + 1):
        for s in cx.simplices[d]:
            if X.is_regular(s) and s not in in_facet:
                bad = s
                break
        if bad:
            break
    checks.append(_fail("purity", "regular simplex is not a face of an n-simplex", bad) if bad
                  else Check("purity", True))

    # density: every simplex is a face of a regular simplex
    reg_faces = set()
    for f in X.facets:
        if X.is_regular(f):
            reg_faces.update(all_faces(f))
    bad = None
    for d in range(cx.dim + 1):
        bad = next((s for s in cx.simplices[d] if s not in reg_faces), None)
        if bad:
            break
    checks.append(_fail("density", "simplex is not a face of any regular simplex", bad) if bad
                  else Check("density", True))

    # non-branching
    bad = None
    msg = ""
    for t in X.simplices(n - 1):
        if not X.is_regular(t):
            continue
        k = len(X.cofaces(t))
        want = 1 if t in X.boundary else 2
        if k != want:
            bad, msg = t, f"{k} cofaces, expected {want}"
            break
    checks.append(_fail("non_branching", msg, bad) if bad else Check("non_branching", True))

    # boundary declarations
    bad = next((b for b in X.boundary if b not in cx or len(b) != n), None)
    checks.append(_fail("boundary", "declared boundary simplex is not an (n-1)-face", bad) if bad
                  else Check("boundary", True))

    # orientation compatibility
    if orientation:
        bad = None
        for t in X.simplices(n - 1):
            if not X.is_regular(t) or t in X.boundary:
                continue
            cof = X.cofaces(t)
            if len(cof) != 2:
                continue
            tot = 0
            for s in cof:
                i = next(i for i in range(len(s)) if s[:i] + s[i + 1:] == t)
                tot += (-1) ** i * X.orientation.get(s, 0)
            if tot != 0:
                bad = t
                break
        checks.append(_fail("orientation", "induced orientations do not cancel across face", bad) if bad
                      else Check("orientation", True))

    checks.append(Check("filtration_full", True) if X.is_full()
                  else Check("filtration_full", False, "some skeleton is not a full subcomplex; subdivide once"))

    checks.append(_check_collar(X))
    checks.append(_check_bicollar(X))
    return rep


def _staircase(lo: Sequence, hi: Sequence) -> list[tuple]:
    """Staircase prisms over an ordered simplex: [lo_0..lo_j, hi_j..hi_k]."""
    k = len(lo)
    return [tuple(lo[:j + 1]) + tuple(hi[j:]) for j in range(k)]


def _check_collar(X: StratifiedPseudomanifold) -> Check:
    if not X.collar:
        return Check("collar", True, "none declared", skipped=True)
    push = dict(X.collar)
    bverts = {v for b in X.boundary for v in b}
    if set(push) != bverts:
        return Check("collar", False, "collar pairs must cover exactly the boundary vertices")
    facets = set(X.facets)
    for b in sorted(X.boundary):
        for ps in _staircase(list(b), [push[v] for v in b]):
            s = tuple(sorted(ps))
            if s not in facets:
                return _fail("collar", "collar prism missing", s)
            for f in all_faces(s):
                proj = tuple(sorted({_unpush(push, v) for v in f}))
                if X.level(f) != X.level(proj):
                    return _fail("collar", "stratification is not a product in the collar", f)
    return Check("collar", True)


def _unpush(push: dict, v: int) -> int:
    for a, b in push.items():
        if b == v:
            return a
    return v


def _check_bicollar(X: StratifiedPseudomanifold) -> Check:
    if not X.bicollar:
        return Check("bicollar", True, "none declared", skipped=True)
    facets = set(X.facets)
    by_mid = {z: (lo, hi) for z, lo, hi in X.bicollar}
    proj = {}
    for z, lo, hi in X.bicollar:
        proj[z] = proj[lo] = proj[hi] = z
    zs = set(by_mid)
    zsimp = [t for t in X.simplices(X.dim - 1) if set(t) <= zs]
    if not zsimp:
        return Check("bicollar", False, "no (n-1)-simplices among the middle vertices")
    for t in zsimp:
        for side in (0, 1):
            lo = [by_mid[v][0] for v in t] if side == 0 else list(t)
            hi = list(t) if side == 0 else [by_mid[v][1] for v in t]
            for ps in _staircase(lo, hi):
                s = tuple(sorted(ps))
                if s not in facets:
                    return _fail("bicollar", "bicollar prism missing", s)
                for f in all_faces(s):
                    p = tuple(sorted({proj[v] for v in f}))
                    if X.level(f) != X.level(p):
                        return _fail("bicollar", "stratification is not a product in the bicollar", f)
    return Check("bicollar", True)


# ---------------------------------------------------------------------------
# orientation propagation


def propagate_orientation(facets: Iterable[Simplex], seeds: Mapping[Simplex, int],
                          blocked: Iterable[Simplex] = ()) -> dict:
    """Extend seed signs across (n-1)-faces shared by exactly two facets.

    Returns the orientation of every facet reachable from a seed.
    Raises ComplexError if the propagation meets itself inconsistently.
    """
    blocked = set(blocked)
    facets = list(facets)
    cof = defaultdict(list)
    for f in facets:
        for i, (sg, t) in enumerate(boundary_faces(f)):
            cof[t].append((f, sg))
    out = dict(seeds)
    queue = list(seeds)
    while queue:
        f = queue.pop()
        o = out[f]
        for sg, t in boundary_faces(f):
            if t in blocked:
                continue
            cs = cof[t]
            if len(cs) != 2:
                continue
            for g, sg2 in cs:
                if g == f:
                    continue
                want = -o * sg * sg2
                have = out.get(g)
                if have is None:
                    out[g] = want
                    queue.append(g)
                elif have != want:
                    raise ComplexError(f"orientation clash across face {list(t)}")
    return out


def induced_boundary(X: StratifiedPseudomanifold) -> dict:
    """Sign of each boundary (n-1)-simplex in ∂ of the fundamental chain."""
    out = {}
    for t in X.boundary:
        for s in X.cofaces(t):
            i = next(i for i in range(len(s)) if s[:i] + s[i + 1:] == t)
            out[t] = (-1) ** i * X.orientation[s]
    return out


# ---------------------------------------------------------------------------
# constructors


def _relabel(X: StratifiedPseudomanifold) -> tuple[StratifiedPseudomanifold, dict]:
    """Compact the vertex ids to 0..N-1 preserving order."""
    used = X.complex.vertices()
    m = {v: i for i, v in enumerate(used)}
    if all(m[v] == v for v in used) and X.complex.n_vertices == len(used):
        return X, m
    return _map_vertices(X, m, len(used)), m


def _map_vertices(X: StratifiedPseudomanifold, m: Mapping[int, int], n_vertices: int,
                  keep_meta: bool = False) -> StratifiedPseudomanifold:
    def f(s):
        return tuple(m[v] for v in s)

    orient = {}
    for s, o in X.orientation.items():
        t, sg = oriented(f(s))
        orient[t] = o * sg
    return StratifiedPseudomanifold(
        X.dim, orient, {tuple(sorted(f(s))): k for s, k in X._lvl.items()},
        boundary=[tuple(sorted(f(b))) for b in X.boundary],
        collar=[(m[a], m[b]) for a, b in X.collar],
        bicollar=[(m[a], m[b], m[c]) for a, b, c in X.bicollar],
        parts={tuple(sorted(f(s))): p for s, p in X.parts.items()} if X.parts else None,
        n_vertices=n_vertices, note=X.note)


def cone(L: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    """Closed cone with the apex as vertex 0, the base shifted by one.

    The base is the boundary.  As a chain map c(σ) = [apex, σ] satisfies
    ∂(cξ) = ξ − c(∂ξ).
    """
    L, _ = _relabel(L)
    n = L.dim + 1

    def up(s):
        return tuple(v + 1 for v in s)

    orient = {(0,) + up(f): o for f, o in L.orientation.items()}
    levels = {(0,): 0}
    for d in range(L.complex.dim + 1):
        for s in L.complex.simplices[d]:
            lv = L.level(s) + 1
            if lv < n:
                levels[up(s)] = lv
                levels[(0,) + up(s)] = lv
    bd = [up(f) for f in L.facets] + [(0,) + up(b) for b in L.boundary]
    X = StratifiedPseudomanifold(n, orient, levels, boundary=bd, n_vertices=L.complex.n_vertices + 1,
                                 note="cone")
    X.meta["cone"] = {"apex": 0, "shift": 1}
    return X


def suspension(Z: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    """Two cones on Z; north apex 0, south apex N+1."""
    if Z.has_boundary:
        raise ComplexError("suspension needs an s-closed space; the input declares a boundary")
    Z, _ = _relabel(Z)
    n = Z.dim + 1
    south = Z.complex.n_vertices + 1

    def up(s):
        return tuple(v + 1 for v in s)

    orient = {}
    for f, o in Z.orientation.items():
        orient[(0,) + up(f)] = o
        orient[up(f) + (south,)] = (-1) ** (n + 1) * o
    levels = {(0,): 0, (south,): 0}
    for d in range(Z.complex.dim + 1):
        for s in Z.complex.simplices[d]:
            lv = Z.level(s) + 1
            if lv < n:
                levels[up(s)] = lv
                levels[(0,) + up(s)] = lv
                levels[up(s) + (south,)] = lv
    return StratifiedPseudomanifold(n, orient, levels, n_vertices=south + 1, note="suspension")


@dataclass
class Decomposition:
    """X = Y1 ∪_Z Y2, read off the facet part labels of X."""

    X: StratifiedPseudomanifold
    Y1: tuple
    Y2: tuple
    Z: tuple
    Z_orientation: dict

    @property
    def dim(self) -> int:
        return self.X.dim

    def piece(self, i: int) -> tuple:
        return self.Y1 if i == 1 else self.Y2


def decomposition(X: StratifiedPseudomanifold) -> Decomposition:
    if not X.parts:
        raise ComplexError("space carries no part labels; nothing to decompose")
    y1 = tuple(sorted(f for f in X.facets if X.parts.get(f) == 1))
    y2 = tuple(sorted(f for f in X.facets if X.parts.get(f) == 2))
    if len(y1) + len(y2) != len(X.facets):
        raise ComplexError("every facet needs part 1 or 2")
    zo: dict = {}
    side: dict = defaultdict(set)
    for part, fs in ((1, y1), (2, y2)):
        for f in fs:
            for i, (sg, t) in enumerate(boundary_faces(f)):
                side[t].add(part)
                if part == 1:
                    zo[t] = zo.get(t, 0) + sg * X.orientation[f]
    z = tuple(sorted(t for t, s in side.items() if s == {1, 2}))
    if not z:
        raise ComplexError("the two parts share no codimension-one face")
    zo = {t: zo[t] for t in z}
    if any(abs(v) != 1 for v in zo.values()):
        raise ComplexError("interface face is not two-sided")
    return Decomposition(X, y1, y2, z, zo)


def glue(Y1: StratifiedPseudomanifold, Y2: StratifiedPseudomanifold, matching: Mapping[int, int] | None = None,
         allow_reverse: bool = False) -> tuple[StratifiedPseudomanifold, Decomposition]:
    """Glue along the full boundaries through an inserted bicollar.

    ``matching`` maps boundary vertices of Y1 to boundary vertices of Y2
    (identity when omitted).  Vertex ids: Y1 first, then the middle copy
    of Z, then Y2.  With ``allow_reverse`` a clashing Y2 is reversed
    instead of rejected; ``X.meta['reversed_second']`` records it.
    """
    if not Y1.has_boundary or not Y2.has_boundary:
        raise ComplexError("both pieces need a declared boundary")
    if Y1.dim != Y2.dim:
        raise ComplexError("pieces have different dimensions")
    n = Y1.dim
    b1 = sorted(Y1.boundary)
    v1 = sorted({v for b in b1 for v in b})
    v2 = sorted({v for b in Y2.boundary for v in b})
    if matching is None:
        matching = {v: v for v in v1}
    matching = dict(matching)
    if sorted(matching) != v1 or sorted(matching.values()) != v2:
        raise ComplexError("boundary mismatch: matching is not a bijection of boundary vertices")
    img = {tuple(sorted(matching[v] for v in b)) for b in b1}
    if img != set(Y2.boundary):
        miss = sorted(img ^ set(Y2.boundary))[0]
        raise ComplexError(f"boundary mismatch: boundary complexes differ near {list(miss)}")
    bc1 = Y1.boundary_complex()
    for d in range(bc1.dim + 1):
        for s in bc1.simplices[d]:
            t = tuple(sorted(matching[v] for v in s))
            if Y1.level(s) != Y2.level(t):
                raise ComplexError(f"boundary mismatch: strata differ on {list(s)}")

    Y1c, m1 = _relabel(Y1)
    n1 = Y1c.complex.n_vertices
    zverts = [m1[v] for v in v1]
    mid = {zv: n1 + i for i, zv in enumerate(zverts)}
    used2 = Y2.complex.vertices()
    m2 = {v: n1 + len(zverts) + i for i, v in enumerate(used2)}
    total = n1 + len(zverts) + len(used2)
    Y2c = _map_vertices(Y2, m2, total)
    hi = {m1[v]: m2[matching[v]] for v in v1}

    facets: dict = {}
    parts: dict = {}
    levels: dict = {}
    for f, o in Y1c.orientation.items():
        facets[f] = o
        parts[f] = 1
    levels.update(Y1c._lvl)
    y2_orient = dict(Y2c.orientation)
    for f in y2_orient:
        parts[f] = 2
    levels.update(Y2c._lvl)
    collar_facets = []
    zb = [tuple(m1[v] for v in b) for b in b1]
    for t in zb:
        for half, (a, b) in ((1, ({v: v for v in t}, mid)), (2, (mid, hi))):
            for ps in _staircase([a[v] for v in t], [b[v] for v in t]):
                s = tuple(sorted(ps))
                collar_facets.append(s)
                parts[s] = half
    proj = {}
    for zv in zverts:
        proj[zv] = proj[mid[zv]] = proj[hi[zv]] = zv
    cc = SimplicialComplex.closure(collar_facets)
    for d in range(cc.dim + 1):
        for s in cc.simplices[d]:
            p = tuple(sorted({proj[v] for v in s}))
            lv = Y1c.level(p)
            if lv < n:
                levels[s] = lv

    # orient the collar and Y2 from Y1
    all_f = list(facets) + collar_facets + list(y2_orient)
    prop = propagate_orientation(all_f, dict(facets), blocked=())
    agree = disagree = 0
    for f, o in y2_orient.items():
        if f in prop:
            if prop[f] == o:
                agree += 1
            else:
                disagree += 1
    reversed_second = False
    if disagree:
        if agree or not allow_reverse:
            raise ComplexError("orientation clash: ∂Y1 and −∂Y2 disagree under the matching")
        reversed_second = True
    for f in collar_facets:
        facets[f] = prop[f]
    for f, o in y2_orient.items():
        facets[f] = prop.get(f, -o if reversed_second else o)

    bic = [(mid[zv], zv, hi[zv]) for zv in zverts]
    X = StratifiedPseudomanifold(n, facets, levels, bicollar=bic, parts=parts, n_vertices=total, note="glue")
    X.meta["reversed_second"] = reversed_second
    return X, decomposition(X)


def boundary_components(X: StratifiedPseudomanifold) -> list[list[Simplex]]:
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in X.boundary:
        for v in b:
            parent.setdefault(v, v)
        for v in b[1:]:
            ra, rb = find(b[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps = defaultdict(list)
    for b in sorted(X.boundary):
        comps[find(b[0])].append(b)
    return [comps[k] for k in sorted(comps, key=lambda r: min(v for b in comps[r] for v in b))]


def cone_off_boundary(M: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    """M ∪ c(∂M), one apex per boundary component (apex ids 0..k-1)."""
    if not M.has_boundary:
        raise ComplexError("cone_off_boundary needs a nonempty boundary")
    M, _ = _relabel(M)
    comps = boundary_components(M)
    k = len(comps)
    n = M.dim
    induced = induced_boundary(M)

    def up(s):
        return tuple(v + k for v in s)

    orient = {up(f): o for f, o in M.orientation.items()}
    levels = {up(s): lv for s, lv in M._lvl.items()}
    apex_of = {}
    for a, comp in enumerate(comps):
        levels[(a,)] = 0
        bc = SimplicialComplex.closure(comp)
        for v in bc.vertices():
            apex_of[v + k] = a
        for t in comp:
            orient[(a,) + up(t)] = -induced[t]
        for d in range(bc.dim + 1):
            for s in bc.simplices[d]:
                lv = M.level(s)
                if lv < n:
                    levels[(a,) + up(s)] = lv
    X = StratifiedPseudomanifold(n, orient, levels, n_vertices=M.complex.n_vertices + k, note="cone-off-boundary")
    X.meta["coning"] = {"shift": k, "apex_of": apex_of, "components": k}
    return X


def cone_chain(X: StratifiedPseudomanifold, chain: Mapping[Simplex, int]) -> dict:
    """Coning map c on chains of ∂M, for X built by cone_off_boundary.

    ``chain`` uses the original vertex ids of M.  Sign contract:
    ∂(cξ) = ξ − c(∂ξ).
    """
    data = X.meta.get("coning")
    if data is None:
        raise ComplexError("space was not produced by cone_off_boundary")
    k = data["shift"]
    out = {}
    for s, c in chain.items():
        t = tuple(v + k for v in s)
        a = data["apex_of"][t[0]]
        out[(a,) + t] = out.get((a,) + t, 0) + c
    return {s: c for s, c in out.items() if c}


@dataclass
class SubdivisionMap:
    """Barycentric subdivision operator on chains and the vertex table."""

    source: StratifiedPseudomanifold
    target: StratifiedPseudomanifold
    vertex_of: dict

    def simplex(self, s: Simplex) -> dict:
        out = {}
        for u in itertools.permutations(s):
            flag = tuple(self.vertex_of[tuple(sorted(u[:j + 1]))] for j in range(len(u)))
            out[flag] = perm_sign(u)
        return out

    def apply(self, chain: Mapping[Simplex, int]) -> dict:
        out: dict = {}
        for s, c in chain.items():
            for t, sg in self.simplex(s).items():
                v = out.get(t, 0) + sg * c
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return out

    def barycenter(self, s: Simplex) -> int:
        return self.vertex_of[tuple(s)]


def barycentric_subdivide(X: StratifiedPseudomanifold) -> tuple[StratifiedPseudomanifold, SubdivisionMap]:
    """Barycentric subdivision; vertices are simplices ordered by (dim, lex).

    Collars and bicollars are dropped (the subdivided product is no longer
    a staircase); part labels and strata carry over.
    """
    order = [s for d in range(X.complex.dim + 1) for s in X.complex.simplices[d]]
    vid = {s: i for i, s in enumerate(order)}
    n = X.dim
    orient = {}
    parts = {} if X.parts else None
    for f, o in X.orientation.items():
        p = X.parts.get(f) if X.parts else None
        for u in itertools.permutations(f):
            flag = tuple(vid[tuple(sorted(u[:j + 1]))] for j in range(len(u)))
            orient[flag] = perm_sign(u) * o
            if parts is not None:
                parts[flag] = p
    bd = []
    for b in X.boundary:
        for u in itertools.permutations(b):
            bd.append(tuple(vid[tuple(sorted(u[:j + 1]))] for j in range(len(u))))
    target = StratifiedPseudomanifold(n, orient, None, boundary=bd, parts=parts, n_vertices=len(order),
                                      note=X.note)
    lv = {}
    if X._lvl:
        for d in range(target.complex.dim + 1):
            for s in target.complex.simplices[d]:
                top = order[s[-1]]
                k = X.level(top)
                if k < n:
                    lv[s] = k
    target._lvl = lv
    target.meta["subdivided_from"] = X.meta.get("subdivided_from", 0) + 1
    return target, SubdivisionMap(X, target, vid)


def subdivide(X: StratifiedPseudomanifold, times: int) -> StratifiedPseudomanifold:
    for _ in range(times):
        X, _m = barycentric_subdivide(X)
    return X


@dataclass
class Restratification:
    """X̂ plus the perversity lift from X."""

    source: StratifiedPseudomanifold
    X: StratifiedPseudomanifold
    old_of_new: dict   # new stratum id -> old stratum id, or None for boundary strata
    subdivided: bool

    def is_boundary_stratum(self, sid: int) -> bool:
        return self.X.meta["boundary_strata"][sid]

    def lift(self, p: Perversity, role: str = "p") -> Perversity:
        """p̂ = −(n+1) on the new boundary strata, or q̂ = t̄ − p̂ there."""
        n = self.X.dim
        vals = []
        for st in self.X.strata:
            if self.X.meta["boundary_strata"][st.id]:
                if role == "p":
                    vals.append(-(n + 1))
                elif role == "q":
                    vals.append(st.codim - 2 + n + 1)
                else:
                    raise ValueError("role must be 'p' or 'q'")
            else:
                vals.append(p[self.old_of_new[st.id]])
        return Perversity(tuple(vals), p.name and f"{p.name}^")


def restratify_boundary(X: StratifiedPseudomanifold) -> Restratification:
    """Promote the boundary to strata one level down, making the space s-closed."""
    if not X.has_boundary:
        raise ComplexError("restratify_boundary needs a nonempty boundary")
    subdivided = False
    src = X
    cand = _restratify(X)
    if not cand.is_full():
        src, _ = barycentric_subdivide(X)
        subdivided = True
        cand = _restratify(src)
    bc = src.boundary_complex()
    bset = {s for d in bc.simplices for s in d}
    old_of_new = {}
    is_bd = {}
    for st in cand.strata:
        rep = next((s for s in st.simplices if s not in bset), None)
        is_bd[st.id] = rep is None
        if rep is None:
            old_of_new[st.id] = src.stratum_of(st.simplices[0])
        else:
            old_of_new[st.id] = src.stratum_of(rep)
    cand.meta["boundary_strata"] = is_bd
    cand.meta["restratified_from"] = src
    return Restratification(src, cand, old_of_new, subdivided)


def _restratify(X: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    bc = X.boundary_complex()
    lv = dict(X._lvl)
    for d in range(bc.dim + 1):
        for s in bc.simplices[d]:
            lv[s] = X.level(s) - 1
    Y = X.replace(levels=lv, boundary=(), collar=(), bicollar=())
    Y.meta = dict(X.meta)
    return Y


def product_with_manifold(X: StratifiedPseudomanifold, N: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    """Staircase triangulation of N × X; vertex (a, b) gets id a·|V(X)| + b."""
    if N.singular_levels():
        raise ComplexError("the manifold factor must be trivially stratified")
    rep = validate(N)
    for c in rep.checks:
        if c.name in ("non_branching", "orientation", "purity") and not c.ok:
            raise ComplexError(f"manifold factor fails {c.name}: {c.detail}")
    N, _ = _relabel(N)
    X, _ = _relabel(X)
    nb = X.complex.n_vertices
    p, q = N.dim, X.dim
    dim = p + q
    orient = {}
    for alpha, oa in N.orientation.items():
        for beta, ob in X.orientation.items():
            for steps in itertools.combinations(range(p + q), p):
                st = set(steps)
                ia = ib = 0
                verts = [alpha[0] * nb + beta[0]]
                inv = 0
                b_seen = 0
                for k in range(p + q):
                    if k in st:
                        ia += 1
                        inv += b_seen
                    else:
                        ib += 1
                        b_seen += 1
                    verts.append(alpha[ia] * nb + beta[ib])
                orient[tuple(verts)] = oa * ob * (-1) ** inv
    out = StratifiedPseudomanifold(dim, orient, None, n_vertices=N.complex.n_vertices * nb, note="product")
    lv = {}
    nbd = N.boundary_complex() if N.has_boundary else None
    xbd = X.boundary_complex() if X.has_boundary else None
    bd = []
    for d in range(out.complex.dim + 1):
        for s in out.complex.simplices[d]:
            px = tuple(sorted({v % nb for v in s}))
            k = X.level(px) + p
            if k < dim:
                lv[s] = k
    for s in out.complex.simplices[dim - 1]:
        px = tuple(sorted({v % nb for v in s}))
        pn = tuple(sorted({v // nb for v in s}))
        if (nbd is not None and pn in nbd) or (xbd is not None and px in xbd):
            bd.append(s)
    out._lvl = lv
    out.boundary = frozenset(bd)
    return out


def disjoint_union(A: StratifiedPseudomanifold, B: StratifiedPseudomanifold) -> StratifiedPseudomanifold:
    if A.dim != B.dim:
        raise ComplexError("dimensions differ")
    A, _ = _relabel(A)
    B, _ = _relabel(B)
    k = A.complex.n_vertices
    Bs = _map_vertices(B, {v: v + k for v in B.complex.vertices()}, k + B.complex.n_vertices)
    orient = dict(A.orientation)
    orient.update(Bs.orientation)
    lv = dict(A._lvl)
    lv.update(Bs._lvl)
    return StratifiedPseudomanifold(A.dim, orient, lv, boundary=set(A.boundary) | set(Bs.boundary),
                                    n_vertices=k + B.complex.n_vertices)
