"""Intersection numbers and the duality pairings.

Left chains live on the triangulation T.  Right chains live on the
dual-type simplices of the barycentric subdivision T': flags
σ_0 < σ_1 < ... < σ_k of T with dim σ_j = n − k + j, ending at an
n-simplex.  A flag is never materialised as a simplex of T'; it is the
tuple of its T-simplices.  Such a chain meets an i-simplex of T only at
barycenters, so intersection numbers are combinatorial.

A right-hand class is moved onto dual-type chains by computing the
homology of the dual-type subcomplex and pushing classes back to T with
the last-vertex map π (vertices ordered by level, then id).  π sends the
subdivision of a chain back to the chain, so a dual-type cycle b stands
for the class y exactly when π_*[b] = [y].  If the dual-type classes do
not reach y, the space is subdivided and the search repeats.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .complex import (Perversity, StratifiedPseudomanifold, barycentric_subdivide, perm_sign)
from .ichain import (IntersectionComplex, _Frame, boundary0, build_complex, build_qp_quotient, image_group)
from .qlinalg import BilinearForm, ChainHomology, QMatrix, axpy, q, solve, sparse_kernel


class GeneralPositionError(RuntimeError):
    """Supports fail to meet only at dual-block crossing points."""


class RebaseError(RuntimeError):
    """A right-hand class could not be moved onto dual blocks within the depth limit."""


class PairingContractError(ValueError):
    pass


def max_subdivision() -> int:
    raw = os.environ.get("STRATOS_MAX_SUBDIV", "3")
    try:
        v = int(raw)
    except ValueError:
        raise ValueError(f"STRATOS_MAX_SUBDIV must be an integer, got {raw!r}") from None
    return max(0, v)


# ---------------------------------------------------------------------------
# flags and pieces


def _dt(X: StratifiedPseudomanifold) -> dict:
    t = X.cache.get("dt")
    if t is None:
        t = {"blocks": {}, "pieces": {}}
        X.cache["dt"] = t
    return t


def block(X: StratifiedPseudomanifold, tau: tuple) -> list[tuple]:
    """All dual-type flags starting at tau: the simplices of the dual block D(tau)."""
    cache = _dt(X)["blocks"]
    got = cache.get(tau)
    if got is not None:
        return got
    n = X.dim
    out = []
    stack = [(tau,)]
    while stack:
        fl = stack.pop()
        top = fl[-1]
        if len(top) == n + 1:
            out.append(fl)
            continue
        for c in X.cofaces(top):
            stack.append(fl + (c,))
    out.sort()
    cache[tau] = out
    return out


def flag_sign(X: StratifiedPseudomanifold, fl: tuple) -> int:
    """ε(s): orientation of (σ_0 then the added vertices) against the top simplex."""
    seq = list(fl[0])
    for a, b in zip(fl, fl[1:]):
        seq.append(next(v for v in b if v not in a))
    return perm_sign(seq) * X.orientation[fl[-1]]


@dataclass
class _Pieces:
    degree: int
    flags: list          # per piece: list of flags
    eps: list            # per piece: list of signs
    valid: list          # per piece: bool
    piece_of: dict       # flag -> (piece id, sign)
    allow: dict          # perversity values -> list[bool]
    bd: list | None = None


def _pieces(X: StratifiedPseudomanifold, k: int) -> _Pieces:
    """Dual-type k-chains split into minimal sign-rigid pieces."""
    cache = _dt(X)["pieces"]
    if k in cache:
        return cache[k]
    n = X.dim
    lvl = X._lvl
    flags_all, eps_all, valid_all = [], [], []
    piece_of: dict = {}
    taus = X.simplices(n - k) if 0 <= k <= n else []
    for tau in taus:
        fls = block(X, tau)
        if not fls:
            continue
        parent = list(range(len(fls)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        faces = defaultdict(list)
        for a, fl in enumerate(fls):
            for j in range(1, k + 1):
                if j == k and fl[k - 1] in lvl:
                    continue
                faces[(j, fl[:j] + fl[j + 1:])].append(a)
        for (j, _), members in faces.items():
            for b in members[1:]:
                ra, rb = find(members[0]), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups = defaultdict(list)
        for a in range(len(fls)):
            groups[find(a)].append(a)
        eps = [flag_sign(X, fl) for fl in fls]
        broken = {find(fm[0]) for fm in faces.values() if sum(eps[a] for a in fm)}
        for root in sorted(groups):
            members = groups[root]
            ok = root not in broken
            pid = len(flags_all)
            flags_all.append([fls[a] for a in members])
            eps_all.append([eps[a] for a in members])
            valid_all.append(ok)
            for a in members:
                piece_of[fls[a]] = (pid, eps[a])
    P = _Pieces(k, flags_all, eps_all, valid_all, piece_of, {})
    cache[k] = P
    return P


def _flag_allowed(X: StratifiedPseudomanifold, fl: tuple, k: int, r: Perversity) -> bool:
    strata = X.strata
    best: dict = {}
    for j, s in enumerate(fl):
        z = X.stratum_of(s)
        if z is not None:
            best[z] = j
    return all(j <= k - strata[z].codim + r[z] for z, j in best.items())


def _piece_allowed(X: StratifiedPseudomanifold, P: _Pieces, r: Perversity) -> list:
    got = P.allow.get(r.values)
    if got is None:
        got = [v and all(_flag_allowed(X, fl, P.degree, r) for fl in fls)
               for v, fls in zip(P.valid, P.flags)]
        P.allow[r.values] = got
    return got


def _piece_boundary(X: StratifiedPseudomanifold, k: int) -> list:
    """∂₀ of each k-piece in (k-1)-piece coordinates (valid pieces only)."""
    P = _pieces(X, k)
    if P.bd is None:
        lower = _pieces(X, k - 1) if k >= 1 else None
        out = []
        for pid, (fls, eps) in enumerate(zip(P.flags, P.eps)):
            if not P.valid[pid] or lower is None:
                out.append({})
                continue
            chain: dict = {}
            for fl, e in zip(fls, eps):
                f = fl[1:]
                chain[f] = chain.get(f, 0) + e
            coords: dict = {}
            for f, c in chain.items():
                if not c:
                    continue
                lp, le = lower.piece_of[f]
                if lp not in coords:
                    coords[lp] = c * le
                elif coords[lp] != c * le:
                    raise ArithmeticError("dual-type boundary is not a sum of pieces")
            out.append({a: c for a, c in coords.items() if c})
        P.bd = out
    return P.bd


def _key(X: StratifiedPseudomanifold):
    lv = {v[0]: X.level(v) for v in X.simplices(0)}
    return lambda v: (lv[v], v)


def pi_chain(X: StratifiedPseudomanifold, flag_chain: Mapping) -> dict:
    """π_* of an arbitrary chain on flags (any flags, not only dual type)."""
    key = _key(X)
    out: dict = {}
    for fl, c in flag_chain.items():
        verts = [max(s, key=key) for s in fl]
        if len(set(verts)) < len(verts):
            continue
        t = tuple(sorted(verts))
        v = out.get(t, 0) + perm_sign(verts) * c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


class _Cells:
    """Cells α ∗ P: a flag α of singular simplices joined to a dual-type piece P.

    α runs over flags (possibly empty) of simplices from the strata in
    ``extra``, all proper faces of the head of P.  With α empty the cell
    is the piece itself.  A pure dual-type flag passes through a singular
    simplex only in its first slot, so without these cells a chain could
    neither cone through a stratum below top degree nor end on it.  A
    left chain avoiding those simplices still meets the cells only at
    dual-block barycenters.
    """

    def __init__(self, X: StratifiedPseudomanifold, extra: frozenset):
        self.X = X
        self.extra = extra
        self.cells: dict = {}
        self.index: dict = {}
        self._sflags: dict = {}

    def _singular_flags(self, tau: tuple) -> list:
        got = self._sflags.get(tau)
        if got is None:
            X = self.X
            faces = [f for d in range(len(tau) - 1) for f in itertools.combinations(tau, d + 1)
                     if X.stratum_of(f) in self.extra]
            faces.sort(key=lambda f: (len(f), f))
            got = []

            def grow(fl):
                got.append(fl)
                top = fl[-1]
                for f in faces:
                    if len(f) > len(top) and set(top) <= set(f):
                        grow(fl + (f,))

            for f in faces:
                grow((f,))
            self._sflags[tau] = got
        return got

    def _head_extra(self, d: int, j: int) -> bool:
        P = _pieces(self.X, d)
        return self.X.stratum_of(P.flags[j][0][0]) in self.extra

    def of(self, k: int) -> list:
        """Cells of degree k as (alpha, piece id) pairs, pure pieces first.

        Pieces whose head lies in an extra stratum are not cells; they
        are rewritten as cone cells by ``expand``.
        """
        if k not in self.cells:
            X = self.X
            out = []
            if 0 <= k <= X.dim:
                P = _pieces(X, k)
                out = [((), j) for j in range(len(P.flags)) if not self._head_extra(k, j)]
                if self.extra:
                    for d in range(0, k):
                        Q = _pieces(X, d)
                        for j, fls in enumerate(Q.flags):
                            if not Q.valid[j] or self._head_extra(d, j):
                                continue
                            for al in self._singular_flags(fls[0][0]):
                                if len(al) == k - d:
                                    out.append((al, j))
            self.cells[k] = out
            self.index[k] = {c: i for i, c in enumerate(out)}
        return self.cells[k]

    def _split(self, d: int, j: int) -> list:
        """A piece with extra head τ as Σ c · (τ) ∗ P over pieces P one degree down."""
        key = ("split", d, j)
        got = self.cells.get(key)
        if got is None:
            X = self.X
            Q = _pieces(X, d)
            low = _pieces(X, d - 1)
            acc: dict = {}
            for fl, e in zip(Q.flags[j], Q.eps[j]):
                pj, pe = low.piece_of[fl[1:]]
                c = e * pe
                if acc.setdefault(pj, c) != c:
                    raise ArithmeticError("dual piece does not split along its first vertex")
            got = sorted(acc.items())
            self.cells[key] = got
        return got

    def expand(self, al: tuple, d: int, j: int) -> dict:
        """α ∗ (piece j of degree d) in cell coordinates of degree len(α) + d."""
        k = len(al) + d
        self.of(k)
        if not self._head_extra(d, j):
            return {self.index[k][(al, j)]: 1}
        tau = _pieces(self.X, d).flags[j][0][0]
        out: dict = {}
        for pj, c in self._split(d, j):
            axpy(out, c, self.expand(al + (tau,), d - 1, pj))
        return out

    def piece(self, k: int, c: int) -> tuple:
        al, j = self.of(k)[c]
        return al, _pieces(self.X, k - len(al)), j

    def valid(self, k: int, c: int) -> bool:
        al, P, j = self.piece(k, c)
        return P.valid[j]

    def allowed(self, k: int, r: Perversity) -> list:
        key = ("allow", r.values, k)
        got = self.cells.get(key)
        if got is None:
            X = self.X
            got = []
            for c, (al, j) in enumerate(self.of(k)):
                P = _pieces(X, k - len(al))
                if not al:
                    got.append(_piece_allowed(X, P, r)[j])
                else:
                    got.append(P.valid[j] and all(_flag_allowed(X, al + fl, k, r) for fl in P.flags[j]))
            self.cells[key] = got
        return got

    def boundary(self, k: int, c: int) -> dict:
        """∂₀(α ∗ P) = ∂α ∗ P + (−1)^{|α|+1} α ∗ ∂P in cell coordinates."""
        al, j = self.of(k)[c]
        a = len(al)
        out: dict = {}
        if k < 1:
            return out
        self.of(k - 1)
        idx = self.index[k - 1]
        if a:
            for t in range(a):
                key = (al[:t] + al[t + 1:], j)
                out[idx[key]] = out.get(idx[key], 0) + (-1) ** t
        if k - a >= 1:
            sg = (-1) ** a
            for jj, v in _piece_boundary(self.X, k - a)[j].items():
                axpy(out, sg * v, self.expand(al, k - a - 1, jj))
        return {x: v for x, v in out.items() if v}

    def flags(self, k: int, c: int):
        al, P, j = self.piece(k, c)
        for fl, e in zip(P.flags[j], P.eps[j]):
            yield al + fl, e

    def basis(self, r: Perversity, k: int) -> list:
        """Reduced basis of r-allowable k-chains with r-allowable ∂₀."""
        key = ("basis", r.values, k)
        if key in self.cells:
            return self.cells[key]
        if k < 0 or k > self.X.dim:
            self.cells[key] = []
            return []
        cells = self.of(k)
        ok = self.allowed(k, r)
        okf = self.allowed(k - 1, r) if k >= 1 else []
        free, constrained, bds = [], [], {}
        for c in range(len(cells)):
            if not ok[c]:
                continue
            bd = self.boundary(k, c)
            if any(not okf[f] for f in bd):
                constrained.append(c)
                bds[c] = {f: v for f, v in bd.items() if not okf[f]}
            else:
                free.append(c)
        out = [(c, {c: 1}) for c in free]
        if constrained:
            for piv, v in sparse_kernel([bds[c] for c in constrained]):
                out.append((constrained[piv], {constrained[a]: x for a, x in v.items()}))
        out.sort(key=lambda x: x[0])
        self.cells[key] = out
        return out


def _cells(X: StratifiedPseudomanifold, extra: frozenset) -> _Cells:
    t = _dt(X)
    key = ("cells", extra)
    if key not in t:
        t[key] = _Cells(X, extra)
    return t[key]


class DualComplex:
    """Dual-type analogue of an IntersectionComplex on the whole space."""

    def __init__(self, X: StratifiedPseudomanifold, perv: Perversity, killed: Sequence[Perversity] = ()):
        self.X = X
        self.perv = perv
        self.killed = list(killed)
        extra = frozenset(s.id for s in X.strata if perv[s.id] >= s.codim - X.dim)
        self.cells = _cells(X, extra)
        self._frames: dict = {}
        self._hom: dict = {}

    def frame(self, k: int) -> _Frame:
        if k not in self._frames:
            num = self.cells.basis(self.perv, k)
            kil = [self.cells.basis(r, k) for r in self.killed]
            self._frames[k] = _Frame(num, kil, track=False)
        return self._frames[k]

    def _bd(self, k: int, vec: Mapping) -> dict:
        out: dict = {}
        for j, c in vec.items():
            axpy(out, c, self.cells.boundary(k, j))
        return out

    def homology(self, k: int) -> ChainHomology:
        if k not in self._hom:
            n = self.X.dim
            dims = [0] * k + [len(self.frame(k))]
            bd = {}
            if k + 1 <= n:
                dims.append(len(self.frame(k + 1)))
                up, lo = self.frame(k + 1), self.frame(k)
                bd[k + 1] = [lo.coords(self._bd(k + 1, v), check=False) for v in up.vectors]
            if k >= 1:
                fr, lo = self.frame(k), self.frame(k - 1)
                bd[k] = [lo.coords(self._bd(k, v), check=False) for v in fr.vectors]
            self._hom[k] = ChainHomology(dims, bd, lowest=k)
        return self._hom[k]

    def piece_vector(self, k: int, coords: Mapping) -> dict:
        return self.frame(k).vector(coords)

    def pi(self, k: int, pvec: Mapping) -> dict:
        return pi_chain(self.X, self.flags(k, pvec))

    def flags(self, k: int, pvec: Mapping) -> dict:
        out: dict = {}
        for j, c in pvec.items():
            if c:
                for fl, e in self.cells.flags(k, j):
                    out[fl] = q(c * e)
        return out

    def boundary_flags(self, k: int, pvec: Mapping) -> dict:
        return self.flags(k - 1, self._bd(k, pvec)) if k >= 1 else {}


def rebase(T: IntersectionComplex, D: DualComplex, k: int, targets: Sequence[Sequence]) -> list | None:
    """Dual-type chains (piece coordinates) whose π-images have the target class coordinates."""
    H = T.homology(k)
    if H.dim == 0:
        return [{} for _ in targets]
    DH = D.homology(k)
    reps = [D.piece_vector(k, c) for c in DH.reps(k)]
    cols = [H.classify(D.pi(k, r)) for r in reps]
    if not cols:
        return None if any(any(t) for t in targets) else [{} for _ in targets]
    M = QMatrix.from_columns(cols, H.dim)
    out = []
    for t in targets:
        lam = solve(M, t)
        if lam is None:
            return None
        v: dict = {}
        for c, r in zip(lam, reps):
            axpy(v, c, r)
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# intersection numbers


def intersection_number(X: StratifiedPseudomanifold, x: Mapping, b: Mapping) -> int:
    """x ⋔ b for a chain x on T and a flag chain b (flag -> coefficient).

    Degrees must be complementary.  Each simplex σ of x must see b as a
    constant multiple of its dual block D(σ), and flags of b that reach
    below degree i (cone cells on singular simplices) must not touch the
    closure of x; otherwise GeneralPositionError is raised.
    """
    if not x or not b:
        return 0
    n = X.dim
    i = len(next(iter(x))) - 1
    kb = len(next(iter(b))) - 1
    if i + kb != n:
        raise PairingContractError(f"degrees {i} and {kb} are not complementary in dimension {n}")
    touched = None
    for fl, c in b.items():
        if c and len(fl[0]) - 1 < i:
            if touched is None:
                touched = {f for t in x for d in range(1, len(t) + 1) for f in itertools.combinations(t, d)}
            for e in fl:
                if len(e) - 1 <= i and e in touched:
                    raise GeneralPositionError(f"dual chain touches {list(e)} on the other chain")
    total = 0
    for s, c in x.items():
        if not c:
            continue
        vals = set()
        for fl in block(X, s):
            vals.add(b.get(fl, 0) * flag_sign(X, fl))
            if len(vals) > 1:
                raise GeneralPositionError(f"dual chain is not a multiple of the dual block of {list(s)}")
        v = vals.pop() if vals else 0
        total += c * v
    return q(total)


def dual_block(X: StratifiedPseudomanifold, tau: tuple) -> dict:
    """D(τ) as a flag chain, oriented so that τ ⋔ D(τ) = 1."""
    return {fl: flag_sign(X, fl) for fl in block(X, tau)}


# ---------------------------------------------------------------------------
# pairings


@dataclass
class PairingMatrix:
    matrix: QMatrix
    provenance: str
    depth: int = 0

    @property
    def form(self) -> BilinearForm:
        return BilinearForm.detect(self.matrix)

    def to_text(self) -> str:
        head = "".join(f"# {line}\n" for line in self.provenance.splitlines())
        return head + self.matrix.to_text()


def _subdivisions(X: StratifiedPseudomanifold, limit: int):
    """Yield (depth, X_d, chain map X -> X_d)."""
    maps = []
    cur = X
    yield 0, cur, (lambda c: dict(c))
    for d in range(1, limit + 1):
        cur, m = barycentric_subdivide(cur)
        maps.append(m)

        def f(c, ms=tuple(maps)):
            for mm in ms:
                c = mm.apply(c)
            return c

        yield d, cur, f


def _same_strata(X: StratifiedPseudomanifold, Y: StratifiedPseudomanifold):
    if [(s.level) for s in X.strata] != [(s.level) for s in Y.strata]:
        raise ArithmeticError("subdivision changed the stratum table")


def middle_pairing(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity, degree: int | None = None,
                   max_depth: int | None = None, check: bool = True) -> PairingMatrix:
    """Gram matrix of the pairing on I^{p̄→q̄}H_k(X), k = dim/2."""
    n = X.dim
    if X.has_boundary:
        raise PairingContractError("middle_pairing needs an s-closed space; use relative_middle_pairing")
    if degree is None:
        if n % 2:
            raise PairingContractError("odd dimension has no middle degree")
        degree = n // 2
    if not p <= qv:
        raise PairingContractError("need p̄ <= q̄")
    for s, a, b in zip(X.strata, p.values, qv.values):
        if a + b != s.codim - 2:
            raise PairingContractError(f"p̄ + q̄ != t̄ on stratum {s.id}")
    img = image_group(X, p, qv, degree)
    k = n - degree
    if img.dim == 0:
        return PairingMatrix(QMatrix.zeros(0, 0), _prov(X, p, qv, degree, 0), 0)
    limit = max_subdivision() if max_depth is None else max_depth
    for d, Xd, f in _subdivisions(X, limit):
        if d:
            _same_strata(X, Xd)
        left = [f(x) for x in img.reps]
        Tq = build_complex(Xd, qv)
        Hq = Tq.homology(k)
        targets = [Hq.classify(f(x)) for x in img.reps] if k == degree else None
        if targets is None:
            raise PairingContractError("only the middle degree is supported here")
        D = DualComplex(Xd, qv)
        got = rebase(Tq, D, k, targets)
        if got is None:
            continue
        right = [D.flags(k, v) for v in got]
        rows = [[intersection_number(Xd, a, b) for b in right] for a in left]
        M = QMatrix.from_rows(rows, len(right))
        if check:
            if M.T != (M if degree % 2 == 0 else -M):
                raise ArithmeticError("pairing matrix lacks graded symmetry")
            if M.rank() != M.rows:
                raise ArithmeticError("pairing matrix is singular")
        return PairingMatrix(M, _prov(X, p, qv, degree, d), d)
    raise RebaseError(f"dual-block rebasing failed up to subdivision depth {limit}")


def _prov(X, p, qv, degree, depth, kind="intersection pairing"):
    return (f"{kind} on {X.note or 'space'} (dim {X.dim})\n"
            f"perversities p={p.label()} q={qv.label()} degree {degree}\n"
            f"basis: image-group representatives; subdivision depth {depth}")


def relative_middle_pairing(Y: StratifiedPseudomanifold, p: Perversity, qv: Perversity,
                            max_depth: int | None = None) -> PairingMatrix:
    """Pairing on I^{p̄↠q̄}H(Y, ∂Y), computed on the restratified space."""
    from .complex import restratify_boundary
    if not Y.has_boundary:
        return middle_pairing(Y, p, qv, max_depth=max_depth)
    R = restratify_boundary(Y)
    ph, qh = R.lift(p, "p"), R.lift(qv, "q")
    M = middle_pairing(R.X, ph, qh, max_depth=max_depth)
    M.provenance = M.provenance.replace("intersection pairing", "relative intersection pairing (restratified)")
    return M


def phi_pairing(Z: StratifiedPseudomanifold, p: Perversity, qv: Perversity, i: int, j: int | None = None,
                max_depth: int | None = None, left_reps: Sequence[dict] | None = None,
                right_reps: Sequence[dict] | None = None, check: bool = True) -> PairingMatrix:
    """Φ(x, y) = x ⋔ ∂y + (−1)^{m−|x|} ∂x ⋔ y on I^{q̄/p̄}H_i × I^{q̄/p̄}H_j, j = m + 1 − i.

    Z must be s-closed (restratify first otherwise).  Default bases are
    the homology representatives; ``left_reps``/``right_reps`` override
    them with any cycles of the quotient complex.
    """
    m = Z.dim
    if j is None:
        j = m + 1 - i
    if i + j != m + 1:
        raise PairingContractError("Φ pairs degrees i and m+1-i")
    if Z.has_boundary:
        raise PairingContractError("phi_pairing needs an s-closed space; restratify first")
    if not p <= qv:
        raise PairingContractError("need p̄ <= q̄")
    C = build_qp_quotient(Z, p, qv)
    L = list(left_reps) if left_reps is not None else C.homology(i).reps
    Rr = list(right_reps) if right_reps is not None else C.homology(j).reps
    if not L or not Rr:
        return PairingMatrix(QMatrix.zeros(len(L), len(Rr)), _prov(Z, p, qv, i, 0, "Phi pairing"), 0)
    limit = max_subdivision() if max_depth is None else max_depth
    sign = (-1) ** (m - i)
    for d, Zd, f in _subdivisions(Z, limit):
        if d:
            _same_strata(Z, Zd)
        Cd = build_qp_quotient(Zd, p, qv) if d else C
        Hj = Cd.homology(j)
        targets = [Hj.classify(f(y)) for y in Rr]
        D = DualComplex(Zd, qv, [p])
        got = rebase(Cd, D, j, targets)
        if got is None:
            continue
        left = [f(x) for x in L]
        dleft = [boundary0(Zd, x) for x in left]
        right = [D.flags(j, v) for v in got]
        dright = [D.boundary_flags(j, v) for v in got]
        rows = []
        for x, dx in zip(left, dleft):
            rows.append([q(intersection_number(Zd, x, dy) + sign * intersection_number(Zd, dx, y))
                         for y, dy in zip(right, dright)])
        M = QMatrix.from_rows(rows, len(right))
        if check and i == j and left_reps is None and right_reps is None:
            if M.T != -M:
                raise ArithmeticError("Φ is not skew-symmetric in the middle degree")
            if M.rank() != M.rows:
                raise ArithmeticError("Φ is singular")
        return PairingMatrix(M, _prov(Z, p, qv, i, d, "Phi pairing"), d)
    raise RebaseError(f"dual-block rebasing failed up to subdivision depth {limit}")


def coning_map(X: StratifiedPseudomanifold, cycles: Sequence[dict]) -> list[dict]:
    """Cone ∂M-chains (original vertex ids of M) into X = cone_off_boundary(M)."""
    from .complex import cone_chain
    return [cone_chain(X, c) for c in cycles]


def perverse_signature(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity,
                       max_depth: int | None = None) -> int:
    from .qlinalg import signature
    if X.has_boundary:
        M = relative_middle_pairing(X, p, qv, max_depth)
    else:
        M = middle_pairing(X, p, qv, max_depth=max_depth)
    return signature(M.form) if M.matrix.rows else 0
