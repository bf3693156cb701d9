"""Perverse signatures, the Maslov triple index and the wall verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complex import (ComplexError, Decomposition, Perversity, StratifiedPseudomanifold, decomposition,
                      restratify_boundary)
from .ichain import IntersectionComplex, boundary0, build_complex, build_qp_quotient, normalize_support
from .pairing import middle_pairing, phi_pairing, relative_middle_pairing
from .qlinalg import (BilinearForm, QMatrix, SKEW, SYMMETRIC, Subspace, fmt, kernel, q, signature, solve,
                      subspace_intersection, subspace_sum)


class IsotropyError(ArithmeticError):
    """A subspace that must be Φ-isotropic is not."""


class MaslovInternalError(ArithmeticError):
    pass


@dataclass
class MaslovProblem:
    V_dim: int
    phi: BilinearForm
    A: Subspace
    B: Subspace
    C: Subspace

    def __post_init__(self):
        if self.phi.size != self.V_dim:
            raise ValueError("form size differs from V_dim")
        if self.phi.matrix.T != -self.phi.matrix:
            raise ValueError("Φ must be skew-symmetric")
        for name, U in (("A", self.A), ("B", self.B), ("C", self.C)):
            if U.ambient_dim != self.V_dim:
                raise ValueError(f"{name} does not live in V")
            vs = U.vectors()
            if any(self.phi(u, w) for k, u in enumerate(vs) for w in vs[k + 1:]):
                raise IsotropyError(f"Φ does not vanish on {name} × {name}")


def _span_complement(big: Subspace, small: Subspace) -> list[list]:
    """Vectors of ``big`` extending a basis of ``small`` (small ⊆ big)."""
    chosen: list = []
    cur = small
    for v in big.vectors():
        if not cur.contains(v):
            chosen.append(v)
            cur = subspace_sum(cur, Subspace(big.ambient_dim, [v]))
    return chosen


def _split(P: MaslovProblem, a: Sequence) -> tuple[list, list]:
    """b ∈ B, c ∈ C with a + b + c = 0 (first echelon solution)."""
    n = P.V_dim
    bv, cv = P.B.vectors(), P.C.vectors()
    M = QMatrix.from_columns(bv + cv, n)
    lam = solve(M, [-x for x in a]) if (bv or cv) else None
    if lam is None:
        raise MaslovInternalError("element of A ∩ (B + C) does not split")
    b = [q(sum(lam[j] * bv[j][i] for j in range(len(bv)))) for i in range(n)]
    c = [q(sum(lam[len(bv) + j] * cv[j][i] for j in range(len(cv)))) for i in range(n)]
    return b, c


@dataclass
class MaslovResult:
    index: int
    W_dim: int
    psi: QMatrix


def maslov_data(P: MaslovProblem, check: bool = True) -> MaslovResult:
    A, B, C = P.A, P.B, P.C
    top = subspace_intersection(A, subspace_sum(B, C))
    low = subspace_sum(subspace_intersection(A, B), subspace_intersection(A, C))
    ws = _span_complement(top, low)
    if not ws:
        return MaslovResult(0, 0, QMatrix.zeros(0, 0))
    f = P.phi
    parts = [(a,) + _split(P, a) for a in ws]
    rows = [[f(a, bb) for (_, bb, _) in parts] for (a, _, _) in parts]
    psi = QMatrix.from_rows(rows, len(ws))
    if check:
        for a, b, c in parts:
            for a2, b2, c2 in parts:
                six = [f(a, b2), f(b, c2), f(c, a2), -f(b, a2), -f(c, b2), -f(a, c2)]
                if len(set(six)) != 1:
                    raise MaslovInternalError(f"six-fold identity fails: {six}")
        if psi.T != psi:
            raise MaslovInternalError("Ψ is not symmetric")
    return MaslovResult(signature(BilinearForm(psi, SYMMETRIC)), len(ws), psi)


def maslov_index(P: MaslovProblem) -> int:
    """Wall's σ(V; A, B, C): signature of Ψ([a],[a']) = Φ(a, b') on W."""
    return maslov_data(P).index


# ---------------------------------------------------------------------------
# perverse signatures


def perverse_signature(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity,
                       max_depth: int | None = None) -> int:
    """σ_{p̄→q̄}(X), or σ_{p̄↠q̄}(X) when X has boundary."""
    if X.dim % 4:
        raise ValueError("perverse signatures need dimension divisible by 4")
    M = relative_middle_pairing(X, p, qv, max_depth) if X.has_boundary else \
        middle_pairing(X, p, qv, max_depth=max_depth)
    return signature(M.form) if M.matrix.rows else 0


def restrict_perversity(X: StratifiedPseudomanifold, Y: StratifiedPseudomanifold, p: Perversity) -> Perversity:
    """Perversity on Y's strata induced from X (Y built from simplices of X, same ids)."""
    vals = []
    for st in Y.strata:
        sid = X.stratum_of(st.simplices[0])
        if sid is None:
            raise ComplexError(f"stratum {st.id} of the subspace is regular in the ambient space")
        vals.append(p[sid])
    return Perversity(tuple(vals), p.name)


def interface_space(D: Decomposition) -> StratifiedPseudomanifold:
    """Z as a pseudomanifold of its own: same simplices, levels shifted down by one."""
    X = D.X
    n = X.dim
    Z = StratifiedPseudomanifold(n - 1, dict(D.Z_orientation), n_vertices=X.complex.n_vertices, note="interface")
    lv = {}
    for d in range(n):
        for s in Z.simplices(d):
            L = X.level(s)
            if L < n:
                lv[s] = L - 1
    return Z.replace(levels=lv)


def piece_space(D: Decomposition, i: int) -> StratifiedPseudomanifold:
    Y = D.X.sub(D.piece(i))
    Y.note = f"piece {i}"
    return Y


# ---------------------------------------------------------------------------
# wall defect


@dataclass
class WallDefect:
    problem: MaslovProblem
    index: int
    W_dim: int
    Z: StratifiedPseudomanifold
    reps: list
    p: Perversity
    q: Perversity


def _kernel_of_classes(cols: list, target_dim: int, n: int) -> Subspace:
    if n == 0:
        return Subspace.zero(0)
    if target_dim == 0:
        return Subspace.full(n)
    return kernel(QMatrix.from_columns(cols, target_dim))


def wall_defect(D: Decomposition, p: Perversity, qv: Perversity, max_depth: int | None = None) -> WallDefect:
    X = D.X
    n = X.dim
    if n % 4:
        raise ValueError("the wall defect needs dimension divisible by 4")
    k = n // 2
    Z = interface_space(D)
    pz, qz = restrict_perversity(X, Z, p), restrict_perversity(X, Z, qv)
    HZ = build_qp_quotient(Z, pz, qz).homology(k)
    reps = HZ.reps
    V = len(reps)
    if V == 0:
        P = MaslovProblem(0, BilinearForm(QMatrix.zeros(0, 0), SKEW), Subspace.zero(0), Subspace.zero(0),
                          Subspace.zero(0))
        return WallDefect(P, 0, 0, Z, [], pz, qz)
    phi = phi_pairing(Z, pz, qz, k, max_depth=max_depth).matrix
    kers = []
    for part in (1, 2):
        sup = normalize_support(X, D.piece(part))
        H = build_qp_quotient(X, p, qv, support=sup).homology(k)
        kers.append(_kernel_of_classes([H.classify(z) for z in reps], H.dim, V))
    Hd = build_complex(Z, pz).homology(k - 1)
    B = _kernel_of_classes([Hd.classify(boundary0(Z, z)) for z in reps], Hd.dim, V)
    P = MaslovProblem(V, BilinearForm(phi, SKEW), kers[0], B, kers[1])
    res = maslov_data(P)
    return WallDefect(P, res.index, res.W_dim, Z, reps, pz, qz)


# ---------------------------------------------------------------------------
# verifier


@dataclass
class WallReport:
    sigma_X: int
    sigma_Y1: int
    sigma_Y2: int
    maslov: int
    dims: dict
    S_dim: int
    S_perp_dim: int
    label: str = ""
    notes: list = field(default_factory=list)

    @property
    def residual(self) -> int:
        return self.sigma_X - (self.sigma_Y1 + self.sigma_Y2 + self.maslov)

    @property
    def consistent(self) -> bool:
        return self.dims["W"] == self.S_perp_dim - self.S_dim

    @property
    def ok(self) -> bool:
        return self.residual == 0 and self.consistent

    def text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"space = {self.label}")
        lines += [f"sigma_X = {self.sigma_X}", f"sigma_Y1 = {self.sigma_Y1}", f"sigma_Y2 = {self.sigma_Y2}",
                  f"maslov = {self.maslov}"]
        for key in ("V", "A", "B", "C", "W"):
            lines.append(f"dim_{key} = {self.dims[key]}")
        lines += [f"dim_S = {self.S_dim}", f"dim_S_perp = {self.S_perp_dim}",
                  f"residual = {self.residual}",
                  f"dims_consistent = {'yes' if self.consistent else 'no'}"]
        lines += [f"note = {s}" for s in self.notes]
        return "\n".join(lines) + "\n"


def _image_subspace(classes: list, dim: int) -> Subspace:
    return Subspace(dim, [c for c in classes if any(c)])


def verify_wall(D: Decomposition, p: Perversity, qv: Perversity, max_depth: int | None = None) -> WallReport:
    """All terms of σ(X) = σ(Y1) + σ(Y2) + σ(V; A, B, C), computed separately."""
    X = D.X
    if X.has_boundary:
        raise ValueError("X has boundary; use verify_wall_boundary")
    n = X.dim
    k = n // 2
    sx = perverse_signature(X, p, qv, max_depth)
    sy = []
    for part in (1, 2):
        Y = piece_space(D, part)
        sy.append(perverse_signature(Y, restrict_perversity(X, Y, p), restrict_perversity(X, Y, qv), max_depth))
    wd = wall_defect(D, p, qv, max_depth)
    P = wd.problem
    # diagnostics inside I^q̄H_k(X)
    Hq = build_complex(X, qv).homology(k)
    Hp = build_complex(X, p).homology(k)
    d = Hq.dim
    im_pq = _image_subspace([Hq.classify(z) for z in Hp.reps], d)
    Zq = build_complex(wd.Z, wd.q).homology(k)
    im_z = _image_subspace([Hq.classify(z) for z in Zq.reps], d)
    im_y = []
    for part in (1, 2):
        sup = normalize_support(X, D.piece(part))
        Hy = build_complex(X, p, support=sup).homology(k)
        im_y += [Hq.classify(z) for z in Hy.reps]
    im_y = _image_subspace(im_y, d)
    s_perp = subspace_intersection(im_pq, im_z)
    s = subspace_intersection(im_y, im_z)
    dims = {"V": P.V_dim, "A": P.A.dim, "B": P.B.dim, "C": P.C.dim, "W": wd.W_dim}
    return WallReport(sx, sy[0], sy[1], wd.index, dims, s.dim, s_perp.dim, X.note)


def verify_wall_boundary(X: StratifiedPseudomanifold, p: Perversity, qv: Perversity,
                         max_depth: int | None = None) -> WallReport:
    """Wall's formula for a decomposed ∂-pseudomanifold, run on the restratified space."""
    if not X.has_boundary:
        return verify_wall(decomposition(X), p, qv, max_depth)
    R = restratify_boundary(X)
    ph, qh = R.lift(p, "p"), R.lift(qv, "q")
    rep = verify_wall(decomposition(R.X), ph, qh, max_depth)
    rep.label = X.note
    rep.notes.append("computed on the restratified space" + (" after one subdivision" if R.subdivided else ""))
    return rep
