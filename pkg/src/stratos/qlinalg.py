"""Exact linear algebra over the rationals.

Two layers live here.  The dense layer (QMatrix, Subspace, BilinearForm)
handles homology-sized objects and is canonical: subspaces are kept in
reduced column echelon form so equality is a plain comparison.  The
sparse layer (dict vectors, ReducedBasis, ChainHomology) carries the
chain-level work, where matrices have tens of thousands of columns.

Entries are Python ints whenever a value is integral and
``fractions.Fraction`` otherwise; no floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from fractions import Fraction
from typing import Iterable, Sequence

Number = int | Fraction


class DimensionError(ValueError):
    pass


class FormError(ValueError):
    pass


def q(x) -> Number:
    """Coerce to an exact scalar, collapsing integral fractions to int."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction or 'a/b'")
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def qdiv(a: Number, b: Number) -> Number:
    if b == 1:
        return a
    if b == -1:
        return -a
    f = Fraction(a) / b
    return f.numerator if f.denominator == 1 else f


def fmt(x: Number) -> str:
    x = q(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# dense matrices


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entries.length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(q(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionError("column length mismatch")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "QMatrix":
        return QMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        a = self.to_rows()
        bcols = other.columns()
        out = []
        for r in a:
            nz = [(k, x) for k, x in enumerate(r) if x]
            out.append([q(sum(x * c[k] for k, x in nz)) for c in bcols])
        return QMatrix.from_rows(out, other.cols)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return [q(sum(self.entries[i * self.cols + j] * v[j] for j in range(self.cols) if v[j]))
                for i in range(self.rows)]

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return QMatrix(self.rows, self.cols, tuple(q(a + b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = q(c)
        return QMatrix(self.rows, self.cols, tuple(q(c * a) for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return len(rref(self.to_rows(), self.cols)[1])

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for i in range(self.rows):
            lines.append(" ".join(fmt(x) for x in self.row(i)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QMatrix":
        return parse_matrix(text)


class MatrixParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


def parse_matrix(text: str) -> QMatrix:
    """Read the `rows cols` header then row-major `a` or `a/b` entries."""
    tokens: list[tuple[str, int]] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        tokens.extend((t, ln) for t in body.split())
    if len(tokens) < 2:
        raise MatrixParseError("missing 'rows cols' header", 1)
    try:
        r, c = int(tokens[0][0]), int(tokens[1][0])
    except ValueError:
        raise MatrixParseError("header must be two integers", tokens[0][1]) from None
    if r < 0 or c < 0:
        raise MatrixParseError("negative dimension", tokens[0][1])
    body = tokens[2:]
    if len(body) != r * c:
        where = body[-1][1] if body else tokens[1][1]
        raise MatrixParseError(f"expected {r * c} entries, found {len(body)}", where)
    vals = []
    for t, ln in body:
        try:
            vals.append(q(t))
        except (ValueError, ZeroDivisionError):
            raise MatrixParseError(f"bad entry {t!r}", ln) from None
    return QMatrix(r, c, tuple(vals))


def _int_row(r: list) -> list[int]:
    """Row scaled to coprime integers (same span)."""
    den = 1
    for x in r:
        if type(x) is not int and x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    row = [int(x * den) for x in r] if den != 1 else [int(x) for x in r]
    g = math.gcd(*row)
    return [x // g for x in row] if g > 1 else row


def rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns).

    Elimination runs on primitive integer rows; pivots are normalised to 1
    only at the end, so rationals appear once per entry.
    """
    m = [_int_row([q(x) for x in r]) for r in rows]
    piv: list[int] = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        pr = m[r]
        pv = pr[c]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                g = math.gcd(pv, f)
                a, b = pv // g, f // g
                m[i] = _int_row([a * x - b * y for x, y in zip(m[i], pr)])
        piv.append(c)
        r += 1
        if r == len(m):
            break
    out = []
    for row, c in zip(m[:r], piv):
        pv = row[c]
        out.append([qdiv(x, pv) for x in row])
    return out, piv


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of Q^n stored by a basis in reduced column echelon form."""

    __slots__ = ("ambient_dim", "_cols", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionError("vector length differs from ambient dimension")
        rows, piv = rref(vecs, ambient_dim) if vecs else ([], [])
        self.ambient_dim = ambient_dim
        self._cols = tuple(tuple(r) for r in rows)
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [[1 if i == j else 0 for i in range(n)] for j in range(n)])

    @property
    def dim(self) -> int:
        return len(self._cols)

    @property
    def basis(self) -> QMatrix:
        return QMatrix.from_columns(self._cols, self.ambient_dim) if self._cols else QMatrix.zeros(self.ambient_dim, 0)

    def vectors(self) -> list[list]:
        return [list(c) for c in self._cols]

    def coords(self, v: Sequence) -> list:
        """Coordinates of v in the stored basis; raises if v is outside."""
        c = [q(v[p]) for p in self.pivots]
        back = [q(sum(c[k] * b[i] for k, b in enumerate(self._cols))) for i in range(self.ambient_dim)]
        if back != [q(x) for x in v]:
            raise ValueError("vector not in subspace")
        return c

    def contains(self, v: Sequence) -> bool:
        try:
            self.coords(v)
            return True
        except ValueError:
            return False

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self._cols == other._cols)

    def __hash__(self):
        return hash((self.ambient_dim, self._cols))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_same(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("subspaces live in different ambient spaces")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace(a.ambient_dim, a.vectors() + b.vectors())


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    # solve A x = B y through the kernel of [A | -B]
    av, bv = a.vectors(), b.vectors()
    n = a.ambient_dim
    cols = av + [[-x for x in v] for v in bv]
    ker = kernel_vectors(QMatrix.from_columns(cols, n))
    out = []
    for k in ker:
        out.append([q(sum(k[j] * av[j][i] for j in range(len(av)))) for i in range(n)])
    return Subspace(n, out)


def subspace_ops(a: Subspace, b: Subspace) -> tuple[Subspace, Subspace]:
    return subspace_sum(a, b), subspace_intersection(a, b)


def kernel_vectors(m: QMatrix) -> list[list]:
    rows, piv = rref(m.to_rows(), m.cols)
    free = [c for c in range(m.cols) if c not in set(piv)]
    out = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for r, p in zip(rows, piv):
            v[p] = q(-r[f])
        out.append(v)
    return out


def kernel_image(m: QMatrix) -> tuple[Subspace, Subspace, int]:
    ker = Subspace(m.cols, kernel_vectors(m))
    img = Subspace(m.rows, m.columns())
    return ker, img, img.dim


def image(m: QMatrix) -> Subspace:
    return Subspace(m.rows, m.columns())


def kernel(m: QMatrix) -> Subspace:
    return Subspace(m.cols, kernel_vectors(m))


def preimage(m: QMatrix, target: Subspace) -> Subspace:
    """{v : m v in target}."""
    if target.ambient_dim != m.rows:
        raise DimensionError("target lives in the wrong space")
    # v with m v = T y  <=>  kernel of [m | -T]
    t = target.vectors()
    cols = m.columns() + [[-x for x in v] for v in t]
    ker = kernel_vectors(QMatrix.from_columns(cols, m.rows)) if cols else []
    return Subspace(m.cols, [k[:m.cols] for k in ker])


def map_subspace(m: QMatrix, s: Subspace) -> Subspace:
    return Subspace(m.rows, [m.apply(v) for v in s.vectors()])


def solve(m: QMatrix, b: Sequence) -> list | None:
    """Some x with m x = b, or None."""
    aug = [r + [q(b[i])] for i, r in enumerate(m.to_rows())]
    rows, piv = rref(aug, m.cols + 1)
    if m.cols in piv:
        return None
    x = [0] * m.cols
    for r, p in zip(rows, piv):
        x[p] = r[m.cols]
    return x


@dataclass(frozen=True)
class Quotient:
    quotient_dim: int
    projection: QMatrix
    section: QMatrix


def quotient(v_dim: int, u: Subspace) -> Quotient:
    if u.ambient_dim != v_dim:
        raise DimensionError("U does not live in V")
    piv = set(u.pivots)
    rest = [i for i in range(v_dim) if i not in piv]
    uv = u.vectors()
    proj_rows = []
    for i in rest:
        row = []
        for j in range(v_dim):
            # (I - sum_p u_p e_p^T)[i][j]
            val = (1 if i == j else 0)
            if j in piv:
                k = u.pivots.index(j)
                val = q(val - uv[k][i])
            row.append(val)
        proj_rows.append(row)
    proj = QMatrix.from_rows(proj_rows, v_dim) if rest else QMatrix.zeros(0, v_dim)
    sec = QMatrix.from_columns([[1 if r == i else 0 for r in range(v_dim)] for i in rest], v_dim) \
        if rest else QMatrix.zeros(v_dim, 0)
    return Quotient(len(rest), proj, sec)


# ---------------------------------------------------------------------------
# bilinear forms


SYMMETRIC, SKEW, NONE = "symmetric", "skew", "none"


@dataclass(frozen=True)
class BilinearForm:
    matrix: QMatrix
    symmetry: str = NONE

    def __post_init__(self):
        m = self.matrix
        if m.rows != m.cols:
            raise DimensionError("form matrix must be square")
        if self.symmetry == SYMMETRIC and m.T != m:
            raise FormError("matrix is not symmetric")
        if self.symmetry == SKEW and m.T != -m:
            raise FormError("matrix is not skew-symmetric")
        if self.symmetry not in (SYMMETRIC, SKEW, NONE):
            raise FormError(f"unknown symmetry {self.symmetry!r}")

    @classmethod
    def detect(cls, m: QMatrix) -> "BilinearForm":
        if m.T == m:
            return cls(m, SYMMETRIC)
        if m.T == -m:
            return cls(m, SKEW)
        return cls(m, NONE)

    @property
    def size(self) -> int:
        return self.matrix.rows

    def __call__(self, x: Sequence, y: Sequence):
        nz = self.__dict__.get("_nz")
        if nz is None:
            n = self.matrix.cols
            nz = [(k // n, k % n, v) for k, v in enumerate(self.matrix.entries) if v]
            object.__setattr__(self, "_nz", nz)
        return q(sum(v * x[i] * y[j] for i, j, v in nz if x[i] and y[j]))

    def rank(self) -> int:
        return self.matrix.rank()

    def nonsingular(self) -> bool:
        return self.rank() == self.size


def restrict_form(f: BilinearForm, u: Subspace) -> BilinearForm:
    if u.ambient_dim != f.size:
        raise DimensionError("subspace ambient dimension differs from form size")
    b = u.basis
    m = b.T @ f.matrix @ b if u.dim else QMatrix.zeros(0, 0)
    return BilinearForm(m, f.symmetry)


def signature(f: BilinearForm | QMatrix) -> int:
    """Signature by symmetric Gaussian congruence, splitting hyperbolic planes."""
    if isinstance(f, QMatrix):
        f = BilinearForm(f, SYMMETRIC)
    if f.symmetry != SYMMETRIC:
        raise FormError("signature needs a symmetric form")
    return inertia(f.matrix)[0]


def inertia(m: QMatrix) -> tuple[int, int, int]:
    """(signature, positive count, negative count) of a symmetric matrix."""
    a = m.to_rows()
    n = len(a)
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is not None:
            d = a[i][i]
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(i)
            col = [(j, a[j][i]) for j in active if a[j][i] != 0]
            for j, aji in col:
                f = qdiv(aji, d)
                rj = a[j]
                for k in active:
                    if a[i][k]:
                        rj[k] = q(rj[k] - f * a[i][k])
            continue
        pair = next(((j, k) for j in active for k in active if j < k and a[j][k] != 0), None)
        if pair is None:
            break
        j, k = pair
        h = a[j][k]
        pos += 1
        neg += 1
        active.remove(j)
        active.remove(k)
        # Schur complement of the 2x2 block [[0,h],[h,0]]
        rows_j = {r: a[r][j] for r in active}
        rows_k = {r: a[r][k] for r in active}
        for r in active:
            if not rows_j[r] and not rows_k[r]:
                continue
            for s in active:
                delta = rows_j[r] * a[k][s] + rows_k[r] * a[j][s]
                if delta:
                    a[r][s] = q(a[r][s] - qdiv(delta, h))
    return pos - neg, pos, neg


# ---------------------------------------------------------------------------
# sparse vectors


def axpy(y: dict, a: Number, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    if not a:
        return
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            if type(s) is Fraction and s.denominator == 1:
                s = s.numerator
            y[k] = s
        else:
            y.pop(k, None)


def sv_scale(x: dict, a: Number) -> dict:
    return {k: q(a * v) for k, v in x.items()} if a else {}


def sv_add(*vs: dict) -> dict:
    out: dict = {}
    for v in vs:
        axpy(out, 1, v)
    return out


def sv_combine(terms: Iterable[tuple[Number, dict]]) -> dict:
    out: dict = {}
    for c, v in terms:
        axpy(out, c, v)
    return out


def _pick_pivot(v: dict, allowed=None):
    best = None
    for k, x in v.items():
        if allowed is not None and k not in allowed:
            continue
        unit = x == 1 or x == -1
        key = (0 if unit else 1, k)
        if best is None or key < best[0]:
            best = (key, k)
    return None if best is None else best[1]


class ReducedBasis:
    """Sparse reduced column echelon basis.

    Every stored vector has coefficient 1 at its pivot and 0 at every
    other pivot, so the coordinates of a member are its pivot entries.
    Optional labels ride along with each vector through the elimination;
    ``label(v)`` is then the matching combination of input labels.
    """

    def __init__(self, track_labels: bool = False):
        self.vec: dict = {}
        self.occ: dict = {}
        self.labels: dict | None = {} if track_labels else None
        self.order: list = []

    def __len__(self):
        return len(self.vec)

    def reduce(self, v: dict, label: dict | None = None) -> tuple[dict, dict | None]:
        r = dict(v)
        lab = dict(label) if label is not None else None
        for p in [k for k in v if k in self.vec]:
            c = r.get(p, 0)
            if c:
                axpy(r, -c, self.vec[p])
                if lab is not None:
                    axpy(lab, -c, self.labels[p])
        return r, lab

    def add(self, v: dict, label: dict | None = None, allowed=None):
        r, lab = self.reduce(v, label)
        if not r:
            return None
        p = _pick_pivot(r, allowed)
        if p is None:
            raise ValueError("no admissible pivot for a new basis vector")
        c = r[p]
        if c != 1:
            inv = qdiv(1, c)
            r = sv_scale(r, inv)
            if lab is not None:
                lab = sv_scale(lab, inv)
        # back-eliminate p from earlier vectors
        for other in list(self.occ.get(p, ())):
            b = self.vec[other]
            f = b.get(p, 0)
            if not f:
                continue
            before = set(b)
            axpy(b, -f, r)
            if self.labels is not None:
                axpy(self.labels[other], -f, lab)
            after = set(b)
            for k in before - after:
                s = self.occ.get(k)
                if s is not None:
                    s.discard(other)
            for k in after - before:
                self.occ.setdefault(k, set()).add(other)
        self.vec[p] = r
        if self.labels is not None:
            self.labels[p] = lab if lab is not None else {}
        for k in r:
            if k != p:
                self.occ.setdefault(k, set()).add(p)
        self.order.append(p)
        return p

    def coords(self, v: dict, check: bool = True) -> dict:
        c = {p: v[p] for p in v if p in self.vec}
        if check:
            back = sv_combine((x, self.vec[p]) for p, x in c.items())
            if back != {k: x for k, x in v.items() if x}:
                raise ValueError("vector not in span")
        return c

    def contains(self, v: dict) -> bool:
        r, _ = self.reduce(v)
        return not r


def sparse_kernel(columns: Sequence[dict], ncols: int | None = None) -> list[tuple[int, dict]]:
    """Reduced kernel basis of the matrix whose j-th column is columns[j].

    Returns (pivot, vector) pairs; each vector has 1 at its pivot (a free
    column) and 0 at every other free column.
    """
    if ncols is None:
        ncols = len(columns)
    rows: dict = {}
    for j, col in enumerate(columns):
        for r, x in col.items():
            rows.setdefault(r, {})[j] = x
    rb = ReducedBasis()
    for r in sorted(rows):
        rb.add(rows[r])
    out = []
    for f in range(ncols):
        if f in rb.vec:
            continue
        v = {f: 1}
        for p in rb.occ.get(f, ()):
            x = rb.vec[p].get(f, 0)
            if x:
                v[p] = -x
        out.append((f, v))
    return out


# ---------------------------------------------------------------------------
# homology of a sparse chain complex


class NotACycle(ValueError):
    pass


class ChainHomology:
    """Homology of a chain complex given by sparse boundary matrices.

    ``bd[i]`` lists the columns of the boundary C_i -> C_{i-1} (i >= 1),
    each a dict row -> value.  The reduction is the standard triangular
    column reduction with "low" = largest row index, processed from the
    top degree down so paired columns are cleared instead of reduced.
    Every cycle basis vector then has a distinct low, which makes class
    coordinates a back-substitution.
    """

    def __init__(self, dims: Sequence[int], bd: dict, lowest: int = 0):
        self.dims = list(dims)
        self.top = len(dims) - 1
        self.bd = bd
        self.lowest = lowest
        self.bnd_low: dict = {}   # degree -> {low: reduced boundary column}
        self.ess: dict = {}       # degree -> [(low, cycle)]
        self._done: set = set()
        self._compute()

    def _reduce_degree(self, i: int):
        cols = self.bd.get(i, [])
        cleared = self.bnd_low.get(i, {})
        pivot_of: dict = {}
        red: dict = {}
        vv: dict = {}
        ess = []
        for j in range(self.dims[i]):
            if j in cleared:
                continue
            col = dict(cols[j]) if i >= 1 and j < len(cols) else {}
            v = {j: 1}
            while col:
                low = max(col)
                k = pivot_of.get(low)
                if k is None:
                    break
                r = red[k]
                c = qdiv(col[low], r[low])
                axpy(col, -c, r)
                axpy(v, -c, vv[k])
            if col:
                low = max(col)
                pivot_of[low] = j
                red[j] = col
                vv[j] = v
            else:
                ess.append((j, v))
        self.ess[i] = ess
        if i >= 1:
            self.bnd_low[i - 1] = {low: red[j] for low, j in pivot_of.items()}
        self._done.add(i)

    def _compute(self):
        for i in range(self.top, self.lowest - 1, -1):
            self._reduce_degree(i)
        self._index = {i: {low: k for k, (low, _) in enumerate(self.ess[i])} for i in self.ess}

    def betti(self, i: int) -> int:
        if i < 0 or i > self.top:
            return 0
        return len(self.ess[i])

    def reps(self, i: int) -> list[dict]:
        if i < 0 or i > self.top:
            return []
        return [v for _, v in self.ess[i]]

    def classify(self, i: int, z: dict) -> list:
        """Coordinates of the class of cycle z in the basis ``reps(i)``."""
        if i < 0 or i > self.top:
            if z:
                raise NotACycle("degree out of range")
            return []
        out = [0] * self.betti(i)
        z = dict(z)
        bl = self.bnd_low.get(i, {})
        idx = self._index[i]
        ess = self.ess[i]
        while z:
            low = max(z)
            r = bl.get(low)
            if r is not None:
                axpy(z, -qdiv(z[low], r[low]), r)
                continue
            k = idx.get(low)
            if k is None:
                raise NotACycle(f"not a cycle in degree {i} (stuck at index {low})")
            _, v = ess[k]
            c = qdiv(z[low], v[low])
            out[k] = q(out[k] + c)
            axpy(z, -c, v)
        return out

    def is_boundary(self, i: int, z: dict) -> bool:
        try:
            return not any(self.classify(i, z))
        except NotACycle:
            return False
