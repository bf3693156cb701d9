"""The ``stratos`` command.

Exit status: 0 success, 1 validation error (bad options, invalid space,
inputs that break a contract), 2 a theorem check or computation failed,
3 a file could not be parsed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog
from .complex import ComplexError, Perversity, StratifiedPseudomanifold, barycentric_subdivide, decomposition, validate
from .ichain import IncompatibleError, PerversityOrderError, build_complex, build_qp_quotient, ordinary_homology
from .pairing import GeneralPositionError, PairingContractError, RebaseError, middle_pairing, \
    relative_middle_pairing
from .qlinalg import (BilinearForm, DimensionError, FormError, MatrixParseError, QMatrix, SKEW, Subspace,
                      parse_matrix, signature)
from .signatures import (IsotropyError, MaslovInternalError, MaslovProblem, maslov_data, verify_wall,
                         verify_wall_boundary)
from .ssp import (PerversityFileError, SspContentError, SspParseError, emit_ssp, read_ssp, resolve_perversity)

OK, INVALID, THEOREM, PARSE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(INVALID, f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# inputs


def _load(path: str, subdivide: int = 0, check: bool = True) -> StratifiedPseudomanifold:
    if not Path(path).is_file():
        raise CliError(PARSE, f"{path}: no such file")
    X = read_ssp(path)
    if check:
        rep = validate(X)
        if not rep.ok:
            bad = rep.failures()
            raise CliError(INVALID, f"{path}: invalid space\n" + "\n".join(c.line() for c in bad))
    for _ in range(subdivide):
        X, _m = barycentric_subdivide(X)
    return X


def _matrix(path: str) -> QMatrix:
    if not Path(path).is_file():
        raise CliError(PARSE, f"{path}: no such file")
    try:
        return parse_matrix(Path(path).read_text(encoding="utf-8"))
    except MatrixParseError as e:
        raise CliError(PARSE, f"{path}:{e}") from None


def _perv(spec: str | None, X: StratifiedPseudomanifold, default: str):
    return resolve_perversity(spec if spec is not None else default, X)


def _head(X: StratifiedPseudomanifold, path: str) -> list[str]:
    return [f"space = {X.note or Path(path).name}", f"dim = {X.dim}"]


def _strata_line(X: StratifiedPseudomanifold, name: str, p) -> str:
    return f"{name} = {p.label()} [" + " ".join(f"{s.id}:{v}" for s, v in zip(X.strata, p.values)) + "]"


# ---------------------------------------------------------------------------
# verbs


def cmd_homology(a) -> tuple[int, str]:
    X = _load(a.file, a.subdivide)
    b = ordinary_homology(X.forget_strata())
    out = _head(X, a.file) + [f"betti = {' '.join(map(str, b))}", f"euler = {X.euler()}"]
    if a.degree is not None:
        H = build_complex(X.forget_strata(), Perversity(())).homology(a.degree)
        out.append(H.report().rstrip("\n"))
    return OK, "\n".join(out) + "\n"


def cmd_ih(a) -> tuple[int, str]:
    X = _load(a.file, a.subdivide)
    if a.p is None:
        raise CliError(INVALID, "ih: --p is required")
    p = _perv(a.p, X, "zero")
    out = _head(X, a.file) + [_strata_line(X, "p", p)]
    if a.q is not None:
        qv = _perv(a.q, X, "top")
        out.append(_strata_line(X, "q", qv))
        C = build_qp_quotient(X, p, qv)
    else:
        C = build_complex(X, p)
    out.append(f"betti = {' '.join(map(str, C.betti()))}")
    if a.degree is not None:
        out.append(C.homology(a.degree).report().rstrip("\n"))
    return OK, "\n".join(out) + "\n"


def cmd_signature(a) -> tuple[int, str]:
    X = _load(a.file, a.subdivide)
    if X.dim % 4:
        raise CliError(INVALID, f"signature: dimension {X.dim} is not divisible by 4")
    p, qv = _perv(a.p, X, "zero"), _perv(a.q, X, "top")
    M = relative_middle_pairing(X, p, qv) if X.has_boundary else middle_pairing(X, p, qv)
    sig = signature(M.form) if M.matrix.rows else 0
    out = _head(X, a.file) + [_strata_line(X, "p", p), _strata_line(X, "q", qv), f"sigma = {sig}",
                              f"rank = {M.matrix.rows}", f"subdivision_depth = {M.depth}",
                              "[pairing]", M.to_text().rstrip("\n")]
    return OK, "\n".join(out) + "\n"


def cmd_maslov(a) -> tuple[int, str]:
    F = _matrix(a.form)
    subs = [_matrix(x) for x in (a.A, a.B, a.C)]
    if F.rows != F.cols:
        raise CliError(INVALID, f"{a.form}: form matrix is {F.rows}x{F.cols}, not square")
    n = F.rows
    spaces = []
    for name, path, M in zip("ABC", (a.A, a.B, a.C), subs):
        if M.rows != n:
            raise CliError(INVALID, f"{path}: {name} has {M.rows} rows; its columns must lie in Q^{n}")
        spaces.append(Subspace(n, [list(M.col(j)) for j in range(M.cols)]))
    try:
        P = MaslovProblem(n, BilinearForm(F, SKEW), *spaces)
    except (FormError, IsotropyError, ValueError) as e:
        raise CliError(INVALID, f"maslov: {e}") from None
    res = maslov_data(P)
    out = [f"dim_V = {n}", f"dim_A = {P.A.dim}", f"dim_B = {P.B.dim}", f"dim_C = {P.C.dim}",
           f"dim_W = {res.W_dim}", f"index = {res.index}", "[psi]", res.psi.to_text().rstrip("\n")]
    return OK, "\n".join(out) + "\n"


def _wall(a, boundary: bool) -> tuple[int, str]:
    X = _load(a.file, a.subdivide)
    if X.dim % 4:
        raise CliError(INVALID, f"dimension {X.dim} is not divisible by 4")
    if not X.parts:
        raise CliError(INVALID, f"{a.file}: no facet carries a part label; nothing to split")
    if X.has_boundary and not boundary:
        raise CliError(INVALID, f"{a.file}: space has boundary; use wall-verify-boundary")
    p, qv = _perv(a.p, X, "zero"), _perv(a.q, X, "top")
    rep = verify_wall_boundary(X, p, qv) if boundary else verify_wall(decomposition(X), p, qv)
    if not rep.label:
        rep.label = Path(a.file).name
    text = rep.text().replace("\n", f"\n{_strata_line(X, 'p', p)}\n{_strata_line(X, 'q', qv)}\n", 1)
    return (OK if rep.ok else THEOREM), text


def cmd_wall(a):
    return _wall(a, False)


def cmd_wall_boundary(a):
    return _wall(a, True)


def cmd_make(a) -> tuple[int, str]:
    text = " ".join(a.spec)

    def loader(name):
        if Path(name).is_file():
            return read_ssp(name)
        raise catalog.SpecError(f"unknown example or missing file {name!r}; known examples: "
                                + ", ".join(catalog.EXAMPLES))

    try:
        X = catalog.make(text, loader)
    except catalog.SpecError as e:
        raise CliError(INVALID, f"make: {e}") from None
    for _ in range(a.subdivide):
        X, _m = barycentric_subdivide(X)
    rep = validate(X)
    if not rep.ok:
        raise CliError(INVALID, "make: generated space fails validation\n" + rep.text())
    return OK, emit_ssp(X)


def cmd_info(a) -> tuple[int, str]:
    X = _load(a.file, a.subdivide, check=False)
    rep = validate(X)
    out = _head(X, a.file) + [f"f_vector = {' '.join(map(str, X.complex.f_vector()))}", f"euler = {X.euler()}",
                              f"boundary_faces = {len(X.boundary)}"]
    if X.parts:
        n1 = sum(1 for v in X.parts.values() if v == 1)
        out.append(f"parts = {n1} {len(X.parts) - n1}")
    out.append(f"strata = {len(X.strata)}")
    for s in X.strata:
        out.append(f"stratum {s.id} level {s.level} codim {s.codim} simplices {len(s.simplices)} "
                   f"first {' '.join(map(str, s.simplices[0]))}")
    out.append(f"valid = {'yes' if rep.ok else 'no'}")
    out += [c.line() for c in rep.checks]
    return (OK if rep.ok else INVALID), "\n".join(out) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stratos", description="Intersection homology, perverse signatures and Wall's "
                                             "non-additivity check on triangulated stratified spaces.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, perv: bool):
        sp.add_argument("--subdivide", type=int, default=0, metavar="K",
                        help="apply K barycentric subdivisions first")
        sp.add_argument("--report", metavar="PATH", help="also write the report to PATH")
        if perv:
            sp.add_argument("--p", help="perversity: zero|top|lower-middle|upper-middle, an integer, or a file")
            sp.add_argument("--q", help="second perversity, same forms as --p")

    sp = sub.add_parser("homology", help="rational Betti numbers")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int)
    common(sp, False)
    sp.set_defaults(run=cmd_homology)

    sp = sub.add_parser("ih", help="intersection homology (I^q/p with --q)")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int)
    common(sp, True)
    sp.set_defaults(run=cmd_ih)

    sp = sub.add_parser("signature", help="perverse signature (defaults --p zero --q top)")
    sp.add_argument("file")
    common(sp, True)
    sp.set_defaults(run=cmd_signature)

    sp = sub.add_parser("maslov", help="Maslov triple index from matrix files")
    for name in ("form", "A", "B", "C"):
        sp.add_argument(name)
    sp.add_argument("--report", metavar="PATH")
    sp.set_defaults(run=cmd_maslov, subdivide=0)

    for verb, fn, what in (("wall-verify", cmd_wall, "closed split space"),
                           ("wall-verify-boundary", cmd_wall_boundary, "split space with boundary")):
        sp = sub.add_parser(verb, help=f"check the signature non-additivity formula on a {what}")
        sp.add_argument("file")
        common(sp, True)
        sp.set_defaults(run=fn)

    sp = sub.add_parser("make", help="emit a catalog space as .ssp (" + "; ".join(catalog.EXAMPLES) + ")")
    sp.add_argument("spec", nargs="+")
    sp.add_argument("-o", "--output", metavar="PATH")
    common(sp, False)
    sp.set_defaults(run=cmd_make)

    sp = sub.add_parser("info", help="summary, strata and validation checks")
    sp.add_argument("file")
    common(sp, False)
    sp.set_defaults(run=cmd_info)
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        if getattr(a, "subdivide", 0) < 0:
            raise CliError(INVALID, "--subdivide must be nonnegative")
        code, text = a.run(a)
    except CliError as e:
        print(str(e), file=err)
        return e.code
    except (SspParseError, MatrixParseError) as e:
        print(f"parse error: {e}", file=err)
        return PARSE
    except (SspContentError, PerversityFileError, ComplexError, PerversityOrderError, IncompatibleError,
            PairingContractError, DimensionError, FormError) as e:
        print(f"error: {e}", file=err)
        return INVALID
    except (GeneralPositionError, RebaseError, MaslovInternalError, IsotropyError) as e:
        print(f"computation failed: {e}", file=err)
        return THEOREM
    dest = getattr(a, "output", None)
    if dest:
        Path(dest).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    if a.report:
        Path(a.report).write_text(text, encoding="utf-8")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
