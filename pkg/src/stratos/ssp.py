"""Reading and writing ``.ssp`` space files and perversity files.

An ``.ssp`` file is line oriented; ``#`` starts a comment::

    # optional note (first comment line before ``dim``)
    dim 2
    facet 0 1 2 orient 1 part 1
    skeleton 0 3
    boundary 1 2
    collar 1 7
    bicollar 4 5 6

``emit`` writes a canonical form: sorted facets with their sign relative
to ascending vertex order, skeleton lines only for simplices that are
maximal in their skeleton, then boundary, collar and bicollar lines.
Parsing the emitted text and emitting again reproduces it byte for byte.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

from .complex import (NAMED_PERVERSITIES, Perversity, StratifiedPseudomanifold, all_faces, perversity,
                      perversity_from_values)


class SspParseError(ValueError):
    """Malformed file.  ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, msg: str, line: int | None = None, source: str = ""):
        where = f"{source}:" if source else ""
        where += f"{line}: " if line is not None else (" " if source else "")
        super().__init__(where + msg)
        self.line = line


class SspContentError(ValueError):
    """Well-formed file whose declarations do not describe a complex."""


class PerversityFileError(ValueError):
    pass


def _ints(tokens: list[str], ln: int, src: str) -> list[int]:
    try:
        out = [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("-").isdigit())
        raise SspParseError(f"expected an integer, got {bad!r}", ln, src) from None
    if any(v < 0 for v in out):
        raise SspParseError("vertex ids must be nonnegative", ln, src)
    return out


def parse_ssp(text: str, source: str = "") -> StratifiedPseudomanifold:
    dim = None
    note = None
    facets: dict = {}
    parts: dict = {}
    skel: list = []
    bnd: list = []
    collar: list = []
    bicollar: list = []
    lines_of: dict = {}
    seen_content = False
    for ln, raw in enumerate(text.splitlines(), 1):
        if "#" in raw:
            body, comment = raw.split("#", 1)
            if not seen_content and note is None and not body.strip():
                note = comment.strip()
        else:
            body = raw
        tok = body.split()
        if not tok:
            continue
        seen_content = True
        key, rest = tok[0], tok[1:]
        if key == "dim":
            if dim is not None:
                raise SspParseError("second 'dim' line", ln, source)
            if len(rest) != 1:
                raise SspParseError("'dim' takes one integer", ln, source)
            dim = _ints(rest, ln, source)[0]
            continue
        if dim is None:
            raise SspParseError(f"'{key}' before 'dim'", ln, source)
        if key == "facet":
            if "orient" not in rest:
                raise SspParseError("facet line needs 'orient ±1'", ln, source)
            k = rest.index("orient")
            verts = _ints(rest[:k], ln, source)
            tail = rest[k + 1:]
            if not tail or tail[0] not in ("1", "-1", "+1"):
                raise SspParseError("orient must be 1 or -1", ln, source)
            sign = -1 if tail[0] == "-1" else 1
            part = None
            if len(tail) > 1:
                if tail[1] != "part" or len(tail) != 3 or tail[2] not in ("1", "2"):
                    raise SspParseError("expected 'part 1' or 'part 2' after the orientation", ln, source)
                part = int(tail[2])
            if len(verts) != dim + 1:
                raise SspParseError(f"facet has {len(verts)} vertices, expected {dim + 1}", ln, source)
            if len(set(verts)) != len(verts):
                raise SspParseError("repeated vertex in facet", ln, source)
            key_s = tuple(sorted(verts))
            if key_s in lines_of:
                raise SspParseError(f"facet {list(key_s)} repeats line {lines_of[key_s]}", ln, source)
            lines_of[key_s] = ln
            facets[tuple(verts)] = sign
            if part is not None:
                parts[key_s] = part
        elif key == "skeleton":
            if len(rest) < 2:
                raise SspParseError("skeleton line needs a level and at least one vertex", ln, source)
            try:
                k = int(rest[0])
            except ValueError:
                raise SspParseError(f"skeleton level must be an integer, got {rest[0]!r}", ln, source) from None
            verts = _ints(rest[1:], ln, source)
            if len(set(verts)) != len(verts):
                raise SspParseError("repeated vertex in skeleton simplex", ln, source)
            if not 0 <= k < dim:
                raise SspParseError(f"skeleton level {k} outside 0..{dim - 1}", ln, source)
            if len(verts) - 1 > k:
                raise SspParseError(f"simplex {sorted(verts)} has dimension {len(verts) - 1} "
                                    f"but is declared in skeleton {k}", ln, source)
            skel.append((k, tuple(sorted(verts)), ln))
        elif key == "boundary":
            verts = _ints(rest, ln, source)
            if len(verts) != dim:
                raise SspParseError(f"boundary face has {len(verts)} vertices, expected {dim}", ln, source)
            bnd.append((tuple(sorted(verts)), ln))
        elif key == "collar":
            if len(rest) != 2:
                raise SspParseError("collar line is 'collar v w'", ln, source)
            collar.append(tuple(_ints(rest, ln, source)))
        elif key == "bicollar":
            if len(rest) != 3:
                raise SspParseError("bicollar line is 'bicollar z lo hi'", ln, source)
            bicollar.append(tuple(_ints(rest, ln, source)))
        else:
            raise SspParseError(f"unknown keyword {key!r}", ln, source)
    if dim is None:
        raise SspParseError("no 'dim' line", None, source)
    if not facets:
        raise SspParseError("no facets", None, source)
    if parts and len(parts) != len(facets):
        missing = next(tuple(sorted(f)) for f in facets if tuple(sorted(f)) not in parts)
        raise SspContentError(f"facet {list(missing)} (line {lines_of[missing]}) has no part label "
                              f"while others do")

    faces = set()
    for f in facets:
        faces.update(all_faces(tuple(sorted(f))))
    for k, s, ln in skel:
        if s not in faces:
            miss = _first_missing(s, faces)
            raise SspContentError(f"line {ln}: skeleton simplex {list(s)} is not a face of any facet "
                                  f"(face {list(miss)} is missing)")
    for b, ln in bnd:
        if b not in faces:
            raise SspContentError(f"line {ln}: boundary face {list(b)} is not a face of any facet")
    return StratifiedPseudomanifold.from_skeleta(
        dim, facets, [(k, s) for k, s, _ in skel], boundary=[b for b, _ in bnd], collar=collar,
        bicollar=bicollar, parts=parts or None, note=note or "")


def _first_missing(s: tuple, faces: set) -> tuple:
    """Smallest face of s absent from ``faces``."""
    for f in sorted(all_faces(s), key=lambda t: (len(t), t)):
        if f not in faces:
            return f
    return s


def read_ssp(path: str | Path) -> StratifiedPseudomanifold:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise SspParseError(f"not UTF-8 ({e.reason})", None, str(p)) from None
    return parse_ssp(text, str(p))


def _skeleton_lines(X: StratifiedPseudomanifold) -> list[tuple[int, tuple]]:
    """Simplices that are maximal among those of level <= their own level."""
    lv = X.singular_levels()
    up = defaultdict(list)
    for s in lv:
        for f in all_faces(s):
            if f != s:
                up[f].append(s)
    out = []
    for s, k in lv.items():
        if not any(lv[t] <= k for t in up[s]):
            out.append((k, s))
    out.sort(key=lambda x: (x[0], len(x[1]), x[1]))
    return out


def emit_ssp(X: StratifiedPseudomanifold) -> str:
    lines = []
    if X.note:
        lines.append(f"# {' '.join(X.note.split())}")
    lines.append(f"dim {X.dim}")
    for f in sorted(X.orientation):
        row = f"facet {' '.join(map(str, f))} orient {X.orientation[f]}"
        if X.parts:
            row += f" part {X.parts[f]}"
        lines.append(row)
    for k, s in _skeleton_lines(X):
        lines.append(f"skeleton {k} {' '.join(map(str, s))}")
    for b in sorted(X.boundary):
        lines.append(f"boundary {' '.join(map(str, b))}")
    for v, w in X.collar:
        lines.append(f"collar {v} {w}")
    for z, lo, hi in X.bicollar:
        lines.append(f"bicollar {z} {lo} {hi}")
    return "\n".join(lines) + "\n"


def write_ssp(X: StratifiedPseudomanifold, path: str | Path) -> None:
    Path(path).write_text(emit_ssp(X), encoding="utf-8")


# ---------------------------------------------------------------------------
# perversities


def parse_perversity(text: str, X: StratifiedPseudomanifold, source: str = "") -> Perversity:
    entries: dict = {}
    named = None
    pre = f"{source}:" if source else ""
    for ln, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        if len(tok) == 1:
            if named is not None or entries:
                raise SspParseError("a named perversity must be the only entry", ln, source)
            if tok[0] not in NAMED_PERVERSITIES:
                raise SspParseError(f"unknown perversity name {tok[0]!r}; expected one of "
                                    f"{', '.join(NAMED_PERVERSITIES)}", ln, source)
            named = tok[0]
            continue
        if tok[0] != "stratum" or len(tok) != 3:
            raise SspParseError("expected 'stratum <id> <int>'", ln, source)
        if named is not None:
            raise SspParseError("a named perversity must be the only entry", ln, source)
        try:
            sid, val = int(tok[1]), int(tok[2])
        except ValueError:
            raise SspParseError("stratum id and value must be integers", ln, source) from None
        if sid in entries:
            raise SspParseError(f"stratum {sid} given twice", ln, source)
        ids = [s.id for s in X.strata]
        if sid not in ids:
            raise PerversityFileError(f"{pre}{ln}: unknown stratum id {sid}; the space has stratum ids "
                                      f"{_id_list(ids)}")
        entries[sid] = val
    if named is not None:
        return perversity(X, named)
    if not entries and X.strata:
        raise SspParseError("empty perversity file", None, source)
    try:
        return perversity_from_values(X, entries)
    except KeyError as e:
        raise PerversityFileError(f"{pre} {e.args[0]}".strip()) from None


def _id_list(ids) -> str:
    return ", ".join(map(str, ids)) if ids else "(none)"


def resolve_perversity(spec: str, X: StratifiedPseudomanifold) -> Perversity:
    """A named token, an integer constant, or a path to a perversity file."""
    if spec in NAMED_PERVERSITIES:
        return perversity(X, spec)
    try:
        v = int(spec)
    except ValueError:
        pass
    else:
        return Perversity(tuple(v for _ in X.strata), spec)
    p = Path(spec)
    if not p.exists():
        raise PerversityFileError(f"{spec!r} is neither a perversity name ({', '.join(NAMED_PERVERSITIES)}), "
                                  f"an integer, nor an existing file")
    return parse_perversity(p.read_text(encoding="utf-8"), X, str(p))


def emit_perversity(p: Perversity, X: StratifiedPseudomanifold) -> str:
    if p.name in NAMED_PERVERSITIES and perversity(X, p.name) == p:
        return p.name + "\n"
    return "".join(f"stratum {s.id} {v}\n" for s, v in zip(X.strata, p.values))
