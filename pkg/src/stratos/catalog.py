"""Named example spaces and the `make` specification language."""

from __future__ import annotations

import itertools
import re

from .complex import (ComplexError, StratifiedPseudomanifold, cone, cone_off_boundary, glue,
                      product_with_manifold, propagate_orientation, suspension)

# 9-vertex CP^2: vertex set F_3^2, closed under translation.  The first
# facet's sign fixes the orientation with the intersection form +1.
_CP2 = [
    (0, 1, 2, 3, 4), (0, 1, 2, 3, 5), (0, 1, 2, 4, 5), (0, 1, 6, 7, 8), (0, 2, 6, 7, 8), (1, 2, 6, 7, 8),
    (3, 4, 5, 6, 7), (3, 4, 5, 6, 8), (3, 4, 5, 7, 8), (0, 1, 3, 4, 6), (0, 1, 3, 6, 7), (0, 2, 3, 5, 8),
    (0, 2, 5, 6, 8), (0, 3, 4, 6, 7), (1, 2, 4, 5, 7), (1, 2, 4, 7, 8), (1, 4, 5, 7, 8), (2, 3, 5, 6, 8),
    (0, 1, 3, 5, 7), (0, 1, 5, 7, 8), (0, 2, 4, 5, 6), (0, 2, 4, 6, 7), (0, 3, 5, 7, 8), (1, 2, 3, 4, 8),
    (1, 2, 3, 6, 8), (1, 3, 4, 6, 8), (2, 4, 5, 6, 7), (0, 1, 4, 5, 6), (0, 1, 5, 6, 8), (0, 2, 3, 4, 8),
    (0, 2, 4, 7, 8), (0, 3, 4, 7, 8), (1, 2, 3, 5, 7), (1, 2, 3, 6, 7), (1, 4, 5, 6, 8), (2, 3, 5, 6, 7),
]
_CP2_SEED_SIGN = -1


def orient_connected(dim: int, facets, seed_sign: int = 1, **kw) -> StratifiedPseudomanifold:
    facets = [tuple(sorted(f)) for f in facets]
    o = propagate_orientation(facets, {facets[0]: seed_sign})
    missing = [f for f in facets if f not in o]
    while missing:
        o.update(propagate_orientation(facets, {**o, missing[0]: 1}))
        missing = [f for f in facets if f not in o]
    return StratifiedPseudomanifold(dim, o, **kw)


def point() -> StratifiedPseudomanifold:
    return StratifiedPseudomanifold(0, {(0,): 1})


def two_points() -> StratifiedPseudomanifold:
    return StratifiedPseudomanifold(0, {(0,): 1, (1,): 1})


def sphere(n: int) -> StratifiedPseudomanifold:
    """∂Δ^{n+1}, with the orientation induced as a boundary."""
    if n < 0:
        raise ComplexError("sphere dimension must be >= 0")
    verts = range(n + 2)
    orient = {}
    for i in verts:
        orient[tuple(v for v in verts if v != i)] = (-1) ** i
    return StratifiedPseudomanifold(n, orient, note=f"sphere {n}")


def delta_boundary(n: int) -> StratifiedPseudomanifold:
    """∂Δ^n (an (n-1)-sphere with n+1 vertices)."""
    if n < 1:
        raise ComplexError("delta-boundary needs n >= 1")
    X = sphere(n - 1)
    X.note = f"delta-boundary {n}"
    return X


def disk(n: int) -> StratifiedPseudomanifold:
    """The simplex Δ^n with its boundary declared."""
    f = tuple(range(n + 1))
    bd = [tuple(v for v in f if v != i) for i in f] if n > 0 else []
    return StratifiedPseudomanifold(n, {f: 1}, boundary=bd, note=f"disk {n}")


def interval(k: int = 1) -> StratifiedPseudomanifold:
    """A path of k edges, boundary the two end vertices."""
    return StratifiedPseudomanifold(1, {(i, i + 1): 1 for i in range(k)}, boundary=[(0,), (k,)],
                                    note=f"interval {k}")


def circle(k: int = 3) -> StratifiedPseudomanifold:
    if k < 3:
        raise ComplexError("a simplicial circle needs at least 3 vertices")
    orient = {(i, i + 1): 1 for i in range(k - 1)}
    orient[(0, k - 1)] = -1
    return StratifiedPseudomanifold(1, orient, note=f"circle {k}")


def torus2() -> StratifiedPseudomanifold:
    """The 7-vertex torus: triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7."""
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return orient_connected(2, sorted(tris), note="torus2")


def torus3() -> StratifiedPseudomanifold:
    X = product_with_manifold(torus2(), circle(3))
    X.note = "torus3"
    return X


def s1_x_s2() -> StratifiedPseudomanifold:
    X = product_with_manifold(sphere(2), circle(3))
    X.note = "s1xs2"
    return X


def cp2() -> StratifiedPseudomanifold:
    return orient_connected(4, _CP2, _CP2_SEED_SIGN, note="cp2-9vertex")


def solid_torus() -> StratifiedPseudomanifold:
    """Δ² × C_3 as a staircase product; boundary is a 9-vertex torus."""
    X = product_with_manifold(disk(2), circle(3))
    X.note = "solid-torus"
    return X


def closed_star_split(X: StratifiedPseudomanifold, v: int = 0):
    """Decompose a closed space along the link of vertex v."""
    star = [f for f in X.facets if v in f]
    rest = [f for f in X.facets if v not in f]
    Y1 = X.sub(star)
    Y2 = X.sub(rest)
    return glue(Y1, Y2)


def double(Y: StratifiedPseudomanifold):
    """Y ∪ −Y glued along the identity of the boundary."""
    return glue(Y, Y.reverse_orientation())


def cylinder_split(D: StratifiedPseudomanifold):
    """[-1,1] × D with parts by the interval coordinate; the wall is {0} × D."""
    X = product_with_manifold(D, interval(2))
    nb = D.complex.n_vertices if D.complex.vertices()[-1] + 1 == D.complex.n_vertices else None
    if nb is None:
        raise ComplexError("factor must have compact vertex ids")
    parts = {}
    for f in X.facets:
        a = {w // nb for w in f}
        parts[f] = 1 if max(a) <= 1 else 2
    Y = X.replace(parts=parts)
    Y.note = "cylinder-split"
    return Y


def circle_split(B: StratifiedPseudomanifold, k: int = 3) -> StratifiedPseudomanifold:
    """C_k × B cut along the two slices over vertices 0 and 1 of the circle."""
    X = product_with_manifold(B, circle(k))
    nb = X.complex.n_vertices // k
    parts = {f: 1 if {w // nb for w in f} == {0, 1} else 2 for f in X.facets}
    Y = X.replace(parts=parts)
    Y.note = "circle-split"
    return Y


# ---------------------------------------------------------------------------
# make specification language


class SpecError(ValueError):
    pass


_ALIASES = {
    "s1": ("sphere", ["1"]), "s2": ("sphere", ["2"]), "s3": ("sphere", ["3"]), "s4": ("sphere", ["4"]),
    "t2": ("torus2", []), "t3": ("torus3", []), "cp2": ("cp2-9vertex", []),
}


def tokenize(text: str) -> list[str]:
    return re.findall(r"[()]|[^\s()]+", text)


def parse_spec(tokens: list[str], loader=None):
    """Parse one spec from the front of ``tokens`` (consumed in place).

    Grammar: NAME ARGS... where each space argument is either a nested
    ``name(...)`` group, an alias such as ``s3``, or a file path handled
    by ``loader``.
    """
    if not tokens:
        raise SpecError("empty example spec")
    name = tokens.pop(0)
    if tokens and tokens[0] == "(":
        tokens.pop(0)
        inner = []
        depth = 1
        while tokens:
            t = tokens.pop(0)
            if t == "(":
                depth += 1
            elif t == ")":
                depth -= 1
                if depth == 0:
                    break
            inner.append(t)
        else:
            raise SpecError("unbalanced parentheses in spec")
        if name in _ALIASES or name in _NULLARY:
            if inner:
                raise SpecError(f"{name} takes no arguments")
            return build(name, [], loader)
        return build(name, _split_args(name, inner, loader), loader)
    arity = _ARITY.get(name)
    if arity is None:
        if name in _ALIASES or name in _NULLARY:
            return build(name, [], loader)
        if loader is not None:
            return loader(name)
        raise SpecError(f"unknown example {name!r}")
    args = []
    for kind in arity:
        if not tokens:
            raise SpecError(f"{name} needs {len(arity)} argument(s)")
        if kind == "int":
            args.append(tokens.pop(0))
        else:
            args.append(parse_spec(tokens, loader))
    return build(name, args, loader)


def _split_args(name, inner, loader):
    arity = _ARITY.get(name, ())
    toks = list(inner)
    args = []
    for kind in arity:
        if kind == "int":
            if not toks:
                raise SpecError(f"{name} needs an integer")
            args.append(toks.pop(0))
        else:
            args.append(parse_spec(toks, loader))
    if toks:
        raise SpecError(f"trailing tokens in {name}(...)")
    return args


_NULLARY = {"torus2", "torus3", "cp2-9vertex", "solid-torus", "point", "two-points", "s1xs2", "interval"}
_ARITY = {
    "sphere": ("int",), "delta-boundary": ("int",), "disk": ("int",), "circle": ("int",),
    "cone": ("space",), "suspend": ("space",), "glue": ("space", "space"),
    "cone-off-boundary": ("space",), "product": ("space", "space"), "double": ("space",),
    "star-split": ("space",), "cylinder-split": ("space",), "circle-split": ("space",),
}


def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {s!r}") from None


def build(name: str, args: list, loader=None) -> StratifiedPseudomanifold:
    if name in _ALIASES:
        real, a = _ALIASES[name]
        return build(real, a, loader)
    if name == "sphere":
        X = sphere(_int(args[0], "sphere dimension"))
    elif name == "delta-boundary":
        X = delta_boundary(_int(args[0], "delta-boundary n"))
    elif name == "disk":
        X = disk(_int(args[0], "disk dimension"))
    elif name == "circle":
        X = circle(_int(args[0], "circle size"))
    elif name == "interval":
        X = interval(1)
    elif name == "point":
        X = point()
    elif name == "two-points":
        X = two_points()
    elif name == "torus2":
        X = torus2()
    elif name == "torus3":
        X = torus3()
    elif name == "s1xs2":
        X = s1_x_s2()
    elif name == "cp2-9vertex":
        X = cp2()
    elif name == "solid-torus":
        X = solid_torus()
    elif name == "cone":
        X = cone(args[0])
    elif name == "suspend":
        X = suspension(args[0])
    elif name == "cone-off-boundary":
        X = cone_off_boundary(args[0])
    elif name == "product":
        X = product_with_manifold(args[1], args[0])
    elif name == "glue":
        X, _ = glue(args[0], args[1], allow_reverse=True)
        if X.meta.get("reversed_second"):
            X.note = "glue (second piece reversed)"
    elif name == "double":
        X, _ = double(args[0])
    elif name == "star-split":
        X, _ = closed_star_split(args[0])
    elif name == "cylinder-split":
        X = cylinder_split(args[0])
    elif name == "circle-split":
        X = circle_split(args[0])
    else:
        raise SpecError(f"unknown example {name!r}")
    return X


def make(text: str, loader=None) -> StratifiedPseudomanifold:
    toks = tokenize(text)
    X = parse_spec(toks, loader)
    if toks:
        raise SpecError(f"unexpected trailing tokens: {' '.join(toks)}")
    return X


EXAMPLES = ("sphere n", "delta-boundary n", "disk n", "circle n", "interval", "point", "two-points", "torus2",
            "torus3", "s1xs2", "cp2-9vertex", "solid-torus", "cone X", "suspend X", "glue A B",
            "cone-off-boundary X", "product N X", "double Y", "star-split X", "cylinder-split D",
            "circle-split X")
