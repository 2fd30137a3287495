"""
Combinatorial 3-complexes given by their facets.

A facet list names every tetrahedron by four vertex ids (1-based, as in
published triangulation lists). `build_complex` enumerates the skeletons
S0..S3 once, builds the star maps and re-indexes vertices densely so that
vertex fields can live in numpy arrays.
"""

import ast
import itertools
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from .errors import FacetParseError
from .errors import UnknownVertex

__all__ = [
    "FacetList",
    "Complex",
    "Diagnostics",
    "parse_facet_list",
    "format_facet_list",
    "read_facet_file",
    "load_builtin",
    "build_complex",
    "validate_closed",
    "vertex_degree",
]

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Triangle = Tuple[int, int, int]
Tet = Tuple[int, int, int, int]

#: Shipped facet lists, see `load_builtin`.
BUILTINS = {
    "5cell": "5cell.txt",
    "cyclic9": "cyclic9.txt",
    "s2xs1": "s2xs1.txt",
}


@dataclass(frozen=True)
class FacetList:
    """
    Facets of a 3-complex, each a sorted 4-tuple of distinct vertex ids in
    [1, n_vertices].
    """

    n_vertices: int
    facets: Tuple[Tet, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise FacetParseError("Vertex count must be positive, got %d" % (self.n_vertices))

        seen = set()
        for number, facet in enumerate(self.facets, start=1):
            if len(facet) != 4:
                raise FacetParseError("Facet %s does not have 4 vertices" % (list(facet),), line=number)

            if len(set(facet)) != 4:
                raise FacetParseError("Facet %s repeats a vertex" % (list(facet),), line=number)

            for v in facet:
                if not 1 <= v <= self.n_vertices:
                    raise FacetParseError(
                        "Vertex id %d out of range [1, %d]" % (v, self.n_vertices), line=number
                    )

            key = frozenset(facet)
            if key in seen:
                raise FacetParseError("Duplicate facet %s" % (sorted(facet),), line=number)
            seen.add(key)


def _to_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FacetParseError("Malformed token %r" % (token), line=line, token=token)


def _facet(values: Sequence[int], line: int) -> Tet:
    if len(values) != 4:
        raise FacetParseError("Expected 4 vertex ids, got %d" % (len(values)), line=line)

    if len(set(values)) != 4:
        raise FacetParseError("Facet %s repeats a vertex" % (list(values),), line=line)

    return tuple(sorted(values))


def parse_facet_list(text: str, n_vertices: Optional[int] = None) -> FacetList:
    """
    Parse a facet list. Two layouts are accepted:

    - one facet per line, four whitespace separated integers, `#` starting a
      comment;
    - a single bracketed list of lists, `[[1,2,3,4],[1,2,3,5],...]`.

    The vertex count is the largest id unless `n_vertices` is given.

    Parameters:
    ---
        text (str):
            The file contents.

        n_vertices (Optional[int]):
            Declared vertex count.

    Example:
    ---
        >>> parse_facet_list("[[1,2,3,4]]").n_vertices
        4
    """

    stripped = text.strip()
    facets: List[Tet] = []

    if stripped.startswith("["):
        try:
            data = ast.literal_eval(stripped)
        except (ValueError, SyntaxError):
            raise FacetParseError("Malformed bracketed facet list")

        if not isinstance(data, (list, tuple)):
            raise FacetParseError("Expected a list of facets")

        for number, item in enumerate(data, start=1):
            if not isinstance(item, (list, tuple)) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in item
            ):
                raise FacetParseError("Malformed facet %r" % (item,), line=number, token=repr(item))
            facets.append(_facet(list(item), number))

    else:
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue

            values = [_to_int(token, number) for token in line.split()]
            facets.append(_facet(values, number))

    if not facets:
        raise FacetParseError("No facets found")

    largest = max(max(f) for f in facets)
    if min(min(f) for f in facets) < 1:
        raise FacetParseError("Vertex ids are 1-based, got %d" % (min(min(f) for f in facets)))

    if n_vertices is None:
        n_vertices = largest

    return FacetList(n_vertices, tuple(facets))


def format_facet_list(fl: FacetList) -> str:
    """
    The canonical written form: one facet per line, sorted lexicographically.
    """

    lines = ["%d %d %d %d" % facet for facet in sorted(fl.facets)]
    return "\n".join(lines) + "\n"


def read_facet_file(path, n_vertices: Optional[int] = None) -> FacetList:
    with open(path, encoding="utf-8") as f:
        return parse_facet_list(f.read(), n_vertices)


def load_builtin(name: str) -> FacetList:
    """
    Load one of the shipped facet lists: `5cell` (boundary of the
    4-simplex), `cyclic9` (boundary of the cyclic 4-polytope on 9
    vertices) or `s2xs1` (a 12-vertex triangulation of S^2 x S^1).
    """

    from importlib import resources

    if name not in BUILTINS:
        raise FacetParseError("Unknown builtin complex %r, choose from %s" % (name, sorted(BUILTINS)))

    text = resources.files("yamabe.data").joinpath(BUILTINS[name]).read_text(encoding="utf-8")
    return parse_facet_list(text)


@dataclass(frozen=True)
class Diagnostics:
    """
    Result of `validate_closed`. Triangles are reported with the number of
    tetrahedra containing them.
    """

    bad_triangles: Tuple[Tuple[Triangle, int], ...] = ()
    isolated_vertices: Tuple[int, ...] = ()

    @property
    def boundary_triangles(self) -> Tuple[Triangle, ...]:
        return tuple(t for t, count in self.bad_triangles if count == 1)

    @property
    def closed(self) -> bool:
        return not self.bad_triangles and not self.isolated_vertices

    def __bool__(self):
        #: Truthy when there is something to report.
        return not self.closed

    def __len__(self):
        return len(self.bad_triangles) + len(self.isolated_vertices)


@dataclass(frozen=True)
class Complex:
    """
    An immutable simplicial 3-complex.

    Vertex ids are the external (1-based) ids; `index` maps them to the dense
    0-based order used by every vertex-indexed numpy array. Skeletons are
    sorted tuples of sorted id tuples, so iteration order is deterministic.
    """

    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    triangles: Tuple[Triangle, ...]
    tets: Tuple[Tet, ...]
    vertex_star: Dict[int, Tuple[int, ...]]
    edge_star: Dict[Edge, Tuple[int, ...]]
    triangle_star: Dict[Triangle, Tuple[int, ...]]
    degrees: Dict[int, int]
    n_declared: int
    index: Dict[int, int] = field(repr=False)
    tet_array: np.ndarray = field(repr=False, compare=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def d_max(self) -> int:
        return max(self.degrees.values())

    @property
    def degree_array(self) -> np.ndarray:
        return np.array([self.degrees[v] for v in self.vertices], dtype=int)

    def tet_index(self, tet: Iterable[int]) -> int:
        key = tuple(sorted(tet))
        try:
            return self.tets.index(key)
        except ValueError:
            raise UnknownVertex(msg="Unknown tetrahedron %s" % (list(key),))

    def vertex_index(self, v: int) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVertex(v)

    def incident_tets(self, v: int) -> Tuple[Tet, ...]:
        """The tetrahedra containing vertex `v`, by their vertex ids."""
        if v not in self.vertex_star:
            raise UnknownVertex(v)
        return tuple(self.tets[t] for t in self.vertex_star[v])

    def facet_list(self) -> FacetList:
        return FacetList(self.n_declared, self.tets)


def build_complex(fl: FacetList) -> Complex:
    """
    Enumerate S0..S3 of the complex spanned by `fl` together with the star
    maps (vertex, edge and triangle to the indices of the tetrahedra that
    contain them) and the vertex degrees.
    """

    tets = tuple(sorted(tuple(sorted(f)) for f in fl.facets))

    vertex_star: Dict[int, List[int]] = {}
    edge_star: Dict[Edge, List[int]] = {}
    triangle_star: Dict[Triangle, List[int]] = {}

    for t, tet in enumerate(tets):
        for v in tet:
            vertex_star.setdefault(v, []).append(t)
        for e in itertools.combinations(tet, 2):
            edge_star.setdefault(e, []).append(t)
        for tri in itertools.combinations(tet, 3):
            triangle_star.setdefault(tri, []).append(t)

    vertices = tuple(sorted(vertex_star))
    index = {v: i for i, v in enumerate(vertices)}
    tet_array = np.array([[index[v] for v in tet] for tet in tets], dtype=np.intp).reshape(-1, 4)

    return Complex(
        vertices=vertices,
        edges=tuple(sorted(edge_star)),
        triangles=tuple(sorted(triangle_star)),
        tets=tets,
        vertex_star={v: tuple(s) for v, s in sorted(vertex_star.items())},
        edge_star={e: tuple(s) for e, s in sorted(edge_star.items())},
        triangle_star={t: tuple(s) for t, s in sorted(triangle_star.items())},
        degrees={v: len(s) for v, s in sorted(vertex_star.items())},
        n_declared=fl.n_vertices,
        index=index,
        tet_array=tet_array,
    )


def validate_closed(c: Complex) -> Diagnostics:
    """
    Report every triangle that does not lie in exactly two tetrahedra and
    every declared vertex id that no facet uses. Only this pseudomanifold
    condition is checked; links of vertices are not examined.
    """

    bad = tuple((tri, len(star)) for tri, star in c.triangle_star.items() if len(star) != 2)
    used = set(c.vertices)
    isolated = tuple(v for v in range(1, c.n_declared + 1) if v not in used)

    diagnostics = Diagnostics(bad, isolated)
    if not diagnostics.closed:
        logger.warning(
            "complex is not a closed pseudomanifold: %d triangle(s) with incidence != 2, %d unused vertex id(s)",
            len(bad),
            len(isolated),
        )

    return diagnostics


def vertex_degree(c: Complex, v: int) -> int:
    """Number of tetrahedra containing `v`."""

    if v not in c.degrees:
        raise UnknownVertex(v)

    return c.degrees[v]
