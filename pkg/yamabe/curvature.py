"""
Vertex curvature, the total functional and the discrete Laplacian.

Per-tetrahedron quantities come from one `TetBatch` over the tetrahedra of
the complex in their fixed (sorted) order; vertex sums are reduced with
`numpy.add.at`, so results are reproducible bit for bit.
"""

import json
import math
from dataclasses import dataclass
from typing import Dict
from typing import Sequence
from typing import Tuple

import numpy as np

from .complex import Complex
from .constants import FLOAT_FORMAT
from .constants import Q_MIN
from .constants import REGULAR_SOLID_ANGLE
from .errors import InputError
from .errors import InvariantFailure
from .errors import UnknownVertex
from .metric import EDGE_INDEX
from .metric import EDGES
from .metric import MetricStructure
from .metric import TetBatch

__all__ = [
    "GEOMETRIC_LAPLACIAN_FACTOR",
    "CurvatureField",
    "OmegaTable",
    "tet_batch",
    "vertex_curvature",
    "curvature_field",
    "solid_angle_gradient",
    "omega",
    "omega_table",
    "laplacian",
    "dual_edge_area",
    "geometric_laplacian",
    "curvature_rate",
    "total_functional",
    "average_curvature",
    "average_curvature_rate",
    "inner_product",
    "vertex_transitive_curvature",
    "flat_vertex_degree",
    "curvature_bounds",
    "check_bounds",
    "curvature_csv",
    "curvature_json",
]

#: geometric_laplacian(c, m, f) == GEOMETRIC_LAPLACIAN_FACTOR * laplacian(c, m, f)
GEOMETRIC_LAPLACIAN_FACTOR = 0.5


@dataclass(frozen=True)
class CurvatureField:
    """
    Curvatures K in the dense vertex order of `vertex_ids`, with the average
    curvature k, the total functional T and the spread max K - min K.
    """

    vertex_ids: Tuple[int, ...]
    K: np.ndarray
    k: float
    T: float
    spread: float

    def __getitem__(self, v: int) -> float:
        try:
            return float(self.K[self.vertex_ids.index(v)])
        except ValueError:
            raise UnknownVertex(v)

    @property
    def K_min(self) -> float:
        return float(self.K.min())

    @property
    def K_max(self) -> float:
        return float(self.K.max())

    def as_dict(self) -> Dict[int, float]:
        return {v: float(K) for v, K in zip(self.vertex_ids, self.K)}


@dataclass(frozen=True)
class OmegaTable:
    """
    The Laplacian weights of a metric: `omega[t, a, b]` for tetrahedron t of
    the complex and positions a != b, and the aggregated dual area of every
    edge.
    """

    tets: Tuple[Tuple[int, int, int, int], ...]
    omega: np.ndarray
    dual_edges: Dict[Tuple[int, int], float]

    def weight(self, tet: Sequence[int], i: int, j: int) -> float:
        """Omega of the ordered pair (i, j) of vertex ids inside `tet`."""

        tet = tuple(sorted(tet))
        t = self.tets.index(tet)
        return float(self.omega[t, tet.index(i), tet.index(j)])


def _check_metric(c: Complex, m: MetricStructure):
    if tuple(m.vertex_ids) != tuple(c.vertices):
        raise InputError(
            "Metric is defined on vertices %s, complex has %s" % (list(m.vertex_ids), list(c.vertices))
        )


def tet_batch(c: Complex, m: MetricStructure, q_min: float = Q_MIN) -> TetBatch:
    """The batched geometry of every tetrahedron of `c` under `m`."""

    _check_metric(c, m)
    return TetBatch(m.radii[c.tet_array], q_min=q_min, labels=c.tets)


def _field(c: Complex, m: MetricStructure, batch: TetBatch) -> CurvatureField:
    angles = np.zeros(c.n_vertices)
    np.add.at(angles, c.tet_array, batch.solid)

    K = 4.0 * math.pi - angles
    r = m.radii
    T = float(np.dot(K, r))

    return CurvatureField(
        vertex_ids=c.vertices,
        K=K,
        k=T / float(r.sum()),
        T=T,
        spread=float(K.max() - K.min()),
    )


def curvature_field(c: Complex, m: MetricStructure, q_min: float = Q_MIN) -> CurvatureField:
    """
    K_i = 4 pi - (sum of the solid angles at i) for every vertex, plus the
    aggregates k, T and the spread.
    """

    return _field(c, m, tet_batch(c, m, q_min))


def vertex_curvature(c: Complex, m: MetricStructure, v: int, q_min: float = Q_MIN) -> float:
    """
    Curvature at one vertex, evaluating only the tetrahedra around it.

    Example:
    ---
        >>> from yamabe.complex import build_complex, load_builtin
        >>> c = build_complex(load_builtin("5cell"))
        >>> round(vertex_curvature(c, MetricStructure.ones(c.vertices), 1), 6)
        10.361228
    """

    _check_metric(c, m)
    if v not in c.vertex_star:
        raise UnknownVertex(v)

    rows = list(c.vertex_star[v])
    tets = c.tet_array[rows]
    batch = TetBatch(m.radii[tets], q_min=q_min, labels=[c.tets[t] for t in rows])

    position = tets == c.index[v]
    return float(4.0 * math.pi - batch.solid[position].sum())


def solid_angle_gradient(r4: Sequence[float], vertex: int = 0) -> np.ndarray:
    """
    Partial derivatives of the solid angle at position `vertex` by the four
    radii, in position order.
    """

    return TetBatch(np.asarray(r4, dtype=float).reshape(1, 4)).gradient[0, vertex].copy()


def omega(r4: Sequence[float], pair: Tuple[int, int] = (0, 1)) -> float:
    """(d alpha_i / d r_j) r_j for the ordered pair of positions (i, j)."""

    i, j = pair
    if i == j:
        raise InputError("Omega needs two distinct positions, got %s" % (list(pair),))

    return float(TetBatch(np.asarray(r4, dtype=float).reshape(1, 4)).omega[0, i, j])


def omega_table(c: Complex, m: MetricStructure, q_min: float = Q_MIN) -> OmegaTable:
    batch = tet_batch(c, m, q_min)
    return OmegaTable(c.tets, batch.omega, _dual_edges(c, batch))


def _dual_edges(c: Complex, batch: TetBatch) -> Dict[Tuple[int, int], float]:
    out = {}
    for edge, star in c.edge_star.items():
        total = 0.0
        for t in star:
            tet = c.tets[t]
            total += batch.dual[t, EDGE_INDEX[tet.index(edge[0]), tet.index(edge[1])]]
        out[edge] = float(total)

    return out


def _as_field(c: Complex, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (c.n_vertices,):
        raise InputError("Expected %d vertex values, got shape %s" % (c.n_vertices, f.shape))
    return f


def laplacian(c: Complex, m: MetricStructure, f, q_min: float = Q_MIN) -> np.ndarray:
    """
    (Lf)_i = sum over the tetrahedra at i and the other vertices j there of
    Omega_ij (f_j - f_i).

    Parameters:
    ---
        f (array_like):
            Vertex values in the dense order of the complex.
    """

    f = _as_field(c, f)
    return _laplacian(c, tet_batch(c, m, q_min), f)


def _laplacian(c: Complex, batch: TetBatch, f: np.ndarray) -> np.ndarray:
    F = f[c.tet_array]
    diff = F[:, None, :] - F[:, :, None]

    out = np.zeros(c.n_vertices)
    np.add.at(out, c.tet_array, (batch.omega * diff).sum(axis=2))
    return out


def dual_edge_area(c: Complex, m: MetricStructure, edge: Tuple[int, int], q_min: float = Q_MIN) -> float:
    """The signed dual areas of `edge` summed over the tetrahedra around it."""

    _check_metric(c, m)
    edge = tuple(sorted(edge))
    if edge not in c.edge_star:
        raise UnknownVertex(msg="Unknown edge %s" % (list(edge),))

    rows = list(c.edge_star[edge])
    tets = [c.tets[t] for t in rows]
    batch = TetBatch(m.radii[c.tet_array[rows]], q_min=q_min, labels=tets)

    return float(
        sum(batch.dual[n, EDGE_INDEX[tet.index(edge[0]), tet.index(edge[1])]] for n, tet in enumerate(tets))
    )


def geometric_laplacian(c: Complex, m: MetricStructure, f, q_min: float = Q_MIN) -> np.ndarray:
    """
    (1/r_i) sum over the edges ij of (dual area / length) (f_j - f_i). Equals
    `GEOMETRIC_LAPLACIAN_FACTOR` times `laplacian`.
    """

    f = _as_field(c, f)
    batch = tet_batch(c, m, q_min)
    weights = batch.dual / batch.lengths

    out = np.zeros(c.n_vertices)
    for e, (a, b) in enumerate(EDGES):
        va, vb = c.tet_array[:, a], c.tet_array[:, b]
        flux = weights[:, e] * (f[vb] - f[va])
        np.add.at(out, va, flux)
        np.add.at(out, vb, -flux)

    return out / m.radii


def curvature_rate(c: Complex, m: MetricStructure, q_min: float = Q_MIN) -> np.ndarray:
    """dK/dt under the flow, which is the Laplacian of K."""

    batch = tet_batch(c, m, q_min)
    return _laplacian(c, batch, _field(c, m, batch).K)


def total_functional(field: CurvatureField, m: MetricStructure) -> float:
    return float(np.dot(field.K, m.radii))


def average_curvature(field: CurvatureField, m: MetricStructure) -> float:
    return total_functional(field, m) / float(m.radii.sum())


def average_curvature_rate(field: CurvatureField, m: MetricStructure) -> float:
    """
    dk/dt along the flow: minus the sum over unordered vertex pairs of
    (K_i - K_j)^2 r_i r_j, divided by (sum r)^2. Never positive.
    """

    r, K = m.radii, field.K
    total = float(r.sum())
    variance = total * float(np.dot(K * K, r)) - float(np.dot(K, r)) ** 2

    return -max(variance, 0.0) / total ** 2


def inner_product(f, g, m: MetricStructure) -> float:
    """sum f_i g_i r_i"""
    return float(np.sum(np.asarray(f) * np.asarray(g) * m.radii))


def vertex_transitive_curvature(degree: int) -> float:
    """Curvature of the all-ones metric at a vertex of the given degree."""
    return 4.0 * math.pi - degree * REGULAR_SOLID_ANGLE


def flat_vertex_degree() -> float:
    """The degree at which `vertex_transitive_curvature` vanishes."""
    return 4.0 * math.pi / REGULAR_SOLID_ANGLE


def curvature_bounds(c: Complex) -> Tuple[float, float]:
    """
    Open bounds (4 pi - 2 pi d_max, 4 pi) on every curvature of `c`, for any
    nondegenerate metric.
    """

    return 4.0 * math.pi - 2.0 * math.pi * c.d_max, 4.0 * math.pi


def check_bounds(c: Complex, field: CurvatureField):
    """Raise `InvariantFailure` when a curvature leaves `curvature_bounds(c)`."""

    low, high = curvature_bounds(c)
    outside = np.flatnonzero((field.K <= low) | (field.K >= high))
    if len(outside):
        v = field.vertex_ids[int(outside[0])]
        raise InvariantFailure("curvature %.17g at vertex %d outside (%g, %g)" % (field[v], v, low, high))


def curvature_csv(field: CurvatureField) -> str:
    """Rows `vertex,K`, then the footer rows `k,<value>` and `T,<value>`."""

    rows = ["vertex,K"]
    for v, K in zip(field.vertex_ids, field.K):
        rows.append("%d,%s" % (v, format(float(K), FLOAT_FORMAT)))

    rows.append("k,%s" % (format(field.k, FLOAT_FORMAT)))
    rows.append("T,%s" % (format(field.T, FLOAT_FORMAT)))
    return "\n".join(rows) + "\n"


def curvature_json(field: CurvatureField) -> str:
    """The CSV report as JSON: `vertex` and `K` columns plus `k` and `T`."""

    data = {
        "vertex": [int(v) for v in field.vertex_ids],
        "K": [float(K) for K in field.K],
        "k": float(field.k),
        "T": float(field.T),
    }

    return json.dumps(data, indent=2) + "\n"
