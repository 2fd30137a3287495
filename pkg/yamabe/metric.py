"""
Euclidean geometry of conformal (sphere-packing) tetrahedra.

Every edge length is the sum of the radii at its ends. Given the four radii of
a tetrahedron, everything else follows: face angles, areas and inradii, the
nondegeneracy quadratic Q, volume, the radius of the edge-tangent sphere,
dihedral and solid angles, signed heights of its center over the faces, the
dual areas and the derivatives of the angles with respect to the radii.

`TetBatch` evaluates all of that for n tetrahedra at once. The scalar
functions below are thin wrappers around a batch of one row.

Positions inside a tetrahedron are 0..3. Edges are listed in `EDGES` order,
faces are indexed by the position of the opposite vertex.
"""

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict
from typing import Iterable
from typing import Mapping
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from .constants import CLAMP_TOL
from .constants import FLOAT_FORMAT
from .constants import Q_MIN
from .errors import DegenerateTetrahedron
from .errors import InputError
from .errors import InvalidRadius
from .errors import UnknownVertex

__all__ = [
    "EDGES",
    "FACES",
    "MetricStructure",
    "TetBatch",
    "TetGeometry",
    "FaceAngle",
    "edge_length",
    "face_angle",
    "face_area",
    "face_inradius",
    "face_perimeter",
    "nondegeneracy_q",
    "tet_volume",
    "midsphere_radius",
    "dihedral_angle",
    "dihedral_angle_gradient",
    "solid_angle",
    "signed_height",
    "dual_area",
    "face_angle_rate",
    "tet_geometry",
    "read_radii",
    "parse_radii",
    "format_radii",
    "write_radii",
]

#: Vertex position pairs of the six edges.
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

#: FACES[m] is the face opposite position m.
FACES = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

EDGE_INDEX = {pair: e for e, pair in enumerate(EDGES)}
EDGE_INDEX.update({(b, a): e for (a, b), e in list(EDGE_INDEX.items())})


def _others(*positions: int) -> Tuple[int, ...]:
    return tuple(p for p in range(4) if p not in positions)


def _check_radii(values, labels: Optional[Sequence] = None) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    bad = ~np.isfinite(arr) | (arr <= 0)

    if bad.any():
        flat = np.flatnonzero(bad.ravel())[0]
        position = np.unravel_index(flat, arr.shape)
        label = None
        if labels is not None:
            label = labels[position[0]][position[-1]] if arr.ndim == 2 else labels[position[0]]
        raise InvalidRadius(label, float(arr[position]))

    return arr


@dataclass(frozen=True)
class MetricStructure:
    """
    A positive radius per vertex. `vertex_ids` are external ids in the dense
    order of the complex, `radii` the matching numpy array.
    """

    vertex_ids: Tuple[int, ...]
    radii: np.ndarray

    def __post_init__(self):
        radii = _check_radii(self.radii, self.vertex_ids).reshape(-1)
        if len(radii) != len(self.vertex_ids):
            raise InputError(
                "Got %d radii for %d vertices" % (len(radii), len(self.vertex_ids))
            )

        radii = radii.copy()
        radii.setflags(write=False)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "vertex_ids", tuple(self.vertex_ids))

    @classmethod
    def from_mapping(cls, radii: Mapping[int, float], vertex_ids: Optional[Iterable[int]] = None):
        if vertex_ids is None:
            vertex_ids = sorted(radii)

        vertex_ids = tuple(vertex_ids)
        missing = [v for v in vertex_ids if v not in radii]
        if missing:
            raise UnknownVertex(missing[0], msg="No radius given for vertex %s" % (missing[0],))

        extra = [v for v in radii if v not in set(vertex_ids)]
        if extra:
            raise UnknownVertex(extra[0])

        return cls(vertex_ids, np.array([radii[v] for v in vertex_ids], dtype=float))

    @classmethod
    def ones(cls, vertex_ids: Iterable[int]):
        vertex_ids = tuple(vertex_ids)
        return cls(vertex_ids, np.ones(len(vertex_ids)))

    @classmethod
    def log_uniform(cls, vertex_ids: Iterable[int], low: float, high: float, seed: int = 0):
        """Radii drawn log-uniformly from [low, high] with a seeded generator."""

        if not 0 < low <= high:
            raise InputError("Need 0 < low <= high, got %r, %r" % (low, high))

        vertex_ids = tuple(vertex_ids)
        rng = np.random.default_rng(seed)
        return cls(vertex_ids, np.exp(rng.uniform(math.log(low), math.log(high), len(vertex_ids))))

    def __len__(self):
        return len(self.vertex_ids)

    def radius(self, v: int) -> float:
        try:
            return float(self.radii[self.vertex_ids.index(v)])
        except ValueError:
            raise UnknownVertex(v)

    def as_dict(self) -> Dict[int, float]:
        return {v: float(r) for v, r in zip(self.vertex_ids, self.radii)}

    def scaled(self, factor: float) -> "MetricStructure":
        return MetricStructure(self.vertex_ids, self.radii * factor)

    def with_radii(self, radii) -> "MetricStructure":
        return MetricStructure(self.vertex_ids, radii)


class TetBatch:
    """
    Geometry of n conformal tetrahedra, one per row of `radii`.

    Each row is rescaled by the geometric mean g of its radii before anything
    is evaluated; results are scaled back by homogeneity (lengths by g, areas
    by g^2, volumes by g^3, Q by g^-2, derivatives by 1/g). Fields are
    computed on first access.

    Parameters:
    ---
        radii (array_like):
            Shape (n, 4), or (4,) for a single tetrahedron.

        q_min (float):
            Floor on the normalized Q. Rows at or below it raise
            `DegenerateTetrahedron` when a field needing a nondegenerate
            tetrahedron is accessed.

        labels (Sequence):
            Optional vertex ids per row, used in error messages.

    Example:
    ---
        >>> round(TetBatch([1, 1, 1, 1]).solid[0, 0], 6)
        0.551286
    """

    def __init__(self, radii, q_min: float = Q_MIN, labels: Optional[Sequence[Tuple[int, ...]]] = None):
        self.labels = labels
        self.radii = _check_radii(np.atleast_2d(np.asarray(radii, dtype=float)), labels)

        if self.radii.shape[-1] != 4:
            raise InputError("A tetrahedron needs 4 radii, got %d" % (self.radii.shape[-1]))

        self.q_min = q_min

    def __len__(self):
        return self.radii.shape[0]

    def label(self, row: int):
        if self.labels is None:
            return None
        return tuple(self.labels[row])

    # Normalization

    @cached_property
    def g(self) -> np.ndarray:
        return np.exp(np.log(self.radii).mean(axis=1))

    @cached_property
    def rho(self) -> np.ndarray:
        return self.radii / self.g[:, None]

    @cached_property
    def inv(self) -> np.ndarray:
        return 1.0 / self.rho

    @cached_property
    def qn(self) -> np.ndarray:
        """Q of the normalized tetrahedra."""
        return self.inv.sum(axis=1) ** 2 - 2.0 * (self.inv ** 2).sum(axis=1)

    @cached_property
    def q(self) -> np.ndarray:
        return self.qn / self.g ** 2

    @cached_property
    def degenerate(self) -> np.ndarray:
        return self.qn <= self.q_min

    def require_nondegenerate(self):
        if self.degenerate.any():
            row = int(np.flatnonzero(self.degenerate)[0])
            raise DegenerateTetrahedron(q=float(self.q[row]), tet=self.label(row))

    # Faces

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.stack([self.radii[:, a] + self.radii[:, b] for a, b in EDGES], axis=1)

    def _face_terms(self, a, b, c):
        ra, rb, rc = self.rho[:, a], self.rho[:, b], self.rho[:, c]
        denominator = (ra + rb) * (ra + rc)
        cos = (ra * ra + ra * rb + ra * rc - rb * rc) / denominator
        sin = 2.0 * np.sqrt(ra * rb * rc * (ra + rb + rc)) / denominator
        return cos, sin

    @cached_property
    def _face_trig(self):
        n = len(self)
        cos = np.full((n, 4, 4), np.nan)
        sin = np.full((n, 4, 4), np.nan)

        for m, face in enumerate(FACES):
            for a in face:
                b, c = (p for p in face if p != a)
                cos[:, a, m], sin[:, a, m] = self._face_terms(a, b, c)

        return cos, sin

    @property
    def face_cos(self) -> np.ndarray:
        """face_cos[:, a, m]: cosine of the angle at position a of the face opposite m."""
        return self._face_trig[0]

    @property
    def face_sin(self) -> np.ndarray:
        return self._face_trig[1]

    @cached_property
    def face_angles(self) -> np.ndarray:
        return np.arctan2(self.face_sin, self.face_cos)

    def _face_product(self, m: int) -> np.ndarray:
        a, b, c = FACES[m]
        return self.rho[:, a] * self.rho[:, b] * self.rho[:, c]

    def _face_sum(self, m: int) -> np.ndarray:
        a, b, c = FACES[m]
        return self.rho[:, a] + self.rho[:, b] + self.rho[:, c]

    @cached_property
    def _areas_n(self) -> np.ndarray:
        return np.stack([np.sqrt(self._face_product(m) * self._face_sum(m)) for m in range(4)], axis=1)

    @cached_property
    def _inradii_n(self) -> np.ndarray:
        return np.stack([np.sqrt(self._face_product(m) / self._face_sum(m)) for m in range(4)], axis=1)

    @cached_property
    def areas(self) -> np.ndarray:
        return self._areas_n * self.g[:, None] ** 2

    @cached_property
    def inradii(self) -> np.ndarray:
        return self._inradii_n * self.g[:, None]

    @cached_property
    def perimeters(self) -> np.ndarray:
        return np.stack([2.0 * self._face_sum(m) for m in range(4)], axis=1) * self.g[:, None]

    # Volume and the edge-tangent sphere

    @cached_property
    def _volume_n(self) -> np.ndarray:
        if (self.qn < -self.q_min).any():
            row = int(np.flatnonzero(self.qn < -self.q_min)[0])
            raise DegenerateTetrahedron(q=float(self.q[row]), tet=self.label(row))

        # rho has product 1, so V = sqrt(Q) / 3.
        return np.sqrt(np.clip(self.qn, 0.0, None)) / 3.0

    @cached_property
    def volume(self) -> np.ndarray:
        return self._volume_n * self.g ** 3

    @cached_property
    def _midsphere_n(self) -> np.ndarray:
        self.require_nondegenerate()
        return 2.0 / np.sqrt(self.qn)

    @cached_property
    def midsphere(self) -> np.ndarray:
        return self._midsphere_n * self.g

    # Angles

    @cached_property
    def dihedral(self) -> np.ndarray:
        """
        Dihedral angles along the six edges, in `EDGES` order.

        The cosine is the spherical law of cosines on the face angles at a,
        the sine comes from V = 2 A_abc A_abd sin(beta) / (3 l_ab). Written
        in the radii, both share the positive factor
        2 r_a r_b sqrt(r_c r_d (r_a+r_b+r_c)(r_a+r_b+r_d)) / (r_a r_b r_c r_d (r_a+r_b)),
        which is dropped before atan2:

            tan(beta_ab) = sqrt(Q) / (1/r_c + 1/r_d - (r_a^2 + r_b^2) / (r_a r_b (r_a + r_b)))

        This keeps full relative accuracy when the face angles at a vertex
        are tiny, where the cosine form cancels.
        """

        self.require_nondegenerate()
        rho, inv = self.rho, self.inv
        root = np.sqrt(self.qn)
        out = np.empty((len(self), 6))

        for e, (a, b) in enumerate(EDGES):
            c, d = _others(a, b)
            ra, rb = rho[:, a], rho[:, b]
            adjacent = inv[:, c] + inv[:, d] - (ra * ra + rb * rb) / (ra * rb * (ra + rb))
            out[:, e] = np.arctan2(root, adjacent)

        return out

    @cached_property
    def solid(self) -> np.ndarray:
        """Solid angles at the four vertices."""

        beta = self.dihedral
        out = np.empty((len(self), 4))
        for a in range(4):
            out[:, a] = sum(beta[:, EDGE_INDEX[a, b]] for b in _others(a)) - math.pi

        return out

    # Heights and dual areas

    @cached_property
    def _heights_n(self) -> np.ndarray:
        midsphere = self._midsphere_n
        out = np.empty((len(self), 4))

        for m, face in enumerate(FACES):
            bracket = sum(self.inv[:, p] for p in face) - self.inv[:, m]
            out[:, m] = 0.5 * midsphere * self._inradii_n[:, m] * bracket

        return out

    @cached_property
    def heights(self) -> np.ndarray:
        """Signed height of the center over the face opposite each position."""
        return self._heights_n * self.g[:, None]

    @cached_property
    def dual(self) -> np.ndarray:
        """Signed dual areas of the six edges, in `EDGES` order."""

        h, r = self._heights_n, self._inradii_n
        out = np.empty((len(self), 6))

        for e, (a, b) in enumerate(EDGES):
            c, d = _others(a, b)
            out[:, e] = 0.5 * (h[:, d] * r[:, d] + h[:, c] * r[:, c])

        return out * self.g[:, None] ** 2

    # Derivatives

    @cached_property
    def gradient(self) -> np.ndarray:
        """gradient[:, a, b] is the partial derivative of the solid angle at a by r_b."""

        self.require_nondegenerate()
        rho, inv, qn = self.rho, self.inv, self.qn
        volume = self._volume_n

        def perimeter(*positions):
            return 2.0 * sum(rho[:, p] for p in positions)

        out = np.empty((len(self), 4, 4))
        for i in range(4):
            j, k, l = _others(i)
            prefactor = -8.0 * (rho[:, j] * rho[:, k] * rho[:, l]) ** 2 / (
                3.0 * perimeter(i, j, k) * perimeter(i, j, l) * perimeter(i, k, l) * volume
            )
            bracket = (
                2.0 * inv[:, i] + inv[:, j] + inv[:, k] + inv[:, l]
                + rho[:, j] * inv[:, i] * (inv[:, i] + inv[:, k] + inv[:, l])
                + rho[:, k] * inv[:, i] * (inv[:, i] + inv[:, j] + inv[:, l])
                + rho[:, l] * inv[:, i] * (inv[:, i] + inv[:, j] + inv[:, k])
                + (2.0 * rho[:, i] + rho[:, j] + rho[:, k] + rho[:, l]) * qn
            )
            out[:, i, i] = prefactor * bracket

            for j in _others(i):
                k, l = _others(i, j)
                prefactor = 4.0 * rho[:, i] * rho[:, j] * (rho[:, k] * rho[:, l]) ** 2 / (
                    3.0 * perimeter(i, j, k) * perimeter(i, j, l) * volume
                )
                bracket = (
                    inv[:, i] * (inv[:, j] + inv[:, k] + inv[:, l])
                    + inv[:, j] * (inv[:, i] + inv[:, k] + inv[:, l])
                    - (inv[:, k] - inv[:, l]) ** 2
                )
                out[:, i, j] = prefactor * bracket

        return out / self.g[:, None, None]

    @cached_property
    def omega(self) -> np.ndarray:
        """omega[:, a, b] = (d alpha_a / d r_b) r_b for a != b, zero on the diagonal."""

        out = self.gradient * self.radii[:, None, :]
        idx = np.arange(4)
        out[:, idx, idx] = 0.0
        return out

    @cached_property
    def dihedral_gradient(self) -> np.ndarray:
        """dihedral_gradient[:, e, p] is the derivative of the dihedral angle along edge e by r_p."""

        self.require_nondegenerate()
        rho, inv = self.rho, self.inv
        volume = self._volume_n
        out = np.empty((len(self), 6, 4))

        def perimeter(*positions):
            return 2.0 * sum(rho[:, p] for p in positions)

        def by_end(i, j, k, l):
            prefactor = 2.0 * rho[:, i] * rho[:, j] * rho[:, k] ** 2 * rho[:, l] ** 2 / (
                3.0 * perimeter(i, j, k) * perimeter(i, j, l) * volume
            )
            ratio = rho[:, j] * inv[:, i]
            bracket = (
                -inv[:, k] ** 2
                - inv[:, l] ** 2
                - 2.0 * ratio * (
                    inv[:, i] * inv[:, k] + inv[:, i] * inv[:, l] + inv[:, k] * inv[:, l] * (2.0 + ratio)
                )
                + (inv[:, j] - inv[:, i]) * (2.0 * inv[:, i] + inv[:, k] + inv[:, l])
            )
            return prefactor * bracket

        def by_side(i, j, k, l):
            prefactor = (rho[:, i] * rho[:, j]) ** 2 * rho[:, l] / (3.0 * perimeter(i, j, k) * volume)
            return prefactor * (inv[:, i] + inv[:, j]) * (inv[:, i] + inv[:, j] + inv[:, k] - inv[:, l])

        for e, (a, b) in enumerate(EDGES):
            c, d = _others(a, b)
            out[:, e, a] = by_end(a, b, c, d)
            out[:, e, b] = by_end(b, a, c, d)
            out[:, e, c] = by_side(a, b, c, d)
            out[:, e, d] = by_side(a, b, d, c)

        return out / self.g[:, None, None]


class FaceAngle(NamedTuple):
    angle: float
    cos: float
    sin: float


@dataclass(frozen=True)
class TetGeometry:
    """
    Every geometric quantity of one conformal tetrahedron. Faces are indexed
    by the position of the opposite vertex, edges follow `EDGES`, and
    `face_angles[a, m]` is the angle at position a of face m (NaN when
    a == m).
    """

    radii: np.ndarray
    lengths: np.ndarray
    face_angles: np.ndarray
    areas: np.ndarray
    perimeters: np.ndarray
    inradii: np.ndarray
    q: float
    volume: float
    midsphere: float
    dihedral: np.ndarray
    solid: np.ndarray
    heights: np.ndarray
    dual: np.ndarray
    gradient: np.ndarray
    omega: np.ndarray

    def length(self, a: int, b: int) -> float:
        return float(self.lengths[EDGE_INDEX[a, b]])

    def dihedral_at(self, a: int, b: int) -> float:
        return float(self.dihedral[EDGE_INDEX[a, b]])

    def dual_at(self, a: int, b: int) -> float:
        return float(self.dual[EDGE_INDEX[a, b]])

    def height(self, face: Iterable[int]) -> float:
        return float(self.heights[_opposite(face)])


def _row(values) -> TetBatch:
    return TetBatch(np.asarray(values, dtype=float).reshape(1, 4))


def _opposite(face: Iterable[int]) -> int:
    face = tuple(sorted(face))
    if face not in FACES:
        raise InputError("Not a face of a tetrahedron: %s" % (list(face),))
    return FACES.index(face)


def edge_position(edge: Iterable[int]) -> int:
    """Index into `EDGES` of a pair of positions, in either order."""

    edge = tuple(edge)
    if edge not in EDGE_INDEX:
        raise InputError("Not an edge of a tetrahedron: %s" % (list(edge),))
    return EDGE_INDEX[edge]


def edge_length(m: MetricStructure, edge: Tuple[int, int]) -> float:
    """The length r_i + r_j of the edge {i, j}."""

    i, j = edge
    return m.radius(i) + m.radius(j)


def face_angle(r_i: float, r_j: float, r_k: float) -> FaceAngle:
    """
    The angle at i of the triangle with side lengths r_i + r_j, r_i + r_k and
    r_j + r_k, evaluated with atan2 from the closed forms of its cosine and
    sine.

    Example:
    ---
        >>> round(face_angle(1, 1, 2).cos, 12)
        0.333333333333
    """

    r_i, r_j, r_k = _check_radii([r_i, r_j, r_k])
    denominator = (r_i + r_j) * (r_i + r_k)
    cos = (r_i * r_i + r_i * r_j + r_i * r_k - r_j * r_k) / denominator
    sin = 2.0 * math.sqrt(r_i * r_j * r_k * (r_i + r_j + r_k)) / denominator

    return FaceAngle(math.atan2(sin, cos), cos, sin)


def face_area(r_i: float, r_j: float, r_k: float) -> float:
    r_i, r_j, r_k = _check_radii([r_i, r_j, r_k])
    return math.sqrt(r_i * r_j * r_k * (r_i + r_j + r_k))


def face_inradius(r_i: float, r_j: float, r_k: float) -> float:
    r_i, r_j, r_k = _check_radii([r_i, r_j, r_k])
    return math.sqrt(r_i * r_j * r_k / (r_i + r_j + r_k))


def face_perimeter(r_i: float, r_j: float, r_k: float) -> float:
    r_i, r_j, r_k = _check_radii([r_i, r_j, r_k])
    return 2.0 * (r_i + r_j + r_k)


def nondegeneracy_q(r_i: float, r_j: float, r_k: float, r_l: float) -> float:
    """
    (sum 1/r)^2 - 2 sum 1/r^2. The four radii span a Euclidean tetrahedron
    iff it is positive; its sign is the only thing checked here.
    """

    inv = 1.0 / _check_radii([r_i, r_j, r_k, r_l])
    return float(inv.sum() ** 2 - 2.0 * (inv ** 2).sum())


def tet_volume(r_i: float, r_j: float, r_k: float, r_l: float) -> float:
    """
    (1/3) r_i r_j r_k r_l sqrt(Q). Raises `DegenerateTetrahedron` for
    negative Q; Q = 0 gives a flat tetrahedron of volume 0.
    """

    return float(_row([r_i, r_j, r_k, r_l]).volume[0])


def midsphere_radius(r_i: float, r_j: float, r_k: float, r_l: float) -> float:
    """Radius 2 / sqrt(Q) of the sphere tangent to all six edges."""

    return float(_row([r_i, r_j, r_k, r_l]).midsphere[0])


def dihedral_angle(gamma_ijk: float, gamma_ijl: float, gamma_ikl: float) -> float:
    """
    The dihedral angle along edge ij from the three face angles at i, by the
    spherical law of cosines. Cosines slightly outside [-1, 1] are clamped.
    A zero opposite angle is accepted when the other two are equal, and the
    dihedral angle is then 0.

    Parameters:
    ---
        gamma_ijk (float):
            Face angle at i in face ijk.

        gamma_ijl (float):
            Face angle at i in face ijl.

        gamma_ikl (float):
            Face angle at i in face ikl, opposite the edge.
    """

    angles = (gamma_ijk, gamma_ijl, gamma_ikl)
    if gamma_ikl == 0.0 and 0.0 < gamma_ijk < math.pi and abs(gamma_ijk - gamma_ijl) <= CLAMP_TOL:
        return 0.0

    if not all(0.0 < g < math.pi for g in angles):
        raise DegenerateTetrahedron("Face angles must lie in (0, pi), got %s" % (list(angles),))

    cos = (math.cos(gamma_ikl) - math.cos(gamma_ijk) * math.cos(gamma_ijl)) / (
        math.sin(gamma_ijk) * math.sin(gamma_ijl)
    )

    if abs(cos) > 1.0 + CLAMP_TOL:
        raise DegenerateTetrahedron(
            "Face angles %s do not form a spherical triangle (cos = %.17g)" % (list(angles), cos)
        )

    return math.acos(min(1.0, max(-1.0, cos)))


def dihedral_angle_gradient(r4: Sequence[float], edge: Tuple[int, int] = (0, 1)) -> np.ndarray:
    """Derivatives of the dihedral angle along `edge` by the four radii."""

    return _row(r4).dihedral_gradient[0, edge_position(edge)].copy()


def solid_angle(r4: Sequence[float], vertex: int = 0) -> float:
    """
    Solid angle at position `vertex`: the sum of the three dihedral angles
    there minus pi.

    Example:
    ---
        >>> round(solid_angle([1, 1, 1, 1]), 6)
        0.551286
    """

    return float(_row(r4).solid[0, vertex])


def signed_height(r4: Sequence[float], face: Iterable[int] = (0, 1, 2)) -> float:
    """
    Signed distance from the center of the edge-tangent sphere to the plane
    of `face`, positive when the center lies on the side of the opposite
    vertex.
    """

    return float(_row(r4).heights[0, _opposite(face)])


def dual_area(r4: Sequence[float], edge: Tuple[int, int] = (0, 1)) -> float:
    """Signed area of the region of the tetrahedron dual to `edge`."""

    return float(_row(r4).dual[0, edge_position(edge)])


def face_angle_rate(r3: Sequence[float], k3: Sequence[float]) -> float:
    """
    Time derivative of the face angle at the first vertex of a triangle when
    the radii follow dr/dt = -K r with the curvatures `k3`.
    """

    r_i, r_j, r_k = _check_radii(r3)
    k_i, k_j, k_k = k3

    ratio = face_area(r_i, r_j, r_k) / face_perimeter(r_i, r_j, r_k)
    return -2.0 * ratio * ((k_j - k_i) / (r_i + r_j) + (k_k - k_i) / (r_i + r_k))


def tet_geometry(r4: Sequence[float], q_min: float = Q_MIN) -> TetGeometry:
    """Evaluate the full bundle of one tetrahedron."""

    batch = TetBatch(np.asarray(r4, dtype=float).reshape(1, 4), q_min=q_min)
    batch.require_nondegenerate()

    return TetGeometry(
        radii=batch.radii[0].copy(),
        lengths=batch.lengths[0],
        face_angles=batch.face_angles[0],
        areas=batch.areas[0],
        perimeters=batch.perimeters[0],
        inradii=batch.inradii[0],
        q=float(batch.q[0]),
        volume=float(batch.volume[0]),
        midsphere=float(batch.midsphere[0]),
        dihedral=batch.dihedral[0],
        solid=batch.solid[0],
        heights=batch.heights[0],
        dual=batch.dual[0],
        gradient=batch.gradient[0],
        omega=batch.omega[0],
    )


def parse_radii(text: str, vertex_ids: Sequence[int]) -> MetricStructure:
    """
    Parse a radii file: either lines `vertex_id value` (`#` comments
    allowed) or a JSON array in the dense vertex order.
    """

    vertex_ids = tuple(vertex_ids)
    stripped = text.strip()

    if stripped.startswith("["):
        try:
            values = json.loads(stripped)
        except ValueError as e:
            raise InputError("Malformed radii array: %s" % (e))

        if not isinstance(values, list) or len(values) != len(vertex_ids):
            raise InputError("Expected a JSON array of %d radii" % (len(vertex_ids)))

        try:
            return MetricStructure(vertex_ids, np.array(values, dtype=float))
        except (TypeError, ValueError):
            raise InputError("Radii must be numbers")

    radii = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        tokens = line.split()
        if len(tokens) != 2:
            raise InputError("line %d: expected `vertex_id value`" % (number))

        try:
            v, value = int(tokens[0]), float(tokens[1])
        except ValueError:
            raise InputError("line %d: malformed entry %r" % (number, line))

        if v in radii:
            raise InputError("line %d: radius of vertex %d given twice" % (number, v))
        radii[v] = value

    return MetricStructure.from_mapping(radii, vertex_ids)


def read_radii(path, vertex_ids: Sequence[int]) -> MetricStructure:
    with open(path, encoding="utf-8") as f:
        return parse_radii(f.read(), vertex_ids)


def format_radii(m: MetricStructure) -> str:
    return "".join("%d %s\n" % (v, format(float(r), FLOAT_FORMAT)) for v, r in zip(m.vertex_ids, m.radii))


def write_radii(m: MetricStructure, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_radii(m))
