"""
Independent numerical checks of the closed-form geometry.

Three families of oracles live here:

- finite differences (5-point central stencil with one Richardson level) of
  angles, compared with the analytic derivatives;
- vector geometry on an explicit embedding of a tetrahedron, compared with
  the closed forms that only use radii;
- identities (Schlafli, symmetry of mixed partials, volume partition) that
  the analytic values must satisfy.

`run_checks` sweeps a seeded sample of random tetrahedra through all of them
and returns one `CheckResult` per test.
"""

import json
import logging
import math
from dataclasses import dataclass
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from .complex import Complex
from .complex import build_complex
from .complex import load_builtin
from .constants import FD_CONDITION
from .constants import FD_STEP
from .constants import FD_STEP_FLOOR
from .curvature import curvature_field
from .curvature import curvature_rate
from .curvature import inner_product
from .curvature import laplacian
from .errors import DegenerateTetrahedron
from .errors import GeometryError
from .errors import InputError
from .metric import EDGES
from .metric import FACES
from .metric import MetricStructure
from .metric import TetBatch
from .metric import edge_position
from .metric import face_angle_rate

__all__ = [
    "FdScheme",
    "CheckResult",
    "fd_derivative",
    "fd_jacobian",
    "fd_solid_angle_gradient",
    "fd_dihedral_gradient",
    "fd_face_angle_check",
    "cayley_menger_volume",
    "embed_tetrahedron",
    "coordinate_volume",
    "coordinate_solid_angle",
    "coordinate_midsphere",
    "coordinate_signed_heights",
    "coordinate_dual_area",
    "spherical_excess",
    "schlafli_residual",
    "hessian_symmetry_defect",
    "face_angle_rate_defect",
    "curvature_evolution_defect",
    "laplacian_identity_defects",
    "random_tetrahedra",
    "run_checks",
    "check_report_json",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FdScheme:
    """
    Step policy of the finite-difference oracles.

    Parameters:
    ---
        h (float):
            Base step, relative to the coordinate being varied. Defaults to
            1e-3 rather than the customary 1e-5. With the 5-point stencil and
            one Richardson level, gradients at 1e-3 agree with the closed
            forms to about 5e-9 relative, against about 6e-7 at 1e-5 where
            rounding dominates. `FdScheme(h=1e-5)` gives the smaller step.

        floor (float):
            Smallest relative step tried before giving up.

        condition (float):
            For tetrahedra, the step is capped at `condition` times
            Q / (sum 1/r)^2 so that the sample points stay well inside the
            nondegenerate region.
    """

    h: float = FD_STEP
    floor: float = FD_STEP_FLOOR
    condition: float = FD_CONDITION


def _stencil(f, x, step):
    return (-f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)) / (12 * step)


def _richardson(coarse, fine):
    return fine + (fine - coarse) / 15.0


def fd_derivative(func: Callable[[float], float], x: float, scheme: Optional[FdScheme] = None) -> float:
    """
    Derivative of a scalar function at `x`. The step is `scheme.h` times
    |x|, or `scheme.h` itself at x = 0, and is halved while an evaluation raises
    a geometry or input error, down to the floor.

    Example:
    ---
        >>> round(fd_derivative(math.sin, 0.0), 12)
        1.0
    """

    scheme = scheme or FdScheme()
    scale = abs(x) if x != 0 else 1.0
    step = scheme.h * scale

    while step >= scheme.floor * scale:
        try:
            return _richardson(_stencil(func, x, step), _stencil(func, x, step / 2))
        except (GeometryError, InputError):
            step /= 2

    raise DegenerateTetrahedron("Finite-difference samples near %r stay degenerate down to the step floor" % (x))


def _conditioning(radii: np.ndarray) -> np.ndarray:
    inv = 1.0 / radii
    total = inv.sum(axis=1)
    return (total ** 2 - 2.0 * (inv ** 2).sum(axis=1)) / total ** 2


def fd_jacobian(
    func: Callable[[np.ndarray], np.ndarray],
    radii,
    scheme: Optional[FdScheme] = None,
) -> np.ndarray:
    """
    Finite-difference Jacobian of a batched function of tetrahedron radii.

    Parameters:
    ---
        func (Callable):
            Maps an (n, 4) array of radii to an (n, k) array.

        radii (array_like):
            Shape (n, 4).

    Returns an (n, k, 4) array: derivative of output j by radius m.
    """

    scheme = scheme or FdScheme()
    radii = np.atleast_2d(np.asarray(radii, dtype=float))

    relative = np.minimum(scheme.h, scheme.condition * _conditioning(radii))
    if (relative < scheme.floor).any():
        row = int(np.argmin(relative))
        raise DegenerateTetrahedron(
            "Tetrahedron %s is too close to degenerate for finite differences" % (radii[row].tolist(),)
        )

    while True:
        try:
            columns = []
            for m in range(4):
                step = relative * radii[:, m]

                def sample(offset, m=m):
                    shifted = radii.copy()
                    shifted[:, m] += offset
                    return func(shifted)

                def stencil(s):
                    total = -sample(2 * s) + 8 * sample(s) - 8 * sample(-s) + sample(-2 * s)
                    return total / (12 * s[:, None])

                columns.append(_richardson(stencil(step), stencil(step / 2)))

            return np.stack(columns, axis=-1)

        except (GeometryError, InputError):
            relative = relative / 2
            if (relative < scheme.floor).any():
                raise DegenerateTetrahedron("Finite-difference samples stay degenerate down to the step floor")
            logger.debug("degenerate sample point, halving finite-difference steps")


def _solid(radii: np.ndarray) -> np.ndarray:
    return TetBatch(radii).solid


def _dihedral(radii: np.ndarray) -> np.ndarray:
    return TetBatch(radii).dihedral


def fd_solid_angle_gradient(r4: Sequence[float], vertex: int = 0, scheme: Optional[FdScheme] = None) -> np.ndarray:
    """Derivatives of the solid angle at `vertex` by the four radii."""

    return fd_jacobian(_solid, np.asarray(r4, dtype=float).reshape(1, 4), scheme)[0, vertex]


def fd_dihedral_gradient(r4: Sequence[float], edge: Tuple[int, int] = (0, 1), scheme: Optional[FdScheme] = None) -> np.ndarray:
    return fd_jacobian(_dihedral, np.asarray(r4, dtype=float).reshape(1, 4), scheme)[0, edge_position(edge)]


def _law_of_cosines(r_i: float, r_j: float, r_k: float) -> float:
    a, b, c = r_j + r_k, r_i + r_j, r_i + r_k
    return math.acos((b * b + c * c - a * a) / (2 * b * c))


def fd_face_angle_check(r_i: float, r_j: float, r_k: float, scheme: Optional[FdScheme] = None) -> float:
    """
    |(d gamma_ijk / d r_j) r_j - r_ijk / l_ij|, the derivative by finite
    differences of the law of cosines and the inradius by Heron's formula.
    """

    derivative = fd_derivative(lambda x: _law_of_cosines(r_i, x, r_k), r_j, scheme)

    a, b, c = r_j + r_k, r_i + r_j, r_i + r_k
    s = (a + b + c) / 2
    inradius = math.sqrt(s * (s - a) * (s - b) * (s - c)) / s

    return abs(derivative * r_j - inradius / b)


def cayley_menger_volume(lengths: Sequence[float]) -> float:
    """
    Signed volume sqrt(|CM| / 288) * sign(CM) from the six edge lengths in
    `EDGES` order. A non-positive result means the lengths do not span a
    tetrahedron.

    Example:
    ---
        >>> round(cayley_menger_volume([2] * 6), 6)
        0.942809
    """

    lengths = np.asarray(lengths, dtype=float)
    if lengths.shape != (6,) or (lengths <= 0).any():
        raise InputError("Expected six positive edge lengths")

    matrix = np.ones((5, 5))
    matrix[0, 0] = 0.0
    for p in range(4):
        matrix[p + 1, p + 1] = 0.0
    for (a, b), length in zip(EDGES, lengths):
        matrix[a + 1, b + 1] = matrix[b + 1, a + 1] = length * length

    cm = float(np.linalg.det(matrix))
    return math.copysign(math.sqrt(abs(cm) / 288.0), cm)


def _embed(radii: np.ndarray) -> np.ndarray:
    n = radii.shape[0]
    r = radii.T
    l01, l02, l03 = r[0] + r[1], r[0] + r[2], r[0] + r[3]
    l12, l13, l23 = r[1] + r[2], r[1] + r[3], r[2] + r[3]

    x2 = (l01 ** 2 + l02 ** 2 - l12 ** 2) / (2 * l01)
    y2 = np.sqrt(l02 ** 2 - x2 ** 2)
    x3 = (l01 ** 2 + l03 ** 2 - l13 ** 2) / (2 * l01)
    y3 = (l02 ** 2 + l03 ** 2 - l23 ** 2 - 2 * x2 * x3) / (2 * y2)
    z3_squared = l03 ** 2 - x3 ** 2 - y3 ** 2

    if (z3_squared <= 0).any():
        row = int(np.argmin(z3_squared))
        raise DegenerateTetrahedron("Radii %s do not embed as a tetrahedron" % (radii[row].tolist(),))

    points = np.zeros((n, 4, 3))
    points[:, 1, 0] = l01
    points[:, 2, 0], points[:, 2, 1] = x2, y2
    points[:, 3, 0], points[:, 3, 1], points[:, 3, 2] = x3, y3, np.sqrt(z3_squared)
    return points


def embed_tetrahedron(r4: Sequence[float]) -> np.ndarray:
    """
    Coordinates (4, 3) of the tetrahedron with edge lengths r_a + r_b:
    vertex 0 at the origin, vertex 1 on the x-axis, vertex 2 in the
    xy-plane and vertex 3 above it.
    """

    return _embed(np.asarray(r4, dtype=float).reshape(1, 4))[0]


def coordinate_volume(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    edges = points[..., 1:, :] - points[..., :1, :]
    return np.abs(np.linalg.det(edges)) / 6.0


def coordinate_solid_angle(points: np.ndarray, vertex: int = 0) -> np.ndarray:
    """Solid angle at `vertex` by the Van Oosterom-Strackee formula."""

    points = np.asarray(points, dtype=float)
    others = [p for p in range(4) if p != vertex]
    u, v, w = (points[..., p, :] - points[..., vertex, :] for p in others)
    nu, nv, nw = (np.linalg.norm(x, axis=-1) for x in (u, v, w))

    numerator = np.abs(np.einsum("...i,...i", u, np.cross(v, w)))
    denominator = (
        nu * nv * nw
        + np.einsum("...i,...i", u, v) * nw
        + np.einsum("...i,...i", u, w) * nv
        + np.einsum("...i,...i", v, w) * nu
    )
    return 2.0 * np.arctan2(numerator, denominator)


def spherical_excess(a: float, b: float, c: float) -> float:
    """
    Area of the spherical triangle with sides a, b, c (L'Huilier). The sides
    of the triangle cut at a vertex of a tetrahedron are its face angles
    there, so this recovers the solid angle.
    """

    s = (a + b + c) / 2
    product = math.tan(s / 2) * math.tan((s - a) / 2) * math.tan((s - b) / 2) * math.tan((s - c) / 2)
    if product < 0:
        raise DegenerateTetrahedron("Sides %s do not form a spherical triangle" % ([a, b, c],))

    return 4.0 * math.atan(math.sqrt(product))


def _tangency(points: np.ndarray, radii: np.ndarray, a: int, b: int) -> np.ndarray:
    direction = points[b] - points[a]
    return points[a] + radii[a] * direction / np.linalg.norm(direction)


def coordinate_midsphere(points: np.ndarray, r4: Sequence[float]) -> Tuple[np.ndarray, float]:
    """
    Center and radius of the sphere tangent to the six edges: the point
    whose projection onto every edge line is the tangency point there.
    """

    radii = np.asarray(r4, dtype=float)
    rows, rhs = [], []
    for a, b in EDGES:
        direction = points[b] - points[a]
        rows.append(direction)
        rhs.append(np.dot(_tangency(points, radii, a, b), direction))

    center = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    radius = float(np.linalg.norm(center - _tangency(points, radii, 0, 1)))
    return center, radius


def coordinate_signed_heights(points: np.ndarray, r4: Sequence[float]) -> np.ndarray:
    """Signed distances of the midsphere center to the faces, by opposite vertex."""

    center, _ = coordinate_midsphere(points, r4)
    out = np.empty(4)

    for m, (a, b, c) in enumerate(FACES):
        normal = np.cross(points[b] - points[a], points[c] - points[a])
        normal /= np.linalg.norm(normal)
        if np.dot(points[m] - points[a], normal) < 0:
            normal = -normal
        out[m] = np.dot(center - points[a], normal)

    return out


def _incenter(points: np.ndarray, a: int, b: int, c: int) -> np.ndarray:
    la = np.linalg.norm(points[b] - points[c])
    lb = np.linalg.norm(points[a] - points[c])
    lc = np.linalg.norm(points[a] - points[b])
    return (la * points[a] + lb * points[b] + lc * points[c]) / (la + lb + lc)


def coordinate_dual_area(points: np.ndarray, r4: Sequence[float], edge: Tuple[int, int] = (0, 1)) -> float:
    """
    Signed area of the quadrilateral (tangency point on the edge, incenter of
    one adjacent face, midsphere center, incenter of the other face). It lies
    in the plane through the tangency point perpendicular to the edge; each
    of its two triangles counts negatively when the center crossed the face.
    """

    a, b = edge
    c, d = (p for p in range(4) if p not in edge)
    radii = np.asarray(r4, dtype=float)

    center, _ = coordinate_midsphere(points, radii)
    t = _tangency(points, radii, a, b)
    first, second = _incenter(points, a, b, c), _incenter(points, a, b, d)

    axis = points[b] - points[a]
    axis /= np.linalg.norm(axis)
    if np.dot(np.cross(first - t, second - t), axis) < 0:
        axis = -axis

    area = np.cross(first - t, center - t) + np.cross(center - t, second - t)
    return float(0.5 * np.dot(area, axis))


def schlafli_residual(r4: Sequence[float]) -> float:
    """
    max over vertices i of |sum_m r_m d alpha_i / d r_m|, divided by
    |d alpha_i / d r_i| max r.
    """

    batch = TetBatch(np.asarray(r4, dtype=float).reshape(1, 4))
    return float(_schlafli(batch)[0])


def _schlafli(batch: TetBatch) -> np.ndarray:
    gradient = batch.gradient
    residual = np.abs(np.einsum("nim,nm->ni", gradient, batch.radii))
    diagonal = np.abs(np.einsum("nii->ni", gradient))
    return (residual / (diagonal * batch.radii.max(axis=1)[:, None])).max(axis=1)


def hessian_symmetry_defect(r4: Sequence[float]) -> float:
    """max over pairs of |d alpha_i / d r_j - d alpha_j / d r_i|"""

    gradient = TetBatch(np.asarray(r4, dtype=float).reshape(1, 4)).gradient[0]
    return float(np.abs(gradient - gradient.T).max())


def face_angle_rate_defect(r3: Sequence[float], k3: Sequence[float], scheme: Optional[FdScheme] = None) -> float:
    """
    |d gamma / dt - face_angle_rate| at t = 0 along r(t) = r exp(-K t), with
    the derivative by finite differences of the law of cosines.
    """

    r = np.asarray(r3, dtype=float)
    k = np.asarray(k3, dtype=float)

    def angle(t):
        return _law_of_cosines(*(r * np.exp(-k * t)))

    return abs(fd_derivative(angle, 0.0, scheme) - face_angle_rate(r, k))


def _relative(fd: np.ndarray, analytic: np.ndarray) -> float:
    scale = float(np.abs(analytic).max())
    return float(np.abs(fd - analytic).max()) / (scale if scale > 0 else 1.0)


def curvature_evolution_defect(c: Complex, m: MetricStructure, scheme: Optional[FdScheme] = None) -> float:
    """
    Relative defect between dK/dt from finite differences in time and the
    Laplacian of K.
    """

    scheme = scheme or FdScheme()
    K0 = curvature_field(c, m).K

    def at(t, v):
        return curvature_field(c, m.with_radii(m.radii * np.exp(-K0 * t))).K[v]

    # Steps in time are scaled to the fastest rate.
    rate = max(float(np.abs(K0).max()), 1.0)
    fd = np.array([fd_derivative(lambda s, v=v: at(s / rate, v), 0.0, scheme) * rate for v in range(c.n_vertices)])

    return _relative(fd, curvature_rate(c, m))


def laplacian_identity_defects(c: Complex, m: MetricStructure, f, g) -> Tuple[float, float]:
    """
    Relative defects of sum (Lf)_i r_i = 0 and <Lf, g> = <f, Lg>, both
    scaled by sum |Lf| |g| r.
    """

    lf, lg = laplacian(c, m, f), laplacian(c, m, g)
    f, g = np.asarray(f, dtype=float), np.asarray(g, dtype=float)

    null = abs(float(np.dot(lf, m.radii))) / max(float(np.dot(np.abs(lf), m.radii)), 1e-300)
    scale = max(float(np.sum(np.abs(lf * g) * m.radii)), float(np.sum(np.abs(f * lg) * m.radii)), 1e-300)
    adjoint = abs(inner_product(lf, g, m) - inner_product(f, lg, m)) / scale

    return null, adjoint


def random_tetrahedra(
    n: int,
    seed: int = 42,
    low: float = 0.1,
    high: float = 10.0,
    q_floor: float = 1e-3,
) -> np.ndarray:
    """
    `n` rows of four radii drawn log-uniformly from [low, high], keeping only
    draws whose Q, after rescaling the row to geometric mean 1, exceeds
    `q_floor`. Deterministic for a given seed.
    """

    if n < 1:
        raise InputError("Need at least one sample, got %d" % (n))

    rng = np.random.default_rng(seed)
    kept: List[np.ndarray] = []
    count = 0

    while count < n:
        draws = np.exp(rng.uniform(math.log(low), math.log(high), size=(2 * n, 4)))
        good = draws[TetBatch(draws).qn > q_floor]
        kept.append(good)
        count += len(good)

    return np.concatenate(kept)[:n]


@dataclass(frozen=True)
class CheckResult:
    test: str
    samples: int
    max_defect: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_defect <= self.threshold)

    def as_dict(self):
        return {
            "test": self.test,
            "samples": self.samples,
            "max_defect": self.max_defect,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def _tet_checks(radii: np.ndarray, tick: Callable[[], None]) -> List[CheckResult]:
    n = len(radii)
    batch = TetBatch(radii)
    results = []

    def add(name, defects, threshold):
        results.append(CheckResult(name, n, float(np.max(defects)), threshold))
        tick()

    gradient = batch.gradient
    fd = fd_jacobian(_solid, radii)
    scale = np.abs(gradient).max(axis=(1, 2))
    add("solid_angle_gradient_fd", np.abs(fd - gradient).max(axis=(1, 2)) / scale, 1e-6)

    dihedral = batch.dihedral_gradient
    fd = fd_jacobian(_dihedral, radii)
    scale = np.abs(dihedral).max(axis=(1, 2))
    add("dihedral_gradient_fd", np.abs(fd - dihedral).max(axis=(1, 2)) / scale, 1e-6)

    add("schlafli_residual", _schlafli(batch), 1e-10)
    add("hessian_symmetry", np.abs(gradient - gradient.transpose(0, 2, 1)).max(axis=(1, 2)), 1e-9)

    cm = np.array([cayley_menger_volume(row) for row in batch.lengths])
    add("volume_cayley_menger", np.abs(cm - batch.volume) / batch.volume, 1e-10)

    partition = (batch.areas * batch.heights).sum(axis=1) / 3.0
    add("volume_partition", np.abs(partition - batch.volume) / batch.volume, 1e-10)

    pythagoras = batch.heights ** 2 + batch.inradii ** 2 - batch.midsphere[:, None] ** 2
    add("pythagoras", np.abs(pythagoras).max(axis=1) / batch.midsphere ** 2, 1e-10)

    identity = 2.0 * batch.areas - batch.inradii * batch.perimeters
    add("face_identity", np.abs(identity / (2.0 * batch.areas)).max(axis=1), 1e-12)

    points = _embed(radii)
    coordinate = np.stack([coordinate_solid_angle(points, a) for a in range(4)], axis=1)
    add("coordinate_solid_angle", np.abs(coordinate - batch.solid).max(axis=1), 1e-10)

    excess = np.array([
        [spherical_excess(*(angles[a, m] for m in range(4) if m != a)) for a in range(4)]
        for angles in batch.face_angles
    ])
    add("spherical_excess", np.abs(excess - batch.solid).max(axis=1), 1e-10)

    midsphere, heights, dual = [], [], []
    for row, pts in zip(radii, points):
        _, radius = coordinate_midsphere(pts, row)
        midsphere.append(radius)
        heights.append(coordinate_signed_heights(pts, row))
        dual.append([coordinate_dual_area(pts, row, edge) for edge in EDGES])

    R = batch.midsphere
    add("coordinate_midsphere", np.abs(np.array(midsphere) - R) / R, 1e-8)
    add("coordinate_signed_heights", np.abs(np.array(heights) - batch.heights).max(axis=1) / R, 1e-8)
    add("coordinate_dual_area", np.abs(np.array(dual) - batch.dual).max(axis=1) / R ** 2, 1e-8)

    faces = radii[:, :3]
    add("face_angle_relation", [fd_face_angle_check(*row) for row in faces], 1e-9)

    rng = np.random.default_rng(len(radii))
    rates = rng.uniform(-1.0, 1.0, size=faces.shape)
    add("face_angle_rate", [face_angle_rate_defect(row, k) for row, k in zip(faces, rates)], 1e-8)

    return results


def _laplacian_checks(instances: int, seed: int, tick: Callable[[], None]) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    complexes = [build_complex(load_builtin(name)) for name in ("5cell", "cyclic9")]

    null, adjoint, evolution = [], [], []
    for index in range(instances):
        c = complexes[index % len(complexes)]
        m = MetricStructure(c.vertices, np.exp(rng.uniform(math.log(0.8), math.log(1.25), c.n_vertices)))
        f, g = rng.normal(size=c.n_vertices), rng.normal(size=c.n_vertices)

        a, b = laplacian_identity_defects(c, m, f, g)
        null.append(a)
        adjoint.append(b)

        if index < 10:
            evolution.append(curvature_evolution_defect(c, m))

    results = [
        CheckResult("laplacian_null", instances, float(max(null)), 1e-10),
        CheckResult("laplacian_self_adjoint", instances, float(max(adjoint)), 1e-10),
        CheckResult("curvature_evolution", len(evolution), float(max(evolution)), 1e-6),
    ]
    for _ in results:
        tick()

    return results


#: Number of results `run_checks` produces, for progress bars.
CHECK_COUNT = 18


def run_checks(samples: int = 1000, seed: int = 42, on_check: Optional[Callable[[], None]] = None) -> List[CheckResult]:
    """
    Run every oracle on `samples` seeded random tetrahedra, plus the
    Laplacian identities on 100 random metrics over the shipped complexes.
    """

    tick = on_check or (lambda: None)
    radii = random_tetrahedra(samples, seed)

    results = _tet_checks(radii, tick)
    results.extend(_laplacian_checks(100, seed, tick))

    for result in results:
        logger.info(
            "%s: max defect %.3g (threshold %.0e) %s",
            result.test,
            result.max_defect,
            result.threshold,
            "ok" if result.passed else "FAILED",
        )

    return results


def check_report_json(results: Sequence[CheckResult]) -> str:
    return json.dumps([r.as_dict() for r in results], indent=2) + "\n"
