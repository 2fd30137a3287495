import math

import numpy as np
import pytest

from yamabe.errors import DegenerateTetrahedron
from yamabe.errors import InputError
from yamabe.errors import InvalidRadius
from yamabe.errors import UnknownVertex
from yamabe.metric import EDGES
from yamabe.metric import MetricStructure
from yamabe.metric import TetBatch
from yamabe.metric import dihedral_angle
from yamabe.metric import dihedral_angle_gradient
from yamabe.metric import dual_area
from yamabe.metric import edge_length
from yamabe.metric import face_angle
from yamabe.metric import face_angle_rate
from yamabe.metric import face_area
from yamabe.metric import face_inradius
from yamabe.metric import face_perimeter
from yamabe.metric import format_radii
from yamabe.metric import midsphere_radius
from yamabe.metric import nondegeneracy_q
from yamabe.metric import parse_radii
from yamabe.metric import read_radii
from yamabe.metric import signed_height
from yamabe.metric import solid_angle
from yamabe.metric import tet_geometry
from yamabe.metric import tet_volume
from yamabe.metric import write_radii

REGULAR_SOLID = 3 * math.acos(1 / 3) - math.pi

#: Q = 11/9, edge lengths 3, 4, 7, 5, 8, 9
SCALENE = (1.0, 2.0, 3.0, 6.0)


def test_regular_tetrahedron():
    g = tet_geometry([1, 1, 1, 1])

    assert g.q == pytest.approx(8.0, rel=1e-12)
    assert g.volume == pytest.approx(2 * math.sqrt(2) / 3, rel=1e-12)
    assert g.midsphere == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    np.testing.assert_allclose(g.solid, REGULAR_SOLID, rtol=1e-12)
    np.testing.assert_allclose(g.dihedral, math.acos(1 / 3), rtol=1e-12)
    np.testing.assert_allclose(g.heights, 1 / math.sqrt(6), rtol=1e-12)
    np.testing.assert_allclose(g.dual, 1 / (3 * math.sqrt(2)), rtol=1e-12)
    np.testing.assert_allclose(
        g.gradient[0],
        [-1 / math.sqrt(2), 1 / (3 * math.sqrt(2)), 1 / (3 * math.sqrt(2)), 1 / (3 * math.sqrt(2))],
        rtol=1e-12,
    )


def test_face_quantities():
    angle = face_angle(1, 1, 2)

    assert angle.cos == pytest.approx(1 / 3, rel=1e-14)
    assert angle.cos ** 2 + angle.sin ** 2 == pytest.approx(1.0, rel=1e-14)
    assert face_area(1, 2, 3) == pytest.approx(6.0)
    assert face_perimeter(1, 2, 3) == 12.0
    #: inradius is area over half the perimeter
    assert face_inradius(1, 2, 3) == pytest.approx(1.0)


def test_face_angles_of_a_triangle_sum_to_pi():
    r = (0.3, 2.0, 5.0)
    total = face_angle(*r).angle + face_angle(r[1], r[2], r[0]).angle + face_angle(r[2], r[0], r[1]).angle

    assert total == pytest.approx(math.pi, rel=1e-14)


def test_scalene_tetrahedron():
    assert nondegeneracy_q(*SCALENE) == pytest.approx(11 / 9, rel=1e-14)
    assert tet_volume(*SCALENE) == pytest.approx(4 * math.sqrt(11), rel=1e-12)
    assert midsphere_radius(*SCALENE) == pytest.approx(2 / math.sqrt(11 / 9), rel=1e-12)
    np.testing.assert_allclose(tet_geometry(SCALENE).lengths, [3, 4, 7, 5, 8, 9])


def test_scalene_solid_angle_and_gradient():
    assert solid_angle(SCALENE, 0) == pytest.approx(2.0563144491, rel=1e-9)
    np.testing.assert_allclose(
        TetBatch(SCALENE).gradient[0, 0],
        [-2.284785967, 0.519269538, 0.261309832, 0.077052899],
        rtol=1e-8,
    )


def test_solid_angle_is_sum_of_dihedrals_minus_pi():
    g = tet_geometry([0.4, 1.7, 1.1, 2.5])

    for a in range(4):
        around = sum(g.dihedral_at(a, b) for b in range(4) if b != a)
        assert g.solid[a] == pytest.approx(around - math.pi, rel=1e-12)


def test_solid_angle_at_small_vertex():
    assert solid_angle([1, 1, 1, 1 / 3], 3) == pytest.approx(2.0008390335, rel=1e-9)


def test_dihedral_from_face_angles_matches_closed_form():
    r = np.array([0.4, 1.7, 1.1, 2.5])
    g = tet_geometry(r)
    i, j, k, l = 0, 1, 2, 3

    gamma_ijk = face_angle(r[i], r[j], r[k]).angle
    gamma_ijl = face_angle(r[i], r[j], r[l]).angle
    gamma_ikl = face_angle(r[i], r[k], r[l]).angle

    assert dihedral_angle(gamma_ijk, gamma_ijl, gamma_ikl) == pytest.approx(g.dihedral_at(i, j), rel=1e-10)


def test_dihedral_angle_of_equilateral_faces():
    third = math.pi / 3
    assert dihedral_angle(third, third, third) == pytest.approx(math.acos(1 / 3))


def test_dihedral_angle_of_flat_faces():
    assert dihedral_angle(1.0, 1.0, 0.0) == 0.0
    assert dihedral_angle(1.2, 0.5, 0.7) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("angles", [(0.0, 1.0, 1.0), (1.0, math.pi, 1.0), (0.1, 0.1, 3.0), (1.0, 0.5, 0.0)])
def test_dihedral_angle_rejects_impossible_face_angles(angles):
    with pytest.raises(DegenerateTetrahedron):
        dihedral_angle(*angles)


def test_negative_omega():
    #: two large spheres, Omega between them changes sign
    omega = TetBatch([10, 10, 1, 0.5]).omega[0]

    assert omega[0, 1] == pytest.approx(-0.0098688250, rel=1e-7)
    assert omega[0, 1] == pytest.approx(omega[1, 0], rel=1e-12)


def test_center_outside_a_face():
    r = [1, 1, 1, 0.2]

    assert signed_height(r, (0, 1, 2)) == pytest.approx(-0.408248, abs=1e-6)
    assert dual_area(r, (0, 1)) == pytest.approx(-0.0214274782, rel=1e-8)
    assert signed_height(r, (0, 1, 3)) > 0


def test_volume_partition():
    #: the four pyramids from the center to the faces fill the tetrahedron
    g = tet_geometry([0.4, 1.7, 1.1, 2.5])

    assert sum(g.areas * g.heights) / 3 == pytest.approx(g.volume, rel=1e-12)


def test_dihedral_gradient_satisfies_homogeneity():
    #: angles are scale invariant, so sum_p r_p d beta / d r_p = 0
    r = np.array([0.4, 1.7, 1.1, 2.5])

    for edge in EDGES:
        assert abs(np.dot(dihedral_angle_gradient(r, edge), r)) < 1e-12


def test_homogeneity():
    r = np.array([0.4, 1.7, 1.1, 2.5])
    small, large = tet_geometry(r), tet_geometry(10 * r)

    np.testing.assert_allclose(large.solid, small.solid, rtol=1e-13)
    np.testing.assert_allclose(large.dual, 100 * small.dual, rtol=1e-12)
    np.testing.assert_allclose(large.gradient, small.gradient / 10, rtol=1e-12)
    assert large.volume == pytest.approx(1000 * small.volume, rel=1e-12)


def test_degenerate_tetrahedron():
    #: Q(1, 1, 1, x) vanishes at x = 1 / (3 + 2 sqrt 3)
    batch = TetBatch([1, 1, 1, 0.1], labels=[(1, 2, 3, 4)])

    assert batch.degenerate[0]
    with pytest.raises(DegenerateTetrahedron) as e:
        batch.require_nondegenerate()

    assert e.value.tet == (1, 2, 3, 4)
    assert e.value.q < 0

    with pytest.raises(DegenerateTetrahedron):
        tet_volume(1, 1, 1, 0.1)

    with pytest.raises(DegenerateTetrahedron):
        solid_angle([1, 1, 1, 0.1])


def test_nearly_degenerate_is_accepted():
    x = 1.001 / (3 + 2 * math.sqrt(3))
    g = tet_geometry([1, 1, 1, x])

    assert 0 < g.q < 1e-1
    assert np.all(np.isfinite(g.solid))


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_invalid_radius(bad):
    with pytest.raises(InvalidRadius):
        MetricStructure((1, 2), [1.0, bad])

    with pytest.raises(InvalidRadius):
        face_area(1.0, bad, 1.0)


def test_metric_structure():
    m = MetricStructure.from_mapping({2: 2.0, 1: 1.0})

    assert m.vertex_ids == (1, 2)
    assert m.radius(2) == 2.0
    assert edge_length(m, (1, 2)) == 3.0
    assert m.scaled(2).as_dict() == {1: 2.0, 2: 4.0}

    with pytest.raises(ValueError):
        m.radii[0] = 5.0

    with pytest.raises(UnknownVertex):
        m.radius(3)

    with pytest.raises(InputError):
        MetricStructure((1, 2, 3), [1.0, 2.0])


def test_log_uniform_is_seeded():
    a = MetricStructure.log_uniform(range(1, 10), 0.5, 2.0, seed=7)
    b = MetricStructure.log_uniform(range(1, 10), 0.5, 2.0, seed=7)

    np.testing.assert_array_equal(a.radii, b.radii)
    assert np.all((a.radii >= 0.5) & (a.radii <= 2.0))


def test_parse_radii_forms():
    lines = parse_radii("# radii\n2 0.5\n1 1.5\n3 2\n", (1, 2, 3))
    array = parse_radii("[1.5, 0.5, 2]", (1, 2, 3))

    np.testing.assert_array_equal(lines.radii, [1.5, 0.5, 2.0])
    np.testing.assert_array_equal(array.radii, lines.radii)


@pytest.mark.parametrize(
    "text, error",
    [
        ("1 1.0\n2 2.0\n", UnknownVertex),
        ("1 1.0\n2 2.0\n3 1.0\n4 1.0\n", UnknownVertex),
        ("1 1.0\n1 2.0\n2 1.0\n3 1.0\n", InputError),
        ("1 one\n", InputError),
        ("[1.0, 2.0]", InputError),
        ("1 -1\n2 1\n3 1\n", InvalidRadius),
    ],
)
def test_parse_radii_errors(text, error):
    with pytest.raises(error):
        parse_radii(text, (1, 2, 3))


def test_radii_file_keeps_full_precision(tmp_path):
    m = MetricStructure((1, 2, 3), [1 / 3, math.pi, 1e-5])
    path = tmp_path / "r.txt"
    write_radii(m, path)

    np.testing.assert_array_equal(read_radii(path, (1, 2, 3)).radii, m.radii)
    assert format_radii(m).splitlines()[1] == "2 3.1415926535897931"


def test_face_angle_rate_vanishes_for_equal_curvature():
    assert face_angle_rate([0.5, 1.0, 2.0], [3.0, 3.0, 3.0]) == pytest.approx(0.0, abs=1e-15)
    #: the angle at a vertex with larger curvature (faster shrinking) opens up
    assert face_angle_rate([1.0, 1.0, 1.0], [2.0, 1.0, 1.0]) > 0


def test_wrong_shape():
    with pytest.raises(InputError):
        TetBatch([1, 1, 1])
