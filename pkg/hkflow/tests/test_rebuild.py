#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests of map reconstruction from integral forms and of the symplectic
certificate.
"""

#standard testing suite from python
import unittest

from numpy import array, eye, diag, sqrt, allclose
from numpy.random import Generator, PCG64

from hkflow import Lattice, PolyMap, CellField, build_mesh, differentiate, \
diff_of_map, random_potential, is_integral_class, primitive, closure_defects, \
verify_symplectic, projection_plot_data, IntegralityError, WhitneyError

rng = Generator(PCG64(5))

mesh = build_mesh(m=2)
Id = CellField.constant(mesh, eye(4))

shear = array([[1., 0.5, 0., 0.],
               [0., 1., 0., 0.],
               [0., 0., 2., 0.],
               [0., 0., 0.3, 1.]])
smesh = build_mesh(Lattice(generators=shear), m=2)

unimodular = array([[1., 1., 0., 0.],
                    [0., 1., 0., 0.],
                    [0., 0., 1., 0.],
                    [0., 0., 2., 1.]])


class hkflow_integrality_test(unittest.TestCase):

    def test_examples(self):
        ok, rounded = is_integral_class(eye(4), mesh.lattice)
        self.assertTrue(ok)
        self.assertTrue((rounded == eye(4)).all())
        self.assertFalse(is_integral_class(0.5*eye(4), mesh.lattice, 1e-3)[0])
        self.assertTrue(is_integral_class(eye(4) + 1e-12*rng.standard_normal((4, 4)),
                                          mesh.lattice)[0])
        self.assertFalse(is_integral_class(eye(4) + 1e-6, mesh.lattice)[0])

    def test_sheared_lattice(self):
        # the identity has periods equal to the generators
        self.assertTrue(is_integral_class(shear, smesh.lattice)[0])
        self.assertFalse(is_integral_class(eye(4), smesh.lattice)[0])


class hkflow_primitive_test(unittest.TestCase):

    def test_identity(self):
        f = primitive(Id)
        self.assertTrue(allclose(mesh.lattice.distance(f.vertex_images - mesh.vertices), 0,
                                 atol=1e-12))
        self.assertTrue(allclose(f.vertex_images[0], mesh.vertices[0]))
        self.assertLess(f.closure_defects.max(), 1e-12)
        f.check_lifts()
        self.assertTrue(allclose(diff_of_map(f).data, eye(4)))

    def test_sheared_identity(self):
        f = primitive(CellField.constant(smesh, eye(4)))
        f.check_lifts()
        self.assertTrue(allclose(diff_of_map(f).data, eye(4)))

    def test_integer_linear(self):
        F = CellField.constant(mesh, unimodular)
        f = primitive(F)
        f.check_lifts()
        self.assertTrue(allclose(diff_of_map(f).data, unimodular))
        g = PolyMap.linear(mesh, unimodular)
        self.assertTrue(allclose(mesh.lattice.distance(f.vertex_images - g.vertex_images), 0,
                                 atol=1e-12))

    def test_roundtrip_with_exact_part(self):
        F = Id + 0.2*differentiate(random_potential(mesh, rng))
        f = primitive(F)
        f.check_lifts()
        self.assertLess(abs(diff_of_map(f).data - F.data).max(), 1e-10)

    def test_base_vertex(self):
        F = Id + 0.2*differentiate(random_potential(mesh, rng))
        f0 = primitive(F, base=0)
        f3 = primitive(F, base=3)
        self.assertTrue(allclose(f3.vertex_images[3], mesh.vertices[3]))
        # two primitives differ by a translation modulo the lattice
        shift = f3.vertex_images - f0.vertex_images
        d = mesh.lattice.distance(shift - shift[0])
        self.assertTrue(allclose(d, 0, atol=1e-10))
        self.assertTrue(allclose(diff_of_map(f3).data, diff_of_map(f0).data))

    def test_not_integral(self):
        self.assertRaises(IntegralityError, primitive, 0.5*Id)
        self.assertRaises(IntegralityError, primitive, CellField.constant(smesh, eye(4)*0.7))

    def test_not_whitney(self):
        F = CellField(mesh=mesh, data=rng.standard_normal((mesh.num_cells, 4, 4)))
        self.assertRaises(WhitneyError, primitive, F)

    def test_closure_defects(self):
        f = primitive(Id)
        images = f.vertex_images.copy()
        self.assertLess(closure_defects(Id, images).max(), 1e-12)
        images[5, 0] += 0.1
        defects = closure_defects(Id, images)
        self.assertAlmostEqual(defects.max(), 0.1, 10)
        ev = mesh.edge_vertices
        touched = (ev == 5).any(axis=1)
        self.assertTrue(allclose(defects[~touched], 0, atol=1e-12))


class hkflow_verify_test(unittest.TestCase):

    def test_identity(self):
        report = verify_symplectic(Id)
        self.assertTrue(report.verdict)
        self.assertTrue(report.whitney_ok)
        self.assertAlmostEqual(report.max_defect, 0., 14)
        self.assertEqual(report.as_dict()['homeomorphism'], 'unknown')

    def test_unimodular_non_symplectic(self):
        report = verify_symplectic(CellField.constant(mesh, diag([1., 1., 1., 2.])))
        self.assertFalse(report.verdict)
        self.assertAlmostEqual(report.max_defect, 1., 12)
        self.assertAlmostEqual(report.max_asd_defect, 1./sqrt(2.), 12)

    def test_tolerance(self):
        F = CellField.constant(mesh, diag([1., 1., 1., 1. + 1e-8]))
        self.assertTrue(verify_symplectic(F, 1e-6).verdict)
        self.assertFalse(verify_symplectic(F, 1e-9).verdict)

    def test_not_whitney(self):
        F = CellField(mesh=mesh, data=rng.standard_normal((mesh.num_cells, 4, 4)))
        self.assertFalse(verify_symplectic(F).whitney_ok)


class hkflow_projection_test(unittest.TestCase):

    def test_rows(self):
        f = PolyMap.identity(mesh)
        rows = projection_plot_data(f)
        self.assertEqual(len(rows), 6*mesh.num_vertices)
        rows = projection_plot_data(f, [(0, 3)])
        self.assertEqual(len(rows), mesh.num_vertices)
        v, i, j, x, y = rows[7]
        self.assertEqual((i, j), (0, 3))
        self.assertEqual((x, y), (mesh.vertices[v, 0], mesh.vertices[v, 3]))


if "__main__" == __name__:
    unittest.main()
