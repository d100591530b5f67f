#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests of the modified moment map flow, its step control and the
renormalized (G, tau) system.
"""

#standard testing suite from python
import unittest
import warnings

from numpy import eye, zeros, diag, sqrt, allclose, diff, isnan
from numpy.random import Generator, PCG64

from hkflow import CellField, FlowConfig, ModifiedMomentMapFlow, \
RenormalizedFlow, FlowAbort, build_mesh, build_closed_basis, differentiate, \
random_potential, inner_g, norm_g, mu_norm2, whitney_residual, rhs, step, \
estimate_lojasiewicz, fit_exponential_rate, initial_field, cohomology_class, \
is_integral_class, config

mesh = build_mesh(m=2)
basis = build_closed_basis(mesh, eye(4))
Id = CellField.constant(mesh, eye(4))


def make_flow(**kw):
    return ModifiedMomentMapFlow(config=FlowConfig(**kw), mesh=mesh, basis=basis)


class hkflow_rhs_test(unittest.TestCase):

    def test_fixed_point(self):
        self.assertTrue(allclose(rhs(basis, Id).data, 0, atol=1e-14))

    def test_key_identity(self):
        rng = Generator(PCG64(3))
        for _ in range(5):
            F = basis.materialize(rng.standard_normal(basis.dimension))
            r = rhs(basis, F)
            self.assertLess(abs(inner_g(r, F) + 2*mu_norm2(F)), 1e-9*2*mu_norm2(F))
            _, res = whitney_residual(r)
            self.assertLess(res, 1e-9)

    def test_homogeneity(self):
        F = Id + 0.3*differentiate(random_potential(mesh, 5))
        self.assertTrue(allclose(rhs(basis, 2*F).data, 8*rhs(basis, F).data))


class hkflow_step_test(unittest.TestCase):

    def test_fixed_point(self):
        flow = make_flow(init='identity', integrator='rk4')
        s0 = flow.initial_state()
        s1 = flow.step(s0)
        self.assertTrue(allclose(s1.field.data, s0.field.data, atol=1e-14))
        self.assertEqual(s1.t, s0.h)

    def test_euler_definition(self):
        cfg = FlowConfig(init='perturbed_identity', integrator='euler', adaptive=False, h=1e-3)
        flow = ModifiedMomentMapFlow(config=cfg, mesh=mesh, basis=basis)
        s0 = flow.initial_state()
        s1 = step(s0, cfg)
        expected = s0.coordinates + 1e-3*flow.rhs_coordinates(s0.coordinates)
        self.assertTrue(allclose(s1.coordinates, expected, rtol=0, atol=1e-15))
        self.assertTrue(allclose(s1.field.data,
                                 (s0.field + 1e-3*rhs(basis, s0.field)).data, atol=1e-13))

    def test_decay_law(self):
        h = 1e-3
        flow = make_flow(init='perturbed_identity', integrator='rk4', adaptive=False, h=h)
        states = [flow.initial_state()]
        for _ in range(20):
            states.append(flow.step(states[-1]))
        for k in range(1, 20):
            slope = (states[k+1].record['norm2'] - states[k-1].record['norm2'])/(2*h)
            expected = -4*states[k].record['mu_norm']**2
            self.assertLess(abs(slope - expected), 0.01*abs(expected))
            # the forward difference is correct to first order
            fwd = (states[k+1].record['norm2'] - states[k].record['norm2'])/h
            self.assertLess(abs(fwd - expected), 0.1*abs(expected))

    def test_step_halving(self):
        flow = make_flow(init='perturbed_identity', epsilon=0.3, h=10.)
        s0 = flow.initial_state()
        s1 = flow.step(s0)
        self.assertLess(s1.last_h, 10.)
        self.assertLessEqual(s1.record['norm2'], s0.record['norm2']*(1 + 1e-12))
        self.assertLessEqual(s1.record['phi'], s0.record['phi']*(1 + 1e-12))

    def test_step_doubling(self):
        flow = make_flow(init='perturbed_identity', h=1e-4)
        s = flow.initial_state()
        for _ in range(10):
            s = flow.step(s)
        self.assertEqual(s.h, 2e-4)
        self.assertEqual(s.clean_steps, 0)

    def test_underflow(self):
        flow = make_flow(init='perturbed_identity', epsilon=0.3, h=10., h_min=5.)
        s0 = flow.initial_state()
        with self.assertRaises(FlowAbort) as cm:
            flow.step(s0)
        self.assertIs(cm.exception.state, s0)

    def test_non_finite(self):
        flow = make_flow(init='perturbed_identity', adaptive=False, h=1e200)
        with self.assertRaises(FlowAbort):
            flow.step(flow.initial_state())


class hkflow_run_test(unittest.TestCase):

    def test_identity(self):
        result = make_flow(init='identity').run()
        self.assertEqual(result.status, 'converged')
        self.assertEqual(result.steps, 0)
        self.assertEqual(result.classification, 'generic')
        self.assertAlmostEqual(result.tau, 1., 12)

    def test_generic(self):
        result = make_flow(init='perturbed_identity', epsilon=0.05, seed=1).run()
        self.assertEqual(result.status, 'converged')
        self.assertEqual(result.classification, 'generic')
        self.assertLessEqual(result.final_mu_norm, 1e-9)
        self.assertLessEqual(result.rhs_norm, 1e-8)
        tr = result.trace
        # norm and phi never increase, F stays bounded
        self.assertTrue((diff(tr[:, 2]) <= 1e-12*tr[:-1, 2]).all())
        self.assertTrue((diff(tr[:, 3]) <= 1e-12*(1. + tr[:-1, 3])).all())
        self.assertLessEqual(tr[:, 2].max(), tr[0, 2])
        _, res = whitney_residual(result.field)
        self.assertLess(res, 1e-9)
        self.assertTrue(result.field.is_finite())
        summary = result.summary()
        for key in ('status', 'steps', 'final_mu_norm', 'tau', 'classification'):
            self.assertIn(key, summary)

    def test_degenerate(self):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            cfg = FlowConfig(init='exact', alpha=zeros((4, 4)), seed=2)
            flow = ModifiedMomentMapFlow(config=cfg, mesh=mesh)
            result = flow.run()
        self.assertEqual(result.status, 'converged')
        self.assertEqual(result.classification, 'degenerate')
        self.assertEqual(result.tau, 0.)
        self.assertLessEqual(result.final_mu_norm, cfg.tol)
        self.assertAlmostEqual(result.trace[0, 2], 1., 10)
        # exact zeros of mu need not vanish, their pullback of omega_V does
        self.assertLess(result.max_pullback, 1e-6)
        summary = result.summary()
        self.assertEqual(summary['final_norm'], float(sqrt(result.trace[-1, 2])))
        self.assertEqual(summary['max_pullback_norm'], result.max_pullback)

    def test_tau_on_scaled_lattice(self):
        cfg = FlowConfig(init='identity', lattice=diag([2., 1., 1., 1.]))
        result = ModifiedMomentMapFlow(config=cfg).run()
        self.assertEqual(result.status, 'converged')
        self.assertAlmostEqual(result.tau, 1., 12)
        self.assertEqual(result.tau, result.trace[-1, 7])
        G = result.field/result.tau
        ok, rounded = is_integral_class(cohomology_class(G), G.mesh.lattice)
        self.assertTrue(ok)
        self.assertTrue((rounded == eye(4)).all())

    def test_whitney_at_records(self):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            result = make_flow(init='perturbed_identity', epsilon=0.2, max_steps=30).run()
        self.assertEqual(len(result.whitney), len(result.trace))
        self.assertLessEqual(result.whitney.max(), 1e-9)
        self.assertEqual(result.summary()['max_whitney_residual'], result.whitney.max())

    def test_closedness_abort(self):
        tol = config.whitney_tol
        self.addCleanup(setattr, config, 'whitney_tol', tol)
        config.whitney_tol = 1e-30
        flow = make_flow(init='perturbed_identity', epsilon=0.3, max_steps=5)
        with self.assertRaises(FlowAbort) as cm:
            flow.run()
        self.assertIn('closedness', str(cm.exception))
        self.assertGreater(cm.exception.result.whitney[-1], 1e-30)

    def test_inconclusive(self):
        flow = make_flow(init='perturbed_identity', max_steps=3)
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter('always')
            result = flow.run()
        self.assertEqual(result.status, 'inconclusive')
        self.assertEqual(result.steps, 3)
        self.assertEqual(len(result.trace), 4)
        self.assertTrue(any('flow stopped' in str(x.message) for x in w))

    def test_trace_stride(self):
        result = make_flow(init='perturbed_identity', max_steps=10, trace_stride=4).run()
        self.assertEqual(list(result.trace[:, 0] > 0), [False, True, True, True])

    def test_abort_carries_result(self):
        flow = make_flow(init='perturbed_identity', adaptive=False, h=1e200)
        with self.assertRaises(FlowAbort) as cm:
            flow.run()
        self.assertIsNotNone(cm.exception.result)
        self.assertEqual(cm.exception.result.status, 'inconclusive')
        self.assertEqual(cm.exception.state.steps, 0)

    def test_config_validation(self):
        self.assertRaises(ValueError, make_flow(init='perturbed_identity', tol=0.).run)
        self.assertRaises(ValueError, make_flow(init='perturbed_identity', max_steps=0).run)
        self.assertRaises(ValueError, make_flow(init='file').run)

    def test_non_symplectic_alpha(self):
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter('always')
            ModifiedMomentMapFlow(config=FlowConfig(alpha=2*eye(4)), mesh=mesh).basis
        self.assertTrue(any('omega_V' in str(x.message) for x in w))

    def test_seeded_init(self):
        cfg = FlowConfig(init='perturbed_identity', seed=9)
        c1 = initial_field(cfg, mesh, basis)
        c2 = initial_field(cfg, mesh, basis)
        self.assertTrue((c1 == c2).all())
        cfg.seed = 10
        self.assertFalse((initial_field(cfg, mesh, basis) == c1).all())

    def test_exact_init(self):
        c = initial_field(FlowConfig(init='exact', seed=4), mesh, basis)
        self.assertAlmostEqual(basis.norm2(c), 1., 10)
        self.assertAlmostEqual(c[-1], 0., 10)

    def test_coordinates_init(self):
        c = zeros(basis.dimension)
        c[-1] = 2.
        result = make_flow(init='coordinates', init_coordinates=c).run()
        self.assertEqual(result.steps, 0)
        self.assertAlmostEqual(result.tau, 2., 12)
        self.assertRaises(ValueError, make_flow(init='coordinates', init_coordinates=c[:5]).run)


class hkflow_diagnostics_test(unittest.TestCase):

    def test_fits(self):
        result = make_flow(init='perturbed_identity', epsilon=0.05, seed=1).run()
        theta, logc = estimate_lojasiewicz(result)
        self.assertFalse(isnan(theta))
        self.assertFalse(isnan(logc))
        rate = fit_exponential_rate(result)
        self.assertGreater(rate, 0.)

    def test_fits_short_trace(self):
        result = make_flow(init='identity').run()
        self.assertTrue(isnan(estimate_lojasiewicz(result)[0]))
        self.assertTrue(isnan(fit_exponential_rate(result)))
        self.assertIsNone(result.summary()['exponential_rate'])


class hkflow_renormalized_test(unittest.TestCase):

    def test_stationary(self):
        flow = RenormalizedFlow(config=FlowConfig(init='identity', adaptive=False, h=0.1),
                                mesh=mesh, basis=basis)
        s = flow.initial_state()
        for _ in range(5):
            s = flow.step(s)
        self.assertAlmostEqual(s.tau, 1., 12)
        self.assertEqual(s.coordinates[-1], 1.)
        self.assertTrue(allclose(s.record['normalized'].data, eye(4), atol=1e-12))

    def test_class_drift(self):
        flow = RenormalizedFlow(config=FlowConfig(init='perturbed_identity', seed=1),
                                mesh=mesh, basis=basis)
        result = flow.run()
        self.assertEqual(result.status, 'converged')
        self.assertEqual(result.classification, 'generic')
        self.assertLess(result.class_drift, 1e-8)

    def test_consistency_with_flow(self):
        h = 1e-3
        kw = dict(init='perturbed_identity', seed=6, epsilon=0.2, adaptive=False, h=h)
        plain = make_flow(**kw)
        renorm = RenormalizedFlow(config=FlowConfig(**kw), mesh=mesh, basis=basis)
        s, r = plain.initial_state(), renorm.initial_state()
        for _ in range(50):
            s, r = plain.step(s), renorm.step(r)
        self.assertAlmostEqual(s.t, r.t, 12)
        tau = s.record['tau']
        self.assertLess(abs(tau - r.tau), 1e-8)
        G = s.field/tau
        self.assertLess(norm_g(G - r.record['normalized']), 1e-5*norm_g(G))

    def test_degenerate_alpha(self):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            flow = RenormalizedFlow(config=FlowConfig(alpha=zeros((4, 4))), mesh=mesh)
            self.assertRaises(ValueError, flow.run)


if "__main__" == __name__:
    unittest.main()
