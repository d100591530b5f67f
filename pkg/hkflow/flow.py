# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Implements the modified moment map flow dF/dt = -Pi_alpha grad phi(F) and
its renormalized form for (G, tau) with F = tau G.

Both flows are integrated in the coordinates of a
:class:`~hkflow.forms.ClosedBasis`, so the closedness and class conditions
hold by construction.

.. autosummary::
    :toctree: generated/

    FlowConfig
    FlowState
    FlowResult
    ModifiedMomentMapFlow
    RenormalizedFlow
    initial_field
    rhs
    step
    run
    run_renormalized
    estimate_lojasiewicz
    fit_exponential_rate
"""

# imports from other packages
from warnings import warn

from numpy import array, asarray, eye, sqrt, log, isfinite, polyfit, concatenate, nan
from numpy.random import Generator, PCG64
from traits.api import HasPrivateTraits, CArray, Instance, Property, Bool, Float, \
Int, Str, Trait, List, Dict

from .configuration import config
from .internal import FlowAbort
from .mesh import Lattice, TorusMesh, build_mesh
from .forms import CellField, ClosedBasis, build_closed_basis, differentiate, \
random_potential, norm_g, cohomology_class, diff_of_map, whitney_residual
from .moment import mu, grad_phi, pullback_norm
from .quatgeom import is_symplectic_class

#: Column names of the trace.
TRACE_FIELDS = ('t', 'h', 'norm2', 'phi', 'muI2', 'muJ2', 'muK2', 'tau')


class FlowConfig( HasPrivateTraits ):
    """
    Parameters of a flow run: geometry, class, initial condition,
    integrator and stopping rules.
    """

    #: Lattice generators as columns, defaults to the standard lattice.
    lattice = CArray(dtype=float, shape=(4, 4), value=eye(4),
        desc="lattice generators")

    #: Subdivisions per axis of the Kuhn mesh.
    mesh_m = Int(2,
        desc="mesh subdivisions")

    #: Class direction alpha; alpha = 0 restricts the flow to exact forms.
    alpha = CArray(dtype=float, shape=(4, 4), value=eye(4),
        desc="cohomology class direction")

    #: Initial condition:
    #:
    #: * 'perturbed_identity': Id + epsilon d(u) with a random potential u.
    #: * 'identity': the constant field Id.
    #: * 'alpha': the constant field alpha.
    #: * 'exact': d(u) for a random potential u, normalized to |F| = 1.
    #: * 'coordinates': :attr:`init_coordinates` in the closed basis.
    #: * 'map': differential of the polyhedral map in :attr:`init_file`.
    #: * 'file': cell field in :attr:`init_file`, projected.
    init = Trait('perturbed_identity', 'identity', 'alpha', 'exact',
                 'coordinates', 'map', 'file',
        desc="initial condition")

    #: Size of the perturbation of 'perturbed_identity'.
    epsilon = Float(0.05,
        desc="perturbation size")

    #: Coordinates for init = 'coordinates'.
    init_coordinates = CArray(dtype=float,
        desc="initial basis coordinates")

    #: File for init = 'map' or 'file'.
    init_file = Str(
        desc="initial condition file")

    #: Seed of the PCG64 generator for all random initial data.
    seed = Int(0,
        desc="random seed")

    #: Time stepping scheme.
    integrator = Trait('rk4', 'euler',
        desc="integrator")

    #: Initial step size.
    h = Float(1e-2,
        desc="initial step size")

    #: Halve the step when |F|^2 or phi increases, double after 10 clean steps.
    adaptive = Bool(True,
        desc="adaptive step control")

    #: Upper bound of the step size.
    h_max = Float(1e3)

    #: Step sizes below this abort the run.
    h_min = Float(1e-14)

    #: Stop tolerance on |mu|.
    tol = Float(1e-9,
        desc="stop tolerance on |mu|")

    #: Classes with |tau| <= tau_min count as degenerate.
    tau_min = Float(1e-6)

    #: |tau| below this ends a renormalized run as 'degenerating'.
    tau_floor = Float(1e-10)

    #: Maximum flow time.
    max_time = Float(1e30)

    #: Maximum number of accepted steps.
    max_steps = Int(100000)

    #: Record every trace_stride-th accepted step.
    trace_stride = Int(1)

    #: Cache the Gram matrix of the basis in .h5 files.
    cached = Bool(False)

    def validate( self ):
        """Raises ValueError on non-positive tolerances or limits."""
        for name in ('h', 'h_max', 'h_min', 'tol', 'tau_min', 'tau_floor', 'max_time'):
            if not getattr(self, name) > 0:
                raise ValueError("%s must be positive, got %g" % (name, getattr(self, name)))
        for name in ('max_steps', 'trace_stride'):
            if getattr(self, name) < 1:
                raise ValueError("%s must be positive, got %i" % (name, getattr(self, name)))
        if self.epsilon < 0:
            raise ValueError("epsilon must not be negative, got %g" % self.epsilon)
        if self.init in ('map', 'file') and not self.init_file:
            raise ValueError("init = '%s' needs init_file" % self.init)


class FlowState( HasPrivateTraits ):
    """
    A point of a flow run: basis coordinates and materialized field, time,
    step size, and the monitored quantities.
    """

    #: Closed basis the coordinates refer to.
    basis = Instance(ClosedBasis)

    #: Integration vector; the basis coordinates, followed by tau for the
    #: renormalized flow.
    vector = CArray(dtype=float)

    #: Basis coordinates of the flowed form (of G for the renormalized flow).
    coordinates = Property()

    #: The flowed form F as a cell field.
    field = Instance(CellField)

    #: Flow time.
    t = Float(0.)

    #: Step size for the next step.
    h = Float

    #: Size of the step that led to this state, 0 for the initial state.
    last_h = Float(0.)

    #: Accepted steps so far.
    steps = Int(0)

    #: Accepted steps since the last change of h.
    clean_steps = Int(0)

    #: Monitored quantities of this state.
    record = Dict

    #: Trace records (shared along the run).
    trace = List

    def _get_coordinates( self ):
        return self.vector[:self.basis.dimension]

    @property
    def tau( self ):
        return self.record['tau']

    def trace_row( self ):
        r = self.record
        return (self.t, self.last_h, r['norm2'], r['phi'],
                r['mu2'][0], r['mu2'][1], r['mu2'][2], r['tau'])


class FlowResult( HasPrivateTraits ):
    """
    Outcome of a flow run.
    """

    #: 'converged', 'inconclusive' or 'degenerating' (renormalized runs).
    status = Trait('converged', 'inconclusive', 'degenerating')

    #: 'generic' if the limit class is tau alpha with |tau| > tau_min.
    classification = Trait('generic', 'degenerate')

    #: Final state.
    state = Instance(FlowState)

    #: Final form F.
    field = Instance(CellField)

    #: Class multiplier of the final form.
    tau = Float

    #: Accepted steps.
    steps = Int

    #: |mu| of the final form.
    final_mu_norm = Float

    #: G-norm of the right hand side at the final form.
    rhs_norm = Float

    #: Trace records, one row per record, columns :data:`TRACE_FIELDS`.
    trace = CArray(dtype=float, shape=(None, 8))

    #: Squared G-norm of Pi_alpha grad phi at every trace record.
    grad2 = CArray(dtype=float)

    #: Largest Whitney face residual of F at every trace record.
    whitney = CArray(dtype=float)

    #: Largest per cell norm of F^* omega_V of the final form. In the
    #: degenerate case F^* omega_V tends to zero while F need not.
    max_pullback = Float

    #: Maximum of |[G_t] - alpha| over the records (renormalized runs).
    class_drift = Float(0.)

    def summary( self ):
        """Summary document of the run."""
        loj = estimate_lojasiewicz(self)
        return dict(
            status = self.status,
            steps = int(self.steps),
            final_mu_norm = float(self.final_mu_norm),
            tau = float(self.tau),
            classification = self.classification,
            time = float(self.state.t),
            final_norm = float(sqrt(self.state.record['norm2'])),
            max_pullback_norm = float(self.max_pullback),
            max_whitney_residual = float(self.whitney.max()),
            rhs_norm = float(self.rhs_norm),
            lojasiewicz_exponent = _finite_or_none(loj[0]),
            exponential_rate = _finite_or_none(fit_exponential_rate(self)),
            )


def _finite_or_none( x ):
    return float(x) if isfinite(x) else None


def initial_field( cfg, mesh, basis ):
    """
    Basis coordinates of the initial condition of cfg.

    Random data come from a numpy PCG64 generator seeded with cfg.seed.
    """
    from .fileimport import load_field, load_map
    if cfg.init == 'identity':
        return basis.coordinates(CellField.constant(mesh, eye(4)))
    if cfg.init == 'alpha':
        return basis.alpha_coordinates()
    if cfg.init == 'coordinates':
        c = asarray(cfg.init_coordinates, dtype=float)
        if c.shape != (basis.dimension,):
            raise ValueError("expected %i coordinates, got %i" % (basis.dimension, c.size))
        return c.copy()
    if cfg.init == 'map':
        return basis.coordinates(diff_of_map(load_map(cfg.init_file, mesh)))
    if cfg.init == 'file':
        return basis.coordinates(load_field(cfg.init_file, mesh))
    rng = Generator(PCG64(cfg.seed))
    du = differentiate(random_potential(mesh, rng))
    if cfg.init == 'exact':
        return basis.coordinates(du/norm_g(du))
    return basis.coordinates(CellField.constant(mesh, eye(4)) + cfg.epsilon*du)


class ModifiedMomentMapFlow( HasPrivateTraits ):
    """
    The flow dF/dt = -Pi_alpha grad phi(F) on the closed forms with class
    on the ray of alpha, integrated in basis coordinates.
    """

    #: Run parameters.
    config = Instance(FlowConfig, ())

    #: The triangulated torus, built from :attr:`config` if not given.
    mesh = Instance(TorusMesh)

    #: The closed basis, built from :attr:`config` if not given.
    basis = Instance(ClosedBasis)

    def _mesh_default( self ):
        return build_mesh(Lattice(generators=self.config.lattice), self.config.mesh_m)

    def _basis_default( self ):
        alpha = self.config.alpha
        if (alpha != 0).any() and not is_symplectic_class(alpha):
            warn("alpha does not preserve omega_V; a limit map cannot be symplectic",
                 Warning, stacklevel=2)
        return build_closed_basis(self.mesh, alpha, self.config.cached)

    def rhs_coordinates( self, c ):
        """Coordinates of -Pi_alpha grad phi at the field with coordinates c."""
        F = self.basis.materialize(c)
        return -self.basis.solve(self.basis.dual(grad_phi(F)))

    def rhs( self, F ):
        """-Pi_alpha grad phi(F) as a cell field."""
        return rhs(self.basis, F)

    def _evaluate( self, y ):
        basis = self.basis
        F = basis.materialize(y)
        mv = mu(F)
        p = basis.solve(basis.dual(grad_phi(F, mv)))
        labels = mv.norm2_labels
        return F, dict(
            rhs = -p,
            norm2 = basis.norm2(y),
            phi = 0.5*float(labels.sum()),
            mu2 = tuple(float(x) for x in labels),
            mu_norm = float(sqrt(labels.sum())),
            tau = basis.tau(y),
            grad2 = basis.norm2(p),
            )

    def _make_state( self, y, **traits ):
        F, record = self._evaluate(y)
        return FlowState(basis=self.basis, vector=y, field=F, record=record, **traits)

    def _advance( self, y, h, k1 ):
        if self.config.integrator == 'euler':
            return y + h*k1
        f = lambda x: self._evaluate(x)[1]['rhs']
        k2 = f(y + 0.5*h*k1)
        k3 = f(y + 0.5*h*k2)
        k4 = f(y + h*k3)
        return y + (h/6.)*(k1 + 2*k2 + 2*k3 + k4)

    def _violates( self, old, new ):
        # the exact flow decreases both; phi gets a roundoff floor near zeros of mu
        return (new['norm2'] > old['norm2']*(1. + 1e-12)
                or new['phi'] > old['phi']*(1. + 1e-12) + 1e-28*old['norm2']**2)

    def _initial_vector( self ):
        return initial_field(self.config, self.mesh, self.basis)

    def initial_state( self ):
        self.config.validate()
        return self._make_state(self._initial_vector(), h=self.config.h, trace=[])

    def step( self, state ):
        """
        One accepted step from state.

        Returns
        -------
        :class:`FlowState`

        Raises
        ------
        :class:`~hkflow.internal.FlowAbort` on non-finite values or if the
        step size falls below :attr:`FlowConfig.h_min`.
        """
        cfg = self.config
        h = state.h
        clean = state.clean_steps
        while True:
            y = self._advance(state.vector, h, state.record['rhs'])
            if not isfinite(y).all():
                raise FlowAbort("non-finite values after step from t = %g" % state.t, state)
            new = self._make_state(y, t=state.t + h, h=h, last_h=h,
                                   steps=state.steps + 1, clean_steps=clean + 1,
                                   trace=state.trace)
            if not isfinite(new.record['norm2']) or not isfinite(new.record['phi']):
                raise FlowAbort("non-finite values after step from t = %g" % state.t, state)
            if cfg.adaptive and self._violates(state.record, new.record):
                h *= 0.5
                clean = 0
                if h < cfg.h_min:
                    raise FlowAbort("step size underflow (h = %g) at t = %g" % (h, state.t),
                                    state)
                continue
            if cfg.adaptive and new.clean_steps >= 10:
                new.h = min(2*h, cfg.h_max)
                new.clean_steps = 0
            return new

    def _is_converged( self, state ):
        return state.record['mu_norm'] <= self.config.tol

    def _record( self, state ):
        _, res = whitney_residual(state.field)
        state.trace.append(state.trace_row() + (state.record['grad2'], res))
        if not res <= config.whitney_tol:
            raise FlowAbort("closedness lost at t = %g: face residual %.3e"
                            % (state.t, res), state)

    def _result( self, state, status ):
        if not state.trace or state.trace[-1][0] != state.t:
            self._record(state)
        rows = array(state.trace)
        return FlowResult(status=status, state=state, field=state.field,
                          steps=state.steps, trace=rows[:, :8], grad2=rows[:, 8],
                          whitney=rows[:, 9],
                          max_pullback=float(pullback_norm(state.field).max()),
                          final_mu_norm=state.record['mu_norm'],
                          rhs_norm=sqrt(state.record['grad2']))

    def _classify( self, result ):
        # the class coordinate measures [F] against the class of the alpha field
        tau = self.basis.tau(result.state.coordinates)
        result.tau = tau
        result.classification = 'generic' if abs(tau) > self.config.tau_min else 'degenerate'
        return result

    def _stop( self, state ):
        return None

    def run( self ):
        """
        Integrates until |mu| <= tol (converged), or the time or step limit
        is reached (inconclusive).

        Returns
        -------
        :class:`FlowResult`

        Raises
        ------
        :class:`~hkflow.internal.FlowAbort` with the state the run stopped at
        and the partial result.
        """
        cfg = self.config
        state = self.initial_state()
        status = None
        try:
            self._record(state)
            while status is None:
                if self._is_converged(state):
                    status = 'converged'
                    break
                status = self._stop(state)
                if status is not None:
                    break
                if state.steps >= cfg.max_steps or state.t >= cfg.max_time:
                    warn("flow stopped at t = %g after %i steps with |mu| = %.3e"
                         % (state.t, state.steps, state.record['mu_norm']),
                         Warning, stacklevel=2)
                    status = 'inconclusive'
                    break
                state = self.step(state)
                if state.steps % cfg.trace_stride == 0:
                    self._record(state)
        except FlowAbort as e:
            e.result = self._classify(self._result(e.state, 'inconclusive'))
            raise
        return self._classify(self._result(state, status))


class RenormalizedFlow( ModifiedMomentMapFlow ):
    """
    The flow written for (G, tau) with F = tau G and [G] = alpha:

        dG/dt = tau^2 (c(G) G - Pi_alpha grad phi(G)),
        dtau/dt = -tau^3 c(G),

    where c(G) alpha is the class of Pi_alpha grad phi(G). The integration
    vector holds the coordinates of G followed by tau; the class coordinate
    of G stays 1.
    """

    # largest class drift of G seen in the current run
    _drift = Float(0.)

    def initial_state( self ):
        self._drift = 0.
        return ModifiedMomentMapFlow.initial_state(self)

    def _evaluate( self, y ):
        basis = self.basis
        g, tau = y[:-1], y[-1]
        G = basis.materialize(g)
        mv = mu(G)
        p = basis.solve(basis.dual(grad_phi(G, mv)))
        c = basis.tau(p)
        labels = mv.norm2_labels
        t2 = tau*tau
        return G*tau, dict(
            rhs = concatenate((t2*(c*g - p), [-t2*tau*c])),
            norm2 = t2*basis.norm2(g),
            phi = 0.5*t2*t2*float(labels.sum()),
            mu2 = tuple(t2*t2*float(x) for x in labels),
            mu_norm = float(sqrt(labels.sum())),
            tau = float(tau),
            grad2 = t2*t2*t2*basis.norm2(p),
            normalized = G,
            )

    def _initial_vector( self ):
        if self.basis.degenerate:
            raise ValueError("the renormalized flow needs alpha != 0")
        c = initial_field(self.config, self.mesh, self.basis)
        tau = self.basis.tau(c)
        if tau == 0:
            raise ValueError("initial form has vanishing class, cannot renormalize")
        g = c/tau
        g[-1] = 1.
        return concatenate((g, [tau]))

    def _stop( self, state ):
        if abs(state.record['tau']) < self.config.tau_floor:
            warn("tau = %.3e: approaching the degenerate locus" % state.record['tau'],
                 Warning, stacklevel=3)
            return 'degenerating'
        return None

    def _record( self, state ):
        ModifiedMomentMapFlow._record(self, state)
        drift = abs(cohomology_class(state.record['normalized']) - self.basis.alpha).max()
        self._drift = max(self._drift, float(drift))

    def _classify( self, result ):
        result.tau = result.state.record['tau']
        result.classification = 'degenerate' if result.status == 'degenerating' else 'generic'
        result.class_drift = self._drift
        return result


def rhs( basis, F ):
    """
    Right hand side -Pi_alpha grad phi(F) of the modified moment map flow.

    Parameters
    ----------
    basis : :class:`~hkflow.forms.ClosedBasis`
    F : :class:`~hkflow.forms.CellField`

    Returns
    -------
    :class:`~hkflow.forms.CellField`
    """
    return -basis.materialize(basis.solve(basis.dual(grad_phi(F))))


def step( state, config ):
    """One accepted step of the modified moment map flow from state."""
    flow = ModifiedMomentMapFlow(config=config, mesh=state.basis.mesh, basis=state.basis)
    return flow.step(state)


def run( config ):
    """Runs the modified moment map flow configured by config."""
    return ModifiedMomentMapFlow(config=config).run()


def run_renormalized( config ):
    """Runs the renormalized (G, tau) flow configured by config."""
    return RenormalizedFlow(config=config).run()


def _tail( result, fraction=0.5 ):
    n = len(result.trace)
    return slice(int(n*(1. - fraction)), n)


def estimate_lojasiewicz( result, fraction=0.5 ):
    """
    Least squares fit of log |grad phi| = theta log phi + log C over the
    last fraction of the trace records.

    Returns
    -------
    (theta, log C), both nan if fewer than two usable records exist.
    """
    s = _tail(result, fraction)
    ph = result.trace[s, 3]
    g2 = result.grad2[s]
    ok = (ph > 0) & (g2 > 0)
    if ok.sum() < 2:
        return nan, nan
    theta, logc = polyfit(log(ph[ok]), 0.5*log(g2[ok]), 1)
    return float(theta), float(logc)


def fit_exponential_rate( result, fraction=0.5 ):
    """
    Decay rate r of |mu| ~ exp(-r t) fitted over the last fraction of the
    trace records; nan if fewer than two usable records exist.
    """
    s = _tail(result, fraction)
    t = result.trace[s, 0]
    m2 = result.trace[s, 4:7].sum(axis=1)
    ok = m2 > 0
    if ok.sum() < 2 or (t[ok] == t[ok][0]).all():
        return nan
    slope, _ = polyfit(t[ok], 0.5*log(m2[ok]), 1)
    return float(-slope)
