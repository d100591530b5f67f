# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Implements locally constant V-valued 1-forms on a triangulated torus.

A :class:`CellField` holds one 4x4 matrix per 4-cell, a :class:`Potential`
one vector per vertex. Closed (Whitney) forms with cohomology class on the
ray spanned by alpha are parametrized by :class:`ClosedBasis`.

.. autosummary::
    :toctree: generated/

    CellField
    Potential
    ClosedBasis
    differentiate
    diff_of_map
    whitney_residual
    whitney_constraint_matrix
    closed_dimension
    closed_alpha_dimension
    cohomology_class
    inner_g
    norm_g
    torus_act
    build_closed_basis
    project_alpha
    hat_potential
    random_potential
"""

# imports from other packages
from warnings import warn

from numpy import zeros, eye, arange, asarray, einsum, repeat, tile, \
broadcast_to, cos, sin, sqrt, abs as np_abs, int64, concatenate, isfinite
from numpy.linalg import matrix_rank
from numpy.random import Generator, PCG64
from scipy.linalg import cho_factor, cho_solve, null_space, LinAlgError
from scipy.sparse import csr_matrix, diags, hstack
from traits.api import HasPrivateTraits, CArray, Instance, Property, Bool, Int, \
cached_property, property_depends_on

from .configuration import config
from .internal import digest, WhitneyError, SingularGramError
from .h5cache import H5cache
from .mesh import TorusMesh, generator_loops
from .quatgeom import RIGHT_I


class CellField( HasPrivateTraits ):
    """
    A locally constant V-valued 1-form: one matrix per 4-cell.

    Supports addition, subtraction and multiplication by scalars.
    """

    #: The triangulated torus.
    mesh = Instance(TorusMesh)

    #: Cell matrices, shape (nC, 4, 4).
    data = CArray(dtype=float, shape=(None, 4, 4),
        desc="cell matrices")

    def _check( self, other ):
        if not isinstance(other, CellField):
            return NotImplemented
        _check_mesh(self.mesh, other.mesh)
        return other

    def __add__( self, other ):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CellField(mesh=self.mesh, data=self.data + other.data)

    def __sub__( self, other ):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CellField(mesh=self.mesh, data=self.data - other.data)

    def __mul__( self, t ):
        return CellField(mesh=self.mesh, data=float(t)*self.data)

    __rmul__ = __mul__

    def __truediv__( self, t ):
        return CellField(mesh=self.mesh, data=self.data/float(t))

    def __neg__( self ):
        return CellField(mesh=self.mesh, data=-self.data)

    @classmethod
    def constant( cls, mesh, A ):
        """The field with the same matrix A on every cell."""
        return cls(mesh=mesh,
                   data=broadcast_to(asarray(A, dtype=float), (mesh.num_cells, 4, 4)).copy())

    @classmethod
    def zeros( cls, mesh ):
        return cls(mesh=mesh, data=zeros((mesh.num_cells, 4, 4)))

    def is_finite( self ):
        return bool(isfinite(self.data).all())


class Potential( HasPrivateTraits ):
    """
    A polyhedral function u: M -> V, one vector per vertex. Inside a cell it
    is the affine interpolation of the vertex values at the cell's lift.
    """

    #: The triangulated torus.
    mesh = Instance(TorusMesh)

    #: Vertex values, shape (nV, 4).
    values = CArray(dtype=float, shape=(None, 4),
        desc="vertex values")


def _check_mesh( mesh1, mesh2 ):
    if mesh1 is not mesh2 and mesh1.digest != mesh2.digest:
        raise ValueError("fields live on different meshes (%s, %s)"
                         % (mesh1.digest, mesh2.digest))


def hat_potential( mesh, vertex, component ):
    """The potential with value e_component at vertex and 0 elsewhere."""
    u = zeros((mesh.num_vertices, 4))
    u[vertex, component] = 1.
    return Potential(mesh=mesh, values=u)


def random_potential( mesh, rng=None, scale=1. ):
    """
    Potential with independent standard normal entries.

    Parameters
    ----------
    rng : numpy.random.Generator or int, optional
        Generator or seed for a PCG64 bit generator.
    """
    if not isinstance(rng, Generator):
        rng = Generator(PCG64(rng))
    return Potential(mesh=mesh,
                     values=scale*rng.standard_normal((mesh.num_vertices, 4)))


def differentiate( u ):
    """
    Differential of a polyhedral potential.

    For every cell the unique matrix A with
    A (lift(v_j) - lift(v_0)) = u(v_j) - u(v_0), j = 1..4.

    Parameters
    ----------
    u : :class:`Potential`

    Returns
    -------
    :class:`CellField`
    """
    mesh = u.mesh
    vals = u.values[mesh.cells]
    D = (vals[:, 1:, :] - vals[:, :1, :]).transpose(0, 2, 1)
    return CellField(mesh=mesh, data=einsum('cij,cjk->cik', D, mesh.edge_inverses))


def diff_of_map( f, tol=1e-9 ):
    """
    Differential of a polyhedral map, computed from its lifted cell images.

    Parameters
    ----------
    f : :class:`~hkflow.mesh.PolyMap`
    tol : float
        Tolerance for the lift consistency check.

    Returns
    -------
    :class:`CellField`

    Raises
    ------
    :class:`~hkflow.internal.LiftError` if the lifts disagree across a face.
    """
    f.check_lifts(tol)
    mesh = f.mesh
    Y = f.cell_images
    D = (Y[:, 1:, :] - Y[:, :1, :]).transpose(0, 2, 1)
    return CellField(mesh=mesh, data=einsum('cij,cjk->cik', D, mesh.edge_inverses))


def whitney_residual( F ):
    """
    Face residuals max_i |F_s1(t_i) - F_s2(t_i)| over the shared frames.

    Returns
    -------
    (residuals, max residual)
    """
    mesh = F.mesh
    fc = mesh.face_cells
    diff = F.data[fc[:, 0]] - F.data[fc[:, 1]]
    res = np_abs(einsum('fij,fkj->fik', diff, mesh.frames)).max(axis=(1, 2))
    return res, float(res.max())


def whitney_constraint_matrix( mesh ):
    """
    Sparse matrix of the Whitney conditions acting on one row of the cell
    matrices. Columns are indexed by 4*cell + j, rows by 3*face + i.
    """
    nF = mesh.num_faces
    fc = mesh.face_cells
    frames = mesh.frames
    rows = repeat(arange(3*nF), 4)
    r = []
    c = []
    v = []
    for side, sign in ((0, 1.), (1, -1.)):
        r.append(rows)
        c.append((4*fc[:, side, None, None] + arange(4)[None, None, :]
                  + zeros((1, 3, 1), dtype=int64)).ravel())
        v.append(sign*frames.ravel())
    return csr_matrix((concatenate(v), (concatenate(r), concatenate(c))),
                      shape=(3*nF, 4*mesh.num_cells))


def _period_matrix( mesh, loops=None ):
    # row k maps one row of the cell matrices to its period along loop k
    if loops is None:
        loops = generator_loops(mesh)
    P = zeros((len(loops), 4*mesh.num_cells))
    disp = mesh.edge_displacements
    cells = mesh.edge_cells
    for k, path in enumerate(loops):
        for e, s in path:
            P[k, 4*cells[e]:4*cells[e] + 4] += s*disp[e]
    return P


def closed_dimension( mesh ):
    """
    Dimension of the space of Whitney forms, from the rank of the
    constraint matrix (the four output components decouple).
    """
    C = whitney_constraint_matrix(mesh).toarray()
    return 4*(C.shape[1] - matrix_rank(C))


def closed_alpha_dimension( mesh, alpha ):
    """
    Dimension of the Whitney forms whose class lies on the ray of alpha,
    computed from the nullspace of the constraint matrix and the period map.
    """
    N = null_space(whitney_constraint_matrix(mesh).toarray())
    Pn = _period_matrix(mesh) @ N
    # periods of (row r, nullspace vector n) fill row r of the class matrix
    k = N.shape[1]
    M = zeros((16, 4*k))
    for r in range(4):
        M[4*r:4*r + 4, r*k:(r + 1)*k] = Pn
    a = asarray(alpha, dtype=float).ravel()
    if (a == 0).all():
        Q = eye(16)
    else:
        Q = null_space(a[None, :]).T
    return 4*k - matrix_rank(Q @ M)


def cohomology_class( F, tol=None, loops=None ):
    """
    Periods of a Whitney form along the generator loops.

    Parameters
    ----------
    F : :class:`CellField`
    tol : float, optional
        Whitney tolerance, defaults to :attr:`config.whitney_tol`.
    loops : list of edge paths, optional
        Alternative loop representatives, defaults to the generator loops.

    Returns
    -------
    array of floats of shape (4, 4)
        Column k is the period along loop k.

    Raises
    ------
    :class:`~hkflow.internal.WhitneyError` if F is not Whitney.
    """
    if tol is None:
        tol = config.whitney_tol
    _, res = whitney_residual(F)
    if res > tol:
        raise WhitneyError(res, tol)
    mesh = F.mesh
    if loops is None:
        loops = generator_loops(mesh)
    disp = mesh.edge_displacements
    cells = mesh.edge_cells
    P = zeros((4, len(loops)))
    for k, path in enumerate(loops):
        for e, s in path:
            P[:, k] += s*(F.data[cells[e]] @ disp[e])
    return P


def inner_g( F1, F2 ):
    """
    The L2 product sum over cells of vol * <F1, F2>_Frobenius.
    """
    _check_mesh(F1.mesh, F2.mesh)
    return float(einsum('c,cij,cij->', F1.mesh.volumes, F1.data, F2.data))


def norm_g( F ):
    return sqrt(inner_g(F, F))


def torus_act( phases, F ):
    """
    Action of the torus of S^1-valued locally constant functions,
    F_s -> cos(theta_s) F_s + sin(theta_s) R_i F_s.

    Parameters
    ----------
    phases : float or array of floats of shape (nC,)
    F : :class:`CellField`
    """
    th = broadcast_to(asarray(phases, dtype=float), (F.mesh.num_cells,))
    iF = einsum('ab,cbj->caj', RIGHT_I, F.data)
    return CellField(mesh=F.mesh,
                     data=cos(th)[:, None, None]*F.data + sin(th)[:, None, None]*iF)


class ClosedBasis( HasPrivateTraits ):
    """
    Explicit basis of the closed forms with class on the ray of alpha.

    The basis consists of the differentials of the hat potentials of all
    vertices except the gauge vertex (four components each), followed by
    the constant field alpha. Projections are volume weighted least squares
    solves with a Cholesky factor of the Gram matrix.

    The Gram matrix can be cached in .h5 files, see :attr:`cached`.
    """

    #: The triangulated torus.
    mesh = Instance(TorusMesh)

    #: Class direction, defaults to the identity.
    alpha = CArray(dtype=float, shape=(4, 4), value=eye(4),
        desc="cohomology class direction")

    #: Vertex whose potential is pinned to zero, defaults to 0.
    gauge_vertex = Int(0,
        desc="gauge fixed vertex")

    #: Boolean flag, if 'True' the Gram matrix is cached in h5 files,
    #: defaults to False.
    cached = Bool(False,
        desc="cached flag")

    #: True if alpha vanishes; the basis then spans exact forms only.
    degenerate = Property()

    #: Sparse matrix (16 nC, dim) mapping coordinates to flattened cell matrices.
    matrix = Property()

    #: Dense Gram matrix B^T W B, readonly.
    gram = Property()

    #: Number of basis elements.
    dimension = Property()

    #: Volume weight of every matrix entry, shape (16 nC,).
    weights = Property()

    # cholesky factor of the gram matrix
    _factor = Property()

    # internal identifier
    digest = Property( depends_on = ['mesh.digest', 'alpha', 'gauge_vertex'] )

    @cached_property
    def _get_digest( self ):
        return digest( self )

    @property_depends_on('alpha')
    def _get_degenerate( self ):
        return bool((self.alpha == 0).all())

    @property_depends_on('digest')
    def _get_weights( self ):
        return repeat(self.mesh.volumes, 16)

    @property_depends_on('digest')
    def _get_matrix( self ):
        mesh = self.mesh
        nC = mesh.num_cells
        inv = mesh.edge_inverses
        # barycentric gradients, row j for local vertex j
        grads = concatenate((-inv.sum(axis=1)[:, None, :], inv), axis=1)
        g = self.gauge_vertex
        col_of = arange(mesh.num_vertices)
        col_of[g + 1:] -= 1
        col_of[g] = -1
        vcol = col_of[mesh.cells]
        a = arange(4)
        shape = (nC, 5, 4, 4)
        rows = broadcast_to(16*arange(nC)[:, None, None, None] + 4*a[None, None, :, None]
                            + a[None, None, None, :], shape)
        cols = broadcast_to(4*vcol[:, :, None, None] + a[None, None, :, None], shape)
        vals = broadcast_to(grads[:, :, None, :], shape)
        keep = broadcast_to(vcol[:, :, None, None] >= 0, shape)
        ncol = 4*(mesh.num_vertices - 1)
        B = csr_matrix((vals[keep], (rows[keep], cols[keep])), shape=(16*nC, ncol))
        if self.degenerate:
            return B
        A = csr_matrix(tile(self.alpha.ravel(), nC)[:, None])
        return hstack((B, A)).tocsr()

    @property_depends_on('digest')
    def _get_dimension( self ):
        return self.matrix.shape[1]

    def _calc_gram( self ):
        B = self.matrix
        return (B.T @ diags(self.weights) @ B).toarray()

    @property_depends_on('digest')
    def _get_gram( self ):
        if self.degenerate:
            warn("alpha = 0: the basis spans exact forms only", Warning, stacklevel=2)
        if config.global_caching == 'none' or \
                (config.global_caching == 'individual' and not self.cached):
            return self._calc_gram()
        return H5cache.cached_array('hkflow_basis', self.__class__.__name__ + self.digest,
                                    self._calc_gram)

    @property_depends_on('digest')
    def _get__factor( self ):
        try:
            return cho_factor(self.gram)
        except LinAlgError:
            raise SingularGramError("Gram matrix of the closed basis is singular")

    def materialize( self, c ):
        """The cell field with coordinates c."""
        data = self.matrix @ asarray(c, dtype=float)
        return CellField(mesh=self.mesh, data=data.reshape(-1, 4, 4))

    def dual( self, F ):
        """The vector of products G(b_i, F) for all basis elements."""
        _check_mesh(self.mesh, F.mesh)
        return self.matrix.T @ (self.weights*F.data.ravel())

    def solve( self, rhs ):
        """Solves Gram x = rhs with the cached factor."""
        return cho_solve(self._factor, rhs)

    def coordinates( self, F ):
        """Coordinates of the G-orthogonal projection of F onto the span."""
        return self.solve(self.dual(F))

    def tau( self, c ):
        """Class multiplier of the field with coordinates c."""
        if self.degenerate:
            return 0.
        return float(c[-1])

    def norm2( self, c ):
        """Squared G-norm of the field with coordinates c."""
        c = asarray(c, dtype=float)
        return float(c @ self.gram @ c)

    def alpha_coordinates( self ):
        """Coordinates of the constant field alpha."""
        c = zeros(self.dimension)
        if not self.degenerate:
            c[-1] = 1.
        return c


def build_closed_basis( mesh, alpha, cached=False ):
    """
    Builds and factorizes the basis of closed forms with class in R alpha.

    Raises
    ------
    :class:`~hkflow.internal.SingularGramError` if the Gram matrix is singular.
    """
    basis = ClosedBasis(mesh=mesh, alpha=alpha, cached=cached)
    basis._factor
    return basis


def project_alpha( basis, F ):
    """
    G-orthogonal projection of F onto the closed forms with class in R alpha.
    """
    return basis.materialize(basis.coordinates(F))
