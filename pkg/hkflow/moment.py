# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Implements the hyperKähler moment maps of locally constant forms and the
functional phi = 1/2 |mu|^2.

Per cell and label L in (I, J, K) the moment map density is

    mu_L(F) = -(F^* omega_V ^ omega_L) / sigma = 1/2 <R_L F, F>,

where R_L A = -R_i A L_L is the involution of :func:`~hkflow.quatgeom.r_involution`.
The derivative of mu_L in direction X is <R_L F, X>, hence the gradient of
1/2 |mu_L|^2 is W_L(F) = mu_L(F) R_L F, and grad phi = W_I + W_J + W_K.

.. autosummary::
    :toctree: generated/

    MomentValue
    HessianReport
    mu
    mu_norm2
    mu_norm2_labels
    phi
    grad_phi
    pullback_norm
    selfduality_defect
    general_hessian
    hessian_form
"""

# imports from other packages
from warnings import warn

from numpy import zeros, ones, sqrt, einsum, kron, ascontiguousarray, stack, \
abs as np_abs
from scipy.linalg import eigh
from scipy.sparse import kron as sparse_kron, identity, diags
from traits.api import HasPrivateTraits, CArray, Instance, Property, Bool, Float, \
property_depends_on

from .forms import CellField
from .mesh import TorusMesh
from .quatgeom import LABELS, LEFT, RIGHT_I, omega_hat, two_form_matrix, \
antiselfdual_part
from .fastFuncs import cellMoments, cellGradient, cellPullbacks

_OMEGA_V = two_form_matrix(omega_hat('V'))
_OMEGA_HATS = stack([omega_hat(w) for w in LABELS])
_LEFTS = stack([LEFT[w] for w in LABELS])


def _cells( F ):
    return ascontiguousarray(F.data, dtype=float)


class MomentValue( HasPrivateTraits ):
    """
    The three moment maps of a cell field, one value per cell and label.
    """

    #: The triangulated torus.
    mesh = Instance(TorusMesh)

    #: mu_I, mu_J, mu_K per cell, shape (3, nC).
    values = CArray(dtype=float, shape=(3, None),
        desc="moment map densities")

    #: Squared L2 norms of mu_I, mu_J, mu_K, readonly.
    norm2_labels = Property()

    #: Sum of :attr:`norm2_labels`, readonly.
    norm2 = Property()

    @property_depends_on('values')
    def _get_norm2_labels( self ):
        return einsum('c,lc->l', self.mesh.volumes, self.values**2)

    @property_depends_on('values')
    def _get_norm2( self ):
        return float(self.norm2_labels.sum())

    def label( self, which ):
        """Values of one label 'I', 'J' or 'K'."""
        return self.values[LABELS.index(which)]


def mu( F ):
    """
    Moment maps of F.

    Parameters
    ----------
    F : :class:`~hkflow.forms.CellField`

    Returns
    -------
    :class:`MomentValue`
    """
    return MomentValue(mesh=F.mesh, values=cellMoments(_cells(F), _OMEGA_V, _OMEGA_HATS))


def mu_norm2_labels( F ):
    """(|mu_I|^2, |mu_J|^2, |mu_K|^2) of F."""
    return mu(F).norm2_labels


def mu_norm2( F ):
    """|mu|^2 = |mu_I|^2 + |mu_J|^2 + |mu_K|^2."""
    return mu(F).norm2


def phi( F ):
    """
    phi(F) = 1/2 (|mu_I|^2 + |mu_J|^2 + |mu_K|^2).

    With the factor 1/2 the gradient is W_I + W_J + W_K and |F|^2 decays at rate -4 |mu|^2.
    """
    return 0.5*mu_norm2(F)


def grad_phi( F, moments=None ):
    """
    G-gradient of :func:`phi`, per cell sum_L mu_L R_L F.

    Parameters
    ----------
    F : :class:`~hkflow.forms.CellField`
    moments : :class:`MomentValue`, optional
        Precomputed moment maps of F.

    Returns
    -------
    :class:`~hkflow.forms.CellField`
    """
    if moments is None:
        moments = mu(F)
    data = cellGradient(_cells(F), ascontiguousarray(moments.values), RIGHT_I, _LEFTS)
    return CellField(mesh=F.mesh, data=data)


def pullback_norm( F ):
    """Per cell Euclidean norm of the coefficients of F^* omega_V."""
    b = cellPullbacks(_cells(F), _OMEGA_V)
    return sqrt((b**2).sum(axis=-1))


def selfduality_defect( F ):
    """Per cell norm of the anti-selfdual part of F^* omega_V."""
    asd = antiselfdual_part(cellPullbacks(_cells(F), _OMEGA_V))
    return sqrt((asd**2).sum(axis=-1))


class HessianReport( HasPrivateTraits ):
    """
    Second derivative of phi in the coordinates of a closed basis, with its
    generalized eigenvalues relative to the Gram matrix.
    """

    #: Symmetric matrix of size dim x dim.
    matrix = CArray(dtype=float)

    #: Generalized eigenvalues, ascending.
    eigenvalues = CArray(dtype=float)

    #: |mu| at the point of evaluation.
    mu_norm = Float

    #: True if the point is a zero of mu up to tolerance; otherwise the
    #: matrix includes the curvature term of mu.
    at_zero = Bool

    #: Threshold below which eigenvalues count as kernel.
    kernel_tol = Float(1e-10)

    #: Dimension of the numerical kernel, readonly.
    kernel_dimension = Property()

    @property_depends_on('eigenvalues, kernel_tol')
    def _get_kernel_dimension( self ):
        return int((np_abs(self.eigenvalues) < self.kernel_tol).sum())

    def as_dict( self ):
        return dict(
            dimension = int(self.matrix.shape[0]),
            at_zero = bool(self.at_zero),
            mu_norm = float(self.mu_norm),
            kernel_dimension = self.kernel_dimension,
            min_eigenvalue = float(self.eigenvalues[0]),
            max_eigenvalue = float(self.eigenvalues[-1]),
            eigenvalues = [float(e) for e in self.eigenvalues],
            )


def _involution_operator( which, ncells ):
    # R_L acting on row-major flattened cell matrices
    return sparse_kron(identity(ncells), -kron(RIGHT_I, LEFT[which].T), format='csr')


def _moment_derivatives( basis, F, R ):
    # row s: derivative of mu on cell s along every basis element
    nC = F.mesh.num_cells
    S = sparse_kron(identity(nC), ones((1, 16)), format='csr')
    return (S @ diags(R @ F.data.ravel()) @ basis.matrix).toarray()


def _first_order_hessian( basis, F ):
    vol = F.mesh.volumes
    H = zeros((basis.dimension, basis.dimension))
    for which in LABELS:
        D = _moment_derivatives(basis, F, _involution_operator(which, F.mesh.num_cells))
        H += D.T @ (vol[:, None]*D)
    return H


def general_hessian( basis, F ):
    """
    Hessian of c -> phi(B c) at the coordinates of F,

        H_ij = sum_cells vol sum_L ( <R_L F, b_i><R_L F, b_j> + mu_L <R_L b_i, b_j> ).

    Parameters
    ----------
    basis : :class:`~hkflow.forms.ClosedBasis`
    F : :class:`~hkflow.forms.CellField`

    Returns
    -------
    array of floats of shape (dim, dim)
    """
    B = basis.matrix
    W = basis.weights
    moments = mu(F)
    H = _first_order_hessian(basis, F)
    for k, which in enumerate(LABELS):
        R = _involution_operator(which, F.mesh.num_cells)
        muw = W*(moments.values[k].repeat(16))
        H += (B.T @ (diags(muw) @ (R @ B))).toarray()
    return 0.5*(H + H.T)


def hessian_form( basis, F, tol=1e-9, kernel_tol=1e-10 ):
    """
    Hessian of phi on the closed forms, with eigen-report.

    At a zero of mu (|mu| <= tol) only the squared first-order terms
    remain and the matrix is positive semidefinite. Elsewhere the
    curvature term is kept and the report is flagged (``at_zero=False``).

    Returns
    -------
    :class:`HessianReport`
    """
    mv = mu(F)
    n = sqrt(mv.norm2)
    at_zero = bool(n <= tol)
    if at_zero:
        H = _first_order_hessian(basis, F)
    else:
        warn("Hessian evaluated away from a zero of mu (|mu| = %.3e)" % n,
             Warning, stacklevel=2)
        H = general_hessian(basis, F)
    ev = eigh(H, basis.gram, eigvals_only=True)
    return HessianReport(matrix=H, eigenvalues=ev, mu_norm=n, at_zero=at_zero,
                         kernel_tol=kernel_tol)
