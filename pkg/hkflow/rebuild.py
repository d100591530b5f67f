# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Reconstructs polyhedral maps from integral Whitney forms and certifies
the symplectic property cell by cell.

.. autosummary::
    :toctree: generated/

    SymplecticReport
    is_integral_class
    primitive
    closure_defects
    verify_symplectic
    projection_plot_data
"""

# imports from other packages
from itertools import combinations

from numpy import zeros, einsum, round as np_round, abs as np_abs, arange
from numpy.linalg import solve
from traits.api import HasPrivateTraits, CArray, Float, Bool, Trait, Property, \
property_depends_on

from .configuration import config
from .internal import ClosureError, IntegralityError
from .mesh import PolyMap
from .forms import cohomology_class, whitney_residual
from .moment import selfduality_defect
from .quatgeom import symplectic_defect


def is_integral_class( P, lattice, tol=1e-9 ):
    """
    Tests whether the class P maps the lattice into itself.

    Column k of P is the period along generator k. The linear map with these
    periods is P G^-1 for the generator matrix G, so P is integral iff
    G^-1 P has integer entries.

    Parameters
    ----------
    P : array of floats of shape (4, 4)
    lattice : :class:`~hkflow.mesh.Lattice`
    tol : float

    Returns
    -------
    (bool, integer matrix of shape (4, 4))
    """
    coords = solve(lattice.generators, P)
    rounded = np_round(coords).astype(int)
    return bool(np_abs(coords - rounded).max() <= tol), rounded


def _tree_images( F, root ):
    mesh = F.mesh
    disp = mesh.edge_displacements
    cells = mesh.edge_cells
    images = zeros((mesh.num_vertices, 4))
    images[root] = mesh.vertices[root]
    _, tree = mesh.spanning_tree(root)
    for parent, child, e, s in tree:
        images[child] = images[parent] + s*(F.data[cells[e]] @ disp[e])
    return images


def closure_defects( F, images ):
    """
    Distance to the lattice of f(tail) + F(edge) - f(head) for every edge.

    Tree edges close exactly; the defect of the others measures how far F
    is from the differential of a map with vertex images ``images``.

    Returns
    -------
    array of floats of shape (nE,)
    """
    mesh = F.mesh
    ev = mesh.edge_vertices
    jump = einsum('eij,ej->ei', F.data[mesh.edge_cells], mesh.edge_displacements)
    return mesh.lattice.distance(images[ev[:, 0]] + jump - images[ev[:, 1]])


def primitive( F, base=0, tol=None ):
    """
    Polyhedral map with differential F.

    Vertex images are sums of F along the spanning tree paths from base,
    with base fixed at its own position. Every cell is then lifted from the
    image of its first vertex.

    Parameters
    ----------
    F : :class:`~hkflow.forms.CellField`
    base : int
        Base vertex.
    tol : float, optional
        Tolerance for the Whitney, integrality and closure checks, defaults
        to :attr:`config.whitney_tol` scaled by the size of F.

    Returns
    -------
    :class:`~hkflow.mesh.PolyMap`

    Raises
    ------
    :class:`~hkflow.internal.WhitneyError`, :class:`~hkflow.internal.IntegralityError`,
    :class:`~hkflow.internal.ClosureError`
    """
    mesh = F.mesh
    if tol is None:
        tol = config.whitney_tol*(1. + np_abs(F.data).max())
    P = cohomology_class(F, tol)
    ok, _ = is_integral_class(P, mesh.lattice, max(tol, 1e-6))
    if not ok:
        raise IntegralityError("class of the form is not integral:\n%s" % P)
    images = _tree_images(F, base)
    defects = closure_defects(F, images)
    worst = int(defects.argmax())
    if defects[worst] > tol:
        raise ClosureError(worst, defects[worst], tol)
    X = mesh.lifts
    Y = images[mesh.cells[:, 0]][:, None, :] + \
        einsum('cij,cnj->cni', F.data, X - X[:, :1, :])
    return PolyMap(mesh=mesh, vertex_images=images, cell_images=Y,
                   closure_defects=defects)


class SymplecticReport( HasPrivateTraits ):
    """
    Cell by cell symplectic certificate of a cell field.
    """

    #: |F^* omega_V - omega_V| per cell.
    cell_defects = CArray(dtype=float,
        desc="symplectic defects of the cells")

    #: |ASD(F^* omega_V)| per cell; vanishes iff mu = 0 on the cell.
    asd_defects = CArray(dtype=float,
        desc="anti-selfdual defects of the cells")

    #: Tolerance of the verdict.
    tol = Float(1e-6)

    #: Largest cell defect, readonly.
    max_defect = Property()

    #: Largest ASD defect, readonly.
    max_asd_defect = Property()

    #: True iff every cell defect is at most :attr:`tol`, readonly.
    verdict = Property()

    #: Whitney residual of the field.
    whitney_residual = Float(0.)

    #: Whether the field is Whitney up to tolerance.
    whitney_ok = Bool(True)

    #: Global injectivity is never established.
    homeomorphism = Trait('unknown')

    @property_depends_on('cell_defects')
    def _get_max_defect( self ):
        return float(self.cell_defects.max())

    @property_depends_on('asd_defects')
    def _get_max_asd_defect( self ):
        return float(self.asd_defects.max())

    @property_depends_on('cell_defects, tol')
    def _get_verdict( self ):
        return bool(self.max_defect <= self.tol)

    def as_dict( self ):
        return dict(
            max_defect = self.max_defect,
            max_asd_defect = self.max_asd_defect,
            verdict = self.verdict,
            tol = float(self.tol),
            whitney_residual = float(self.whitney_residual),
            whitney_ok = bool(self.whitney_ok),
            homeomorphism = self.homeomorphism,
            )


def verify_symplectic( F, tol=1e-6 ):
    """
    Compares F^* omega_V with omega_V on every cell.

    Parameters
    ----------
    F : :class:`~hkflow.forms.CellField`
    tol : float

    Returns
    -------
    :class:`SymplecticReport`
    """
    _, res = whitney_residual(F)
    return SymplecticReport(cell_defects=symplectic_defect(F.data),
                            asd_defects=selfduality_defect(F),
                            tol=tol, whitney_residual=res,
                            whitney_ok=res <= config.whitney_tol*(1. + np_abs(F.data).max()))


def projection_plot_data( f, pairs=None ):
    """
    2D coordinate projections of the vertex images for external plotting.

    Parameters
    ----------
    f : :class:`~hkflow.mesh.PolyMap`
    pairs : list of (i, j), optional
        Coordinate pairs, defaults to all six.

    Returns
    -------
    list of (vertex, i, j, u, v)
    """
    if pairs is None:
        pairs = list(combinations(range(4), 2))
    Y = f.vertex_images
    rows = []
    for i, j in pairs:
        for v in arange(len(Y)):
            rows.append((int(v), i, j, float(Y[v, i]), float(Y[v, j])))
    return rows
