# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Implements Euclidean triangulations of flat 4-tori and polyhedral maps.

.. autosummary::
    :toctree: generated/

    Lattice
    TorusMesh
    PolyMap
    build_mesh
    face_frames
    generator_loops
    shifted_loop
    loop_winding
    spanning_tree
    edge_graph
    cell_volumes
    vertex_cells
"""

# imports from other packages
from itertools import permutations, product

from numpy import array, asarray, eye, zeros, ones, arange, einsum, round as np_round, \
stack, unravel_index, ravel_multi_index, int64, abs as np_abs, repeat
from numpy.linalg import det, inv, solve, norm
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components
from traits.api import HasPrivateTraits, Int, CArray, Instance, Property, \
cached_property, property_depends_on, Trait

from .internal import digest, LiftError


class Lattice( HasPrivateTraits ):
    """
    A lattice Gamma in V, given by four generators.

    The generators are the columns of :attr:`generators`; the default is the
    standard lattice Z^4.
    """

    #: Generator matrix, column k is generator k; defaults to the identity.
    generators = CArray(dtype=float, shape=(4, 4), value=eye(4),
        desc="lattice generators as columns")

    #: Covolume det(generators), readonly.
    covolume = Property(
        desc="volume of a fundamental domain")

    # internal identifier
    digest = Property( depends_on = ['generators'] )

    @cached_property
    def _get_digest( self ):
        return digest( self )

    @property_depends_on('generators')
    def _get_covolume( self ):
        d = det(self.generators)
        if d <= 0:
            raise ValueError("lattice generators must have positive determinant, got %g" % d)
        return d

    def coordinates( self, v ):
        """
        Coordinates of vectors v (shape (..., 4)) with respect to the generators.
        """
        v = asarray(v, dtype=float)
        return solve(self.generators, v.reshape(-1, 4).T).T.reshape(v.shape)

    def distance( self, v ):
        """
        Euclidean distance of the vectors v (shape (..., 4)) to the lattice.
        """
        r = self.coordinates(v)
        return norm(einsum('ij,...j->...i', self.generators, r - np_round(r)), axis=-1)


class TorusMesh( HasPrivateTraits ):
    """
    Kuhn (Freudenthal) triangulation of the torus V / Gamma.

    The fundamental domain is cut into m^4 sub-cubes; every sub-cube with
    base corner b is split into 24 simplices b = p_0, p_1, ..., p_4 with
    p_k = p_{k-1} + e_pi(k) for the permutations pi of the four axes.
    Simplices of odd permutations get their last two vertices swapped so
    that all cells are positively oriented. Every cell keeps an explicit
    lift of its five vertices in V.

    Integer lifts are given in grid units (1/m of a generator), real lifts
    and positions in V.
    """

    #: The lattice of the torus, defaults to Z^4.
    lattice = Instance(Lattice, ())

    #: Number of subdivisions per lattice direction, at least 2.
    m = Int(2,
        desc="subdivisions per axis")

    #: Number of vertices, readonly.
    num_vertices = Property()

    #: Number of 4-cells, readonly.
    num_cells = Property()

    #: Number of 3-faces, readonly.
    num_faces = Property()

    #: Number of edges, readonly.
    num_edges = Property()

    #: Integer grid coordinates of the vertices, shape (nV, 4), readonly.
    vertex_grid = Property()

    #: Vertex positions in the fundamental domain, shape (nV, 4), readonly.
    vertices = Property()

    #: Vertex ids of the cells, shape (nC, 5), readonly.
    cells = Property()

    #: Integer lifts of the cell vertices, shape (nC, 5, 4), readonly.
    cell_grid_lifts = Property()

    #: Lifts of the cell vertices in V, shape (nC, 5, 4), readonly.
    lifts = Property()

    #: Edge matrices, column j is lift(v_j+1) - lift(v_0); shape (nC, 4, 4).
    edge_matrices = Property()

    #: Inverses of :attr:`edge_matrices`; row j is the gradient of the
    #: barycentric coordinate of vertex j+1.
    edge_inverses = Property()

    #: Cell volumes, shape (nC,), readonly.
    volumes = Property()

    #: Incident cells of the faces, shape (nF, 2), readonly.
    face_cells = Property()

    #: Local vertex indices of each face in both incident cells, ordered
    #: by vertex id, shape (nF, 2, 4), readonly.
    face_local = Property()

    #: Shared tangent frames of the faces, shape (nF, 3, 4), readonly.
    frames = Property()

    #: Tail and head vertex ids of the edges (tail < head), shape (nE, 2).
    edge_vertices = Property()

    #: Integer displacement from tail to head, shape (nE, 4).
    edge_grid_displacements = Property()

    #: Displacement vectors in V, shape (nE, 4).
    edge_displacements = Property()

    #: One incident cell per edge, shape (nE,).
    edge_cells = Property()

    # internal identifier
    digest = Property( depends_on = ['lattice.digest', 'm'] )

    # integer combinatorics, independent of the lattice
    _topology = Property( depends_on = ['m'] )

    # spanning tree rooted at vertex 0
    _tree = Property( depends_on = ['m'] )

    @cached_property
    def _get_digest( self ):
        return digest( self )

    def _vertex_id( self, p ):
        return int(ravel_multi_index(tuple(asarray(p) % self.m), (self.m,)*4))

    @cached_property
    def _get__topology( self ):
        m = self.m
        if m < 2:
            raise ValueError("m must be at least 2, got %i" % m)
        axes = eye(4, dtype=int64)
        cells = []
        glifts = []
        for base in product(range(m), repeat=4):
            for perm in permutations(range(4)):
                pts = [array(base, dtype=int64)]
                for k in perm:
                    pts.append(pts[-1] + axes[k])
                if _parity(perm) < 0:
                    pts[3], pts[4] = pts[4], pts[3]
                glifts.append(pts)
                cells.append([self._vertex_id(p) for p in pts])
        cells = array(cells, dtype=int64)
        glifts = array(glifts, dtype=int64)

        # 3-faces keyed by vertex ids and lift offsets relative to the smallest id
        faces = {}
        for c in range(len(cells)):
            for j in range(5):
                loc = [i for i in range(5) if i != j]
                loc.sort(key=lambda i: cells[c, i])
                p0 = glifts[c, loc[0]]
                key = tuple((int(cells[c, i]),) + tuple(glifts[c, i] - p0) for i in loc)
                faces.setdefault(key, []).append((c, loc))
        face_cells = []
        face_local = []
        for key, inc in faces.items():
            if len(inc) != 2:
                raise RuntimeError("face %s has %i incident cells" % (key, len(inc)))
            face_cells.append([inc[0][0], inc[1][0]])
            face_local.append([inc[0][1], inc[1][1]])

        # edges keyed by (tail, head, displacement)
        edges = {}
        for c in range(len(cells)):
            for i in range(5):
                for j in range(5):
                    if cells[c, i] < cells[c, j]:
                        key = (int(cells[c, i]), int(cells[c, j])) + \
                            tuple(glifts[c, j] - glifts[c, i])
                        if key not in edges:
                            edges[key] = c
        keys = list(edges.keys())
        return dict(
            cells = cells,
            glifts = glifts,
            face_cells = array(face_cells, dtype=int64),
            face_local = array(face_local, dtype=int64),
            edge_vertices = array([k[:2] for k in keys], dtype=int64),
            edge_disp = array([k[2:] for k in keys], dtype=int64),
            edge_cells = array([edges[k] for k in keys], dtype=int64),
            edge_index = dict((k, n) for n, k in enumerate(keys)),
            )

    @property_depends_on('m')
    def _get_num_vertices( self ):
        return self.m**4

    @property_depends_on('m')
    def _get_num_cells( self ):
        return len(self._topology['cells'])

    @property_depends_on('m')
    def _get_num_faces( self ):
        return len(self._topology['face_cells'])

    @property_depends_on('m')
    def _get_num_edges( self ):
        return len(self._topology['edge_vertices'])

    @property_depends_on('m')
    def _get_vertex_grid( self ):
        return stack(unravel_index(arange(self.m**4), (self.m,)*4), axis=-1)

    def _to_space( self, g ):
        return einsum('ij,...j->...i', self.lattice.generators, asarray(g, dtype=float)/self.m)

    @property_depends_on('digest')
    def _get_vertices( self ):
        return self._to_space(self.vertex_grid)

    @property_depends_on('m')
    def _get_cells( self ):
        return self._topology['cells']

    @property_depends_on('m')
    def _get_cell_grid_lifts( self ):
        return self._topology['glifts']

    @property_depends_on('digest')
    def _get_lifts( self ):
        return self._to_space(self.cell_grid_lifts)

    @property_depends_on('digest')
    def _get_edge_matrices( self ):
        l = self.lifts
        return (l[:, 1:, :] - l[:, :1, :]).transpose(0, 2, 1)

    @property_depends_on('digest')
    def _get_edge_inverses( self ):
        return inv(self.edge_matrices)

    @property_depends_on('digest')
    def _get_volumes( self ):
        vol = det(self.edge_matrices)/24.
        if (vol <= 0).any():
            raise ValueError("mesh contains %i cells with non-positive volume" % (vol <= 0).sum())
        return vol

    @property_depends_on('m')
    def _get_face_cells( self ):
        return self._topology['face_cells']

    @property_depends_on('m')
    def _get_face_local( self ):
        return self._topology['face_local']

    @property_depends_on('digest')
    def _get_frames( self ):
        c = self.face_cells[:, 0]
        loc = self.face_local[:, 0, :]
        pts = self.lifts[c[:, None], loc]
        return pts[:, 1:, :] - pts[:, :1, :]

    @property_depends_on('m')
    def _get_edge_vertices( self ):
        return self._topology['edge_vertices']

    @property_depends_on('m')
    def _get_edge_grid_displacements( self ):
        return self._topology['edge_disp']

    @property_depends_on('digest')
    def _get_edge_displacements( self ):
        return self._to_space(self.edge_grid_displacements)

    @property_depends_on('m')
    def _get_edge_cells( self ):
        return self._topology['edge_cells']

    def edge_of( self, a, b ):
        """
        Oriented edge from grid point a to the neighbouring grid point b.

        Returns
        -------
        (edge index, sign)
            sign is +1 if the edge is traversed from tail to head.
        """
        ia, ib = self._vertex_id(a), self._vertex_id(b)
        d = tuple(int(x) for x in asarray(b) - asarray(a))
        if ia < ib:
            return self._topology['edge_index'][(ia, ib) + d], 1
        return self._topology['edge_index'][(ib, ia) + tuple(-x for x in d)], -1

    @cached_property
    def _get__tree( self ):
        ev = self.edge_vertices
        n = self.num_vertices
        graph = csr_matrix((ones(len(ev)), (ev[:, 0], ev[:, 1])), shape=(n, n))
        ncomp, _ = connected_components(graph, directed=False)
        if ncomp != 1:
            raise RuntimeError("edge graph has %i components" % ncomp)
        first = {}
        for k, (a, b) in enumerate(ev):
            first.setdefault((int(a), int(b)), k)
        return graph, first

    def spanning_tree( self, root=0 ):
        """
        Breadth-first spanning tree of the edge graph.

        Returns
        -------
        order : array of ints
            Vertices in breadth-first order, starting with root.
        tree : list of (parent, child, edge, sign)
            One entry per non-root vertex in :obj:`order`; sign is +1 if the
            edge is traversed from its tail to its head when going from
            parent to child.
        """
        graph, first = self._tree
        order, pred = breadth_first_order(graph, root, directed=False,
                                          return_predecessors=True)
        tree = []
        for v in order[1:]:
            p = int(pred[v])
            v = int(v)
            if p < v:
                tree.append((p, v, first[(p, v)], 1))
            else:
                tree.append((p, v, first[(v, p)], -1))
        return order, tree


def _parity( perm ):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def build_mesh( lattice=None, m=2 ):
    """
    Builds the Kuhn triangulation of V / lattice with m subdivisions per axis.

    Parameters
    ----------
    lattice : :class:`Lattice`, optional
        Defaults to the standard lattice.
    m : int
        Subdivisions per axis, at least 2.

    Returns
    -------
    :class:`TorusMesh`
    """
    if m < 2:
        raise ValueError("m must be at least 2, got %i" % m)
    if lattice is None:
        lattice = Lattice()
    mesh = TorusMesh(lattice=lattice, m=m)
    lattice.covolume
    # force construction so that invalid input fails here
    mesh.volumes
    mesh.frames
    mesh.spanning_tree()
    return mesh


def cell_volumes( mesh ):
    return mesh.volumes


def vertex_cells( mesh ):
    """Star of every vertex: sorted indices of the cells containing it."""
    nc = mesh.num_cells
    inc = csr_matrix((ones(5*nc), (mesh.cells.ravel(), repeat(arange(nc), 5))),
                     shape=(mesh.num_vertices, nc))
    inc.sort_indices()
    return [inc.indices[inc.indptr[v]:inc.indptr[v+1]] for v in range(mesh.num_vertices)]


def face_frames( mesh ):
    """
    Tangent frames of all 3-faces.

    Returns
    -------
    array of floats of shape (nF, 2, 3, 4)
        For every face the frame as seen from both incident cells; both are
        identical by construction.
    """
    f = mesh.frames
    return stack((f, f), axis=1)


def edge_graph( mesh ):
    """
    Edges of the mesh as (tail, head, displacement, cell) arrays.
    """
    return mesh.edge_vertices, mesh.edge_displacements, mesh.edge_cells


def spanning_tree( mesh, root=0 ):
    return mesh.spanning_tree(root)


def shifted_loop( mesh, k, start=(0, 0, 0, 0) ):
    """
    Closed edge path of m steps along axis k starting at grid point start.

    Returns
    -------
    list of (edge index, sign)
    """
    axis = eye(4, dtype=int64)[k]
    a = array(start, dtype=int64)
    path = []
    for _ in range(mesh.m):
        path.append(mesh.edge_of(a, a + axis))
        a = a + axis
    return path


def generator_loops( mesh ):
    """
    The four generator loops from vertex 0; loop k winds once along
    lattice generator k.
    """
    return [shifted_loop(mesh, k) for k in range(4)]


def loop_winding( mesh, path ):
    """Summed displacement of an oriented edge path."""
    w = zeros(4)
    disp = mesh.edge_displacements
    for e, s in path:
        w += s*disp[e]
    return w


def reverse_loop( path ):
    return [(e, -s) for e, s in reversed(path)]


class PolyMap( HasPrivateTraits ):
    """
    A polyhedral map of the torus: vertex images together with, for every
    cell, the lifted images of its five vertices.
    """

    #: The triangulated torus.
    mesh = Instance(TorusMesh)

    #: Images of the vertices in V, shape (nV, 4).
    vertex_images = CArray(dtype=float, shape=(None, 4),
        desc="vertex images")

    #: Lifted images of the cell vertices, shape (nC, 5, 4).
    cell_images = CArray(dtype=float, shape=(None, 5, 4),
        desc="lifted cell images")

    #: Closure defect per edge (distance to the lattice), shape (nE,).
    closure_defects = CArray(dtype=float,
        desc="closure defects of the edges")

    #: Homeomorphism certificate; never established.
    homeomorphism = Trait('unknown')

    @classmethod
    def identity( cls, mesh ):
        return cls(mesh=mesh, vertex_images=mesh.vertices, cell_images=mesh.lifts,
                   closure_defects=zeros(mesh.num_edges))

    @classmethod
    def linear( cls, mesh, A, shift=(0., 0., 0., 0.) ):
        """
        The map x -> A x + shift; A must map the lattice into itself.
        """
        A = asarray(A, dtype=float)
        shift = asarray(shift, dtype=float)
        return cls(mesh=mesh,
                   vertex_images=einsum('ij,nj->ni', A, mesh.vertices) + shift,
                   cell_images=einsum('ij,ncj->nci', A, mesh.lifts) + shift,
                   closure_defects=zeros(mesh.num_edges))

    def check_lifts( self, tol=1e-9 ):
        """
        Certifies that the cell lifts agree across every face up to a single
        common lattice element.

        Raises
        ------
        :class:`~hkflow.internal.LiftError` naming the first offending face.
        """
        mesh = self.mesh
        lattice = mesh.lattice
        fc = mesh.face_cells
        fl = mesh.face_local
        y1 = self.cell_images[fc[:, 0, None], fl[:, 0]]
        y2 = self.cell_images[fc[:, 1, None], fl[:, 1]]
        shift = y1 - y2
        spread = np_abs(shift - shift[:, :1]).max(axis=(1, 2))
        offlattice = lattice.distance(shift[:, 0])
        scale = 1. + np_abs(self.cell_images).max()
        bad = (spread > tol*scale) | (offlattice > tol*scale)
        if bad.any():
            f = int(bad.nonzero()[0][0])
            raise LiftError(f, max(spread[f], offlattice[f]))
        # cell lifts project to the vertex images
        dev = lattice.distance(self.cell_images - self.vertex_images[mesh.cells])
        if (dev > tol*scale).any():
            c = int((dev > tol*scale).any(axis=1).nonzero()[0][0])
            raise ValueError("lifted images of cell %i do not project to its vertex images" % c)
