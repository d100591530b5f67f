# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""
Contains functions for writing and reading meshes, cell fields, potentials,
polyhedral maps and flow results.

Documents are JSON files; floats are written with their shortest exact
representation so that every dump reads back bit for bit. Traces are CSV
files written with 17 significant digits.

.. autosummary::
    :toctree: generated/

    dump_mesh
    load_mesh
    dump_field
    load_field
    dump_potential
    load_potential
    export_map
    load_map
    write_plot_data
    write_trace
    write_lojasiewicz
    write_summary
"""

import json

from numpy import array, asarray, log, savetxt, column_stack

from .mesh import Lattice, PolyMap, build_mesh
from .forms import CellField, Potential
from .flow import TRACE_FIELDS


def _read( filename, kind ):
    with open(filename) as f:
        doc = json.load(f)
    if doc.get('kind') != kind:
        raise ValueError("%s is not a %s document (kind = %r)" % (filename, kind, doc.get('kind')))
    return doc


def _write( filename, doc ):
    with open(filename, 'w') as f:
        json.dump(doc, f, sort_keys=True)
        f.write('\n')


def _mesh_header( mesh ):
    return dict(lattice=mesh.lattice.generators.tolist(), m=int(mesh.m), digest=mesh.digest)


def _mesh_for( header, mesh=None ):
    # the given mesh must match the one the document was written on
    if mesh is None:
        mesh = build_mesh(Lattice(generators=array(header['lattice'])), header['m'])
    if mesh.digest != header['digest']:
        raise ValueError("document was written on mesh %s, not on %s"
                         % (header['digest'], mesh.digest))
    return mesh


def dump_mesh( mesh, filename ):
    """Writes lattice, vertices, cells with lifts and faces of mesh."""
    doc = _mesh_header(mesh)
    doc.update(
        kind = 'mesh',
        vertices = mesh.vertices.tolist(),
        cells = dict(vertices=mesh.cells.tolist(), lifts=mesh.lifts.tolist()),
        faces = dict(cells=mesh.face_cells.tolist(), frames=mesh.frames.tolist()),
        )
    _write(filename, doc)


def load_mesh( filename ):
    """
    Rebuilds the mesh of a dump and checks the stored cells against it.
    """
    doc = _read(filename, 'mesh')
    mesh = _mesh_for(doc)
    if (asarray(doc['cells']['vertices']) != mesh.cells).any() or \
            (asarray(doc['cells']['lifts']) != mesh.lifts).any():
        raise ValueError("cells in %s do not match the rebuilt mesh" % filename)
    return mesh


def dump_field( F, filename ):
    """Writes a cell field, 16 row-major floats per cell."""
    _write(filename, dict(kind='cellfield', mesh=_mesh_header(F.mesh),
                          data=F.data.reshape(-1, 16).tolist()))


def load_field( filename, mesh=None ):
    """
    Reads a cell field.

    Parameters
    ----------
    filename : str
    mesh : :class:`~hkflow.mesh.TorusMesh`, optional
        Mesh to attach the field to; rebuilt from the document if not given.

    Raises
    ------
    ValueError if the document belongs to another mesh.
    """
    doc = _read(filename, 'cellfield')
    mesh = _mesh_for(doc['mesh'], mesh)
    return CellField(mesh=mesh, data=array(doc['data'], dtype=float).reshape(-1, 4, 4))


def dump_potential( u, filename ):
    _write(filename, dict(kind='potential', mesh=_mesh_header(u.mesh),
                          values=u.values.tolist()))


def load_potential( filename, mesh=None ):
    doc = _read(filename, 'potential')
    mesh = _mesh_for(doc['mesh'], mesh)
    return Potential(mesh=mesh, values=array(doc['values'], dtype=float))


def export_map( f, filename ):
    """Writes vertex images, lifted cell images and closure defects of a map."""
    _write(filename, dict(kind='polymap', mesh=_mesh_header(f.mesh),
                          vertex_images=f.vertex_images.tolist(),
                          cell_images=f.cell_images.tolist(),
                          closure_defects=f.closure_defects.tolist(),
                          homeomorphism=f.homeomorphism))


def load_map( filename, mesh=None ):
    doc = _read(filename, 'polymap')
    mesh = _mesh_for(doc['mesh'], mesh)
    return PolyMap(mesh=mesh,
                   vertex_images=array(doc['vertex_images'], dtype=float),
                   cell_images=array(doc['cell_images'], dtype=float),
                   closure_defects=array(doc['closure_defects'], dtype=float))


def write_plot_data( rows, filename ):
    """Writes rows of :func:`~hkflow.rebuild.projection_plot_data` as CSV."""
    with open(filename, 'w') as f:
        f.write('vertex,i,j,u,v\n')
        for v, i, j, a, b in rows:
            f.write('%i,%i,%i,%.17g,%.17g\n' % (v, i, j, a, b))


def write_trace( result, filename ):
    """Writes the trace of a :class:`~hkflow.flow.FlowResult` as CSV."""
    savetxt(filename, result.trace, fmt='%.17g', delimiter=',',
            header=','.join(TRACE_FIELDS), comments='')


def write_lojasiewicz( result, filename ):
    """
    Writes t, log phi and log |grad phi| of every trace record with
    positive phi and gradient.
    """
    t = result.trace[:, 0]
    ph = result.trace[:, 3]
    ok = (ph > 0) & (result.grad2 > 0)
    rows = column_stack((t[ok], log(ph[ok]), 0.5*log(result.grad2[ok])))
    savetxt(filename, rows.reshape(-1, 3), fmt='%.17g', delimiter=',',
            header='t,log_phi,log_grad', comments='')


def write_summary( summary, filename ):
    with open(filename, 'w') as f:
        json.dump(summary, f, sort_keys=True, indent=2)
        f.write('\n')
