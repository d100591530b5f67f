# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""
Command line interface ``hkflow`` with the sub-commands

* ``mesh-info``: counts, total volume and basis dimension,
* ``flow``: runs the flow and writes trace.csv, lojasiewicz.csv, final.form,
  normalized.form (generic limits) and summary.json,
* ``verify``: symplectic and Whitney certificates of a form file,
* ``export-map``: primitive of a form file as a map file plus plot data,
* ``hessian``: eigen-report of the Hessian of phi.

An experiment is described by a JSON document with the sections
``lattice`` (4x4 generator matrix), ``mesh`` ({m}), ``alpha`` (4x4 matrix),
``init`` ({kind, epsilon, seed, coordinates, file}), ``integrator``
({scheme, h, adaptive, h_max, h_min, cached}), ``stopping`` ({tol, tau_min,
tau_floor, max_time, max_steps}) and ``output`` ({dir,
trace_stride}). Command line flags override single fields.

Exit codes: 0 success, 2 configuration error, 3 numerical abort,
4 verification failure.

.. autosummary::
    :toctree: generated/

    load_config
    cmd_mesh_info
    cmd_flow
    cmd_verify
    cmd_export_map
    cmd_hessian
    main
"""

import argparse
import json
import sys
from os import makedirs, path

from numpy import eye
from traits.api import TraitError

from .version import __version__
from .configuration import config
from .internal import ConfigError, FlowAbort, SingularGramError, WhitneyError, \
LiftError, ClosureError, IntegralityError
from .mesh import Lattice, build_mesh
from .forms import CellField, build_closed_basis, cohomology_class
from .moment import hessian_form
from .flow import FlowConfig, ModifiedMomentMapFlow, RenormalizedFlow
from .rebuild import verify_symplectic, primitive, projection_plot_data
from .fileimport import load_field, dump_field, export_map, write_plot_data, \
write_trace, write_lojasiewicz, write_summary

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3
EXIT_VERIFY = 4

#: Keys of the sections of an experiment document and the
#: :class:`~hkflow.flow.FlowConfig` traits they set.
SECTIONS = {
    'mesh': {'m': 'mesh_m'},
    'init': {'kind': 'init', 'epsilon': 'epsilon', 'seed': 'seed',
             'coordinates': 'init_coordinates', 'file': 'init_file'},
    'integrator': {'scheme': 'integrator', 'h': 'h', 'adaptive': 'adaptive',
                   'h_max': 'h_max', 'h_min': 'h_min', 'cached': 'cached'},
    'stopping': {'tol': 'tol', 'tau_min': 'tau_min', 'tau_floor': 'tau_floor',
                 'max_time': 'max_time', 'max_steps': 'max_steps'},
    'output': {'trace_stride': 'trace_stride', 'dir': None},
    }

#: Flags overriding single fields, flag destination -> FlowConfig trait.
OVERRIDES = {
    'm': 'mesh_m', 'seed': 'seed', 'init': 'init', 'epsilon': 'epsilon',
    'integrator': 'integrator', 'h': 'h', 'tol': 'tol',
    'max_steps': 'max_steps', 'max_time': 'max_time',
    }


def load_config( doc ):
    """
    Maps an experiment document onto a :class:`~hkflow.flow.FlowConfig`.

    Returns
    -------
    (FlowConfig, output directory)

    Raises
    ------
    :class:`~hkflow.internal.ConfigError` on unknown sections or keys.
    """
    cfg = FlowConfig()
    outdir = '.'
    for section, value in doc.items():
        if section in ('lattice', 'alpha'):
            setattr(cfg, section, value)
            continue
        if section not in SECTIONS:
            raise ConfigError("unknown section '%s'" % section)
        if not isinstance(value, dict):
            raise ConfigError("section '%s' must be a mapping" % section)
        for key, v in value.items():
            if key not in SECTIONS[section]:
                raise ConfigError("unknown key '%s' in section '%s'" % (key, section))
            if section == 'output' and key == 'dir':
                outdir = v
            else:
                setattr(cfg, SECTIONS[section][key], v)
    return cfg, outdir


def _config_from_args( args ):
    doc = {}
    if args.config:
        with open(args.config) as f:
            doc = json.load(f)
    cfg, outdir = load_config(doc)
    for dest, name in OVERRIDES.items():
        v = getattr(args, dest, None)
        if v is not None:
            setattr(cfg, name, v)
    if getattr(args, 'no_adaptive', False):
        cfg.adaptive = False
    if getattr(args, 'output', None):
        outdir = args.output
    cfg.validate()
    return cfg, outdir


def _emit( args, doc, lines ):
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _class_multiplier( F, alpha ):
    # the constant field alpha has class alpha times the lattice generators
    ref = cohomology_class(CellField.constant(F.mesh, alpha))
    rr = float((ref*ref).sum())
    if rr == 0:
        return 0.
    return float((cohomology_class(F)*ref).sum())/rr


def _normalized( args, F ):
    # divide by the multiplier of the class along alpha
    if not args.normalize:
        return F
    alpha = eye(4)
    if args.config:
        with open(args.config) as f:
            alpha = load_config(json.load(f))[0].alpha
    tau = _class_multiplier(F, alpha)
    if tau == 0:
        raise IntegralityError("form has vanishing class, cannot normalize")
    return F/tau


def cmd_mesh_info( args ):
    cfg, _ = _config_from_args(args)
    mesh = build_mesh(Lattice(generators=cfg.lattice), cfg.mesh_m)
    basis = build_closed_basis(mesh, cfg.alpha)
    doc = dict(m=int(mesh.m), vertices=int(mesh.num_vertices), cells=int(mesh.num_cells),
               faces=int(mesh.num_faces), edges=int(mesh.num_edges),
               volume=float(mesh.volumes.sum()), dimension=int(basis.dimension))
    _emit(args, doc, ["%-10s %s" % (k, doc[k]) for k in sorted(doc)])
    return EXIT_OK


def _write_results( result, outdir ):
    makedirs(outdir, exist_ok=True)
    write_trace(result, path.join(outdir, 'trace.csv'))
    write_lojasiewicz(result, path.join(outdir, 'lojasiewicz.csv'))
    dump_field(result.field, path.join(outdir, 'final.form'))
    if result.classification == 'generic' and result.tau != 0:
        dump_field(result.field/result.tau, path.join(outdir, 'normalized.form'))
    summary = result.summary()
    write_summary(summary, path.join(outdir, 'summary.json'))
    return summary


def cmd_flow( args ):
    cfg, outdir = _config_from_args(args)
    flow = (RenormalizedFlow if args.renormalized else ModifiedMomentMapFlow)(config=cfg)
    try:
        result = flow.run()
    except FlowAbort as e:
        if e.result is not None:
            _write_results(e.result, outdir)
        raise
    summary = _write_results(result, outdir)
    _emit(args, summary, ["%-22s %s" % (k, summary[k]) for k in sorted(summary)])
    return EXIT_OK


def cmd_verify( args ):
    F = _normalized(args, load_field(args.form))
    report = verify_symplectic(F, args.tol)
    doc = report.as_dict()
    passed = report.verdict and report.whitney_ok
    doc['passed'] = bool(passed)
    _emit(args, doc, ["%-18s %s" % (k, doc[k]) for k in sorted(doc)])
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_export_map( args ):
    F = _normalized(args, load_field(args.form))
    f = primitive(F, args.base)
    export_map(f, args.output)
    stem, _ = path.splitext(args.output)
    write_plot_data(projection_plot_data(f), stem + '.plot.csv')
    doc = dict(map=args.output, max_closure_defect=float(f.closure_defects.max()),
               homeomorphism=f.homeomorphism)
    _emit(args, doc, ["%-20s %s" % (k, doc[k]) for k in sorted(doc)])
    return EXIT_OK


def cmd_hessian( args ):
    cfg, _ = _config_from_args(args)
    flow = ModifiedMomentMapFlow(config=cfg)
    if args.at == 'initial':
        state = flow.initial_state()
    else:
        state = flow.run().state
    report = hessian_form(flow.basis, state.field, tol=max(cfg.tol, 1e-8))
    doc = report.as_dict()
    if not args.all_eigenvalues:
        del doc['eigenvalues']
    _emit(args, doc, ["%-18s %s" % (k, doc[k]) for k in sorted(doc)])
    return EXIT_OK


def _common( p ):
    p.add_argument('--config', help="experiment document (JSON)")
    p.add_argument('--json', action='store_true', help="machine readable output")
    p.add_argument('--workers', type=int, help="threads for the cell loops")


def _experiment( p ):
    p.add_argument('--seed', type=int, help="seed of the PCG64 generator")
    p.add_argument('--m', type=int, help="subdivisions per axis")
    p.add_argument('--init', help="initial condition kind")
    p.add_argument('--epsilon', type=float, help="perturbation size")
    p.add_argument('--integrator', choices=['rk4', 'euler'])
    p.add_argument('--h', type=float, help="initial step size")
    p.add_argument('--tol', type=float, help="stop tolerance on |mu|")
    p.add_argument('--max-steps', type=int, dest='max_steps')
    p.add_argument('--max-time', type=float, dest='max_time')
    p.add_argument('--no-adaptive', action='store_true', dest='no_adaptive',
                   help="fixed step size")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='hkflow',
        description="Modified moment map flow on triangulated 4-tori")
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('mesh-info', help="mesh counts and basis dimension")
    _common(p)
    _experiment(p)
    p.set_defaults(func=cmd_mesh_info)

    p = sub.add_parser('flow', help="run the flow")
    _common(p)
    _experiment(p)
    p.add_argument('--output', help="output directory")
    p.add_argument('--renormalized', action='store_true',
                   help="integrate the (G, tau) system")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser('verify', help="symplectic certificate of a form file")
    _common(p)
    p.add_argument('form')
    p.add_argument('--tol', type=float, default=1e-6)
    p.add_argument('--normalize', action='store_true',
                   help="divide by the class multiplier first")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('export-map', help="primitive of a form file")
    _common(p)
    p.add_argument('form')
    p.add_argument('--base', type=int, default=0, help="base vertex")
    p.add_argument('--output', default='map.json')
    p.add_argument('--normalize', action='store_true',
                   help="divide by the class multiplier first")
    p.set_defaults(func=cmd_export_map)

    p = sub.add_parser('hessian', help="Hessian of phi at a flow state")
    _common(p)
    _experiment(p)
    p.add_argument('--at', choices=['final', 'initial'], default='final')
    p.add_argument('--all-eigenvalues', action='store_true', dest='all_eigenvalues')
    p.set_defaults(func=cmd_hessian)
    return parser


def main( argv=None ):
    """
    Entry point of the ``hkflow`` command.

    Returns
    -------
    int : exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    try:
        if args.workers is not None:
            config.num_threads = args.workers
        return args.func(args)
    except (FlowAbort, SingularGramError) as e:
        print("hkflow: numerical abort: %s" % e, file=sys.stderr)
        return EXIT_ABORT
    except (WhitneyError, LiftError, ClosureError, IntegralityError) as e:
        print("hkflow: verification failed: %s" % e, file=sys.stderr)
        return EXIT_VERIFY
    except (ConfigError, TraitError, ValueError, OSError) as e:
        print("hkflow: configuration error: %s" % e, file=sys.stderr)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
