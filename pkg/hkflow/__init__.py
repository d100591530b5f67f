# coding=UTF-8
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

"""
The hkflow library: the modified hyperKähler moment map flow on
triangulated flat 4-tori, and the reconstruction of symplectic polyhedral
maps from its limits.

A minimal usage example would be:

>>>    cfg = FlowConfig(init='perturbed_identity', epsilon=0.05, seed=1)
>>>    result = ModifiedMomentMapFlow(config=cfg).run()
>>>    result.status, result.classification, result.tau
>>>    f = primitive(result.field/result.tau)
>>>    verify_symplectic(diff_of_map(f)).verdict

Meshes, bases and flows are traits objects: only the traits must be set,
everything else is computed on first access and recomputed when a trait
it depends on changes.
"""

from .version import __author__, __date__, __version__

from .configuration import config

from .internal import ConfigError, WhitneyError, LiftError, ClosureError, \
IntegralityError, SingularGramError, FlowAbort
from .quatgeom import omega_hat, hodge_star, pullback, wedge_ratio, \
r_involution, split_pm, frobenius, symplectic_defect, is_symplectic_class
from .mesh import Lattice, TorusMesh, PolyMap, build_mesh, face_frames, \
generator_loops, shifted_loop, loop_winding, spanning_tree, edge_graph, \
cell_volumes, vertex_cells
from .forms import CellField, Potential, ClosedBasis, differentiate, \
diff_of_map, whitney_residual, whitney_constraint_matrix, closed_dimension, \
closed_alpha_dimension, cohomology_class, inner_g, norm_g, torus_act, \
build_closed_basis, project_alpha, hat_potential, random_potential
from .moment import MomentValue, HessianReport, mu, mu_norm2, mu_norm2_labels, \
phi, grad_phi, pullback_norm, selfduality_defect, general_hessian, hessian_form
from .flow import FlowConfig, FlowState, FlowResult, ModifiedMomentMapFlow, \
RenormalizedFlow, initial_field, rhs, step, run, run_renormalized, \
estimate_lojasiewicz, fit_exponential_rate
from .rebuild import SymplecticReport, is_integral_class, primitive, \
closure_defects, verify_symplectic, projection_plot_data
from .fileimport import dump_mesh, load_mesh, dump_field, load_field, \
dump_potential, load_potential, export_map, load_map
