# coding=UTF-8
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

from hashlib import md5

from numpy import ndarray, ascontiguousarray


def digest( obj, name='digest'):
    str_ = [str(obj.__class__).encode("UTF-8")]
    for do_ in obj.trait(name).depends_on:
        vobj = obj
        try:
            for i in do_.split('.'):
                vobj = getattr(vobj, i.rstrip('[]'))
        except AttributeError:
            continue
        if isinstance(vobj, ndarray):
            # str() would round the entries
            str_.append(ascontiguousarray(vobj, dtype=float).tobytes())
        else:
            str_.append(str(vobj).encode("UTF-8"))
    return '_' + md5(''.encode("UTF-8").join(str_)).hexdigest()


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class WhitneyError(ValueError):
    """
    A cell field fails the Whitney test where a closed form is required.
    The largest face residual is kept in :attr:`residual`.
    """

    def __init__(self, residual, tol):
        ValueError.__init__(self,
            "form is not Whitney: face residual %.3e exceeds tolerance %.1e" % (residual, tol))
        self.residual = residual


class LiftError(ValueError):
    """Cell lifts of a polyhedral map disagree across the face :attr:`face`."""

    def __init__(self, face, deviation):
        ValueError.__init__(self,
            "inconsistent lifts across face %i (deviation %.3e)" % (face, deviation))
        self.face = face
        self.deviation = deviation


class ClosureError(ValueError):
    """A primitive does not close up modulo the lattice along :attr:`edge`."""

    def __init__(self, edge, defect, tol):
        ValueError.__init__(self,
            "closure defect %.3e on edge %i exceeds tolerance %.1e" % (defect, edge, tol))
        self.edge = edge
        self.defect = defect


class IntegralityError(ValueError):
    """The cohomology class is not integral with respect to the lattice."""


class SingularGramError(ArithmeticError):
    """The Gram matrix of a closed basis is numerically singular."""


class FlowAbort(ArithmeticError):
    """
    Time stepping had to stop. The last valid :class:`~hkflow.flow.FlowState`
    is kept in :attr:`state`, the partial result (if any) in :attr:`result`.
    """

    def __init__(self, msg, state, result=None):
        ArithmeticError.__init__(self, msg)
        self.state = state
        self.result = result
