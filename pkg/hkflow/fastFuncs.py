#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""
This file contains the per-cell kernels that are evaluated in every right
hand side of the flow. All of them are compiled via NUMBA and loop in
parallel over the 4-cells; each cell writes only its own output slots.
"""
import numpy as np
import numba as nb

cachedOption = True  # if True: saves the numba func as compiled func in sub directory
parallelOption = True  # if True: cell loops run on numba threads


@nb.njit(cache=cachedOption)
def _pulled_coefficients(F, omega, out):
    """ Coefficients (c12, c13, c14, c23, c24, c34) of F^T omega F, where
    omega is the antisymmetric 4x4 matrix of a 2-form.
    """
    k = 0
    for p in range(4):
        for q in range(p + 1, 4):
            s = 0.0
            for a in range(4):
                for b in range(4):
                    s += F[a, p] * omega[a, b] * F[b, q]
            out[k] = s
            k += 1


@nb.njit(cache=cachedOption)
def _wedge(b, d):
    return (b[0]*d[5] + b[5]*d[0] - b[1]*d[4] - b[4]*d[1]
            + b[2]*d[3] + b[3]*d[2])


@nb.njit(parallel=parallelOption, cache=cachedOption)
def cellPullbacks(F, omega):
    """ Pulls the constant 2-form with matrix omega back by every cell matrix.

    Parameters
    ----------
    F : float64[nCells, 4, 4]
        Cell matrices.
    omega : float64[4, 4]
        Antisymmetric matrix of the 2-form.

    Returns
    -------
    float64[nCells, 6] : the pulled back coefficients.
    """
    nCells = F.shape[0]
    result = np.zeros((nCells, 6))
    for cntCell in nb.prange(nCells):
        _pulled_coefficients(F[cntCell], omega, result[cntCell])
    return result


@nb.njit(parallel=parallelOption, cache=cachedOption)
def cellMoments(F, omegaV, omegaHats):
    """ Moment map densities -(F^* omega_V ^ omega_L) / sigma of every cell.

    Parameters
    ----------
    F : float64[nCells, 4, 4]
        Cell matrices.
    omegaV : float64[4, 4]
        Matrix of omega_V.
    omegaHats : float64[3, 6]
        Coefficients of omega_I, omega_J, omega_K.

    Returns
    -------
    float64[3, nCells] : mu_I, mu_J, mu_K per cell.
    """
    nCells = F.shape[0]
    result = np.zeros((3, nCells))
    for cntCell in nb.prange(nCells):
        coeff = np.zeros(6)
        _pulled_coefficients(F[cntCell], omegaV, coeff)
        for cntLabel in range(3):
            result[cntLabel, cntCell] = -_wedge(coeff, omegaHats[cntLabel])
    return result


@nb.njit(parallel=parallelOption, cache=cachedOption)
def cellGradient(F, mu, rightI, lefts):
    """ Gradient field sum_L mu_L * R_L F with R_L A = -R_i A L_L, per cell.

    Parameters
    ----------
    F : float64[nCells, 4, 4]
        Cell matrices.
    mu : float64[3, nCells]
        Moment map densities as returned by :func:`cellMoments`.
    rightI : float64[4, 4]
        Right multiplication by i.
    lefts : float64[3, 4, 4]
        Left multiplications by i, j, k.

    Returns
    -------
    float64[nCells, 4, 4]
    """
    nCells = F.shape[0]
    result = np.zeros((nCells, 4, 4))
    for cntCell in nb.prange(nCells):
        for a in range(4):
            for d in range(4):
                s = 0.0
                for cntLabel in range(3):
                    t = 0.0
                    for b in range(4):
                        for c in range(4):
                            t += rightI[a, b] * F[cntCell, b, c] * lefts[cntLabel, c, d]
                    s -= mu[cntLabel, cntCell] * t
                result[cntCell, a, d] = s
    return result
