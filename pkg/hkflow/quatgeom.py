# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""Quaternionic and exterior algebra on the model space V = R^4.

Vectors are stored in the coordinates (x1, y1, x2, y2), which are identified
with the quaternion x1 + y1 i + x2 j - y2 k. With this chart the left
multiplication matrices reproduce the anti-selfdual forms

    omega_I = dx1^dy1 - dx2^dy2
    omega_J = dx1^dx2 + dy1^dy2
    omega_K = -dx1^dy2 - dx2^dy1

via omega(u, v) = g(L u, v), and omega_V = dx1^dy1 + dx2^dy2 is
g(R_i u, v) for the right multiplication R_i by i.

Constant 2-forms are six coefficients (c12, c13, c14, c23, c24, c34) in the
basis dx_p^dx_q, p < q, with (x1, x2, x3, x4) = (x1, y1, x2, y2).
Matrix arguments may carry leading stack dimensions (..., 4, 4).

.. autosummary::
    :toctree: generated/

    quat_mul
    to_quaternion
    from_quaternion
    left_mul
    right_mul_i
    omega_hat
    two_form_matrix
    two_form_from_matrix
    hodge_star
    selfdual_part
    antiselfdual_part
    pullback
    wedge_ratio
    r_involution
    split_pm
    frobenius
    symplectic_defect
    is_symplectic_class
"""

# imports from other packages
from numpy import array, asarray, zeros, eye, empty, stack, einsum, sqrt

#: Labels of the three left complex structures.
LABELS = ('I', 'J', 'K')

#: Index pairs (p, q), p < q, in the storage order of 2-form coefficients.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# quaternion units as (a, b, c, d) = a + b i + c j + d k
_UNITS = {
    'I' : array([0., 1., 0., 0.]),
    'J' : array([0., 0., 1., 0.]),
    'K' : array([0., 0., 0., 1.]),
    }


def quat_mul(p, q):
    """
    Hamilton product of quaternions given as (a, b, c, d) components.
    Both arguments may be stacks of shape (..., 4).
    """
    p = asarray(p, dtype=float)
    q = asarray(q, dtype=float)
    a1, b1, c1, d1 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    a2, b2, c2, d2 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return stack((a1*a2 - b1*b2 - c1*c2 - d1*d2,
                  a1*b2 + b1*a2 + c1*d2 - d1*c2,
                  a1*c2 - b1*d2 + c1*a2 + d1*b2,
                  a1*d2 + b1*c2 - c1*b2 + d1*a2), axis=-1)


def to_quaternion(v):
    """Maps coordinates (x1, y1, x2, y2) to quaternion components."""
    q = array(v, dtype=float)
    q[..., 3] *= -1
    return q


def from_quaternion(q):
    """Inverse of :func:`to_quaternion`."""
    return to_quaternion(q)


def left_mul(which, v):
    """
    Left quaternionic multiplication.

    Parameters
    ----------
    which : one of 'I', 'J', 'K'
        Selects the unit i, j or k.
    v : array of floats of shape (..., 4)
        Vector(s) in coordinates (x1, y1, x2, y2).

    Returns
    -------
    array of floats of shape (..., 4)
        The product which * v, in coordinates.
    """
    return from_quaternion(quat_mul(_UNITS[which], to_quaternion(v)))


def right_mul_i(v):
    """Right multiplication v * i, in coordinates."""
    return from_quaternion(quat_mul(to_quaternion(v), _UNITS['I']))


def _matrix_of(op):
    m = empty((4, 4))
    for k, e in enumerate(eye(4)):
        m[:, k] = op(e)
    return m

#: Matrices of left multiplication by i, j, k.
LEFT = dict((w, _matrix_of(lambda v, w=w: left_mul(w, v))) for w in LABELS)

#: Matrix of right multiplication by i.
RIGHT_I = _matrix_of(right_mul_i)


def omega_hat(which):
    """
    The distinguished constant 2-forms.

    Parameters
    ----------
    which : one of 'V', 'I', 'J', 'K'
        'V' gives the selfdual form omega_V, the others the anti-selfdual
        forms omega_I, omega_J, omega_K.

    Returns
    -------
    array of floats of shape (6,)
        Coefficients in the order of :data:`PAIRS`.
    """
    c = zeros(6)
    if which == 'V':
        c[0], c[5] = 1., 1.
    elif which == 'I':
        c[0], c[5] = 1., -1.
    elif which == 'J':
        c[1], c[4] = 1., 1.
    elif which == 'K':
        # -dx2^dy1 = +dy1^dx2
        c[2], c[3] = -1., 1.
    else:
        raise ValueError("unknown 2-form label %s" % which)
    return c


def two_form_matrix(beta):
    """
    Antisymmetric matrix B of a 2-form, beta(u, v) = u^T B v.
    """
    beta = asarray(beta, dtype=float)
    B = zeros(beta.shape[:-1] + (4, 4))
    for k, (p, q) in enumerate(PAIRS):
        B[..., p, q] = beta[..., k]
        B[..., q, p] = -beta[..., k]
    return B


def two_form_from_matrix(B):
    """Coefficients of the 2-form with matrix B (antisymmetric part of B)."""
    B = asarray(B, dtype=float)
    return stack([0.5*(B[..., p, q] - B[..., q, p]) for p, q in PAIRS], axis=-1)


def hodge_star(beta):
    """
    Hodge star of the flat metric with orientation dx1^dy1^dx2^dy2.
    """
    beta = asarray(beta, dtype=float)
    c12, c13, c14, c23, c24, c34 = [beta[..., k] for k in range(6)]
    return stack((c34, -c24, c23, c14, -c13, c12), axis=-1)


def selfdual_part(beta):
    return 0.5*(asarray(beta, dtype=float) + hodge_star(beta))


def antiselfdual_part(beta):
    return 0.5*(asarray(beta, dtype=float) - hodge_star(beta))


def pullback(A, beta):
    """
    Pullback of a constant 2-form by a linear map, (A^* beta)(u, v) = beta(Au, Av).

    Parameters
    ----------
    A : array of floats of shape (..., 4, 4)
    beta : array of floats of shape (6,) or (..., 6)

    Returns
    -------
    array of floats of shape (..., 6)
    """
    A = asarray(A, dtype=float)
    B = two_form_matrix(beta)
    return two_form_from_matrix(einsum('...ap,...ab,...bq->...pq', A, B, A))


def wedge_ratio(beta1, beta2):
    """
    Coefficient of beta1 ^ beta2 against dx1^dy1^dx2^dy2.
    """
    b = asarray(beta1, dtype=float)
    d = asarray(beta2, dtype=float)
    return (b[..., 0]*d[..., 5] + b[..., 5]*d[..., 0]
            - b[..., 1]*d[..., 4] - b[..., 4]*d[..., 1]
            + b[..., 2]*d[..., 3] + b[..., 3]*d[..., 2])


def r_involution(which, A):
    """
    The involution R_which A = -R_i A L_which on 4x4 matrices.
    It is symmetric and orthogonal for the Frobenius product.
    """
    return -einsum('ab,...bc,cd->...ad', RIGHT_I, asarray(A, dtype=float), LEFT[which])


def split_pm(which, A):
    """
    Splits A into the +1 and -1 eigenparts of :func:`r_involution`.

    Returns
    -------
    (A_plus, A_minus) with A = A_plus + A_minus
    """
    A = asarray(A, dtype=float)
    RA = r_involution(which, A)
    return 0.5*(A + RA), 0.5*(A - RA)


def frobenius(A, B):
    """Frobenius product over the last two axes."""
    return einsum('...ab,...ab->...', asarray(A, dtype=float), asarray(B, dtype=float))


def symplectic_defect(A):
    """Euclidean norm of the coefficients of A^* omega_V - omega_V."""
    d = pullback(A, omega_hat('V')) - omega_hat('V')
    return sqrt((d**2).sum(axis=-1))


def is_symplectic_class(alpha, tol=1e-9):
    """True if the linear map alpha preserves omega_V up to tol."""
    return bool(symplectic_defect(alpha) <= tol)
