"""Phase-space conventions and numerical predicates.

All quadrature vectors are ordered z = (q_1, ..., q_n, p_1, ..., p_n) and
measured in dimensionless units with hbar = 2, so the vacuum covariance is
the identity.  Every predicate takes an explicit tolerance so callers can
tighten or loosen it; the default is ``DEFAULT_TOL``.
"""

import numpy as np

# Value of hbar fixed by the convention [q, p] = 2i; vacuum variance is 1.
HBAR = 2.0

# Default absolute tolerance for the numerical predicates below.
DEFAULT_TOL = 1e-9


def sigma(n):
    """Return the skew-symmetric form encoding the commutation relations.

    Args:
        n (int): number of modes.

    Returns:
        array: the 2n x 2n block matrix [[0, I_n], [-I_n, 0]].

    Raises:
        ValueError: if ``n`` is not a positive integer.
    """
    if n < 1:
        raise ValueError(f"mode count must be positive, got {n}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(a, tol=DEFAULT_TOL):
    """Check whether a real matrix preserves the symplectic form.

    Args:
        a (array): real square matrix of even dimension.
        tol (float): largest allowed absolute entry of A^T Sigma A - Sigma.

    Returns:
        bool: True iff ``a`` is symplectic within ``tol``.

    Raises:
        ValueError: if ``a`` is not square with even dimension.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] % 2 != 0:
        raise ValueError(f"symplectic matrices have even dimension, got {a.shape[0]}")
    s = sigma(a.shape[0] // 2)
    return float(np.max(np.abs(a.T @ s @ a - s))) <= tol


def is_hermitian_psd(h, tol=DEFAULT_TOL):
    """Check whether a matrix is Hermitian positive semidefinite.

    The input is symmetrized defensively as (H + H^dag)/2 before the
    eigenvalue test, so inputs that are Hermitian only up to roundoff are
    handled gracefully.

    Args:
        h (array): complex square matrix, Hermitian within tolerance.
        tol (float): eigenvalues down to ``-tol`` still count as nonnegative.

    Returns:
        bool: True iff the minimum eigenvalue of the symmetrized input
        is >= -tol.

    Raises:
        ValueError: if ``h`` is not square.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    herm = (h + h.conj().T) / 2.0
    return float(np.linalg.eigvalsh(herm)[0]) >= -tol


def min_eigenvalue(h):
    """Minimum eigenvalue of the Hermitian-symmetrized input.

    Diagnostic companion to :func:`is_hermitian_psd`.
    """
    h = np.asarray(h, dtype=complex)
    herm = (h + h.conj().T) / 2.0
    return float(np.linalg.eigvalsh(herm)[0])


def symplectic_spectrum(gamma, _atol=1e-9):
    """Symplectic eigenvalues of a symmetric matrix.

    The eigenvalues of i Sigma Gamma occur in +/- pairs; this returns the
    absolute value of each pair once, in descending order.  Physical
    covariance matrices have every value >= 1; pure Gaussian states have
    every value equal to 1.

    Args:
        gamma (array): real symmetric 2n x 2n matrix.

    Returns:
        array: n nonnegative reals, descending.

    Raises:
        ValueError: if ``gamma`` is not symmetric.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {gamma.shape}")
    if gamma.shape[0] % 2 != 0:
        raise ValueError(f"covariance matrices have even dimension, got {gamma.shape[0]}")
    scale = max(1.0, float(np.max(np.abs(gamma))) if gamma.size else 1.0)
    if gamma.size and float(np.max(np.abs(gamma - gamma.T))) > _atol * scale:
        raise ValueError("covariance matrix is not symmetric")
    n = gamma.shape[0] // 2
    if n == 0:
        return np.zeros(0)
    vals = np.abs(np.linalg.eigvals(sigma(n) @ gamma))
    vals = np.sort(vals)[::-1]
    # Eigenvalues come in +/- pairs; average each adjacent pair to cancel
    # the roundoff split between the two members.
    return (vals[0::2] + vals[1::2]) / 2.0
