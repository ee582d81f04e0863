"""
Hermitian log-determinant kernel
"""

import numpy as np
from scipy.linalg import LinAlgError, cholesky

from .exceptions import NotPositiveDefinite


def logdet_hpd(a: np.ndarray) -> float:
    """log det of a Hermitian positive definite matrix (nats), via Cholesky"""
    a = np.asarray(a)
    if a.shape[0] == 0:
        return 0.0
    try:
        factor = cholesky(a, lower=True, check_finite=True)
    except LinAlgError as exc:
        raise NotPositiveDefinite(f"matrix is not positive definite: {exc}") from exc
    diag = np.real(np.diag(factor))
    if np.any(diag <= 0.0):
        raise NotPositiveDefinite("non-positive pivot in Cholesky factor")
    return float(2.0 * np.sum(np.log(diag)))


def gram_plus_identity(x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """I + scale * X X^H"""
    return np.eye(x.shape[0], dtype=complex) + scale * (x @ x.conj().T)
