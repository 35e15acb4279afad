# completion/harmonic.py
"""
Closed-form harmonic labelling on a sparsified weight matrix.

With vertices ordered labelled-first and L = D - W':

    f_u = -(L_uu + reg * I)^-1  L_ul  y_l

solved by Cholesky factorisation. Labels: -1 where f_u < threshold, else +1.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from config import SPLICE_CONFIG
from completion.graph import WeightMatrix
from errors import NumericalError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HarmonicSolution:
    f_l:      np.ndarray
    f_u:      np.ndarray
    labels_u: np.ndarray


def laplacian(wp) -> np.ndarray:
    """L = D - W' with D the diagonal of row sums"""
    w = wp.values if isinstance(wp, WeightMatrix) else np.asarray(wp, dtype=float)
    return np.diag(w.sum(axis=1)) - w


def threshold(f_u, tau: Optional[float] = None) -> np.ndarray:
    tau = SPLICE_CONFIG["threshold"] if tau is None else tau
    f_u = np.asarray(f_u, dtype=float)
    return np.where(f_u < tau, -1, 1).astype(int)


def solve(wp: WeightMatrix, y_l: Sequence[int],
          regularization: Optional[float] = None,
          tau: Optional[float] = None) -> HarmonicSolution:
    """
    Harmonic values for the unlabelled vertices of `wp`.

    Args:
        wp:             sparsified weights, labelled vertices first
        y_l:            +1 / -1 per labelled vertex, in matrix order
        regularization: jitter added to the L_uu diagonal (default from SPLICE_CONFIG)
        tau:            threshold below which a value is labelled -1

    Raises:
        NumericalError: the regularised system cannot be factorised or solved
    """
    reg = SPLICE_CONFIG["regularization"] if regularization is None else regularization
    y_l = np.asarray(y_l, dtype=float)
    l = wp.n_labelled
    if y_l.shape != (l,):
        raise ValueError(f"expected {l} labelled values, got shape {y_l.shape}")

    L = laplacian(wp)
    L_uu = L[l:, l:] + reg * np.eye(wp.n_unlabelled)
    L_ul = L[l:, :l]

    if L_uu.shape[0] == 0:
        return HarmonicSolution(y_l, np.zeros(0), np.zeros(0, dtype=int))

    try:
        factor = scipy.linalg.cho_factor(L_uu)
        f_u = -scipy.linalg.cho_solve(factor, L_ul @ y_l)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"harmonic solve failed: {e}", float(np.linalg.cond(L_uu))) from e

    if not np.all(np.isfinite(f_u)):
        raise NumericalError("harmonic solve produced non-finite values", float(np.linalg.cond(L_uu)))

    isolated = int(np.count_nonzero(wp.values[l:].sum(axis=1) == 0))
    if isolated:
        logger.debug(f"{isolated} unlabelled vertex(es) have no edges; they default to -1")

    return HarmonicSolution(y_l, f_u, threshold(f_u, tau))


def write_harmonic(solution: HarmonicSolution, path: str):
    """One f_u value per line"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    np.savetxt(path, solution.f_u, fmt="%.12g")


__all__ = ["HarmonicSolution", "laplacian", "solve", "threshold", "write_harmonic"]
