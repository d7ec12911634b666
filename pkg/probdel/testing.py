"""Constructions that only tests may use.

Nothing in the library imports this module; it builds machines that violate the isometry so the
verification paths can be exercised against a negative control."""
import math

import numpy as np

from .exceptions import ProbDelValueError
from .machine import ANCILLA_READY, ANCILLA_ZERO, _build_isometry, gram_report


def degraded_isometry_matrix(params, blank, overlap=1.0):
    """Machine matrix with ``|A0>`` tilted towards ``|A>`` so that ``<A|A0> = overlap``."""
    if not (0.0 <= overlap <= 1.0):
        raise ProbDelValueError("Ancilla overlap must lie in [0, 1], got {!r}".format(overlap))
    ancilla = np.eye(3, dtype=complex)
    tilted = overlap * ancilla[ANCILLA_READY] + math.sqrt(1.0 - overlap ** 2) * ancilla[ANCILLA_ZERO]
    return _build_isometry(params, blank, tilted)


def degraded_verify_isometry(params, blank, overlap=1.0):
    return gram_report(degraded_isometry_matrix(params, blank, overlap))
