"""Working-precision plumbing shared by the numeric evaluators.

Precision is measured in bits of significand.  The default is 64 bits and can
be overridden globally through the ASAILAB_PRECISION environment variable or
per call via the ``prec`` keyword that the evaluators accept.
"""

import os
from contextlib import contextmanager

import mpmath

DEFAULT_PRECISION = 64
GUARD_BITS = 16


def working_precision(prec=None):
    """Resolve the effective precision in bits."""
    if prec is not None:
        return int(prec)
    env = os.environ.get("ASAILAB_PRECISION")
    if env:
        try:
            return max(24, int(env))
        except ValueError:
            pass
    return DEFAULT_PRECISION


@contextmanager
def mp_context(prec=None):
    """mpmath context at the resolved precision plus guard bits."""
    bits = working_precision(prec) + GUARD_BITS
    with mpmath.workprec(bits):
        yield mpmath.mp
