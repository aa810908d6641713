"""Kernel backend selection: the compiled extension when importable, else numpy.

Set ``SGPLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

try:
    if os.environ.get("SGPLAB_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    from . import _fallback as _impl
    BACKEND = "python"

mobius_sieve = _impl.mobius_sieve
dirichlet_convolve = _impl.dirichlet_convolve
residue_harmonic_sums = _impl.residue_harmonic_sums
compensated_sum = _impl.compensated_sum

__all__ = ["BACKEND", "mobius_sieve", "dirichlet_convolve",
           "residue_harmonic_sums", "compensated_sum"]
