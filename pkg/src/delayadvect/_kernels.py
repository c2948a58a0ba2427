"""Kernel backend selection.

The compiled Cython extension is used when it imports; otherwise the numpy
implementations in ``_pykernels`` are used.  ``BACKEND`` names the choice.
"""

from __future__ import annotations

try:
    from ._ckernels import dexp_eval, dexp_eval_multi, l1_caputo, series_sum

    BACKEND = "cython"
except ImportError:  # pragma: no cover - exercised only without a compiler
    from ._pykernels import dexp_eval, dexp_eval_multi, l1_caputo, series_sum

    BACKEND = "python"

__all__ = ["BACKEND", "dexp_eval", "dexp_eval_multi", "l1_caputo", "series_sum"]
