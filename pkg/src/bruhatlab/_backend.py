"""Kernel backend selection.

Imports the compiled extension when present, falling back to the pure-Python
implementation.  Override with BRUHATLAB_KERNELS=py or =cy (the latter raises
if the extension is missing, so CI can pin the compiled path).
"""

from __future__ import annotations

import os

_choice = os.environ.get("BRUHATLAB_KERNELS", "").strip().lower()

if _choice == "py":
    from . import _kernels_py as kernels
elif _choice == "cy":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND

echelon_reduce = kernels.echelon_reduce
echelon_insert = kernels.echelon_insert
mat_mul_codes = kernels.mat_mul_codes
mat_is_upper = kernels.mat_is_upper
scan_conj_upper = kernels.scan_conj_upper
