"""Kernel backend selection.

The compiled Cython extension is used when present; otherwise the NumPy
implementation.  Set SEAMFORMS_FORCE_PYTHON=1 to force the NumPy backend
(used by the parity tests and the benchmark).
"""

import os

import numpy as np

from . import numpy_backend as _np_backend

_force = os.environ.get("SEAMFORMS_FORCE_PYTHON", "").strip().lower()
if _force in {"1", "true", "yes", "on"}:
    _impl = _np_backend
    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _np_backend
        BACKEND = "numpy"


def _flat(args):
    bc = np.broadcast_arrays(*[np.asarray(a, dtype=np.float64) for a in args])
    shape = bc[0].shape
    return [np.ascontiguousarray(a).ravel() for a in bc], shape


def tri_angles(l01, l12, l20):
    """Corner angles (a0, a1, a2) of a triangle with sides l01, l12, l20."""
    flat, shape = _flat((l01, l12, l20))
    out = _impl.tri_angles(*flat)
    return tuple(np.asarray(o).reshape(shape) for o in out)


def tet_angles(r0, r1, r2, l01, l12, l20):
    """Dihedral angles and validity margin of the apex tetrahedron.

    See seamforms._kernels.numpy_backend.tet_angles for the contract.
    """
    flat, shape = _flat((r0, r1, r2, l01, l12, l20))
    out = _impl.tet_angles(*flat)
    return tuple(np.asarray(o).reshape(shape) for o in out)
