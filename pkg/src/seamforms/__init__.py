"""seamforms: glued planar pieces, intrinsic cone metrics, convex
reconstruction, and structure analysis of the resulting bodies."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
