"""Bulk cipher kernels with numba and numpy implementations."""
