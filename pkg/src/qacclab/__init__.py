"""qacclab: exact-arithmetic laboratory for constant-depth QACC circuits."""

__version__ = "0.1.0"
