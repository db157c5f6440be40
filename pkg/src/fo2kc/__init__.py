"""fo2kc: compile groundings of two-variable logic sentences into d-DNNF
circuits and OBDDs, with exact counting, enumeration and conditioning."""

__version__ = "0.1.0"
