"""bruhatlab: exact-arithmetic workbench for principal series modules of SL_n
over finite field towers, with a census toolkit for maps between levels."""

__version__ = "0.1.0"
