"""Riesz and Cesaro means of Fourier-Laplace series on the sphere S^N.

Submodules
----------
geometry       points, distances and zonal quadrature on S^N
spectral       eigenvalues, multiplicities, Gegenbauer polynomials, zonal kernels
kernels        Riesz/Cesaro summation kernels, majorants, slope fitting
zonal          means of zonal functions and the test-profile library
interpolation  Riesz means of step functions and the interpolation checker
maximal        Hardy-Littlewood and maximal Riesz operators
"""

__version__ = "0.1.0"
