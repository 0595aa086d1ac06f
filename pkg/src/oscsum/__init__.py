"""Numerical toolkit for Bessel kernels, Hankel transforms, oscillatory
integrals, exponential sums, Voronoi summation, and the hybrid large sieve.

Subpackage map:

- ``specialfn``    gamma, Bessel J/I/K with complex order, Airy pair,
                   uniform large-order Bessel asymptotics
- ``archkernels``  rank-two and rank-three integral kernels and the Hankel
                   transforms they induce
- ``trh``          trigonometric-hyperbolic phase functions and their
                   closed-form derivatives
- ``besselint``    spectrally weighted Bessel integrals, test functions,
                   approximate-functional-equation weights
- ``oscillatory``  stationary-phase checks, decay probes, model oscillatory
                   integrals, Mellin pair lemmas
- ``arithq``       multiplicative functions, Kloosterman/Gauss/exponential
                   sums over the rationals
- ``voronoi``      rank-three Voronoi summation verification
- ``largesieve``   hybrid (archimedean x multiplicative) large sieve
- ``cli``          the ``oscsum`` command line verifier
"""

__version__ = "0.1.0"
