"""Exact invariant theory of finite complex reflection groups.

Subpackages build on each other roughly bottom-up:

    scalars        cyclotomic field arithmetic, polynomials, series
    linalg         exact row reduction, kernels, solving
    mpoly          sparse multivariate polynomials and group actions
    rootdata       crystallographic root systems for the counting layer
    groups         matrix groups, reflections, hyperplanes, catalog
    harmonics      invariants, Molien series, harmonic spaces
    factorisation  tensor factorisation of harmonics along a subgroup
    characters     exact character tables and graded characters
    weyl           rational point counts for twisted flag quotients
    cli            command line front end
"""

__version__ = "0.1.0"
