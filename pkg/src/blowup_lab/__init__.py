"""Computer-assisted checks for self-similar blowup of the focusing wave equation u_tt - Δu = u^2.

Modules:

- ``exact``, ``ratfunc``: rational polynomials, Routh-Hurwitz and Sturm tools, positivity certificates
- ``profiles``: closed-form blowup profiles, Lorentz boosts, unstable eigenfunctions
- ``series``: Frobenius recurrences, quasi-solutions, ratio-bound certificates
- ``scan``: connection-problem eigenvalue scans and the constant-profile spectrum
- ``resolvent``: per-mode resolvent solves and multiplicity witnesses
- ``norms``: exact adapted inner products and the dissipativity gap
- ``evolve``: radial method-of-lines evolution, mode projection and tuning
- ``checks``, ``cli``: named checks, suites and the ``blowup-lab`` command
"""

__version__ = "0.1.0"
