"""Library-wide numerical tolerances.

These are constants on purpose: there is no environment or runtime override.
"""

# row sums of a conditional distribution, no-signaling marginals
NORMALIZATION_TOLERANCE = 1e-12

# a unilateral deviation gaining at most this much is not a deviation
GAIN_TOLERANCE = 1e-9

# simplex pivoting, feasibility and optimality
LP_TOLERANCE = 1e-9

# eigenvalues of measurement effects and the POVM parameter chain
POSITIVITY_TOLERANCE = 1e-10

HERMITIAN_TOLERANCE = 1e-12

# ties when reporting the maximizing no-signaling vertices
VERTEX_TOLERANCE = 1e-12

# classical payoff-sum bound
BOUND_TOLERANCE = 1e-10

# analytic versus numerical best response
ORACLE_TOLERANCE = 1e-6
