"""Exact identities and the pinching constants.

The averaging identities behind the scalar-curvature arguments are linear in R, so
they should hold to round-off on any tensor. The dimension-specific decompositions
are transcribed bracket lists; a residual at round-off level validates the transcription.
"""

from curvlab import (
    check_dim_specific_decomposition,
    check_identity_2_2,
    check_identity_2_3,
    check_scalar_identity,
    eta_n,
    gamma_n,
    random_curvature_tensor,
)
from curvlab.verify import pinching_constant_closes

for n in (4, 5, 6, 7, 8):
    R = random_curvature_tensor(n, seed=n)
    reps = [check_identity_2_2(R), check_identity_2_3(R), check_scalar_identity(R, 0.5)]
    print(f"n={n}: " + ", ".join(f"{r.identity} {r.relative_residual:.1e}" for r in reps))

print()
for n in (5, 6, 7):
    R = random_curvature_tensor(n, seed=100 + n)
    for which in ("YAU_LOWER", "YAU_UPPER"):
        rep = check_dim_specific_decomposition(R, n, which)
        print(f"{rep.identity:<14} residual {rep.relative_residual:.1e}")

print("\n n   gamma_n   eta_n   bracket counts reproduce both")
for n in range(4, 11):
    ok = pinching_constant_closes(n, "YAU_LOWER") and pinching_constant_closes(n, "YAU_UPPER")
    print(f"{n:2d}  {str(gamma_n(n, exact=True)):>7}  {str(eta_n(n, exact=True)):>6}   {ok}")
