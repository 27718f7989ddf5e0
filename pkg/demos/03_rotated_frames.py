"""Why the main condition forces positive isotropic curvature.

For any frame F, the quantity Q = 4 a_sum - 2 b_sum summed over F and two rotated
frames equals nine times the isotropic quantity of F. Each Q is at least four times
the minimum of a_sum - b_sum/2, so the isotropic minimum is at least 4/3 of it.
"""

from curvlab import (
    FrameFunctional,
    SearchConfig,
    a_sum,
    b_sum,
    extremize,
    isotropic_quantity,
    random_curvature_tensor,
    random_frame,
    rotate_frame_double_prime,
    rotate_frame_prime,
)
from curvlab.verify import harness_tensor


def Q(R, F):
    return 4 * a_sum(R, F) - 2 * b_sum(R, F)


R = random_curvature_tensor(6, seed=3)
F = random_frame(6, 4, seed=4)
lhs = Q(R, F) + Q(R, rotate_frame_prime(F)) + Q(R, rotate_frame_double_prime(F))
print(f"Q(F) + Q(F') + Q(F'') = {lhs:.12f}")
print(f"9 * isotropic(F)      = {9 * isotropic_quantity(R, F):.12f}")

cfg = SearchConfig(restarts=32, seed=2)
print(f"\n{'tensor':<22} {'min cond':>10} {'min iso':>10} {'4/3 cond':>10}")
tensors = [("random n=6", R)] + [(f"perturbed sphere #{i}", harness_tensor(11, i)[0]) for i in range(4)]
for name, T in tensors:
    c = extremize(T, FrameFunctional.condition(0.5), cfg).value
    iso = extremize(T, FrameFunctional.isotropic(), cfg).value
    print(f"{name:<22} {c:10.5f} {iso:10.5f} {4 * c / 3:10.5f}")
