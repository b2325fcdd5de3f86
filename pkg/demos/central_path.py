"""
Following the central path of a one-dimensional QP
==================================================

minimize x^2 / 2 - 2x  subject to  x >= 0  has a closed-form central path.
We compare it with centered points computed by damped Newton steps.
"""

import numpy as np

from logqp import analytic_instance, center, divergence

qp, path = analytic_instance("shifted")

v = np.zeros(1)
for mu in np.logspace(1, -4, 6):
    # warm start from the previous centered point
    v = center(qp, v, mu)
    print(f"mu={mu:8.1e}  v={v[0]: .8f}  exact={path.v(mu)[0]: .8f}  "
          f"x={path.x(mu):.6f}")

# the divergence to the exact path is tiny, and it is zero only on the path
print("h(v, v_hat):", divergence(path.v(1e-4), v))
print("optimal value:", path.optimal_value, "at x =", path.argmin)
