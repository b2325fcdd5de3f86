"""
Log-domain versus barrier updates
=================================

The primal and dual barrier methods use the same Newton direction d as the
log-domain method but apply it through a first-order approximation of the
exponential.  For small d the three updates agree; for large d they do not.
"""

import numpy as np

from logqp import GeneratorSpec, NumericalFailure, center, generate_random_qp, newton_direction
from logqp.solvers import dual_barrier_step, primal_barrier_step

qp = generate_random_qp(GeneratorSpec(n=10, m=20, r=3, seed=4))
mu = 0.5
v_hat = center(qp, np.zeros(qp.m), mu)
rng = np.random.default_rng(0)

for scale in (1e-3, 1e-2, 1e-1, 0.5):
    v = v_hat + scale * rng.standard_normal(qp.m)
    d = newton_direction(qp, v, mu).d
    log_step = v + d
    line = f"|v - v_hat|={scale:6.0e}  |d|inf={np.abs(d).max():8.2e}"
    try:
        primal = primal_barrier_step(v, d, alpha=1.0)
        dual = dual_barrier_step(v, d, alpha=1.0)
    except NumericalFailure as exc:
        # a full barrier step with |d|inf > 1 leaves the positive orthant
        print(line, " barrier step undefined:", exc)
        continue
    print(line, f" primal diff={np.abs(primal - log_step).max():8.2e}"
          f"  dual diff={np.abs(dual - log_step).max():8.2e}")
