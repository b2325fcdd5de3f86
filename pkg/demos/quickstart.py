"""
Solving a small QP in the log domain
====================================

Build a random instance, solve it with the long-step method and look at the
certificate that comes back.
"""

import numpy as np

from logqp import GeneratorSpec, SolverConfig, generate_random_qp, solve

qp = generate_random_qp(GeneratorSpec(n=20, m=40, r=5, seed=1))
print("variables:", qp.n, "constraints:", qp.m)

# v0 = 0 and mu0 from the least-squares rule are the defaults
report = solve(qp, cfg=SolverConfig(mu_f=1e-6))
print("status:", report.status.value, "in", report.newton_steps, "iterations")

# the recovered point is primal feasible and the gap bounds suboptimality
slack = qp.A @ report.x + qp.b
print("min slack:", slack.min())
print("gap <s, lam>:", report.s @ report.lam)
print("objective:", qp.objective(report.x))

# each trace entry is (mu, |d|_inf, gap) before the update
for mu, dinf, gap in report.trace:
    print(f"  mu={mu:10.3e}  |d|inf={dinf:8.3f}  gap={gap:10.3e}")

# the final gap is at most mu_f * m, the bound a Solved report guarantees
print("mu_f * m:", report.final_mu * qp.m)
