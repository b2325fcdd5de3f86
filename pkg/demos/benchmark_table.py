"""
Iteration counts on random QPs
==============================

Reproduce the n = 100 iteration table: mean Newton iterations of the
long-step method and of the primal and dual barrier methods, paired on
the same 30 instances per row.
"""

from logqp.cli import format_rows, run_bench

rows = []
for m, rank in [(200, 0), (200, 50), (200, 100), (100, 50), (150, 50)]:
    rows += run_bench(n=100, m=m, rank=rank, instances=30, seed=0)

print(format_rows(rows, "md"))
