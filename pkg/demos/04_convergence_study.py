"""A small convergence study for the 1-form Hodge-Laplacian.

Solves the manufactured problem on symmetric meshes at levels 3..6 and
prints the error table.  The guaranteed rate for the derivative errors
is first order; on this mesh family the solution error and de_u run at
second order and the density errors at roughly fourth — the
superconvergence that demos/05_superconvergence_diagnostics.py explains.

The full study (levels up to 8, both families) runs from the CLI:

    declab convergence --k 1 --levels 2..8 --format markdown
"""

from declab import render_report, run_convergence

report = run_convergence(k=1, family="symmetric", levels=[3, 4, 5, 6])
print(render_report(report, "markdown"))

print("CG iterations per level:", [rec.iterations for rec in report.records])

# the same levels on perturbed meshes: the derivative rates fall back
# toward the guaranteed first order while e_rho keeps second order
report = run_convergence(k=1, family="perturbed", levels=[3, 4, 5, 6], seed=1)
print(render_report(report, "markdown"))
