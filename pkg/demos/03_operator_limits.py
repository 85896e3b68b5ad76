"""Watch the discrete operators converge to their continuum limits on the circle."""
from direm.asymptotics import verify_limit

eps = [0.1, 0.05, 0.025, 0.0125]

print("Laplace-Beltrami from the symmetric operator")
rep = verify_limit("ss_laplacian", "cos", eps_list=eps)
for rec in rep.records():
    print(f"  eps={rec['epsilon']:<7} residual={rec['residual']:.3e}")
print("  slope", round(rep.fitted_slope, 3))

print("advection from the difference of asymmetric and symmetric operators")
rep = verify_limit("aa_minus_ss", "sin", field=0.5, eps_list=eps)
print("  slope", round(rep.fitted_slope, 3))

print("the same difference with no field is zero to rounding")
rep = verify_limit("aa_minus_ss", "cos", field=0.0, eps_list=eps)
print("  residuals", [f"{r:.1e}" for r in rep.residuals])

print("total drift, which mixes field and density gradient, at two alphas")
for alpha in (0.0, 0.5):
    rep = verify_limit("total_drift", "cos", field=0.5, density="cos:0.5", alpha=alpha, eps_list=eps)
    print(f"  alpha={alpha}  slope {rep.fitted_slope:.3f}")

# a fixed grid that is too coarse for the small eps stops converging
rep = verify_limit("ss_laplacian", "cos", eps_list=[0.004, 0.002, 0.001, 0.0005], n_fixed=50)
print("fixed n=50 grid, small eps:", round(rep.fitted_slope, 2), rep.diagnostics)
