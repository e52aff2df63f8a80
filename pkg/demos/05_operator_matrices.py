"""Assembled operators: sparsity and spectra of the 2D (bi-)Laplacian."""
from stencilkit import GridSpec, assemble, builtin, periodic_spectrum, power_iteration, sparsity_report

lap, bilap = builtin("laplacian-2d"), builtin("bilaplacian-2d")

# Fixed physical domain [0, 200]^2 with dt = h/4
for h in (8, 4, 2, 1, 0.5):
    n = int(200 / h)
    g = GridSpec.periodic(n, h, 2)
    spec = periodic_spectrum(bilap, g)
    step = spec.shifted(h / 4)
    print(
        f"h={h:<4g} N={g.size:<7d} rho(B)={spec.spectral_radius:<10.6g} "
        f"cond(I+dtB)={step.condition_estimate:<9.6g} "
        f"nnz L={sparsity_report(assemble(lap, g)).nnz} B={sparsity_report(assemble(bilap, g)).nnz}"
    )

# Power iteration agrees with the Fourier formula
g = GridSpec.periodic(50, 4.0, 2)
print("power iteration:", power_iteration(assemble(bilap, g)), "exact:", periodic_spectrum(bilap, g).spectral_radius)
