"""Grid-refinement studies: derivative stencils and the plate problem."""
from stencilkit.apps import biharmonic_solve, converge_1d, converge_2d

fit = converge_1d()
print("f''' of sin(x)cos(x) at pi:", fit.summary(), "(expect slope 2, C = 4)")

fit = converge_2d()
print("f^(4,3) at (2pi, pi/3):    ", fit.summary(), "(expect slope 4, C = 1/30)")
for h, err in fit.samples:
    print(f"   h={h:<6g} err={err:.3e}")

# Delta^2 u = 4 pi^4 sin(pi x) sin(pi y), simply supported, u = sin sin
fit = biharmonic_solve()
print("plate, l-inf error:        ", fit.summary())
