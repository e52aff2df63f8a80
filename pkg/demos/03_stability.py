"""Forward-Euler step limits for composed diffusion-like operators."""
from fractions import Fraction

import numpy as np

from stencilkit import builtin, max_stable_dt, symbol

# df/dt = +f'' and df/dt = -f'''' are the dissipative directions
cases = [("dxx", +1), ("dx-dx", +1), ("dxxxx", -1), ("dxx-dxx", -1), ("dx-dx-dxx", -1)]
for name, sign in cases:
    s = builtin(name)
    guess = [Fraction(1, 8), Fraction(27, 32), Fraction(1, 2), Fraction(2)]
    r = max_stable_dt(s, sign, candidates=guess)
    print(f"{name:10s} dt <= {r.alpha:.6f} h^{r.m}  exact {r.alpha_exact}  support {r.support}")

# The wide f'''' built from first derivatives allows 6.75x larger steps:
# its symbol 2(c-1)^2(c+1), c = cos(theta), peaks inside (0, pi) not at pi
theta = np.linspace(0, np.pi, 7)
print(np.round(symbol(builtin("dx-dx-dxx"), theta).real, 4))
