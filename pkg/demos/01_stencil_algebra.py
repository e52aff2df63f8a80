"""Building stencils by composition instead of deriving them by hand."""
from fractions import Fraction

from stencilkit import compose, make, outer_product, Stencil
from stencilkit.stencil import to_json

# The centered first derivative, weights exact: (f(x+h) - f(x-h)) / 2h
d1 = make(p=1, q=2)
print("f'  :", d1)

# Applying it twice gives a second derivative on a stride-2 lattice
print("f' o f' :", compose(d1, d1))

# The compact one, from the same moment equations
d2 = make(p=2, q=2)
print("f'' :", d2)

# Composition is just "offsets add, weights multiply", so order doesn't matter
d3 = compose(d1, d2)
assert d3 == compose(d2, d1)
print("f''' = f' o f'':", d3)

# Stencils on different axes combine by outer product: this one is d^2/dx dy
dxy = outer_product(d1, d1)
print("d2/dxdy:", dxy)

# Hand-written stencils take any weights Fraction accepts.  Smoothing the
# compact f'' with a 1-2-1 average reproduces f' o f' exactly
avg = Stencil({-1: Fraction(1, 4), 0: Fraction(1, 2), 1: Fraction(1, 4)})
print("smoothed f'':", compose(avg, d2), compose(avg, d2) == compose(d1, d1))

# JSON is the interchange format used by the command line tool
print(to_json(d3))
