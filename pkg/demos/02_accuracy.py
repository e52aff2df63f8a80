"""Reading off derivative order and accuracy from Taylor tables."""
from stencilkit import analyze, compose, make, retarget, min_accuracy_check
from stencilkit.taylor import format_series

d1, d2 = make(p=1, q=2), make(p=2, q=2)

rep = analyze(d2)
print("compact f'':", format_series(rep.table, 5))
print("  accuracy", rep.accuracy, "leading error", rep.leading_errors)

# Wider but no more accurate: the error constant is 4x larger
rep = analyze(compose(d1, d1))
print("f' o f'   :", format_series(rep.table, 5))

# Forward differences compose into a first-order f'''
fwd = compose(make(p=1, q=1, style="forward"), make(p=2, q=1, style="forward"))
print("forward   :", fwd, format_series(analyze(fwd).table, 3))

# Mixing a 4th- and a 2nd-order f' keeps 2nd order; the leading error is
# the sum of the parts' leading errors at that order (0 + 1/6 here)
chk = min_accuracy_check(make(p=1, q=4), d1)
print(f"q = min({chk.q_a}, {chk.q_b}) = {chk.q_c}, predicted {chk.predicted}")

# A forward and a backward first derivative cancel each other's errors
chk = min_accuracy_check(make(p=1, q=1, style="forward"), make(p=1, q=1, style="backward"))
print(f"forward o backward: q_a={chk.q_a} q_b={chk.q_b} -> q={chk.q_c}")

# Moving f'' one cell away costs an order of accuracy
print("f'' evaluated at x+h:", format_series(retarget(analyze(d2).table, 1), 4))
