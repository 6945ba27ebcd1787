"""Tour of the core geometry: product orders on orthants and the step split.

Points of an orthant are ordered coordinatewise, with the direction
reversed on negative axes so that "later" always means farther from the
origin.  Every pair has a common upper bound, which is what makes the
orthant a directed set and gives the limit machinery something to
converge along.  The q*t + r split is the workhorse behind the upper
bounds: any large coordinate is an integer number of t-steps plus a
remainder trapped in [t, 2t).
"""

from fekete_lab import (
    GridSchedule,
    Orthant,
    Point,
    directed_upper_bound,
    orthant_reflect,
    product_leq,
    qr_decompose,
)

main = Orthant.from_string("00")
second = Orthant.from_string("10")  # negative first axis, order reversed there

print("== product order ==")
print("(1,2) <= (1,3) in the main quadrant:", product_leq((1, 2), (1, 3), main))
print("(1,2) <= (2,1)?", product_leq((1, 2), (2, 1), main), "(incomparable)")
print("(-1,2) <= (-3,5) in the second quadrant:",
      product_leq((-1, 2), (-3, 5), second),
      "(axis 1 runs toward -inf)")

print()
print("== directedness: every pair has an upper bound ==")
x, y = (-1.0, 5.0), (-3.0, 2.0)
z = directed_upper_bound(x, y, second)
print(f"upper bound of {x} and {y}: {tuple(z)}")

print()
print("== reflection onto the main orthant ==")
p = (-2.0, 3.0)
q = orthant_reflect(p, second)
print(f"{p} reflects to {tuple(q)}; reflecting twice returns the original:",
      tuple(orthant_reflect(tuple(c * second.sign(i) for i, c in enumerate(q)), second)))

print()
print("== the q*t + r step decomposition ==")
for x_val, t_val in ((7.0, 2.0), (4.0, 2.0), (100.0, 3.0)):
    d = qr_decompose(x_val, t_val)
    print(f"x={x_val}: q={d.q}, r={d.r:.4f}  (check: {d.q}*{t_val} + {d.r:.4f} "
          f"= {d.reconstruct():.4f}, r in [{t_val}, {2 * t_val}))")

print()
print("== geometric schedules ==")
sched = GridSchedule(base=Point((1.0, 1.0)), growth=2.0, levels=8)
print("axis 0 samples:", sched.axis_values(0))
print("integer mode:  ", sched.axis_values(0, integer=True))
print("q/x approaches 1/t along the ladder:")
t_val = 3.0
for k in (4, 8, 16):
    x_val = t_val * 2.0 ** k
    d = qr_decompose(x_val, t_val)
    print(f"  x = t*2^{k:<2}  q/x = {d.q / x_val:.10f}   1/t = {1 / t_val:.10f}")
