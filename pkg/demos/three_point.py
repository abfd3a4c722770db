"""Walk through the three-point inequality on a convex and a non-convex function."""

import math

from convexcert import Interval, parse_function
from convexcert.convexity import Triple, certify_convex, find_violation_witness, three_point_gap


def main():
    I = Interval.closed(-2, 2)
    f = parse_function("x^2", I)
    t = Triple(0.5, 1.0, -0.5)  # c below both a and b, so d = a + b - c = 2.0 lies above them
    print(f"x^2 at (a, b, c) = {t.as_tuple()}: d = {t.d}, class {t.classification.name}")
    print(f"  gap (f(c) + f(d)) - (f(a) + f(b)) = {three_point_gap(f, t):.6g}")

    cert = certify_convex(f, I, n_grid=41)
    print(f"grid certificate on {I}: {cert.summary()}")

    J = Interval.closed(0, 2 * math.pi)
    g = parse_function("sin(x)", J)
    w = find_violation_witness(g, J, budget=10_000, seed=0)
    print(f"sin on [0, 2pi]: witness {w.triple.as_tuple()} with gap {w.gap:.6g}")


if __name__ == "__main__":
    main()
