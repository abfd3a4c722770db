"""Exact arithmetic tour of a midconvex function that is not convex."""

from convexcert.hamel import violation_demo


def main():
    demo = violation_demo()
    lo, hi = demo.enclosure
    print(f"midpoint inequality checked on {demo.scan_pairs} lattice pairs: {demo.scan_failures} failures")
    print(f"three-point difference (1, sqrt2, sqrt3, sqrt6 coordinates): {tuple(str(v) for v in demo.difference.coords)}")
    print(f"difference = {demo.difference}")
    print(f"certified sign {demo.sign:+d}, enclosure width {float(hi - lo):.3g}")
    print(f"decimal value {demo.decimal[:20]}")
    print(f"outer inequality violated: {demo.inequality_violated}")


if __name__ == "__main__":
    main()
