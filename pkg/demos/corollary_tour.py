"""Sample every named inequality and show which ones actually hold on their stated domains."""

from convexcert.corollaries import run_suite


def main():
    report = run_suite(seed=0, samples_per_corollary=5000)
    print(f"{'entry':22s} {'stated':>6s} {'violations':>10s} {'min gap':>12s}")
    for e in report.entries.values():
        print(f"{e.name:22s} {str(e.stated_domain):>6s} {e.violation_count:10d} {e.min_gap:12.4g}")
        if e.violations:
            inputs, gap = e.violations[0]
            print(f"{'':22s} first failure at {tuple(round(v, 4) for v in inputs)} (gap {gap:.4g})")


if __name__ == "__main__":
    main()
