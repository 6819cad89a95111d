"""Screen candidate phi functions for metric degeneracy.

Two whole families produce singular metric tensors at every point:

    phi = f(r^2) * s
    phi = f1(r^2) * s + f2(r^2) * sqrt(r^2 - s^2)

The first kills the t = phi - s*phi_s factor of det(g) (type A), the second
kills the D = t + (r^2 - s^2)*phi_ss factor (type B). Anything that avoids
both factors vanishing is usable as a metric.
"""

from finslerlab import (
    canonical_point,
    degeneracy_classify,
    eval_jet,
    metric_pack,
    parse,
)

CANDIDATES = [
    "3*s",
    "(1 + 0.5*r^2)*s",
    "2*s + 0.5*sqrt(r^2 - s^2)",
    "(1 + r^2)*s + 0.8*r^2*sqrt(r^2 - s^2)",
    "1 + 0.3*s",
    "sqrt(1 + s^2)",
]


def main():
    # s kept positive so every candidate phi is positive on the grid
    grid = [
        canonical_point(3, r, frac * r, 1.0)
        for r in (0.7, 1.0, 1.3)
        for frac in (0.2, 0.4, 0.6)
    ]
    for text in CANDIDATES:
        e = parse(text)
        verdict = degeneracy_classify(e, grid)
        dets = [
            abs(metric_pack(eval_jet(e, p.r, p.s), p).det_direct) for p in grid
        ]
        print(f"{text:45s} {verdict.value:16s} max |det g| = {max(dets):.2e}")


if __name__ == "__main__":
    main()
