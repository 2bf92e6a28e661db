#!/usr/bin/env python3
"""Transient analysis of the lumped chain: throughput and reliability.

Solves the quotient CTMC by uniformization over a log-spaced horizon and
prints the production throughput X(t), the reliability R(t) (probability
that the system has not yet died), and the throughput conditioned on
survival, which settles near the long-run rate of a single degraded line
(about 1/200).  With matplotlib available, curves are saved as PNG.
"""

from rwspn import (
    build_generator,
    build_npl_sys,
    default_grid,
    explore,
    measure_series,
    production_rules,
)

rules = production_rules()
series = {}
for n in (1, 2):
    ts = explore(build_npl_sys(n, 2, 2), rules, mode="quotient")
    gen = build_generator(ts)
    series[n] = measure_series(ts, gen, default_grid(30), eps=1e-9, tag="as")
    print(f"N={n}: {len(ts)} states, max exit rate {gen.max_exit_rate:.3f}")

print(f"\n{'t':>9} {'X(1)':>10} {'X(2)':>10} {'R(1)':>8} {'R(2)':>8} {'X/R(2)':>10}")
s1, s2 = series[1], series[2]
for i in range(0, len(s1.times), 3):
    c = s2.conditional[i]
    print(
        f"{s1.times[i]:>9.1f} {s1.throughput[i]:>10.3e} {s2.throughput[i]:>10.3e} "
        f"{s1.reliability[i]:>8.4f} {s2.reliability[i]:>8.4f} "
        f"{'' if c is None else format(c, '>10.3e')}"
    )

tail = [c for c in s2.conditional if c is not None][-1]
print(f"\nconditional throughput settles at {tail:.4e} (single degraded line pace)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(14, 4))
    for n, s in series.items():
        axes[0].loglog(s.times, s.throughput, label=f"N={n}")
        axes[1].semilogx(s.times, s.reliability, label=f"N={n}")
        axes[2].loglog(
            [t for t, c in zip(s.times, s.conditional) if c is not None],
            [c for c in s.conditional if c is not None],
            label=f"N={n}",
        )
    for ax, title in zip(axes, ["throughput", "reliability", "throughput | survival"]):
        ax.set_title(title)
        ax.set_xlabel("t")
        ax.legend()
    fig.tight_layout()
    fig.savefig("measures.png", dpi=120)
    print("wrote measures.png")
except ImportError:
    print("matplotlib not available; skipping the plot")
