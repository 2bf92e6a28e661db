#!/usr/bin/env python3
"""Ordinary vs quotient state spaces of the degrading production system.

The quotient folds states that differ only by component permutations, so it
grows far slower with the number of replicas while preserving reachability:
the two absorbing states (one degraded line left, all material unprocessed
or one item mid-process) appear at every size.
"""

import time

from rwspn import absorbing_predicate, build_npl_sys, explore, production_rules

rules = production_rules()

print(f"{'N':>2} {'ordinary':>12} {'quotient':>12} {'final':>6} {'time':>8}")
for n in (1, 2, 3):
    t0 = time.perf_counter()
    ordinary = explore(build_npl_sys(n, 2, 2), rules, mode="ordinary")
    quotient = explore(build_npl_sys(n, 2, 2), rules, mode="quotient")
    dt = time.perf_counter() - t0
    print(
        f"{n:>2} {len(ordinary):>8} ({len(ordinary.final_states())}) "
        f"{len(quotient):>8} ({len(quotient.final_states())}) "
        f"{dt:>10.1f}s"
    )

print("\nabsorbing states of the three-replica system:")
ts = explore(build_npl_sys(3, 2, 2), rules, mode="quotient")
for i in ts.search_final(absorbing_predicate(2)):
    print(f"  state {i}: {ts.states[i].marking.render()}")
