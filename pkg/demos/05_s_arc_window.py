"""Orbits of automorphisms on s-arcs that start in the core of a window."""

from hatdigraph import complete_template, s_arc_transitivity_report, template_product, tensor_z_kbar, window

for name, P in [("tensor(2)", tensor_z_kbar(2)), ("complete(2,2,2)", template_product(complete_template((2, 2, 2))))]:
    W = window(P, 0, 5)
    for s in (1, 2, 3):
        r = s_arc_transitivity_report(W, s)
        print(f"{name} s={s}: {r.verdict}, {r.orbit_count} orbit(s)")
