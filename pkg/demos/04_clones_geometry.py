"""Clone classes in the flag product of PG(3,2), compared with the hexagon product."""

import numpy as np

from hatdigraph import clone_classes, hexagon_template, incidence_template, pg_subspaces, template_product, window

for d in (1, 2, 3):
    print(f"PG(3,2) subspaces of dimension {d}: {len(pg_subspaces(3, 2, d))}")

for name, T in [("PG(3,2)", incidence_template(3, 2)), ("hexagon", hexagon_template())]:
    cr = clone_classes(window(template_product(T), 0, 2))
    size = int(np.prod(T.levels))
    print(f"{name}: levels {list(T.levels)}, c+={cr.c_plus}, c-={cr.c_minus}, product {cr.c_plus * cr.c_minus} vs level size {size}")
