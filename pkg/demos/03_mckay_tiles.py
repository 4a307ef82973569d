"""McKay-Praeger digraphs: the tile splits into copies of K_{s,s}."""

from hatdigraph import mckay_praeger, r_digraph, tile, underlying_components

for s, n in [(2, 2), (2, 3), (3, 3)]:
    B = tile(mckay_praeger(s, n))
    comps = underlying_components(B)
    rr = r_digraph(B)
    sizes = sorted({len(c) for c in comps})
    print(f"s={s} n={n}: {len(comps)} components of size {sizes}, {rr.num_classes} reachability classes, "
          f"all isomorphic: {rr.all_isomorphic}")
