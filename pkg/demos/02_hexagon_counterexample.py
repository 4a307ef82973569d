"""A connected tile whose reachability digraph is bipartite but not complete bipartite."""

from hatdigraph import hexagon_template, is_complete_bipartite, r_digraph, reach_partition, template_product, tile, underlying_components, window

P = template_product(hexagon_template())
B = tile(P)
print(f"{P.m} vertices per level, tile components: {len(underlying_components(B))}")

W = window(P, 0, 4)
print("reachability classes over 4 tiles:", reach_partition(W, witnesses_per_class=0).num_classes)

R = r_digraph(B).graph
v = is_complete_bipartite(R)
u, w = v.missing
print(f"R: {len(v.sources)} sources, {len(v.sinks)} sinks, out-degree {sorted(set(R.out_degree[R.out_degree > 0].tolist()))}")
print(f"complete bipartite: {v.complete}; missing arc {R.labels[u]} -> {R.labels[w]}")
