"""Edge digraph of a biregular tree: universal reachability, and no height function.

The tree has A-vertices of degree a and B-vertices of degree b. Each tree edge
becomes a vertex, with an arc e1 -> e2 whenever some third edge runs from an
endpoint of e1 to an endpoint of e2.
"""

from hatdigraph import property_z_check, tree_edge_graph, universality_certificate
from hatdigraph.symmetry import walk_displacement

a, b, R = 3, 3, 5
G = tree_edge_graph(a, b, R).graph
core = G.core_vertices
print(f"T({a},{b}) truncated at radius {R}: {G.n} vertices, {G.num_arcs} arcs, {len(core)} in the core")
print("core in/out degrees:", sorted(set(G.in_degree[core].tolist())), sorted(set(G.out_degree[core].tolist())))

cert = universality_certificate(G)
print("reachability on the core:", cert.kind)

lev = property_z_check(G)
print("consistent leveling:", lev.consistent)
if not lev.consistent:
    print(f"closed walk of {len(lev.walk)} steps with net displacement {walk_displacement(G, lev.walk)}")
