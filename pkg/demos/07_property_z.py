"""Height functions: windows of periodic digraphs level consistently, tree edge digraphs do not."""

from hatdigraph import mckay_praeger, property_z_check, tensor_z_kbar, tree_edge_graph, window

cases = {
    "tensor(3)": window(tensor_z_kbar(3), 0, 4),
    "mckay(2,3)": window(mckay_praeger(2, 3), 0, 4),
    "tree(3,4)": tree_edge_graph(3, 4, 4).graph,
}
for name, G in cases.items():
    lev = property_z_check(G)
    print(f"{name}: " + ("consistent" if lev.consistent else f"conflict along a {len(lev.walk)}-step walk"))
