"""Coset digraphs of small permutation groups and the clone-expansion check."""

from hatdigraph.experiments import cayley_witnesses
from hatdigraph.groups import cayley_coset_graph, clone_expansion_check

for w in cayley_witnesses():
    C = cayley_coset_graph(w["group"], w["smaller"], w["A"])
    v = clone_expansion_check(w["group"], w["sub"], w["smaller"], w["A"])
    print(f"{w['name']}: {C.graph.n} cosets, {C.graph.num_arcs} arcs, clone blocks of size {v.k}, passed: {v.passed}")
