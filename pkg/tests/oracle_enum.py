"""Brute-force graph enumeration used only as a test oracle.

Unlabeled tree shapes come from networkx; every genus/weight labeling is
tried, filtered by a direct stability check, and deduplicated by labeled
tree isomorphism. Nothing here imports the package under test.
"""
from itertools import combinations, combinations_with_replacement

import networkx as nx
from networkx.algorithms.isomorphism import categorical_node_match


def _compositions(total, parts):
    # weakly ordered compositions of total into `parts` nonnegative parts
    for bars in combinations_with_replacement(range(total + 1), parts - 1):
        prev = 0
        out = []
        for b in bars:
            out.append(b - prev)
            prev = b
        out.append(total - prev)
        yield tuple(out)


def _genus_labelings(n):
    for v in range(n):
        yield tuple(2 if i == v else 0 for i in range(n))
    for u, v in combinations(range(n), 2):
        yield tuple(1 if i in (u, v) else 0 for i in range(n))


def _shapes(n):
    if n == 1:
        g = nx.Graph()
        g.add_node(0)
        return [g]
    return list(nx.nonisomorphic_trees(n))


def _valid(tree, genus, weight):
    for v in tree.nodes:
        if genus[v] == 0 and weight[v] == 0 and tree.degree(v) < 3:
            return False
    ones = [v for v in tree.nodes if genus[v] == 1]
    if ones:
        path = nx.shortest_path(tree, ones[0], ones[1])
        if any(genus[v] != 0 for v in path[1:-1]):
            return False
    return True


def oracle_graphs(d):
    """All valid weighted genus-2 trees of total weight d, one per iso class."""
    found = []
    match = categorical_node_match("label", None)
    for n in range(1, 2 * d + 4):
        for shape in _shapes(n):
            nodes = sorted(shape.nodes)
            for genus in _genus_labelings(n):
                for weight in _compositions(d, n):
                    gmap = dict(zip(nodes, genus))
                    wmap = dict(zip(nodes, weight))
                    if not _valid(shape, gmap, wmap):
                        continue
                    h = nx.Graph()
                    for v in nodes:
                        h.add_node(v, label=(gmap[v], wmap[v]))
                    h.add_edges_from(shape.edges)
                    if not any(nx.is_isomorphic(h, k, node_match=match) for k in found
                               if k.number_of_nodes() == n):
                        found.append(h)
    return found


if __name__ == "__main__":
    for d in range(4):
        print(d, len(oracle_graphs(d)))
