#!/usr/bin/env python3
"""Regenerate the benchmark graphs shipped under instances/.

The myciel and queen families are defined constructively and are rebuilt
from their definitions. The SGB-derived graphs need Knuth's data:

  * jean     -- character co-appearances of Les Miserables (SGB jean.dat),
                taken from networkx.les_miserables_graph(); the DIMACS file
                has 80 characters, 3 of which never meet anyone, so three
                isolated vertices are appended.
  * milesX   -- the 128 cities of SGB miles.dat, joined when their highway
                distance is at most X miles. Pass the path of
                knuth_miles.txt.gz (shipped in the networkx source
                distribution under examples/drawing/).

Vertex numbering differs from the original DIMACS files; the graphs are
isomorphic to them, which is all the coloring sum depends on.

usage: gen_instances.py OUT_DIR [--miles knuth_miles.txt.gz]
"""

import argparse
import gzip
import itertools
import os
import re


def write_col(path, n, edges, comments):
    edges = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"c {c}\n")
        fh.write(f"p edge {n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"e {u} {v}\n")
    return len(edges)


def mycielski(order):
    # order 2 is K2; each step applies the Mycielski construction
    n, edges = 2, {(1, 2)}
    for _ in range(order - 2):
        nxt = set(edges)
        for u, v in edges:
            nxt.add((u, n + v))
            nxt.add((v, n + u))
        hub = 2 * n + 1
        for i in range(1, n + 1):
            nxt.add((n + i, hub))
        n, edges = hub, nxt
    return n, edges


def queen(rows, cols):
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    edges = set()
    for (a, (r1, c1)), (b, (r2, c2)) in itertools.combinations(enumerate(cells, 1), 2):
        if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
            edges.add((a, b))
    return rows * cols, edges


def jean():
    import networkx as nx
    g = nx.les_miserables_graph()
    names = sorted(g.nodes())
    index = {name: i + 1 for i, name in enumerate(names)}
    edges = {(index[u], index[v]) for u, v in g.edges()}
    return len(names) + 3, edges


def miles_distances(path):
    cities, dist = [], {}
    city, col = None, 0
    with gzip.open(path, "rt") as fh:
        for line in fh:
            if line.startswith("*"):
                continue
            if re.match(r"^\d+", line):
                for d in line.split():
                    dist[(city, cities[col])] = int(d)
                    col += 1
            else:
                col = 1
                city = line.split("[")[0]
                cities.insert(0, city)
    index = {name: i + 1 for i, name in enumerate(sorted(cities))}
    return len(cities), {(index[a], index[b]): d for (a, b), d in dist.items()}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--miles")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    def emit(name, n, edges, comments):
        m = write_col(os.path.join(args.out, name + ".col"), n, edges, comments)
        print(f"{name} {n} {m}")

    for order in range(3, 8):
        n, e = mycielski(order + 1)
        emit(f"myciel{order}", n, e, [f"myciel{order}: Mycielski graph, chromatic number {order + 1}"])
    for r, c in [(5, 5), (6, 6), (7, 7), (8, 8), (9, 9), (8, 12)]:
        n, e = queen(r, c)
        emit(f"queen{r}_{c}", n, e, [f"queen{r}_{c}: queen moves on a {r}x{c} board"])
    n, e = jean()
    emit("jean", n, e, ["jean: Les Miserables co-appearances (SGB jean.dat), 3 isolated characters"])
    if args.miles:
        n, dist = miles_distances(args.miles)
        for limit in (250, 500, 750, 1000, 1500):
            e = [pair for pair, d in dist.items() if d <= limit]
            emit(f"miles{limit}", n, e, [f"miles{limit}: SGB miles.dat cities within {limit} miles"])


if __name__ == "__main__":
    main()
