"""Rebuild contact-high-school.txt from the SocioPatterns 2013 contact log.

Usage: python derive_contact_high_school.py High-School_data_2013.csv > contact-high-school.txt

Each line of the log is `time i j class_i class_j` for one 20-second
interval. Every maximal clique of at least three people in the contact graph
of an interval becomes a hyperedge. Repeated hyperedges are kept once; the output lists
them in ascending numeric order, with vertices sorted within each line.
"""

import sys
from collections import defaultdict

import networkx as nx


def main(path):
    contacts = defaultdict(list)
    with open(path) as f:
        for line in f:
            t, i, j = line.split()[:3]
            contacts[int(t)].append((int(i), int(j)))
    edges = set()
    for pairs in contacts.values():
        for clique in nx.find_cliques(nx.Graph(pairs)):
            if len(clique) >= 3:
                edges.add(tuple(sorted(clique)))
    sys.stdout.write("".join(",".join(map(str, e)) + "\n" for e in sorted(edges)))


if __name__ == "__main__":
    main(sys.argv[1])
