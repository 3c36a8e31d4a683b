"""Edge-list export: a JSON header line, then one "u v" line per undirected edge."""

from __future__ import annotations

import json

import numpy as np

from .cayley import CayleyGraph


def header(G: CayleyGraph) -> dict:
    return {
        "q": G.q,
        "g": str(G.g),
        "nu": G.group.F.format(G.nu),
        "nu_code": int(G.nu),
        "n_vertices": G.n,
        "generators": [str(m) for m in G.gens],
    }


def edges(G: CayleyGraph) -> np.ndarray:
    """Undirected edges (u < v), each once, sorted."""
    u = np.repeat(np.arange(G.n), G.degree)
    v = G.adj.reshape(-1).astype(np.int64)
    keep = u < v
    e = np.stack([u[keep], v[keep]], axis=1)
    return np.unique(e, axis=0)


def write_edge_list(G: CayleyGraph, path) -> int:
    e = edges(G)
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header(G)) + "\n")
        for a, b in e:
            fh.write(f"{a} {b}\n")
    return int(e.shape[0])


def read_edge_list(path) -> tuple[dict, np.ndarray]:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise ValueError("missing JSON header line")
        meta = json.loads(first[2:])
        rows = [tuple(map(int, line.split())) for line in fh if line.strip()]
    return meta, np.array(rows, dtype=np.int64).reshape(-1, 2)
