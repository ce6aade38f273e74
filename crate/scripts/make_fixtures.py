#!/usr/bin/env python3
"""Regenerate the synthetic benchmark fixtures under crates/core/tests/fixtures.

uf150-style: uniform random 3-SAT, 150 variables, 645 clauses, three distinct
variables per clause, kept only if satisfiable (needs `pip install pycosat`).

scp4x-style: 200 rows x 1000 columns, 2% density, integer costs in [1, 100],
every column covers at least one row and every row is covered by at least
two columns.
"""
import random
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def uf150(seed):
    import pycosat

    rng = random.Random(seed)
    while True:
        clauses = []
        for _ in range(645):
            vs = rng.sample(range(1, 151), 3)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        if pycosat.solve(clauses) != "UNSAT":
            return clauses


def write_cnf(path, clauses, seed):
    with open(path, "w") as f:
        f.write(f"c uf150-style uniform random 3-SAT, seed {seed}, satisfiable\n")
        f.write("p cnf 150 645\n")
        for c in clauses:
            f.write(" ".join(map(str, c)) + " 0\n")
        f.write("%\n0\n")


def scp(seed, m=200, n=1000, density=0.02):
    rng = random.Random(seed)
    rows = [set() for _ in range(m)]
    for j in range(n):
        rows[rng.randrange(m)].add(j)
    for i in range(m):
        while len(rows[i]) < 2:
            rows[i].add(rng.randrange(n))
    target = int(m * n * density)
    nnz = sum(len(r) for r in rows)
    while nnz < target:
        i, j = rng.randrange(m), rng.randrange(n)
        if j not in rows[i]:
            rows[i].add(j)
            nnz += 1
    costs = [rng.randint(1, 100) for _ in range(n)]
    return costs, rows


def write_scp(path, costs, rows):
    with open(path, "w") as f:
        f.write(f" {len(rows)} {len(costs)}\n")
        for k in range(0, len(costs), 12):
            f.write(" " + " ".join(map(str, costs[k:k + 12])) + "\n")
        for r in rows:
            cols = sorted(r)
            f.write(f" {len(cols)}\n")
            for k in range(0, len(cols), 12):
                f.write(" " + " ".join(str(c + 1) for c in cols[k:k + 12]) + "\n")


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    OUT.mkdir(parents=True, exist_ok=True)
    write_cnf(OUT / "uf150-style.cnf", uf150(seed), seed)
    costs, rows = scp(seed)
    write_scp(OUT / "scp4x-style.txt", costs, rows)
