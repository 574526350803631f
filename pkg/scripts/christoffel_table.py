"""Levi-Civita Christoffel symbols and braiding for a real metric g(λ1, λ2)."""

import argparse

from qhs import geometry as G
from qhs.connection import levi_civita
from qhs.preset import load_preset
from qhs.scalar import Scalar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="podles-cp1")
    ap.add_argument("--lambda1", default="1")
    ap.add_argument("--lambda2", default="q^2")
    args = ap.parse_args()
    p = load_preset(args.preset)
    g10, g01 = G.base_metrics(p)
    m = G.metric_family(g10, g01, Scalar.parse(args.lambda1), Scalar.parse(args.lambda2), p)
    lc = levi_civita(p, m)
    db = p.dual_bases["omega1"]
    print(f"dual basis ({db.rank} forms):")
    for i, e in enumerate(db.forms):
        print(f"  e^{i} = {e}")
    print("Christoffel symbols, ∇e^i = -Σ Γ^i_j ⊗ e^j:")
    for i, row in enumerate(lc.gamma):
        for j, x in enumerate(row):
            if x:
                print(f"  Γ^{i}_{j} = {x}")
    print("braiding σ on V¹⊗V¹:")
    src, tgt = lc.sigma.source.basis, lc.sigma.target.basis
    for j, s in enumerate(src):
        terms = [f"({lc.sigma.matrix[i][j]})·{'⊗'.join(t)}" for i, t in enumerate(tgt) if lc.sigma.matrix[i][j]]
        print(f"  σ({'⊗'.join(s)}) = {' + '.join(terms) or '0'}")


if __name__ == "__main__":
    main()
