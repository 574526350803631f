"""
Recompute d(eⁱ) for every dual-basis form through the exterior table and
print it as a [maurer_cartan] TOML section.  This is how the stored
constants in the CP¹ preset were obtained; the validator compares both.
"""

import argparse

import tomli_w

from qhs.preset import load_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("preset", nargs="?", default="podles-cp1")
    args = ap.parse_args()
    p = load_preset(args.preset)
    out = {}
    for name, db in p.dual_bases.items():
        if name == "omega1":
            continue
        rows = []
        for e in db.forms:
            de = p.d_exterior(e)
            rows.append({lab[0]: p.A.render(c) for lab, c in de.coeffs.items()})
        out[name] = rows
    print(tomli_w.dumps({"maurer_cartan": out}))


if __name__ == "__main__":
    main()
