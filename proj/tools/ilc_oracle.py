"""Independent identity-limit oracle for equal-ratio affine systems.

Every word of length k has the same ratio a^k, so f_v^-1 o f_w is a translation
by (b_w - b_v) / a^k. Candidates come from neighbours after a float sort; the
winners are re-evaluated exactly with the config's double values as rationals.

usage: ilc_oracle.py CONFIG [MAX_DEPTH]
"""
import sys
from fractions import Fraction

import numpy as np


def read_affine(path):
    maps = []
    for line in open(path):
        line = line.split("#", 1)[0].split()
        if line and line[0] == "map":
            if line[1] != "affine":
                raise SystemExit("only affine systems are supported")
            maps.append((float(line[2]), float(line[3])))
    ratios = {a for a, _ in maps}
    if len(ratios) != 1:
        raise SystemExit("maps must share one ratio")
    return maps


def exact_offset(maps, digits):
    # f_w = f_{w0} o f_{w1} o ... ; offset of the composite, exactly.
    a = Fraction(maps[0][0])
    b = Fraction(0)
    for d in reversed(digits):
        b = a * b + Fraction(maps[d][1])
    return b


def depth_minimum(maps, k):
    n = len(maps)
    a = maps[0][0]
    b = np.zeros(1)
    for level in range(k):
        # Appending a symbol on the right: f_w o f_s has offset b_w + a^{|w|} t_s.
        b = np.concatenate([b + a ** level * t for _, t in maps])
    order = np.argsort(b, kind="stable")
    diffs = np.diff(b[order])
    best = None
    for idx in np.argsort(diffs, kind="stable")[:64]:
        words = []
        for j in (order[idx], order[idx + 1]):
            # Index j = sum of s_L n^L for the symbol s_L at position L.
            words.append([int(j) // n**L % n for L in range(k)])
        gap = abs(exact_offset(maps, words[1]) - exact_offset(maps, words[0])) / Fraction(a) ** k
        if gap != 0 and (best is None or gap < best):
            best = gap
    return best


def main():
    maps = read_affine(sys.argv[1])
    max_depth = int(sys.argv[2]) if len(sys.argv) > 2 else 12
    running = None
    print("depth,ilc")
    for k in range(1, max_depth + 1):
        d = depth_minimum(maps, k)
        running = d if running is None else min(running, d)
        print(f"{k},{float(running)!r}")


if __name__ == "__main__":
    main()
