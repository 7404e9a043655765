"""Build tests/data/curves_h1e4.csv from PARI/GP (needs cypari).

Columns: A,B,N,eps,locals where locals lists p:kind:exponent:kodaira:w
separated by ';' for every bad prime.
"""

import csv
import sys

from cypari import pari

sys.path.insert(0, "src")
from murmur.curves import enumerate_curves  # noqa: E402

KIND = {1: "split-mult", -1: "nonsplit-mult", 0: "additive"}


def kodaira_name(code):
    code = int(code)
    if code == 1:
        return "I0"
    if code >= 5:
        return f"I{code - 4}"
    if code <= -5:
        return f"I{-code - 4}*"
    return {2: "II", 3: "III", 4: "IV", -1: "I0*", -2: "II*", -3: "III*", -4: "IV*"}[code]


def main(X=10**4, out="tests/data/curves_h1e4.csv"):
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["A", "B", "N", "eps", "locals"])
        for s in enumerate_curves(X):
            E = pari.ellinit([0, 0, 0, s.A, s.B])
            N = int(pari.ellglobalred(E)[0])
            eps = int(pari.ellrootno(E))
            parts = []
            for p, _ in pari.factor(N).mattranspose():
                p = int(p)
                loc = pari.elllocalred(E, p)
                kind = KIND[int(pari.ellap(E, p))]
                parts.append(f"{p}:{kind}:{int(loc[0])}:{kodaira_name(loc[1])}:{int(pari.ellrootno(E, p))}")
            w.writerow([s.A, s.B, N, eps, ";".join(parts)])


if __name__ == "__main__":
    main()
