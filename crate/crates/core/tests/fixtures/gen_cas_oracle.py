#!/usr/bin/env python3
"""Regenerate cas_oracle.csv with PARI/GP (via cypari2).

Enumerates every canonical monic form x^3 + f1 x^2 y + f2 x y^2 + f3 y^3 with
f1 in {-1, 0, 1}, irreducible, nonzero discriminant and 4*H < BOUND4, and
records the field discriminant and the (certified) class group structure.
The enumeration runs over (f1, f2, f3) directly, independent of the Rust
(I, J) loop.
"""
import sys

import cypari2

BOUND4 = 80000

pari = cypari2.Pari()

rows = []
for f1 in (-1, 0, 1):
    for f2 in range(-40, 41):
        for f3 in range(-40, 41):
            i = f1 * f1 - 3 * f2
            j = -2 * f1**3 + 9 * f1 * f2 - 27 * f3
            h4 = max(4 * abs(i) ** 3, j * j)
            if h4 >= BOUND4:
                continue
            disc = 4 * i**3 - j * j
            assert disc % 27 == 0
            if disc == 0:
                continue
            pol = f"x^3 + ({f1})*x^2 + ({f2})*x + ({f3})"
            if not pari(f"polisirreducible({pol})"):
                continue
            pari(f"B = bnfinit({pol}, 1)")
            assert int(pari("bnfcertify(B)")) == 1
            field_disc = int(pari("B.disc"))
            cyc = [int(c) for c in pari("B.cyc")]
            group = "-".join(str(c) for c in reversed(cyc)) if cyc else "1"
            rows.append((f1, f2, f3, field_disc, group))

rows.sort()
out = sys.stdout
out.write("f1,f2,f3,field_disc,class_group\n")
for r in rows:
    out.write(",".join(str(v) for v in r) + "\n")
