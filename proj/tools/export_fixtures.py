#!/usr/bin/env python3
# Regenerates data/*.csv from the R `survival` and `MASS` datasets bundled in
# the `rdatasets` Python package. Times stay in the source dataset's unit.
#
#   pip install rdatasets && python3 tools/export_fixtures.py data/

import os
import sys

import numpy as np
import rdatasets


def fmt(v):
    if isinstance(v, (float, np.floating)) and float(v).is_integer():
        return str(int(v))
    return str(v)


def write(out_dir, name, columns, rows):
    path = os.path.join(out_dir, name + ".csv")
    with open(path, "w", newline="\n") as f:
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(fmt(v) for v in row) + "\n")
    print(f"{path}: {len(rows)} rows")


def main(out_dir):
    d = rdatasets.data
    c = d("survival", "cancer")
    write(out_dir, "cancer", ["time", "status", "sex"],
          list(zip(c.time, c.status - 1, c.sex)))
    g = d("MASS", "gehan")
    write(out_dir, "gehan", ["time", "status", "treat"],
          list(zip(g.time, g.cens, g.treat)))
    k = d("survival", "kidney")
    write(out_dir, "kidney", ["time", "status", "sex"],
          list(zip(k.time, k.status, k.sex)))
    l = d("survival", "leukemia")
    write(out_dir, "leukemia", ["time", "status", "maintained"],
          list(zip(l.time, l.status, l.x)))
    m = d("survival", "mgus2")
    write(out_dir, "mgus", ["time", "status", "sex"],
          list(zip(m.futime, m.death, m.sex)))
    y = d("survival", "myeloid")
    write(out_dir, "myeloid", ["time", "status", "trt"],
          list(zip(y.futime, y.death, y.trt)))
    o = d("survival", "ovarian")
    write(out_dir, "ovarian", ["time", "status", "rx"],
          list(zip(o.futime, o.fustat, o.rx)))
    s = d("survival", "stanford2")
    median_age = float(np.median(s.age))
    groups = ["above" if a > median_age else "below" for a in s.age]
    write(out_dir, "stanford", ["time", "status", "age_group"],
          list(zip(s.time, s.status, groups)))
    v = d("survival", "veteran")
    write(out_dir, "veteran", ["time", "status", "trt"],
          list(zip(v.time, v.status, v.trt)))
    # 0 = censored, 1 = liver transplant, 2 = death.
    p = d("survival", "pbc")
    write(out_dir, "pbc", ["time", "status"], list(zip(p.time, p.status)))
    # Waiting-list disposition: 1 = transplant, 2 = death; withdrawals and
    # still-waiting subjects are censored.
    t = d("survival", "transplant")
    code = {"censored": 0, "ltx": 1, "death": 2, "withdraw": 0}
    t = t[t.futime.notna()]
    write(out_dir, "transplant", ["time", "status"],
          list(zip(t.futime, [code[e] for e in t.event])))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
