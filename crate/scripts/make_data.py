#!/usr/bin/env python3
"""Regenerate the CSV files under data/.

auto93.csv is the classic auto-mpg table (398 cars), converted to the MOOT
header convention from the copy bundled with the `vega_datasets` wheel:

    pip download vega_datasets --no-deps -d /tmp/vd
    python3 scripts/make_data.py --vega /tmp/vd/vega_datasets-0.9.0-py3-none-any.whl

The remaining files are synthetic stand-ins that follow the same conventions
(uppercase = numeric, lowercase = symbolic, trailing +/- = goal, trailing X =
ignored). They are generated from fixed seeds so the output is stable.
"""

import argparse
import json
import math
import os
import random
import zipfile

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data")


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(str(c) for c in r) + "\n")


def fmt(x, digits=2):
    s = f"{x:.{digits}f}".rstrip("0").rstrip(".")
    return s if s != "-0" else "0"


# --------------------------------------------------------------------------
def auto93(wheel):
    z = zipfile.ZipFile(wheel)
    cars = json.loads(z.read("vega_datasets/_data/cars.json"))
    origin = {"USA": 1, "Europe": 2, "Japan": 3}
    rows = []
    for c in cars:
        if c["Miles_per_Gallon"] is None:
            continue
        hp = "?" if c["Horsepower"] is None else c["Horsepower"]
        year = int(c["Year"][:4]) - 1900
        rows.append([c["Cylinders"], fmt(c["Displacement"]), hp, year,
                     origin[c["Origin"]], c["Weight_in_lbs"],
                     fmt(c["Acceleration"], 1), fmt(c["Miles_per_Gallon"], 1)])
    write("auto93.csv",
          ["Clndrs", "Volume", "HpX", "Model", "origin", "Lbs-", "Acc+", "Mpg+"],
          rows)


# --------------------------------------------------------------------------
# COCOMO-II style process model. Ratings run 1 (very low) .. 6 (extra high);
# None marks ratings the model leaves undefined.
SF = {
    "PREC": [6.20, 4.96, 3.72, 2.48, 1.24, 0.0],
    "FLEx": [5.07, 4.05, 3.04, 2.03, 1.01, 0.0],
    "ARCH": [7.07, 5.65, 4.24, 2.83, 1.41, 0.0],
    "TEAM": [5.48, 4.38, 3.29, 2.19, 1.10, 0.0],
    "PMAT": [7.80, 6.24, 4.68, 3.12, 1.56, 0.0],
}
EM = {
    "RELY": [0.82, 0.92, 1.00, 1.10, 1.26, None],
    "DATA": [None, 0.90, 1.00, 1.14, 1.28, None],
    "CPLx": [0.73, 0.87, 1.00, 1.17, 1.34, 1.74],
    "RUSE": [None, 0.95, 1.00, 1.07, 1.15, 1.24],
    "DOCU": [0.81, 0.91, 1.00, 1.11, 1.23, None],
    "TIME": [None, None, 1.00, 1.11, 1.29, 1.63],
    "STOR": [None, None, 1.00, 1.05, 1.17, 1.46],
    "PVOL": [None, 0.87, 1.00, 1.15, 1.30, None],
    "ACAP": [1.42, 1.19, 1.00, 0.85, 0.71, None],
    "PCAP": [1.34, 1.15, 1.00, 0.88, 0.76, None],
    "PCON": [1.29, 1.12, 1.00, 0.90, 0.81, None],
    "LTEx": [1.20, 1.09, 1.00, 0.91, 0.84, None],
    "TOOL": [1.17, 1.09, 1.00, 0.90, 0.78, None],
    "SITE": [1.22, 1.09, 1.00, 0.93, 0.86, 0.80],
    "SCED": [1.43, 1.14, 1.00, 1.00, 1.00, None],
}
AEXP = [1.22, 1.10, 1.00, 0.88, 0.81]
PLEX = [1.19, 1.09, 1.00, 0.91, 0.85]

RISKS = [  # (a, a_max_rating, b, b_min_rating, weight)
    ("SCED", 2, "RELY", 4, 2), ("SCED", 2, "CPLx", 5, 2), ("SCED", 2, "TIME", 5, 1),
    ("ACAP", 2, "CPLx", 5, 2), ("PCAP", 2, "CPLx", 5, 1), ("TOOL", 2, "PMAT", -2, 1),
    ("TEAM", 2, "SITE", -2, 1), ("PCON", 2, "PVOL", 4, 1), ("ACAP", 2, "ARCH", -2, 2),
    ("PREC", 2, "STOR", 5, 1), ("DOCU", 2, "RUSE", 5, 1), ("LTEx", 2, "TOOL", -2, 1),
]


def legal(table):
    return [i + 1 for i, v in enumerate(table) if v is not None]


def coc1000():
    rnd = random.Random(1000)
    xs = ["ACAP", "ARCH", "CPLx", "DATA", "DOCU", "FLEx", "LTEx", "PCAP", "PCON",
          "PMAT", "PREC", "PVOL", "RELY", "RUSE", "SCED", "SITE", "STOR", "TEAM",
          "TIME", "TOOL"]
    rows = []
    for _ in range(1000):
        r = {}
        for x in xs:
            r[x] = rnd.choice(list(range(1, 7)) if x in SF else legal(EM[x]))
        aexp = rnd.randint(1, 5)
        plex = rnd.randint(1, 5)
        kloc = rnd.uniform(2, 500)
        b = 0.91 + 0.01 * sum(SF[k][r[k] - 1] for k in SF)
        em = math.prod(EM[k][r[k] - 1] for k in EM) * AEXP[aexp - 1] * PLEX[plex - 1]
        effort = 2.94 * kloc ** b * em
        risk = 0
        for a, amax, bb, bmin, w in RISKS:
            hit_a = r[a] <= amax
            hit_b = r[bb] <= -bmin if bmin < 0 else r[bb] >= bmin
            if hit_a and hit_b:
                risk += w * (1 + (amax - r[a]))
        rows.append([r[x] for x in xs] + [aexp, plex, risk, fmt(effort, 1), round(kloc * 1000)])
    write("coc1000.csv", xs + ["AEXP-", "PLEx-", "Risk-", "Effort-", "LOC+"], rows)


# --------------------------------------------------------------------------
def dbconf():
    rnd = random.Random(7)
    engines = {"innodb": (1.0, 1.0), "myisam": (1.25, 0.8), "memory": (1.6, 0.55)}
    rows = []
    for _ in range(1500):
        eng = rnd.choice(sorted(engines))
        buf = rnd.choice([16, 32, 64, 128, 256, 512, 1024])
        thr = rnd.choice([1, 2, 4, 8, 16, 32, 64])
        cache = rnd.choice([0, 1])
        log = rnd.choice(["sync", "async", "none"])
        page = rnd.choice([4, 8, 16, 32])
        speed, dur = engines[eng]
        # throughput saturates with threads, degrades past 16 from contention
        tput = (speed * 400 * math.log2(buf) * min(thr, 16) ** 0.6
                * (1.3 if cache else 1.0) * {"sync": 0.7, "async": 1.0, "none": 1.15}[log]
                / (1 + max(0, thr - 16) / 24) * (1 + 0.05 * math.log2(page)))
        tput *= rnd.uniform(0.92, 1.08)
        lat = (40 / math.sqrt(buf) + 0.8 * thr / 8 + {"sync": 6, "async": 2, "none": 0.5}[log]
               + (0 if cache else 3)) * rnd.uniform(0.9, 1.1)
        loss = {"sync": 0, "async": 1, "none": 3}[log] / dur + (0.5 if eng == "memory" else 0)
        rows.append([eng, buf, thr, cache, log, page,
                     fmt(tput, 1), fmt(lat, 2), fmt(loss, 2)])
    write("dbconf.csv",
          ["engine", "Buffer", "Threads", "Cache", "logmode", "Page",
           "Throughput+", "Latency-", "Loss-"], rows)


# --------------------------------------------------------------------------
def hpo_svm():
    rnd = random.Random(11)
    rows = []
    for _ in range(1200):
        kernel = rnd.choice(["linear", "poly", "rbf", "sigmoid"])
        c = 10 ** rnd.uniform(-3, 3)
        g = 10 ** rnd.uniform(-4, 1)
        deg = rnd.randint(2, 5)
        tol = 10 ** rnd.uniform(-5, -1)
        shrink = rnd.choice(["yes", "no"])
        lc, lg = math.log10(c), math.log10(g)
        base = {"linear": 0.84, "poly": 0.86, "rbf": 0.93, "sigmoid": 0.78}[kernel]
        acc = base - 0.015 * (lc - 1) ** 2
        if kernel in ("rbf", "sigmoid"):
            acc -= 0.02 * (lg + 1.5) ** 2
        if kernel == "poly":
            acc -= 0.01 * abs(deg - 3)
        acc = max(0.3, min(0.99, acc + rnd.gauss(0, 0.01)))
        t = (0.5 + 0.4 * max(lc, 0) ** 1.5 + (deg - 1) * (kernel == "poly")
             + 0.3 * -math.log10(tol)) * (0.8 if shrink == "yes" else 1.0) * rnd.uniform(0.9, 1.1)
        rows.append([kernel, fmt(c, 4), fmt(g, 5), deg, fmt(tol, 6), shrink,
                     rnd.randint(0, 9999), fmt(acc, 4), fmt(t, 3)])
    write("hpo_svm.csv",
          ["kernel", "C", "Gamma", "Degree", "Tol", "shrinking", "SeedX", "Acc+", "Time-"],
          rows)


# --------------------------------------------------------------------------
def fm24():
    rnd = random.Random(24)
    n = 24
    cost = [rnd.uniform(1, 10) for _ in range(n)]
    value = [rnd.uniform(0, 8) for _ in range(n)]
    pairs = [(rnd.randrange(n), rnd.randrange(n), rnd.uniform(-6, 6)) for _ in range(30)]
    rows = []
    for _ in range(3000):
        bits = [1 if rnd.random() < 0.5 else 0 for _ in range(n)]
        # feature 0 is mandatory for features 1..3 (crude tree constraint)
        if not bits[0]:
            bits[1] = bits[2] = bits[3] = 0
        c = sum(ci for ci, b in zip(cost, bits) if b)
        v = sum(vi for vi, b in zip(value, bits) if b)
        v += sum(w for i, j, w in pairs if bits[i] and bits[j])
        defects = sum(bits) * 0.6 + sum(1 for i, j, _ in pairs if bits[i] != bits[j]) * 0.2
        rows.append(bits + [fmt(c, 2), fmt(v, 2), fmt(defects + rnd.uniform(0, 1), 2)])
    write("fm24.csv",
          [f"F{i:02d}" for i in range(n)] + ["Cost-", "Value+", "Defects-"], rows)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--vega", help="path to the vega_datasets wheel (for auto93.csv)")
    args = ap.parse_args()
    os.makedirs(OUT, exist_ok=True)
    if args.vega:
        auto93(args.vega)
    coc1000()
    dbconf()
    hpo_svm()
    fm24()
