"""Freeze PARI/GP reference values into tests/data (needs cypari2).

    python tools/make_oracle_data.py tests/data

The test suite only reads the JSON written here; PARI is not needed to run it.
"""

import json
import random
import sys
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)
pari.set_real_precision(40)

SEED = 20240917

FAMILY = ((25350, 2471625), (-50700, 632736000))

TORSION_CURVES = [
    [0, 0, 0, -1, 0],
    [0, 0, 0, 4, 0],
    [0, 0, 1, -1, 0],
    [0, -1, 1, -10, -20],
    [0, 1, 1, -1, 0],
    [1, 0, 1, -19, 26],
    [1, -1, 1, -3, 3],
    [1, 0, 0, -45, 81],
    [1, 0, 1, -14, -64],
    [1, 0, 0, -1070, 7812],
    [1, 0, 1, -171, -874],
    [1, -1, 1, -122, 1721],
    [1, 0, 0, -1, 0],
    [0, -1, 1, 0, 0],
    [1, 1, 1, -10, -10],
    [1, 1, 1, 35, -28],
    [0, 1, 0, -4, -4],
    [1, 0, 1, -36, -70],
    [0, 0, 0, -36, 0],
    [0, 0, 0, 0, 1],
    [1, 1, 1, -5, 2],
    [0, 0, 0, 25350, 0],
]


def ainvs(e):
    return [int(x) for x in e[:5]]


def local_record(E):
    M = pari.ellminimalmodel(E)
    g = pari.ellglobalred(M)
    disc = int(M[11])
    out = []
    for p in [int(q) for q in pari.factor(abs(int(E[11])))[0]]:
        ld = pari.elllocalred(E, p)
        out.append(
            {
                "p": p,
                "f": int(ld[0]),
                "kodaira": int(ld[1]),
                "c": int(ld[3]),
                "v_delta_min": int(pari.valuation(disc, p)),
            }
        )
    return {"conductor": int(g[0]), "delta_min": disc, "local": out}


def random_models(rng, n):
    out = []
    while len(out) < n:
        kind = rng.random()
        if kind < 0.5:
            a = [rng.randint(-3, 3) if i < 3 else rng.randint(-300, 300) for i in range(5)]
            a[0] = rng.randint(0, 1)
            a[2] = rng.randint(0, 1)
        elif kind < 0.8:
            # short models scaled by small primes to exercise non-minimal inputs
            u = rng.choice([2, 3, 5, 6])
            a = [0, 0, 0, rng.randint(-50, 50) * u**4, rng.randint(-50, 50) * u**6]
        else:
            A, B = rng.randint(-60, 60), rng.randint(-60, 60)
            a = [0, A, 0, B, 0]
        try:
            E = pari.ellinit(a)
        except cypari2.PariError:
            continue
        if int(E[11]) == 0:
            continue
        out.append(a)
    return out


def main(dest):
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    models = random_models(rng, 320)
    for D in (1, 5, 13, 15, 17, 21, -195, 233):
        for A, B in FAMILY:
            models.append([0, A * D, 0, B * D * D, 0])
    tate = []
    for a in models:
        E = pari.ellinit(a)
        tate.append({"ainvs": a, **local_record(E)})
    (dest / "tate_pari.json").write_text(json.dumps(tate, indent=1))

    tors = []
    for a in TORSION_CURVES + random_models(rng, 60):
        E = pari.ellinit(a)
        tors.append({"ainvs": a, "structure": sorted(int(x) for x in pari.elltors(E)[1])})
    (dest / "torsion_pari.json").write_text(json.dumps(tors, indent=1))

    periods = []
    for a in TORSION_CURVES[:12] + [[0, A, 0, B, 0] for A, B in FAMILY] + random_models(rng, 20):
        E = pari.ellinit(a, precision=192)
        M = pari.ellminimalmodel(E)
        comps = 2 if int(M[11]) > 0 else 1
        omega = M.omega()[0] * comps
        periods.append({"ainvs": a, "omega": str(omega)})
    (dest / "period_pari.json").write_text(json.dumps(periods, indent=1))

    ranks = []
    for D in (1, 5, 13, 15, 17, 21, 65, 105, 273, 1365, -195):
        row = {"D": D}
        for name, (A, B) in zip(("E1", "E2"), FAMILY):
            r = pari.ellrank(pari.ellinit([0, A * D, 0, B * D * D, 0]))
            row[name] = [int(r[0]), int(r[1])]
        ranks.append(row)
    (dest / "rank_pari.json").write_text(json.dumps(ranks, indent=1))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
