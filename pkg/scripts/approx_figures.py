"""Low-rank approximation curves: baboon (colour, no lift) and cameraman (one and two lifts).

Writes results/approx_baboon.csv, results/approx_cameraman_L{1,2}.csv.
"""
import argparse
import os
import time
from pathlib import Path

from talgebra.experiments import run_approx
from talgebra.io import read_pnm

DATA = Path(os.environ.get("TALGEBRA_DATA", Path(__file__).resolve().parents[1] / "data"))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out", default="results")
    p.add_argument("--step", type=int, default=10)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    baboon = read_pnm(DATA / "baboon.ppm")
    t0 = time.perf_counter()
    rep = run_approx(baboon, 0, list(range(0, 513, args.step)) + [500], metadata={"image": "baboon"})
    rep.write(out / "approx_baboon.csv")
    print(f"baboon done in {time.perf_counter() - t0:.1f}s; r=500 svd {rep.value('500', 'svd'):.2f} "
          f"tsvd {rep.value('500', 'tsvd'):.2f}")

    cam = read_pnm(DATA / "cameraman.pgm")
    ranks = sorted(set(range(0, 257, args.step)) | {250})
    for lifts in (1, 2):
        t0 = time.perf_counter()
        rep = run_approx(cam, lifts, ranks, metadata={"image": "cameraman"})
        rep.write(out / f"approx_cameraman_L{lifts}.csv")
        print(f"cameraman L{lifts} done in {time.perf_counter() - t0:.1f}s; r=250 svd "
              f"{rep.value('250', 'svd'):.2f} inception {rep.value('250', 'tsvd_inception'):.2f} "
              f"whole {rep.value('250', 'tsvd'):.2f}")


if __name__ == "__main__":
    main()
