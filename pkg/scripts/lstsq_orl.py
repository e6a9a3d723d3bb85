"""Canonical vs generalized least squares on ORL faces, lift orders 0..4.

For each subject, image 1 is approximated from images 2 and 3.
Writes results/lstsq_orl_s{N}.csv.
"""
import argparse
import os
from pathlib import Path

from talgebra.experiments import run_lstsq
from talgebra.io import read_pnm

DATA = Path(os.environ.get("TALGEBRA_DATA", Path(__file__).resolve().parents[1] / "data"))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--subjects", type=int, nargs="+", default=[1, 2])
    p.add_argument("--max-lift", type=int, default=4)
    p.add_argument("--out", default="results")
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for s in args.subjects:
        a, b, c = (read_pnm(DATA / "orl" / f"s{s}" / f"{i}.pgm").astype(float) for i in (1, 2, 3))
        rep = run_lstsq(a, b, c, range(args.max_lift + 1), metadata={"subject": s})
        rep.write(out / f"lstsq_orl_s{s}.csv")
        print(f"s{s}\n{rep.to_csv()}")


if __name__ == "__main__":
    main()
