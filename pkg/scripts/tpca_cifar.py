"""TPCA reconstruction PSNR on CIFAR-10 for the eight named variants, with and without pooling.

Trains on the first 36 images of data_batch_1 and reconstructs the first 25 of test_batch.
Writes results/tpca_{variant}.csv.
"""
import argparse
import os
import time
from pathlib import Path

from talgebra.experiments import run_tpca
from talgebra.io import read_cifar_batch
from talgebra.lift import VARIANTS

DATA = Path(os.environ.get("TALGEBRA_DATA", Path(__file__).resolve().parents[1] / "data"))
ORDER = ["PCA", "TPCA", "TPCA-I", "TPCA-1", "TPCA-II", "TPCA-2", "TPCA-III", "TPCA-3"]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--variants", nargs="+", default=ORDER, choices=sorted(VARIANTS))
    p.add_argument("--n-train", type=int, default=36)
    p.add_argument("--n-query", type=int, default=25)
    p.add_argument("--out", default="results")
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    root = DATA / "cifar-10-batches-bin"
    train = [im for _, im in read_cifar_batch(root / "data_batch_1.bin", args.n_train)]
    query = [im for _, im in read_cifar_batch(root / "test_batch.bin", args.n_query)]
    ranks = range(0, args.n_train)
    for v in args.variants:
        t0 = time.perf_counter()
        rep = run_tpca(train, query, variant=v, ranks=ranks, pool=True)
        rep.write(out / f"tpca_{v}.csv")
        last = str(ranks[-1])
        print(f"{v:9s} r={last}: {rep.value(last, v):.2f} dB, pooled {rep.value(last, v + '-pool'):.2f} dB "
              f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
