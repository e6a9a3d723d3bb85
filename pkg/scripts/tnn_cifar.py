"""Tensorial nearest neighbour on CIFAR-10 for a few variants; prints accuracy and decision counts."""
import argparse
import os
from pathlib import Path

from talgebra.experiments import run_tnn
from talgebra.io import read_cifar_batch

DATA = Path(os.environ.get("TALGEBRA_DATA", Path(__file__).resolve().parents[1] / "data"))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--variants", nargs="+", default=["PCA", "TPCA", "TPCA-1"])
    p.add_argument("--n-train", type=int, default=200)
    p.add_argument("--n-query", type=int, default=50)
    p.add_argument("--out", default="results")
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    root = DATA / "cifar-10-batches-bin"
    train = read_cifar_batch(root / "data_batch_1.bin", args.n_train)
    query = read_cifar_batch(root / "test_batch.bin", args.n_query)
    for v in args.variants:
        rep = run_tnn(train, query, variant=v)
        rep.write(out / f"tnn_{v}.csv")
        m = rep.metadata
        print(f"{v:8s} accuracy {m['accuracy']:.3f} least {m['least_decisions']} "
              f"minimal-set {m['minimal_set_decisions']}")


if __name__ == "__main__":
    main()
