"""Command line entry point: talgebra {approx,lstsq,tpca,tnn,lift,info}.

Exit codes: 0 success, 2 input/format error, 3 numeric failure.
"""
import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from .algorithms import RankSpec
from .errors import FormatError, NumericError, RankError, ShapeError, SingularError, InsufficientDataError
from .experiments import approx_image, run_approx, run_lstsq, run_tnn, run_tpca
from .io import read_cifar_batch, read_pnm, read_tmx, write_pnm, write_tmx
from .lift import LAYOUTS, VARIANTS, lift_k
from .tmatrix import TMatrix, frob_norm_r, slice_ranks
from .tscalar import ToleranceProfile

EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _sha(paths):
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def _ranks(values, default):
    if not values:
        return list(default)
    return [RankSpec.parse(v) for v in values]


def _emit(report, args):
    text = report.to_csv()
    if args.output_csv:
        report.write(args.output_csv)
    else:
        sys.stdout.write(text)


def _lifts(args):
    return args.lift if args.shape is None else args.shape


def cmd_approx(args):
    img = read_pnm(args.input[0]).astype(np.float64)
    lifts = _lifts(args)
    m = min(img.shape[:2])
    ranks = _ranks(args.rank, range(0, m + 1, max(1, m // 16)))
    rep = run_approx(img, lifts, ranks, metadata={"input": args.input[0], "sha256": _sha(args.input[:1])})
    _emit(rep, args)
    if args.output_image:
        write_pnm(approx_image(img, lifts, max(ranks, key=lambda r: r.sort_key())), args.output_image)


def cmd_lstsq(args):
    if len(args.input) != 3:
        raise ShapeError("lstsq needs three --input images: A B C")
    a, b, c = (read_pnm(p).astype(np.float64) for p in args.input)
    rep = run_lstsq(a, b, c, range(_lifts(args) + 1),
                    metadata={"inputs": args.input, "sha256": _sha(args.input)})
    _emit(rep, args)


def _cifar(path, n):
    return read_cifar_batch(path, n)


def cmd_tpca(args):
    if not args.query:
        raise ShapeError("tpca needs --query (test batch)")
    train = [im for _, im in _cifar(args.input[0], args.n_train)]
    query = [im for _, im in _cifar(args.query, args.n_query)]
    ranks = _ranks(args.rank, range(0, 36))
    layout, lifts = (None, None) if args.variant else (args.layout, _lifts(args))
    kw = dict(variant=args.variant, ranks=ranks, pool=args.pool, layout=layout or "channel", lifts=lifts or 0,
              tol=args.tol_profile, metadata={"train": args.input[0], "query": args.query,
                                              "sha256": _sha([args.input[0], args.query])})
    if args.output_image:
        rep, imgs = run_tpca(train, query, return_images=max(ranks, key=lambda r: r.sort_key()), **kw)
        write_pnm(np.concatenate(imgs, axis=1), args.output_image)
    else:
        rep = run_tpca(train, query, **kw)
    _emit(rep, args)


def cmd_tnn(args):
    if not args.query:
        raise ShapeError("tnn needs --query (test batch)")
    train = _cifar(args.input[0], args.n_train)
    query = _cifar(args.query, args.n_query)
    rep = run_tnn(train, query, variant=args.variant, layout=args.layout, lifts=_lifts(args),
                  metadata={"sha256": _sha([args.input[0], args.query])})
    _emit(rep, args)
    print(f"accuracy {rep.metadata['accuracy']:.4f} least {rep.metadata['least_decisions']} "
          f"minimal-set {rep.metadata['minimal_set_decisions']}", file=sys.stderr)


def cmd_lift(args):
    img = read_pnm(args.input[0]).astype(np.float64)
    if img.ndim == 3:
        arr = lift_k(np.moveaxis(img, 2, 0), k=_lifts(args))
    else:
        arr = lift_k(img, k=_lifts(args))
    out = args.output or str(Path(args.input[0]).with_suffix(".tmx"))
    write_tmx(out, arr, arr.shape[:-2])
    print(f"wrote {out} tscalar {arr.shape[:-2]} matrix {arr.shape[-2:]}")


def cmd_info(args):
    arr, shape = read_tmx(args.input[0])
    X = TMatrix.from_spatial(arr, shape)
    norm = frob_norm_r(X).spectrum.real.reshape(-1)
    ranks = slice_ranks(X, args.tol_profile)
    print(f"tscalar_shape {shape.dims}")
    print(f"K {shape.K}")
    print(f"M1 {X.rows} M2 {X.cols}")
    print(f"frobenius {np.linalg.norm(arr):.6g}")
    print(f"slice_norm_max {norm.max():.6g} slice_norm_min {norm.min():.6g}")
    print(f"slice_rank_min {ranks.min()} slice_rank_max {ranks.max()}")


def build_parser():
    p = argparse.ArgumentParser(prog="talgebra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    for name, fn in [("approx", cmd_approx), ("lstsq", cmd_lstsq), ("tpca", cmd_tpca),
                     ("tnn", cmd_tnn), ("lift", cmd_lift), ("info", cmd_info)]:
        s = sub.add_parser(name)
        s.set_defaults(fn=fn)
        s.add_argument("--input", nargs="+", required=True)
        s.add_argument("--output-csv")
        s.add_argument("--output-image")
        s.add_argument("--output", help="output path for lift (TMX)")
        s.add_argument("--rank", action="append", help="integer r or comma tuple r1,...,rK; repeatable")
        s.add_argument("--lift", type=int, default=0)
        s.add_argument("--shape", type=int, default=None, help="override lift count (0 gives K=1 baselines)")
        s.add_argument("--layout", choices=LAYOUTS, default="channel")
        s.add_argument("--variant", choices=sorted(VARIANTS))
        s.add_argument("--pool", action="store_true")
        s.add_argument("--query", help="query/test batch for tpca and tnn")
        s.add_argument("--n-train", type=int, default=36)
        s.add_argument("--n-query", type=int, default=25)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol", type=float, default=1e-10)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    np.random.seed(args.seed)
    try:
        args.tol_profile = ToleranceProfile(eq_tol=args.tol, cone_tol=args.tol)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.fn(args)
    # LinAlgError subclasses ValueError, so numeric failures are caught first
    except (NumericError, SingularError, np.linalg.LinAlgError, FloatingPointError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, ShapeError, RankError, InsufficientDataError, FileNotFoundError,
            IsADirectoryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
