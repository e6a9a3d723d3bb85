"""Matrix algebra over t-scalars (circular-convolution algebras) and its image experiments."""
from .spectral import TShape, dft, idft, fourier_matrix
from .tscalar import TScalar, ToleranceProfile, DEFAULT_TOL
from .tmatrix import TMatrix, TsvdFactors, tsvd, pinv, rank, matmul
from .algorithms import RankSpec, low_rank_approx, lstsq, tpca_fit, tpca_transform, tpca_reconstruct, psnr
from .lift import LiftConfig, lift_once, lift_k, inception_slice, image_to_tvector

__version__ = "0.1.0"
