import numpy as np
import pytest

BETAS = (0.1, 0.5, 1.0, 2.0, 5.0)


def random_point(rng, n, p, min_ratio=0.05):
    """Gaussian n×p matrix, redrawn until reasonably conditioned."""
    while True:
        X = rng.standard_normal((n, p))
        s = np.linalg.svd(X, compute_uv=False)
        if s[-1] >= min_ratio * s[0]:
            return X


def random_stiefel(rng, n, p):
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    return Q


def random_skew(rng, k):
    W = rng.standard_normal((k, k))
    return W - W.T


def random_sym(rng, k):
    S = rng.standard_normal((k, k))
    return S + S.T


def random_dims(rng, n_max=20, p_max=5):
    p = int(rng.integers(1, p_max + 1))
    n = int(rng.integers(p, n_max + 1))
    return n, p


def naive_matmul(A, B):
    """Triple loop matrix product; independent of BLAS."""
    m, k = len(A), len(A[0])
    n = len(B[0])
    out = [[0.0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for l in range(k):
                acc += A[i][l] * B[l][j]
            out[i][j] = acc
    return np.array(out)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
