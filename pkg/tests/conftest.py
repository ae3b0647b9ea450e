import numpy as np
import pytest

from riesz_lab.algebra import gram_array, mat_mul


def random_upper(rng, beta, m, n=None, diag_low=0.5):
    """Upper-triangular factors with positive real diagonal."""
    shape = (m, m, beta) if n is None else (n, m, m, beta)
    t = rng.standard_normal(shape) * np.triu(np.ones((m, m)), 1)[..., None]
    idx = np.arange(m)
    t[..., idx, idx, :] = 0.0
    t[..., idx, idx, 0] = rng.uniform(diag_low, 2.0, size=t.shape[:-3] + (m,))
    return t


def random_hpd(rng, beta, m, n=None):
    """Random HPD matrices ``T* T`` (one or a stack)."""
    return gram_array(random_upper(rng, beta, m, n))


def random_matrix(rng, beta, r, c, n=None):
    shape = (r, c, beta) if n is None else (n, r, c, beta)
    return rng.standard_normal(shape)


def frob(a):
    return float(np.sqrt(np.sum(np.asarray(a) ** 2)))


def identity_residual(s, s_inv):
    m, beta = s.shape[-2], s.shape[-1]
    eye = np.zeros((m, m, beta))
    eye[np.arange(m), np.arange(m), 0] = 1.0
    return frob(mat_mul(s, s_inv) - eye)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
