"""Shared helpers for the test suite."""
import numpy as np


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_strong_pattern(rng, d_max=4, n_extra_max=4):
    """Random (lambda, r) with controlled multiplicities, strongly admissible.

    Flat norms r_i = sum(lambda)/N with N > d are always strictly majorized by
    lambda, so the pair is strongly admissible by construction.
    """
    target_d = int(rng.integers(1, d_max + 1))
    mults = []
    d = 0
    while d < target_d:
        m = int(rng.integers(1, min(3, target_d - d) + 1))
        mults.append(m)
        d += m
    n = d + int(rng.integers(1, n_extra_max + 1))
    levels = np.sort(rng.uniform(0.5, 5.0, size=len(mults)))[::-1]
    levels = levels + np.arange(len(levels), 0, -1)  # separate the plateaus
    lam = np.repeat(levels, mults)
    r = np.full(n, lam.sum() / n)
    return lam.tolist(), r.tolist()


def random_strict_frame(rng, d, n):
    """A random frame whose partial operators generically have distinct spectra."""
    from framespaces.frame_core import Frame

    return Frame(random_complex(rng, d, n))
