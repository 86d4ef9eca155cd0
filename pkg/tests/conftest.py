import math

import pytest

from wienerwidths import BoxTooSmallError, sigma_bruteforce, sigma_prefix


def oracle_prefix(spec, n_max):
    """Brute-force prefix with an auto-sized certified box.

    The starting radius comes from the largest axis point whose weight does
    not exceed the n_max-th weight of the fast path; the oracle then
    re-certifies independently, so a fast-path bug cannot hide here (a wrong
    sigma would still have to match a certified exhaustive scan).
    """
    fast = sigma_prefix(spec, n_max)
    radius = spec.axis_extent(math.log(1.0 / fast.sigma(n_max))) + 1
    for slack in (0, 3, 15, 63):
        try:
            return sigma_bruteforce(spec, n_max, radius + slack)
        except BoxTooSmallError:
            continue
    raise AssertionError(f"no certified box up to radius {radius + 63}")


@pytest.fixture
def rng():
    import random

    return random.Random(20240817)
