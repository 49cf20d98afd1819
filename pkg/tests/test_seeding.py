import numpy as np

from timesmn.seeding import point_rng


def test_point_rng_derivation():
    a = point_rng(7, 3).integers(0, 2 ** 32, size=4)
    b = np.random.default_rng(np.random.SeedSequence([7, 3])).integers(0, 2 ** 32, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, point_rng(7, 4).integers(0, 2 ** 32, size=4))
