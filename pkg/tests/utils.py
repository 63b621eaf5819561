import os.path

from geo4.invariants import LatticePoint


def datapath(path):
    return os.path.join(os.path.dirname(__file__), 'data', path)


def brute_force_allowed(chi_max, c_max=None):
    """All allowed points with 1 ≤ χ ≤ chi_max and 0 ≤ c < 10χ, from the definition"""
    points = []
    for chi in range(1, chi_max + 1):
        for c in range(0, (c_max if c_max is not None else 10 * chi)):
            if (c - 8 * chi) % 16 == 0 and c <= 10 * chi - 1:
                points.append(LatticePoint(chi, c))
    return points


def binomial(n, k):
    """
    Return binomial coefficient ('n choose k').
    This implementation does not use factorials.
    """
    k = min(k, n - k)
    if k < 0:
        return 0
    r = 1
    for j in range(k):
        r *= n - j
        r //= j + 1
    return r
