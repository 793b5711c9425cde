"""Independent high-precision reference values frozen into the test suite.

Run ``python tests/oracles/generate_oracles.py`` to regenerate.  Everything
here uses mpmath only: no package code is imported.
"""
import mpmath as mp

mp.mp.dps = 40


def capacity(ell):
    """1 - log2(l-1) + (2/(l(l-1))) sum_k k log2 k."""
    s = mp.fsum(k * mp.log(k, 2) for k in range(2, ell))
    return 1 - mp.log(ell - 1, 2) + 2 * s / (ell * (ell - 1))


def weight(ell, z):
    return (1 - z) ** 3 * z ** (ell - 2) * ell * (ell - 1) / 2


def unruh(z, terms=600):
    # running sum of k log2 k keeps this linear in the number of terms
    total, klogk = mp.mpf(0), mp.mpf(0)
    for ell in range(2, terms):
        if ell >= 3:
            klogk += (ell - 1) * mp.log(ell - 1, 2)
        c = 1 - mp.log(ell - 1, 2) + 2 * klogk / (ell * (ell - 1))
        total += weight(ell, z) * c
    return total


def entropy(ps):
    return -mp.fsum(p * mp.log(p, 2) for p in ps if p > 0)


def min_output_entropy(ell):
    delta = mp.mpf(ell * (ell - 1)) / 2
    return entropy([k / delta for k in range(ell)])


if __name__ == "__main__":
    for ell in (2, 3, 4, 5, 8, 16, 32, 64):
        print(f"capacity {ell}: {mp.nstr(capacity(ell), 20)}  moe: {mp.nstr(min_output_entropy(ell), 20)}")
    for z in ("0.1", "0.3", "0.5", "0.7"):
        print(f"unruh {z}: {mp.nstr(unruh(mp.mpf(z)), 20)}")
    print("limit:", mp.nstr(1 - 1 / (2 * mp.log(2)), 20))
    # Euler-Maclaurin: sum_{k<=n} k ln k = n^2 ln n/2 - n^2/4 + n ln n/2 + ln n/12 + const + ...
    print("S(eps_3) =", mp.nstr(mp.log(3, 2) - mp.mpf(2) / 3, 20))
    print("S_2^c capacity =", mp.nstr(1 - entropy([mp.mpf(2) / 3, mp.mpf(1) / 3]), 20))
    print("p-inf proxy diag(2/3,1/3), p=1000:", mp.nstr(mp.log((mp.mpf(2) / 3) ** 1000 + (mp.mpf(1) / 3) ** 1000, 2) / (1 - 1000), 20))
