"""Independent reference values for the C++ unit tests.

Every value printed here is frozen into a test. Nothing in this script calls
the library; kernels are integrated with mpmath's tanh-sinh quadrature,
discrepancies by direct integration of the local discrepancy, Haar sums with
exact fractions from the wavelet definitions.

Run: python3 tests/oracles/oracles.py
"""
from fractions import Fraction
from itertools import product
import math

import mpmath as mp
from scipy.special import roots_jacobi

mp.mp.dps = 40


def mpf(v):
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def kernel_c(alpha, x, y):
    a = mp.mpf(alpha)
    lo = min(x, y)
    return mp.quad(lambda t: (x - t) ** (a - 1) * (y - t) ** (a - 1), [0, lo])


def kernel_b(alpha, x):
    a = mp.mpf(alpha)
    return mp.quad(lambda t: (1 - t) ** a * (x - t) ** (a - 1), [0, x]) / a


def radical_inverse(n, b, m):
    x = Fraction(0)
    scale = Fraction(1, b)
    for _ in range(m):
        x += (n % b) * scale
        n //= b
        scale /= b
    return x


def faure_points(b, m, s):
    pts = []
    for n in range(b ** m):
        d = [(n // b ** r) % b for r in range(m)]
        coords = []
        for l in range(s):
            y = [sum(math.comb(c, r) * l ** (c - r) * d[c] for c in range(r, m)) % b for r in range(m)]
            coords.append(sum(Fraction(y[r], b ** (r + 1)) for r in range(m)))
        pts.append(coords)
    return pts


def delta_1d(alpha, pts, t):
    a = mp.mpf(alpha)
    s = mp.mpf(0)
    for x in pts:
        if x > t:
            s += (x - t) ** (a - 1)
    return (1 - t) ** a / a - s / len(pts)


def disc_1d(alpha, pts):
    xs = sorted(set(mpf(p) for p in pts if 0 < p < 1))
    brk = [mp.mpf(0)] + xs + [mp.mpf(1)]
    return mp.sqrt(mp.quad(lambda t: delta_1d(alpha, [mpf(p) for p in pts], t) ** 2, brk))


def warnock_mp(alpha, pts):
    s = len(pts[0])
    N = len(pts)
    a = mp.mpf(alpha)
    A = 1 / (a * a * (2 * a + 1))
    t1 = (1 + A) ** s - 1
    t2 = mp.mpf(0)
    for p in pts:
        prod = mp.mpf(1)
        for v in p:
            prod *= 1 + kernel_b(alpha, mpf(v))
        t2 += prod - 1
    t3 = mp.mpf(0)
    for p in pts:
        for q in pts:
            prod = mp.mpf(1)
            for v, w in zip(p, q):
                v, w = mpf(v), mpf(w)
                c = (min(v, w) ** (2 * a - 1) / (2 * a - 1)) if v == w else kernel_c(alpha, v, w)
                prod *= 1 + c
            t3 += prod - 1
    return mp.sqrt(t1 - 2 * t2 / N + t3 / N ** 2)


def haar_level_sum(pts, b, j_vec):
    """Sum over (k, i) of (sum_n prod_l (b [child = i_l] - 1))^2 for level vector j."""
    s = len(j_vec)
    groups = {}
    for p in pts:
        key, child = [], []
        for l in range(s):
            if j_vec[l] == 0:
                continue
            x = p[l]
            key.append(math.floor(x * b ** (j_vec[l] - 1)))
            child.append(math.floor(x * b ** j_vec[l]) % b)
        groups.setdefault(tuple(key), []).append(tuple(child))
    total = 0
    J = sum(1 for v in j_vec if v > 0)
    for members in groups.values():
        for i in product(range(b), repeat=J):
            g = 0
            for c in members:
                w = 1
                for cl, il in zip(c, i):
                    w *= (b - 1) if cl == il else -1
                g += w
            total += g * g
    return total


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def truncated_dual_22(pts, b, alpha, jmax):
    """p = q = 2: sum over 1 <= |j| <= jmax of b^{-2 alpha |j|} * sum |Q(Psi)|^2."""
    N = len(pts)
    s = len(pts[0])
    acc = mp.mpf(0)
    for nu in range(1, jmax + 1):
        for j in compositions(nu, s):
            J = sum(1 for v in j if v > 0)
            g2 = haar_level_sum(pts, b, j)
            # |Q(Psi)|^2 = g^2 b^{|j| - 2J} / N^2
            acc += mp.mpf(b) ** (-2 * alpha * nu) * mp.mpf(g2) * mp.mpf(b) ** (nu - 2 * J) / N ** 2
    return mp.sqrt(acc)


def mock_vdc22():
    """Exact Haar norm (b=2, alpha=1, p=q=2) of the mock function of vdc(2,2)."""
    m, b = 3, 2
    pts = [radical_inverse(n, 2, 2) for n in range(4)]
    occupied = {math.floor(x * b ** m) for x in pts}
    f = [0 if c in occupied else 1 for c in range(b ** m)]
    integral = Fraction(sum(f), b ** m)
    norm2 = integral ** 2
    for j in range(1, m + 1):
        block = Fraction(0)
        for k in range(b ** (j - 1)):
            for i in range(b):
                # coefficient = b^{j/2-1} * F, F = sum over level-m cells in E^{j-1}_k of vol f (b [child=i] - 1)
                F = Fraction(0)
                for c in range(b ** m):
                    if c // b ** (m - j + 1) != k:
                        continue
                    child = (c // b ** (m - j)) % b
                    F += Fraction(f[c], b ** m) * ((b if child == i else 0) - 1)
                block += F * F * Fraction(b ** j, b ** 2)
        norm2 += Fraction(b ** (2 * j)) * block
    return integral, norm2


def main():
    print("kernel C")
    for a, x, y in [(0.75, 0.3, 0.7), (0.75, 0.9, 0.2), (0.6, 0.4, 0.45), (0.75, 0.5, 0.5 + 1e-6), (0.9, 1.0, 0.25)]:
        print(f"  alpha={a} x={x} y={y}: {mp.nstr(kernel_c(a, mp.mpf(x), mp.mpf(y)), 20)}")
    print("kernel B")
    for a, x in [(0.75, 0.3), (0.6, 0.9), (0.75, 1.0), (0.9, 0.05)]:
        print(f"  alpha={a} x={x}: {mp.nstr(kernel_b(a, mp.mpf(x)), 20)}")

    print("frac_integral cos, alpha=0.6, x=0.7:",
          mp.nstr(mp.quad(lambda t: mp.cos(t) * (mp.mpf(0.7) - t) ** (mp.mpf(0.6) - 1), [0, 0.7]) / mp.gamma(0.6), 20))

    vdc3 = [radical_inverse(n, 2, 3) for n in range(8)]
    print("D* 1D vdc(2,3) alpha=0.75 direct:", mp.nstr(disc_1d(0.75, vdc3), 20))
    # At alpha = 0.6 the squared integrand has (x-t)^-0.8 endpoint singularities
    # and tanh-sinh loses about 9 digits; the Warnock value is the reference.
    print("D* 1D vdc(2,3) alpha=0.6 warnock-mp:", mp.nstr(warnock_mp(0.6, [[p] for p in vdc3]), 20))
    print("D* 1D vdc(2,3) alpha=0.75 warnock-mp:", mp.nstr(warnock_mp(0.75, [[p] for p in vdc3]), 20))
    f232 = faure_points(2, 3, 2)
    print("faure(2,3,2):", [[str(v) for v in p] for p in f232])
    print("D* faure(2,3,2) alpha=0.75 warnock-mp:", mp.nstr(warnock_mp(0.75, f232), 20))

    nodes, weights = roots_jacobi(5, -0.4, 0.3)
    print("gauss-jacobi n=5 a=-0.4 b=0.3 nodes:", [repr(float(v)) for v in nodes])
    print("  weights:", [repr(float(v)) for v in weights])

    vdc2 = [[radical_inverse(n, 2, 2)] for n in range(4)]
    print("truncated dual vdc(2,2) alpha=1 p=q=2 jmax=5:", mp.nstr(truncated_dual_22(vdc2, 2, 1.0, 5), 20))
    print("truncated dual faure(2,3,2) alpha=0.75 p=q=2 jmax=7:", mp.nstr(truncated_dual_22(f232, 2, 0.75, 7), 20))
    f322 = faure_points(3, 2, 2)
    print("truncated dual faure(3,2,2) alpha=1 p=q=2 jmax=5:", mp.nstr(truncated_dual_22(f322, 3, 1.0, 5), 20))

    integral, norm2 = mock_vdc22()
    print("mock vdc(2,2): integral", integral, "norm^2", norm2,
          "bound", mp.nstr(mp.mpf(integral.numerator) / integral.denominator / mp.sqrt(mp.mpf(norm2.numerator) / norm2.denominator), 20))


if __name__ == "__main__":
    main()
