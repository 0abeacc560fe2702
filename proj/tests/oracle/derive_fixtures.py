#!/usr/bin/env python3
"""Independent brute-force oracle used to derive the frozen expected values
in the C++ unit tests. Pure Python with fractions.Fraction; shares no code
with the library."""
from fractions import Fraction as F
from collections import Counter
from itertools import product
import math


def rmap(A, B, op):
    c = Counter()
    for a, b in product(A, B):
        c[op(a, b)] += 1
    return c


def E(A, B, s):
    return sum(v ** s for v in rmap(A, B, lambda a, b: a - b).values())


def quad_mult_energy(A):
    return sum(1 for a, b, c, d in product(A, repeat=4) if a * d == b * c)


def clog2(n):
    return (n - 1).bit_length()


def main():
    iv = lambda n: [F(i) for i in range(1, n + 1)]
    print("E2({0,1,2})", E([0, 1, 2], [0, 1, 2], 2), "E3", E([0, 1, 2], [0, 1, 2], 3))
    print("Ex{1,2,4}", quad_mult_energy([1, 2, 4]), "Ex{1,2,3}", quad_mult_energy([1, 2, 3]))
    print("|[4][4]|", len(rmap(iv(4), iv(4), lambda a, b: a * b)))
    print("|[8]/[8]|", len(rmap(iv(8), iv(8), lambda a, b: a / b)))
    print("|[8]+[8]| r>=3", sorted(k for k, v in rmap(iv(8), iv(8), lambda a, b: a + b).items() if v >= 3))
    # choose_N on [16], C=1
    A = iv(16)
    K = F(len(rmap(A, A, lambda a, b: a + b)), 16)
    M = F(len(rmap(A, A, lambda a, b: a * b)), 16)
    print("[16] K", K, "M", M, "N", max(2, math.ceil(K * K * M * clog2(16) / 16)))
    # dominant ratio layer of [16], layers [2^(j-1), 2^j - 1], weight |S| 4^j
    r = rmap(A, A, lambda a, b: a / b)
    layers = Counter()
    for v in r.values():
        layers[v.bit_length()] += 1
    dom = max(sorted(layers), key=lambda j: (layers[j] * 4 ** j, -j))
    Ex = sum(v * v for v in r.values())
    print("[16] Ex", Ex, "layers", dict(sorted(layers.items())), "dominant j", dom, "|S|", layers[dom])
    # dominant difference layer of [16]
    d = rmap(A, A, lambda a, b: a - b)
    dl = Counter()
    for v in d.values():
        dl[v.bit_length()] += 1
    domd = max(sorted(dl), key=lambda j: (dl[j] * 4 ** j, -j))
    print("[16] diff layers", dict(sorted(dl.items())), "dominant j", domd, "|D|", dl[domd], "E2", sum(v*v for v in d.values()))
    # AA, AA+AA of [8]
    A8 = iv(8)
    AA = set(a * b for a, b in product(A8, A8))
    print("[8] |AA|", len(AA), "|AA+AA|", len(set(x + y for x, y in product(AA, AA))), "|A/A|", len(set(a / b for a, b in product(A8, A8))))
    # collinear triples brute force on [3]x[3]
    P = [(x, y) for x in range(1, 4) for y in range(1, 4)]
    def affine_collinear(p, q, s):
        if p[0] == q[0] or p[1] == q[1]:
            return False
        return (q[0] - p[0]) * (s[1] - p[1]) == (q[1] - p[1]) * (s[0] - p[0])
    print("triples [3]", sum(1 for p, q, s in product(P, repeat=3) if len({p, q, s}) == 3 and affine_collinear(p, q, s)))
    # fpms A=[4], Pi1=Pi2=[8], T=4
    A4 = iv(4)
    P8 = iv(8)
    rd = rmap(P8, P8, lambda a, b: a - b)
    print("fpms hyp", [rd[a] for a in A4], "Ex([4])", quad_mult_energy(A4), "rhs", F(8 ** 3 * 8 ** 3 * clog2(8), 4 ** 4))
    # |[1024][1024]| by divisor oracle (different algorithm)
    n = 1024
    cnt = 0
    for m in range(1, n * n + 1):
        lo = -(-m // n)
        d = lo
        top = math.isqrt(m)
        while d <= min(n, top):
            if m % d == 0:
                cnt += 1
                break
            d += 1
    print("|[1024][1024]|", cnt)


if __name__ == "__main__":
    main()
