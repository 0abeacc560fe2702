#!/usr/bin/env python3
"""Brute-force reference values for the corpus fixtures.

Regenerates data/corpus/fixtures.json from first principles with Python
fractions, independent of the C++ library. Run from the repository root.
"""
import json
from collections import Counter
from fractions import Fraction

MASK = (1 << 64) - 1


def splitmix64(seed):
    state = seed
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def random_subset(rng_range, n, seed):
    gen = splitmix64(seed)
    limit = MASK - MASK % rng_range
    seen, out = set(), []
    while len(out) < n:
        while True:
            x = next(gen)
            if x < limit:
                break
        v = x % rng_range + 1
        if v not in seen:
            seen.add(v)
            out.append(Fraction(v))
    return sorted(out)


def generate(spec):
    if "elements" in spec:
        return sorted(Fraction(e) for e in spec["elements"])
    g, p = spec["generator"], spec.get("params", {})
    n = int(p.get("n", 0))
    if g == "interval":
        return [Fraction(i) for i in range(1, n + 1)]
    if g == "ap":
        a, d = Fraction(p["a"]), Fraction(p["d"])
        return [a + i * d for i in range(n)]
    if g == "gp":
        a, r = Fraction(p["a"]), Fraction(p["r"])
        return [a * r**i for i in range(n)]
    if g == "convex_power":
        return [Fraction(i ** int(p["e"])) for i in range(1, n + 1)]
    if g == "convex_from_gaps":
        out = [Fraction(p.get("start", 1))]
        for gap in p["gaps"]:
            out.append(out[-1] + Fraction(gap))
        return out
    if g == "random_subset":
        return random_subset(int(p["range"]), n, int(p.get("seed", 0)))
    raise ValueError(g)


def energy(counts):
    return sum(c * c for c in counts.values())


def values(a):
    sums = Counter(x + y for x in a for y in a)
    diffs = Counter(x - y for x in a for y in a)
    prods = Counter(x * y for x in a for y in a)
    ratios = Counter(x / y for x in a for y in a)
    out = {
        "size": len(a),
        "sumset_size": len(sums),
        "difference_set_size": len(diffs),
        "product_set_size": len(prods),
        "ratio_set_size": len(ratios),
        "additive_energy": energy(diffs),
        "mult_energy": energy(ratios),
    }
    if len(a) <= 32:
        aa = list(prods)
        out["aa_plus_aa_size"] = len({x + y for x in aa for y in aa})
    return out


ITEMS = [
    {"label": "interval 8", "generator": "interval", "params": {"n": 8}},
    {"label": "interval 32", "generator": "interval", "params": {"n": 32}},
    {"label": "ap 3+7k", "generator": "ap", "params": {"a": "3", "d": "7", "n": 20}},
    {"label": "ap rational", "generator": "ap", "params": {"a": "1/2", "d": "5/3", "n": 16}},
    {"label": "gp 2^k", "generator": "gp", "params": {"a": "1", "r": "2", "n": 16}},
    {"label": "gp (3/2)^k", "generator": "gp", "params": {"a": "1", "r": "3/2", "n": 12}},
    {"label": "squares", "generator": "convex_power", "params": {"n": 24, "e": 2}},
    {"label": "cubes", "generator": "convex_power", "params": {"n": 16, "e": 3}},
    {"label": "gaps", "generator": "convex_from_gaps", "params": {"gaps": ["1", "3/2", "4", "9", "10"]}},
    {"label": "random 20 of 500", "generator": "random_subset", "params": {"range": 500, "n": 20, "seed": 7}},
    {"label": "explicit", "elements": ["1", "3/2", "2", "5", "7/3", "11"]},
]

if __name__ == "__main__":
    items = []
    for spec in ITEMS:
        s = dict(spec)
        s["expect"] = values(generate(spec))
        items.append(s)
    big = range(1, 1025)
    print(json.dumps({"interval_1024_product_set_size": len({x * y for x in big for y in big})}))
    with open("data/corpus/fixtures.json", "w") as f:
        json.dump({"name": "fixtures", "items": items}, f, indent=2)
        f.write("\n")
