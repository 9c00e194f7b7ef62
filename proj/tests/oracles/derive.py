#!/usr/bin/env python3
"""Independent reference values for the C++ test-suite.

Everything here is written from the definitions, without looking at the C++ code paths:
power paths by window enumeration, gadgets from their set-builder form, density exponents
by max-closure min cuts (a different algorithm from both C++ engines), Hamilton power
cycles by permutation brute force. Run it and compare with the constants frozen in tests/; `--golden DIR` rewrites the
gadget snapshot files from the listed example edge sets.
"""
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
import json
import sys

import networkx as nx


def power_path_edges(k, r, seq):
    w = k + r - 1
    out = set()
    for s in range(len(seq) - w + 1):
        out |= {frozenset(c) for c in combinations(seq[s:s + w], k)}
    return out


def power_cycle_edges(k, r, seq):
    w = k + r - 1
    n = len(seq)
    out = set()
    for s in range(n):
        out |= {frozenset(c) for c in combinations([seq[(s + t) % n] for t in range(w)], k)}
    return out


def g_formula(k, r, b):
    return comb(k + r - 1, k) + (b - (k + r - 1)) * comb(k + r - 2, k - 1)


def absorber(k, r):
    """Positions: v_1..v_h -> 0..h-1, v -> h, v_{h+1}..v_{2h} -> h+1..2h."""
    h = k + r - 2
    tup = [t if t < h else t + 1 for t in range(2 * h)]
    v = h
    e1 = power_path_edges(k, r, tup)
    full = power_path_edges(k, r, list(range(2 * h + 1)))
    link_path = {frozenset([v] + tup[j:j + k - 1]) for j in range(k + 2 * r - 2)}
    e2 = {e for e in full if v in e} - link_path
    return 2 * h + 1, e1 | e2, {v}, e1, e2


def absorber_example_32():
    """Example listing for k=3, r=2 with V(A) = (v1, v2, v3, v, v4, v5, v6)."""
    pos = {1: 0, 2: 1, 3: 2, 4: 4, 5: 5, 6: 6}
    v = 3
    e = {frozenset([pos[i], pos[i + 1], pos[i + 2]]) for i in range(1, 5)}
    e |= {frozenset([pos[i], pos[i + j], pos[i + 3]]) for i in range(1, 4) for j in (1, 2)}
    e1 = set(e)
    e2 = {frozenset([v, pos[i], pos[i + 2]]) for i in range(1, 5)}
    return e1 | e2, e1, e2


def connector_example_32(b):
    """Example listing for k=3, r=2: v_{i-3} := w_i, v_{b+4-j} := u_j; v_i sits at position i+2."""
    p = lambda i: i + 2
    e = {frozenset([p(i), p(i + j), p(i + 3)]) for i in range(-2, b + 1) for j in (1, 2)}
    e |= {frozenset([p(b // 2 - 1), p(b // 2), p(b // 2 + 1)]), frozenset([p(b // 2), p(b // 2 + 1), p(b // 2 + 2)])}
    return e


def connector(k, r, b):
    h = k + r - 2
    size = 2 * h + b
    order = list(range(size))
    full = power_path_edges(k, r, order)

    def tight(seq):
        return {frozenset(seq[s:s + k]) for s in range(len(seq) - k + 1)}

    removed = tight(order[:h + b // 2]) | tight(order[h + b // 2:])
    w1, w2 = set(order[:h]), set(order[h + b:])
    keep = {e for e in full - removed if not (e <= w1 or e <= w2)}
    return size, keep, w1 | w2


def min_exponent_cut(size, edges, roots, x):
    """min over vertex sets U spanning >= 1 edge of |U \\ W| - x e[U], via one max-closure
    min cut per forced edge. Returns (value, v, e, roots_in)."""
    p, q = x.numerator, x.denominator
    edges = [tuple(sorted(e)) for e in edges]
    best = None
    big = 10 ** 12
    for forced in edges:
        gr = nx.DiGraph()
        for i, e in enumerate(edges):
            gr.add_edge("s", ("e", i), capacity=p)
            for v in e:
                gr.add_edge(("e", i), ("v", v), capacity=big)
        for v in range(size):
            gr.add_edge(("v", v), "t", capacity=0 if v in roots else q)
        for v in forced:
            gr.add_edge("s", ("v", v), capacity=big)
        _, (src_side, _) = nx.minimum_cut(gr, "s", "t")
        chosen = {n[1] for n in src_side if isinstance(n, tuple) and n[0] == "v"}
        chosen |= set(forced)
        e_u = sum(1 for e in edges if set(e) <= chosen)
        nonroot = len(chosen - roots)
        val = Fraction(nonroot) - x * e_u
        cand = (val, len(chosen), e_u, len(chosen & roots))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def min_exponent_brute(size, edges, roots, x):
    edges = [frozenset(e) for e in edges]
    best = None
    for mask in range(1, 1 << size):
        u = {i for i in range(size) if mask >> i & 1}
        e_u = sum(1 for e in edges if e <= u)
        if e_u == 0:
            continue
        val = Fraction(len(u - roots)) - x * e_u
        if best is None or val < best:
            best = val
    return best


def has_power_ham_cycle(n, k, r, edges):
    es = {frozenset(e) for e in edges}
    for perm in permutations(range(1, n)):
        seq = (0,) + perm
        if n >= 3 and seq[1] > seq[-1]:
            continue
        if power_cycle_edges(k, r, list(seq)) <= es:
            return True
    return False


def write_golden(directory):
    def dump(path, size, edges, roots):
        with open(path, "w") as f:
            f.write(f"{size} 3\n")
            for e in sorted(sorted(x) for x in edges):
                f.write(" ".join(map(str, e)) + "\n")
            f.write("# roots: " + " ".join(map(str, roots)) + "\n")

    all_edges, _, _ = absorber_example_32()
    dump(f"{directory}/absorber_3_2.txt", 7, all_edges, [3])
    dump(f"{directory}/connector_3_2_6.txt", 12, connector_example_32(6), [0, 1, 2, 9, 10, 11])


def main():
    if len(sys.argv) == 3 and sys.argv[1] == "--golden":
        write_golden(sys.argv[2])
        return
    out = {}
    k5 = [frozenset(c) for c in combinations(range(5), 3)]
    minus = [e for e in k5 if e != frozenset({0, 1, 2})]
    out["degree_into_K5_minus_012"] = sum(1 for e in minus if {0, 1} <= e and (e - {0, 1}) <= {2, 3, 4})
    out["min_codegree_K5_minus_edge"] = min(sum(1 for e in minus if set(s) <= e) for s in combinations(range(5), 2))
    out["link_K5_minus_012_v0"] = sorted(sorted(e - {0}) for e in minus if 0 in e)
    out["g_3_2_12"] = g_formula(3, 2, 12)
    out["g_table"] = {f"{k},{r},{b}": len(power_path_edges(k, r, list(range(b))))
                      for k, r in [(3, 2), (3, 3), (4, 2), (5, 2)] for b in range(k + r - 1, 15)}
    assert all(v == g_formula(*map(int, key.split(","))) for key, v in out["g_table"].items())
    out["cycle_3_2_n5"] = len(power_cycle_edges(3, 2, list(range(5))))
    out["cycle_3_2_n8"] = len(power_cycle_edges(3, 2, list(range(8))))

    ex_all, ex1, ex2 = absorber_example_32()
    size, e, roots, e1, e2 = absorber(3, 2)
    assert e == ex_all and e1 == ex1 and e2 == ex2, "absorber definition vs listed example"
    out["absorber_3_2_edges"] = sorted(sorted(x) for x in e)
    out["absorber_root_degree"] = {}
    for k, r in [(3, 2), (3, 3), (4, 2), (5, 2)]:
        size, e, roots, _, _ = absorber(k, r)
        v = next(iter(roots))
        out["absorber_root_degree"][f"{k},{r}"] = sum(1 for x in e if v in x)
    cs, ce, croots = connector(3, 2, 6)
    assert ce == connector_example_32(6), "connector definition vs listed example"
    for b in (4, 8, 10, 12):
        assert connector(3, 2, b)[1] == connector_example_32(b)
    out["connector_3_2_6_edges"] = sorted(sorted(x) for x in ce)

    phi = {}
    third = Fraction(1, 3)
    for name, (size, e, roots) in {
        "A32": absorber(3, 2)[:3],
        "A33": absorber(3, 3)[:3],
        "F32b6": connector(3, 2, 6),
        "F32b8": connector(3, 2, 8),
        "F32b10": connector(3, 2, 10),
    }.items():
        for x in (third, third + Fraction(1, 1000)):
            val, v, ecount, rin = min_exponent_cut(size, e, roots, x)
            if size <= 16:
                assert val == min_exponent_brute(size, e, roots, x), (name, x)
            phi[f"{name}@{x}"] = str(val)
    out["phi"] = phi

    def sigma(k, r):
        return Fraction(1, comb(k + r - 2, k - 1))

    lem = {}
    for k, r in [(3, 2), (3, 3), (4, 2)]:
        h = k + r - 2
        glen = g_formula(k, r, 2 * k + 2 * r - 3)
        eps = Fraction(1, 4 * glen) * min(Fraction(2, k * (k + 1)), Fraction(k + 2, comb(h, k - 1)))
        size, e, roots, _, _ = absorber(k, r)
        x = sigma(k, r) + eps
        rooted = min_exponent_cut(size, e, roots, x)[0]
        unrooted = min_exponent_cut(size, [y for y in e if not (y & roots)], set(), x)[0]
        lem[f"A{k}{r}"] = {"eps": str(eps), "rooted": str(rooted), "unrooted": str(unrooted)}
    b = (3 + 2) ** 2 * 3
    b += b % 2
    eps = Fraction(1, 3 * b * 9)
    size, e, roots = connector(3, 2, b)
    x = sigma(3, 2) + eps
    rooted = min_exponent_cut(size, e, roots, x)[0]
    unrooted = min_exponent_cut(size, [y for y in e if not (y & roots)], set(), x)[0]
    lem["F32"] = {"b": b, "eps": str(eps), "rooted": str(rooted), "unrooted": str(unrooted)}
    out["lemmas"] = lem

    closed = {f"{k},{r}": k * comb(k + r - 2, k - 1) - (k + 2 * r - 2) for k, r in [(3, 2), (3, 3), (4, 2), (5, 2)]}
    assert closed == out["absorber_root_degree"]
    size, e, roots = connector(3, 2, 6)
    out["connector_3_2_6_removed"] = len(power_path_edges(3, 2, list(range(12)))) - len(e)
    p6 = power_path_edges(3, 2, list(range(6)))
    out["phi_P6_at_1/3"] = str(min_exponent_brute(6, p6, set(), third))
    for b in (6, 8, 10):
        pb = power_path_edges(3, 2, list(range(b)))
        eps = min(Fraction(1, 2 * len(pb)), Fraction(1, 3 * comb(4, 3))) / 2
        out[f"phi_P{b}_prop"] = {"eps": str(eps), "value": str(min_exponent_brute(b, pb, set(), third + eps))}
    size, e, roots = connector(4, 2, 8)
    out["F42b8_rooted_at_bound"] = str(min_exponent_cut(size, e, roots, sigma(4, 2) + Fraction(1, 3 * 8 * 16))[0])
    a_all, a1, a2 = absorber_example_32()
    link = {frozenset([3, p, q]) for p, q in [(0, 1), (1, 2), (2, 4), (4, 5), (5, 6)]}
    full7 = power_path_edges(3, 2, list(range(7)))
    out["absorber_certifies_alone"] = full7 <= a_all
    out["absorber_certifies_with_link"] = full7 <= (a_all | link)
    out["split_rounds_n64_t4"] = 1 - (1 - 64 ** (-1 / 3)) ** 0.25

    k5_none = []
    for drop in k5:
        k5_none.append(has_power_ham_cycle(5, 3, 2, [x for x in k5 if x != drop]))
    out["K5_minus_edge_has_cycle"] = k5_none
    out["intersecting_10_3_4_min_codegree"] = min(
        sum(1 for c in range(10) if c not in s and min(set(s) | {c}) < 4) for s in combinations(range(10), 2))

    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
