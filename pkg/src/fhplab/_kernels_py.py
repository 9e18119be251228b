"""Pure-Python kernels; fallback mirror of the optional compiled module.

Member sets are bitmasks (arbitrary-size ints) over a ground set of
`ground_size` elements.  `ground_size` is part of every signature so the
compiled twin can size its word buffers; the pure versions rely on Python
int arithmetic instead.
"""


def count_intersecting_pairs(masks, ground_size):
    n = len(masks)
    total = 0
    for i in range(n):
        mi = masks[i]
        if not mi:
            continue
        for j in range(i + 1, n):
            if mi & masks[j]:
                total += 1
    return total


def count_intersecting_triples(masks, ground_size):
    n = len(masks)
    total = 0
    for i in range(n):
        mi = masks[i]
        if not mi:
            continue
        for j in range(i + 1, n):
            a = mi & masks[j]
            if not a:
                continue
            for t in range(j + 1, n):
                if a & masks[t]:
                    total += 1
    return total


def count_intersecting_k(masks, ground_size, k):
    """Number of k-element index subsets whose masks have a common bit.

    A branch dies as soon as its running AND hits zero; no superset can
    revive it.
    """
    n = len(masks)
    if k == 1:
        return sum(1 for m in masks if m)
    if k == 2:
        return count_intersecting_pairs(masks, ground_size)
    if k == 3:
        return count_intersecting_triples(masks, ground_size)

    total = 0

    def rec(start, depth, acc):
        nonlocal total
        need = k - depth
        for i in range(start, n - need + 1):
            a = acc & masks[i]
            if a:
                if need == 1:
                    total += 1
                else:
                    rec(i + 1, depth + 1, a)

    rec(0, 0, (1 << ground_size) - 1)
    return total


def depth_counts(masks, ground_size):
    """Per ground element, the number of masks whose bit is set."""
    counts = [0] * ground_size
    for m in masks:
        while m:
            low = m & -m
            counts[low.bit_length() - 1] += 1
            m ^= low
    return counts
