"""Pure-Python reference kernels, used when the compiled module is missing."""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def _max_gap(a: list[float]) -> float:
    n = len(a)
    if n < 2:
        return TWO_PI
    best = a[0] + TWO_PI - a[-1]
    for i in range(1, n):
        g = a[i] - a[i - 1]
        if g > best:
            best = g
    return best


def max_gap(angles) -> float:
    return _max_gap(list(angles))


def discover_count(levels, angles, alpha: float, tol: float, min_level: int):
    lv = [int(x) for x in levels]
    an = [float(x) for x in angles]
    n = len(lv)
    if n == 0:
        return 0, -1
    buf: list[float] = []
    i = 0
    while i < n:
        lvl = max(lv[i], min_level)
        while i < n and max(lv[i], min_level) == lvl:
            x = an[i]
            k = len(buf)
            buf.append(x)
            while k > 0 and buf[k - 1] > x:
                buf[k] = buf[k - 1]
                k -= 1
            buf[k] = x
            i += 1
        if _max_gap(buf) <= alpha + tol:
            return len(buf), lvl
    return n, -1


def _angdist(a: float, b: float) -> float:
    d = math.fmod(abs(a - b), TWO_PI)
    return TWO_PI - d if d > math.pi else d


def redundant_flags(angles, lengths, his, los, limit: float):
    an = [float(x) for x in angles]
    eids = list(zip((float(x) for x in lengths), (int(x) for x in his), (int(x) for x in los)))
    n = len(an)
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            if i != j and _angdist(an[i], an[j]) < limit and eids[j] < eids[i]:
                out[i] = 1
                break
    return out
