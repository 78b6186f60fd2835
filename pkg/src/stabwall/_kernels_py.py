"""Pure-Python reference implementation of the integer kernels.

Both kernels work on machine-sized integers only; the compiled module
``stabwall._kernels`` implements the same two functions.
"""

from __future__ import annotations

from itertools import product


def closed_subsets(succ: list[int]) -> list[int]:
    """All subsets (as bitmasks) closed under ``i -> succ[i]``.

    ``succ[i]`` is the bitmask of vectors hit by arrows out of vector ``i``.
    Vectors must be ordered so that every successor has a smaller index.
    """
    n = len(succ)
    out: list[int] = []
    stack = [(0, 0)]
    while stack:
        i, mask = stack.pop()
        if i == n:
            out.append(mask)
            continue
        stack.append((i + 1, mask))
        if succ[i] & ~mask == 0:
            stack.append((i + 1, mask | (1 << i)))
    return out


def _taylor_shift(c: list[int], a: int) -> list[int]:
    """Coefficients of ``p(t + a)``."""
    c = list(c)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]
    return c


def _descartes_unit(c: list[int]) -> int:
    """Sign variations of ``(1+y)^d p(1/(1+y))``: a bound on roots in ``(0, 1)``."""
    rev = list(reversed(c))
    shifted = _taylor_shift(rev, 1)
    prev, count = 0, 0
    for x in shifted:
        if x:
            s = 1 if x > 0 else -1
            if prev and s != prev:
                count += 1
            prev = s
    return count


def box_wall_screen(parent: list[int], cubics: list[list[int]], shift: int) -> list[tuple]:
    """Slope-equality polynomials for every sub-box vector, pre-screened on a unit window.

    ``cubics[i]`` holds the integer coefficients (ascending) of ``6*chi_t`` of the
    ``i``-th signed generator, so ``6*chi_t(d) = sum_i d[i] * cubics[i]``.
    For each ``d`` with ``0 <= d <= parent`` (excluding 0 and parent) the
    polynomial ``W = chi'(d) chi(P) - chi(d) chi'(P)`` (times 36) is formed and
    kept only if it may vanish on ``(shift, shift + 1]``. Returns tuples
    ``(d, W coefficients, descartes bound, vanishes at right end)``; a zero
    ``W`` is reported with bound ``-1``.
    """
    def combo(d):
        return [sum(d[i] * cubics[i][k] for i in range(4)) for k in range(4)]

    P = combo(parent)
    dP = [P[1], 2 * P[2], 3 * P[3]]
    out = []
    for d in product(*(range(a + 1) for a in parent)):
        if not any(d) or list(d) == list(parent):
            continue
        S = combo(d)
        dS = [S[1], 2 * S[2], 3 * S[3]]
        W = [0] * 6
        for i in range(3):
            for j in range(4):
                W[i + j] += dS[i] * P[j] - S[j] * dP[i]
        while len(W) > 1 and W[-1] == 0:
            W.pop()
        if len(W) == 1 and W[0] == 0:
            out.append((tuple(d), (0,), -1, False))
            continue
        loc = _taylor_shift(W, shift)
        right = sum(loc)  # value at t = shift + 1
        bound = _descartes_unit(loc)
        if bound or right == 0:
            out.append((tuple(d), tuple(W), bound, right == 0))
    return out
