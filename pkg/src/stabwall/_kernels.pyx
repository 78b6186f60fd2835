# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; see ``_kernels_py`` for the reference semantics."""

from libc.stdint cimport int64_t, uint64_t


def closed_subsets(list succ):
    cdef int n = len(succ)
    if n > 62:
        raise ValueError("closed_subsets: at most 62 vectors")
    cdef uint64_t s[62]
    cdef uint64_t stack_mask[64]
    cdef int stack_i[64]
    cdef int top = 0, i
    cdef uint64_t mask
    cdef list out = []
    for i in range(n):
        s[i] = <uint64_t>succ[i]
    stack_i[0] = 0
    stack_mask[0] = 0
    top = 1
    # depth-first: each level either skips vector i or takes it when its targets are present
    while top:
        top -= 1
        i = stack_i[top]
        mask = stack_mask[top]
        while i < n:
            if (s[i] & ~mask) == 0:
                stack_i[top] = i + 1
                stack_mask[top] = mask | ((<uint64_t>1) << i)
                top += 1
            i += 1
        out.append(mask)
    return out


cdef inline void _shift(int64_t* c, int n, int64_t a):
    cdef int i, j
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]


cdef int _descartes_unit(int64_t* c, int n):
    cdef int64_t r[6]
    cdef int i, count = 0, prev = 0, sg
    for i in range(n):
        r[i] = c[n - 1 - i]
    _shift(r, n, 1)
    for i in range(n):
        if r[i]:
            sg = 1 if r[i] > 0 else -1
            if prev and sg != prev:
                count += 1
            prev = sg
    return count


def box_wall_screen(list parent, list cubics, int shift):
    cdef int64_t cub[4][4]
    cdef int64_t P[4]
    cdef int64_t dP[3]
    cdef int64_t S[4]
    cdef int64_t dS[3]
    cdef int64_t W[6]
    cdef int64_t loc[6]
    cdef int64_t right
    cdef int a0, a1, a2, a3, i, j, k, m, bound
    cdef int p0 = parent[0], p1 = parent[1], p2 = parent[2], p3 = parent[3]
    cdef list out = []
    for i in range(4):
        for k in range(4):
            cub[i][k] = cubics[i][k]
    for k in range(4):
        P[k] = p0 * cub[0][k] + p1 * cub[1][k] + p2 * cub[2][k] + p3 * cub[3][k]
    for k in range(3):
        dP[k] = (k + 1) * P[k + 1]
    for a0 in range(p0 + 1):
        for a1 in range(p1 + 1):
            for a2 in range(p2 + 1):
                for a3 in range(p3 + 1):
                    if (a0 | a1 | a2 | a3) == 0:
                        continue
                    if a0 == p0 and a1 == p1 and a2 == p2 and a3 == p3:
                        continue
                    for k in range(4):
                        S[k] = a0 * cub[0][k] + a1 * cub[1][k] + a2 * cub[2][k] + a3 * cub[3][k]
                    for k in range(3):
                        dS[k] = (k + 1) * S[k + 1]
                    for k in range(6):
                        W[k] = 0
                    for i in range(3):
                        for j in range(4):
                            W[i + j] += dS[i] * P[j] - S[j] * dP[i]
                    m = 6
                    while m > 1 and W[m - 1] == 0:
                        m -= 1
                    if m == 1 and W[0] == 0:
                        out.append(((a0, a1, a2, a3), (0,), -1, False))
                        continue
                    for k in range(m):
                        loc[k] = W[k]
                    _shift(loc, m, shift)
                    right = 0
                    for k in range(m):
                        right += loc[k]
                    bound = _descartes_unit(loc, m)
                    if bound or right == 0:
                        out.append(((a0, a1, a2, a3), tuple([W[k] for k in range(m)]), bound, right == 0))
    return out
