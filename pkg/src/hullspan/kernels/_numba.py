"""numba-compiled inner loops.  Signatures mirror ``_numpy`` exactly."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _heap_push(keys, vals, size, key, val):
    i = size
    keys[i] = key
    vals[i] = val
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] <= keys[i]:
            break
        keys[parent], keys[i] = keys[i], keys[parent]
        vals[parent], vals[i] = vals[i], vals[parent]
        i = parent
    return size + 1


@njit(cache=True)
def _heap_pop(keys, vals, size):
    key = keys[0]
    val = vals[0]
    size -= 1
    keys[0] = keys[size]
    vals[0] = vals[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        child = left
        if left + 1 < size and keys[left + 1] < keys[left]:
            child = left + 1
        if keys[i] <= keys[child]:
            break
        keys[child], keys[i] = keys[i], keys[child]
        vals[child], vals[i] = vals[i], vals[child]
        i = child
    return key, val, size


@njit(cache=True)
def _dijkstra_row(indptr, indices, weights, source, out):
    n = out.shape[0]
    for v in range(n):
        out[v] = np.inf
    cap = indices.shape[0] + n + 1
    keys = np.empty(cap, dtype=np.float64)
    vals = np.empty(cap, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    out[source] = 0.0
    size = _heap_push(keys, vals, 0, 0.0, source)
    while size > 0:
        d, u, size = _heap_pop(keys, vals, size)
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = d + weights[e]
            if nd < out[v]:
                out[v] = nd
                size = _heap_push(keys, vals, size, nd, v)


@njit(cache=True)
def all_pairs_shortest(indptr, indices, weights, n):
    dist = np.empty((n, n), dtype=np.float64)
    for s in range(n):
        _dijkstra_row(indptr, indices, weights, s, dist[s])
    return dist


@njit(cache=True)
def halving_sweep(cum, pts):
    n = pts.shape[0]
    total = cum[n]
    half = 0.5 * total
    # unit directions of each segment
    dirs = np.empty((n, 2), dtype=np.float64)
    for i in range(n):
        k = (i + 1) % n
        ln = cum[i + 1] - cum[i]
        dirs[i, 0] = (pts[k, 0] - pts[i, 0]) / ln
        dirs[i, 1] = (pts[k, 1] - pts[i, 1]) / ln

    i = 0
    j = 0
    while cum[j + 1] <= half and j < n - 1:
        j += 1

    best = np.inf
    best_s = 0.0
    s = 0.0
    while s < half:
        jj = j % n
        jstart = cum[jj] + (j // n) * total
        jend = jstart + (cum[jj + 1] - cum[jj])
        s_next = min(cum[i + 1], jend - half, half)
        if s_next < s:
            s_next = s
        ax = pts[i, 0] + (s - cum[i]) * dirs[i, 0]
        ay = pts[i, 1] + (s - cum[i]) * dirs[i, 1]
        bx = pts[jj, 0] + (s + half - jstart) * dirs[jj, 0]
        by = pts[jj, 1] + (s + half - jstart) * dirs[jj, 1]
        d0x = bx - ax
        d0y = by - ay
        dvx = dirs[jj, 0] - dirs[i, 0]
        dvy = dirs[jj, 1] - dirs[i, 1]
        span = s_next - s
        dv2 = dvx * dvx + dvy * dvy
        t = 0.0
        if dv2 > 0.0:
            t = -(d0x * dvx + d0y * dvy) / dv2
            if t < 0.0:
                t = 0.0
            elif t > span:
                t = span
        ex = d0x + t * dvx
        ey = d0y + t * dvy
        d2 = ex * ex + ey * ey
        if d2 < best:
            best = d2
            best_s = s + t
        # advance whichever segment(s) end at s_next
        advanced = False
        if cum[i + 1] <= s_next and i < n - 1:
            i += 1
            advanced = True
        if jend - half <= s_next:
            j += 1
            advanced = True
        if s_next >= half or not advanced:
            break
        s = s_next
    return math.sqrt(best), best_s


@njit(cache=True)
def coplanar_search(points, eps):
    n = points.shape[0]
    for i in range(n - 3):
        for j in range(i + 1, n - 2):
            dx = points[j, 0] - points[i, 0]
            dy = points[j, 1] - points[i, 1]
            dz = points[j, 2] - points[i, 2]
            dn = math.sqrt(dx * dx + dy * dy + dz * dz)
            dx /= dn
            dy /= dn
            dz /= dn
            # e1: any unit vector orthogonal to the axis
            if abs(dx) < 0.9:
                ax, ay, az = 1.0, 0.0, 0.0
            else:
                ax, ay, az = 0.0, 1.0, 0.0
            dot = ax * dx + ay * dy + az * dz
            e1x, e1y, e1z = ax - dot * dx, ay - dot * dy, az - dot * dz
            en = math.sqrt(e1x * e1x + e1y * e1y + e1z * e1z)
            e1x /= en
            e1y /= en
            e1z /= en
            e2x = dy * e1z - dz * e1y
            e2y = dz * e1x - dx * e1z
            e2z = dx * e1y - dy * e1x
            m = n - j - 1
            phi = np.empty(m, dtype=np.float64)
            for t in range(m):
                k = j + 1 + t
                vx = points[k, 0] - points[i, 0]
                vy = points[k, 1] - points[i, 1]
                vz = points[k, 2] - points[i, 2]
                vn = math.sqrt(vx * vx + vy * vy + vz * vz)
                pr = vx * dx + vy * dy + vz * dz
                cx, cy, cz = vx - pr * dx, vy - pr * dy, vz - pr * dz
                cn = math.sqrt(cx * cx + cy * cy + cz * cz)
                if cn <= eps * vn:
                    # i, j, k collinear: any fourth point completes a coplanar set
                    other = 0
                    while other == i or other == j or other == k:
                        other += 1
                    return np.array([i, j, k, other])
                a = math.atan2(cx * e2x + cy * e2y + cz * e2z, cx * e1x + cy * e1y + cz * e1z)
                if a < 0.0:
                    a += math.pi
                if a >= math.pi:
                    a -= math.pi
                phi[t] = a
            if m < 2:
                continue
            order = np.argsort(phi)
            for t in range(m - 1):
                if phi[order[t + 1]] - phi[order[t]] <= eps:
                    return np.array([i, j, j + 1 + order[t], j + 1 + order[t + 1]])
            if phi[order[0]] + math.pi - phi[order[m - 1]] <= eps:
                return np.array([i, j, j + 1 + order[0], j + 1 + order[m - 1]])
    return np.array([-1, -1, -1, -1])


@njit(cache=True)
def origin_plane_search(points, eps):
    n = points.shape[0]
    norms = np.empty(n, dtype=np.float64)
    for i in range(n):
        norms[i] = math.sqrt(points[i, 0] ** 2 + points[i, 1] ** 2 + points[i, 2] ** 2)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            cx = points[i, 1] * points[j, 2] - points[i, 2] * points[j, 1]
            cy = points[i, 2] * points[j, 0] - points[i, 0] * points[j, 2]
            cz = points[i, 0] * points[j, 1] - points[i, 1] * points[j, 0]
            nij = norms[i] * norms[j]
            for k in range(j + 1, n):
                det = cx * points[k, 0] + cy * points[k, 1] + cz * points[k, 2]
                if abs(det) <= eps * nij * norms[k]:
                    return np.array([i, j, k])
    return np.array([-1, -1, -1])
