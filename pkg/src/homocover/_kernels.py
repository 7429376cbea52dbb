"""Compiled inner loops.  Callers validate and normalize inputs."""

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def _pencil_best(P, w, base, L, R):
    """Best weighted count over t in the open interval (L, R).

    Row p of P is (threshold, sign): sign +1 means inside for t >= threshold,
    -1 means inside for t <= threshold.
    """
    n = P.shape[0]
    npl = 0
    nmi = 0
    for i in range(n):
        if P[i, 1] > 0:
            npl += 1
        else:
            nmi += 1
    plus = np.empty(npl)
    wplus = np.empty(npl)
    minus = np.empty(nmi)
    wminus = np.empty(nmi)
    a = 0
    b = 0
    for i in range(n):
        if P[i, 1] > 0:
            plus[a] = P[i, 0]
            wplus[a] = w[i]
            a += 1
        else:
            minus[b] = P[i, 0]
            wminus[b] = w[i]
            b += 1
    op = np.argsort(plus)
    om = np.argsort(minus)
    plus = plus[op]
    wplus = wplus[op]
    minus = minus[om]
    wminus = wminus[om]
    cp = np.zeros(npl + 1)
    for i in range(npl):
        cp[i + 1] = cp[i] + wplus[i]
    cm = np.zeros(nmi + 1)
    for i in range(nmi):
        cm[i + 1] = cm[i] + wminus[i]
    tot_m = cm[nmi]

    best = -1.0
    best_t = 0.0
    # limit just above L
    c = base + cp[np.searchsorted(plus, L, side="right")] + tot_m - cm[np.searchsorted(minus, L, side="right")]
    if c > best:
        best = c
        best_t = L
    # limit just below R
    c = base + cp[np.searchsorted(plus, R, side="left")] + tot_m - cm[np.searchsorted(minus, R, side="left")]
    if c > best:
        best = c
        best_t = R
    for i in range(n):
        t = P[i, 0]
        if t > L and t < R:
            c = base + cp[np.searchsorted(plus, t, side="right")] + tot_m - cm[np.searchsorted(minus, t, side="left")]
            if c > best:
                best = c
                best_t = t
    # move a limit witness strictly inside the interval, before the next breakpoint
    if best_t == L or best_t == R:
        lo = L
        hi = R
        for i in range(n):
            t = P[i, 0]
            if best_t == L and t > L and t < hi:
                hi = t
            if best_t == R and t < R and t > lo:
                lo = t
        if best_t == L:
            if L == -INF and hi == INF:
                best_t = 0.0
            elif L == -INF:
                best_t = hi - 1.0 - abs(hi)
            elif hi == INF:
                best_t = L + 1.0 + abs(L)
            else:
                best_t = 0.5 * (L + hi)
        else:
            if R == INF and lo == -INF:
                best_t = 0.0
            elif R == INF:
                best_t = lo + 1.0 + abs(lo)
            elif lo == -INF:
                best_t = R - 1.0 - abs(R)
            else:
                best_t = 0.5 * (lo + R)
    return best, best_t


@njit(cache=True)
def disk_pencil_search(S, wS, W, m):
    """Search disks through two S locations for a W-free disk holding >= m weight of S.

    Returns (count, i, j, t); the disk has center mid + t*perp(b - a)/|b - a|.
    """
    ns = S.shape[0]
    nw = W.shape[0]
    P = np.empty((ns, 2))
    wp = np.empty(ns)
    best = -1.0
    bi = -1
    bj = -1
    bt = 0.0
    for i in range(ns):
        for j in range(i + 1, ns):
            ax = S[i, 0]
            ay = S[i, 1]
            bx = S[j, 0]
            by = S[j, 1]
            mx = 0.5 * (ax + bx)
            my = 0.5 * (ay + by)
            dx = bx - ax
            dy = by - ay
            ln = np.sqrt(dx * dx + dy * dy)
            nx = -dy / ln
            ny = dx / ln
            h2 = 0.25 * ln * ln
            L = -INF
            R = INF
            ok = True
            for k in range(nw):
                if (W[k, 0] == ax and W[k, 1] == ay) or (W[k, 0] == bx and W[k, 1] == by):
                    ok = False
                    break
                px = W[k, 0] - mx
                py = W[k, 1] - my
                y = px * nx + py * ny
                q = px * px + py * py - h2
                if y == 0.0:
                    if q <= 0.0:
                        ok = False
                        break
                elif y > 0.0:
                    t = q / (2.0 * y)
                    if t < R:
                        R = t
                else:
                    t = q / (2.0 * y)
                    if t > L:
                        L = t
            if not ok or not L < R:
                continue
            base = wS[i] + wS[j]
            c = 0
            for k in range(ns):
                if k == i or k == j:
                    continue
                px = S[k, 0] - mx
                py = S[k, 1] - my
                y = px * nx + py * ny
                q = px * px + py * py - h2
                if y == 0.0:
                    if q <= 0.0:
                        base += wS[k]
                else:
                    P[c, 0] = q / (2.0 * y)
                    P[c, 1] = 1.0 if y > 0.0 else -1.0
                    wp[c] = wS[k]
                    c += 1
            cnt, t = _pencil_best(P[:c], wp[:c], base, L, R)
            if cnt > best:
                best = cnt
                bi = i
                bj = j
                bt = t
                if best >= m:
                    return best, bi, bj, bt
    return best, bi, bj, bt


@njit(cache=True)
def _window_sweep(lo, hi, ws, wlo, whi, ylo, yhi):
    """Max weight of closed intervals [lo, hi] stabbed by some y in [ylo, yhi]
    lying outside every closed interval [wlo, whi].  Returns (weight, y)."""
    ns = lo.shape[0]
    nw = wlo.shape[0]
    ne = 2 * ns + 2 * nw + 2
    coord = np.empty(ne)
    kind = np.empty(ne, dtype=np.int64)
    wt = np.zeros(ne)
    c = 0
    for k in range(ns):
        coord[c] = lo[k]
        kind[c] = 0
        wt[c] = ws[k]
        coord[c + 1] = hi[k]
        kind[c + 1] = 1
        wt[c + 1] = ws[k]
        c += 2
    for k in range(nw):
        coord[c] = wlo[k]
        kind[c] = 2
        coord[c + 1] = whi[k]
        kind[c + 1] = 3
        c += 2
    coord[c] = ylo
    kind[c] = 4
    coord[c + 1] = yhi
    kind[c + 1] = 4
    order = np.argsort(coord)
    cov = 0.0
    blk = 0
    best = -1.0
    best_y = 0.0
    k = 0
    while k < ne:
        y = coord[order[k]]
        q = k
        while q < ne and coord[order[q]] == y:
            e = order[q]
            if kind[e] == 0:
                cov += wt[e]
            elif kind[e] == 2:
                blk += 1
            q += 1
        if blk == 0 and y >= ylo and y <= yhi and cov > best:
            best = cov
            best_y = y
        for r in range(k, q):
            e = order[r]
            if kind[e] == 1:
                cov -= wt[e]
            elif kind[e] == 3:
                blk -= 1
        if q < ne:
            ynext = coord[order[q]]
            if blk == 0 and y >= ylo and ynext <= yhi and cov > best:
                best = cov
                best_y = 0.5 * (y + ynext)
        k = q
    return best, best_y


@njit(cache=True)
def square_slide_search(S, wS, W, m):
    """Squares whose x-extent is spanned by two S locations i, j and which contain both.

    S and W must be sorted by x.  Returns (count, i, j, y0) for the square
    [x_i, x_j] x [y0, y0 + x_j - x_i].
    """
    ns = S.shape[0]
    best = -1.0
    bi = -1
    bj = -1
    by0 = 0.0
    lo = np.empty(ns)
    hi = np.empty(ns)
    ws = np.empty(ns)
    wlo = np.empty(W.shape[0])
    whi = np.empty(W.shape[0])
    wx = W[:, 0].copy()
    for i in range(ns):
        x0 = S[i, 0]
        w0 = np.searchsorted(wx, x0, side="left")
        for j in range(i + 1, ns):
            x1 = S[j, 0]
            ell = x1 - x0
            if ell <= 0.0:
                continue
            ya = min(S[i, 1], S[j, 1])
            yb = max(S[i, 1], S[j, 1])
            ylo = yb - ell
            yhi = ya
            if ylo > yhi:
                continue
            w1 = np.searchsorted(wx, x1, side="right")
            # every candidate square contains the bounding box of i and j
            hit = False
            for k in range(w0, w1):
                if W[k, 1] >= ya and W[k, 1] <= yb:
                    hit = True
                    break
            if hit:
                continue
            c = 0
            tot = 0.0
            for k in range(i, ns):
                if S[k, 0] > x1:
                    break
                if S[k, 1] >= ylo and S[k, 1] - ell <= yhi:
                    lo[c] = S[k, 1] - ell
                    hi[c] = S[k, 1]
                    ws[c] = wS[k]
                    tot += wS[k]
                    c += 1
            if tot < m:
                continue
            cw = 0
            for k in range(w0, w1):
                if W[k, 1] >= ylo and W[k, 1] - ell <= yhi:
                    wlo[cw] = W[k, 1] - ell
                    whi[cw] = W[k, 1]
                    cw += 1
            cnt, y0 = _window_sweep(lo[:c], hi[:c], ws[:c], wlo[:cw], whi[:cw], ylo, yhi)
            if cnt > best:
                best = cnt
                bi = i
                bj = j
                by0 = y0
                if best >= m:
                    return best, bi, bj, by0
    return best, bi, bj, by0


@njit(cache=True)
def polygon_pencil_edge(a, b, others, V, N, H, steps, eps):
    """Sweep chords of the polygon parallel to b - a; return (found, scale, cx, cy) of an empty homothet."""
    ux = b[0] - a[0]
    uy = b[1] - a[1]
    ln = np.sqrt(ux * ux + uy * uy)
    ux /= ln
    uy /= ln
    nx = -uy
    ny = ux
    nv = V.shape[0]
    smin = INF
    smax = -INF
    for k in range(nv):
        s = V[k, 0] * nx + V[k, 1] * ny
        if s < smin:
            smin = s
        if s > smax:
            smax = s
    for st in range(steps):
        s = smin + (smax - smin) * (st + 0.5) / steps
        zx = s * nx
        zy = s * ny
        t0 = -INF
        t1 = INF
        for e in range(nv):
            den = N[e, 0] * ux + N[e, 1] * uy
            num = H[e] - (N[e, 0] * zx + N[e, 1] * zy)
            if den > 1e-15:
                t = num / den
                if t < t1:
                    t1 = t
            elif den < -1e-15:
                t = num / den
                if t > t0:
                    t0 = t
        if not t1 > t0:
            continue
        lam = ln / (t1 - t0)
        cx = a[0] - lam * (zx + t0 * ux)
        cy = a[1] - lam * (zy + t0 * uy)
        empty = True
        for k in range(others.shape[0]):
            px = others[k, 0] - cx
            py = others[k, 1] - cy
            g = 0.0
            for e in range(nv):
                v = (N[e, 0] * px + N[e, 1] * py) / H[e]
                if v > g:
                    g = v
            if g <= lam + eps * (1.0 + lam):
                empty = False
                break
        if empty:
            return True, lam, cx, cy
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def max_depth_translates(P, V, N, H, lam, m, ptr, nbr):
    """Deepest point of the union of translates P[j] - lam*Z (Z given by V, N, H).

    Only translates listed in nbr[ptr[i]:ptr[i+1]] are tested against translate i.
    Returns (depth, x, y).  Stops early once depth >= m.
    """
    n = P.shape[0]
    nv = V.shape[0]
    best = 0
    bx = 0.0
    by = 0.0
    if n == 0:
        return 0, 0.0, 0.0
    bx = P[0, 0]
    by = P[0, 1]
    best = 1
    ts = np.empty(2 * n)
    ev = np.empty(2 * n)
    for i in range(n):
        for e in range(nv):
            # edge of P[i] - lam*Z running from -lam*V[e] to -lam*V[e+1]
            e2 = (e + 1) % nv
            ax = P[i, 0] - lam * V[e, 0]
            ay = P[i, 1] - lam * V[e, 1]
            dx = (P[i, 0] - lam * V[e2, 0]) - ax
            dy = (P[i, 1] - lam * V[e2, 1]) - ay
            c = 0
            for jj in range(ptr[i], ptr[i + 1]):
                j = nbr[jj]
                if j == i:
                    continue
                t0 = 0.0
                t1 = 1.0
                for f in range(nv):
                    # -N[f].(x - P[j]) <= lam*H[f]
                    den = -(N[f, 0] * dx + N[f, 1] * dy)
                    num = lam * H[f] + (N[f, 0] * (ax - P[j, 0]) + N[f, 1] * (ay - P[j, 1]))
                    slack = 1e-12 * (1.0 + lam)
                    if den > 0.0:
                        t = (num + slack) / den
                        if t < t1:
                            t1 = t
                    elif den < 0.0:
                        t = (num + slack) / den
                        if t > t0:
                            t0 = t
                    elif num < -slack:
                        t1 = -1.0
                if t0 <= t1:
                    ts[c] = t0
                    ev[c] = 0.0
                    ts[c + 1] = t1
                    ev[c + 1] = 1.0
                    c += 2
            if c == 0:
                continue
            # closed intervals: all starts at a tie are counted before the ends
            order = np.argsort(ts[:c])
            srt_t = ts[:c][order]
            srt_e = ev[:c][order]
            k = 0
            depth = 1
            while k < c:
                t = srt_t[k]
                q = k
                while q < c and srt_t[q] == t:
                    if srt_e[q] == 0.0:
                        depth += 1
                    q += 1
                if depth > best:
                    best = depth
                    bx = ax + t * dx
                    by = ay + t * dy
                    if best >= m:
                        return best, bx, by
                q2 = k
                while q2 < q:
                    if srt_e[q2] == 1.0:
                        depth -= 1
                    q2 += 1
                k = q
    return best, bx, by
