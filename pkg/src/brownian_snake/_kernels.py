"""Compiled sweeps over contour-coded trees.

Heights are stored as integer grid units (k), labels as float64 (f).
Every routine walks the contour once while keeping per-depth state on an
explicit stack, so memory stays O(n + depth).
"""
import numba as nb
import numpy as np

from ._rng import normal, uniform

# error codes for check_walk
OK = 0
BAD_START = 1
BAD_END = 2
BAD_STEP = 3
NEGATIVE = 4
SNAKE = 5
NONFINITE = 6


@nb.njit(cache=True)
def check_walk(k, f):
    n = k.shape[0]
    if n == 0:
        return BAD_START, 0
    if k[0] != 0:
        return BAD_START, 0
    if k[n - 1] != 0:
        return BAD_END, n - 1
    maxd = 0
    for i in range(n):
        if not np.isfinite(f[i]):
            return NONFINITE, i
        if k[i] < 0:
            return NEGATIVE, i
        if k[i] > maxd:
            maxd = k[i]
    lab = np.empty(maxd + 1)
    lab[0] = f[0]
    for i in range(1, n):
        step = k[i] - k[i - 1]
        if step == 1:
            lab[k[i]] = f[i]
        elif step == -1:
            if f[i] != lab[k[i]]:
                return SNAKE, i
        else:
            return BAD_STEP, i
    return OK, -1


@nb.njit(cache=True)
def build_tree(k, f):
    n = k.shape[0]
    nv = 1
    maxd = 0
    for i in range(1, n):
        if k[i] > k[i - 1]:
            nv += 1
        if k[i] > maxd:
            maxd = k[i]
    parent = np.empty(nv, np.int64)
    height = np.empty(nv, np.int64)
    label = np.empty(nv)
    first = np.empty(nv, np.int64)
    last = np.empty(nv, np.int64)
    contour = np.empty(n, np.int64)
    stack = np.empty(maxd + 1, np.int64)
    parent[0] = -1
    height[0] = 0
    label[0] = f[0]
    first[0] = 0
    last[0] = 0
    contour[0] = 0
    stack[0] = 0
    nxt = 1
    for i in range(1, n):
        d = k[i]
        if d > k[i - 1]:
            v = nxt
            nxt += 1
            parent[v] = stack[d - 1]
            height[v] = d
            label[v] = f[i]
            first[v] = i
            stack[d] = v
        else:
            v = stack[d]
        contour[i] = v
        last[v] = i
    return parent, height, label, contour, first, last


@nb.njit(cache=True)
def ancestral_min(k, f):
    """Minimum label along the ancestral line, tip included, per index."""
    n = k.shape[0]
    maxd = 0
    for i in range(n):
        if k[i] > maxd:
            maxd = k[i]
    st = np.empty(maxd + 1)
    out = np.empty(n)
    st[0] = f[0]
    out[0] = f[0]
    for i in range(1, n):
        d = k[i]
        if d > k[i - 1]:
            st[d] = min(st[d - 1], f[i])
        out[i] = st[d]
    return out


@nb.njit(cache=True)
def truncate_mask(k, f, y):
    """Indices kept by truncation at y, and which of them are clamped hits."""
    n = k.shape[0]
    maxd = 0
    for i in range(n):
        if k[i] > maxd:
            maxd = k[i]
    status = np.zeros(maxd + 1, np.int8)  # 0 alive, 1 hit, 2 below a hit
    side = np.zeros(maxd + 1, np.int8)
    keep = np.zeros(n, np.bool_)
    clamp = np.zeros(n, np.bool_)
    d0 = f[0] - y
    side[0] = 1 if d0 > 0 else (-1 if d0 < 0 else 0)
    keep[0] = True
    for i in range(1, n):
        d = k[i]
        if d > k[i - 1]:
            p = d - 1
            if status[p] != 0:
                status[d] = 2
                continue
            diff = f[i] - y
            ref = side[p]
            if diff == 0.0:
                status[d] = 1
            elif ref == 0:
                status[d] = 0
                side[d] = 1 if diff > 0 else -1
            elif (diff > 0) != (ref > 0):
                status[d] = 1
            else:
                status[d] = 0
                side[d] = ref
            keep[i] = True
            if status[d] == 1:
                clamp[i] = True
        elif status[d] == 0:
            keep[i] = True
    return keep, clamp


@nb.njit(cache=True)
def reroot(k, f, s):
    n = k.shape[0]
    N = n - 1
    out_k = np.empty(n, np.int64)
    out_f = np.empty(n)
    if N == 0:
        out_k[0] = 0
        out_f[0] = 0.0
        return out_k, out_f
    fwd = np.empty(n, np.int64)
    bwd = np.empty(n, np.int64)
    m = k[s]
    for j in range(s, n):
        if k[j] < m:
            m = k[j]
        fwd[j] = m
    m = k[s]
    for j in range(s, -1, -1):
        if k[j] < m:
            m = k[j]
        bwd[j] = m
    ks = k[s]
    fs = f[s]
    for r in range(n):
        j = s + r
        if j > N:
            j -= N
        mn = fwd[j] if j >= s else bwd[j]
        out_k[r] = k[j] + ks - 2 * mn
        out_f[r] = f[j] - fs
    return out_k, out_f


@nb.njit(cache=True)
def ancestral_labels(k, f, s):
    """Labels of the ancestors of contour index s at heights 0..k[s]."""
    out = np.empty(k[s] + 1)
    rm = k[s]
    out[rm] = f[s]
    for i in range(s - 1, -1, -1):
        if k[i] < rm:
            rm = k[i]
            out[rm] = f[i]
            if rm == 0:
                break
    return out


@nb.njit(cache=True)
def index_components(k, fb):
    """Component id per index for the set {fb > 0}; -1 on the zero set."""
    n = k.shape[0]
    maxd = 0
    for i in range(n):
        if k[i] > maxd:
            maxd = k[i]
    cst = np.full(maxd + 1, -1, np.int64)
    out = np.empty(n, np.int64)
    cst[0] = -1 if not fb[0] > 0 else 0
    ncomp = 1 if fb[0] > 0 else 0
    out[0] = cst[0]
    for i in range(1, n):
        d = k[i]
        if d > k[i - 1]:
            if fb[i] > 0:
                if cst[d - 1] >= 0:
                    cst[d] = cst[d - 1]
                else:
                    cst[d] = ncomp
                    ncomp += 1
            else:
                cst[d] = -1
        out[i] = cst[d]
    return out, ncomp


@nb.njit(cache=True)
def attach_labels(k, inc, start):
    n = k.shape[0]
    maxd = 0
    for i in range(n):
        if k[i] > maxd:
            maxd = k[i]
    lab = np.empty(maxd + 1)
    lab[0] = start
    f = np.empty(n)
    f[0] = start
    j = 0
    for i in range(1, n):
        d = k[i]
        if d > k[i - 1]:
            lab[d] = lab[d - 1] + inc[j]
            j += 1
        f[i] = lab[d]
    return f


@nb.njit(cache=True)
def tree_components(parent, label, contour, eps_b):
    """Connected components of {V > ancestral min} on a preorder tree.

    Returns per-component debut vertex, first child, height, index count and
    the number of indices whose relative label lies in (0, eps_b).
    """
    nv = parent.shape[0]
    m = np.empty(nv)
    vb = np.empty(nv)
    comp = np.full(nv, -1, np.int64)
    debut = np.empty(nv, np.int64)
    child = np.empty(nv, np.int64)
    height = np.zeros(nv)
    m[0] = label[0]
    vb[0] = 0.0
    nc = 0
    for v in range(1, nv):
        p = parent[v]
        m[v] = min(m[p], label[v])
        vb[v] = label[v] - m[v]
        if vb[v] > 0:
            if comp[p] >= 0:
                comp[v] = comp[p]
            else:
                comp[v] = nc
                debut[nc] = p
                child[nc] = v
                nc += 1
            c = comp[v]
            if vb[v] > height[c]:
                height[c] = vb[v]
    size = np.zeros(nc, np.int64)
    bcount = np.zeros(nc, np.int64)
    for i in range(contour.shape[0]):
        c = comp[contour[i]]
        if c >= 0:
            size[c] += 1
            if vb[contour[i]] < eps_b:
                bcount[c] += 1
    return debut[:nc].copy(), child[:nc].copy(), height[:nc].copy(), size, bcount, vb, comp


@nb.njit(cache=True)
def deep_excursion_count(parent, label, y, y_deep):
    """Excursions outside (y, inf) whose minimum reaches y_deep.

    A crossing vertex is the first vertex on its ancestral line with label
    <= y; each of its child subtrees is one excursion started from the exit
    point.  Requires label[0] > y.
    """
    nv = parent.shape[0]
    smin = label.copy()
    for v in range(nv - 1, 0, -1):
        p = parent[v]
        if smin[v] < smin[p]:
            smin[p] = smin[v]
    m = np.empty(nv)
    m[0] = label[0]
    cnt = 0
    for v in range(1, nv):
        p = parent[v]
        m[v] = min(m[p], label[v])
        if p > 0 and label[p] <= y and m[parent[p]] > y:
            if smin[v] <= y_deep:
                cnt += 1
    return cnt


@nb.njit(cache=True)
def dfs_draw(state, kbuf, fbuf, lab, x0, sd, kill, use_kill, blo, bhi):
    """One critical geometric Galton-Watson contour with Gaussian labels.

    The first step is forced up; afterwards each step goes up with
    probability 1/2 until the walk returns to 0.  With use_kill, a vertex
    whose label reaches kill is clamped to kill and gets no children.
    Returns (n, max, min, bcount); n = -1 when the buffer overflows.
    """
    cap = kbuf.shape[0]
    kbuf[0] = 0
    fbuf[0] = x0
    lab[0] = x0
    depth = 0
    i = 0
    fmax = x0
    fmin = x0
    bc = 0
    dead = False
    while True:
        i += 1
        if i >= cap:
            return -1, fmax, fmin, bc
        if depth == 0 or ((not dead) and uniform(state) < 0.5):
            v = lab[depth] + sd * normal(state)
            dead = False
            if use_kill and v <= kill:
                v = kill
                dead = True
            depth += 1
            lab[depth] = v
            if v > fmax:
                fmax = v
            if v < fmin:
                fmin = v
        else:
            depth -= 1
            v = lab[depth]
            dead = False
        kbuf[i] = depth
        fbuf[i] = v
        if depth > 0 and v > blo and v < bhi:
            bc += 1
        if depth == 0:
            return i + 1, fmax, fmin, bc


@nb.njit(cache=True)
def draw_until(state, kbuf, fbuf, lab, x0, sd, kill, use_kill, blo, bhi,
               max_gt, min_le, bcount_gt, max_draws):
    """Repeat dfs_draw until max > max_gt, min <= min_le and bcount > bcount_gt."""
    draws = 0
    capped = 0
    while draws < max_draws:
        draws += 1
        n, fmax, fmin, bc = dfs_draw(state, kbuf, fbuf, lab, x0, sd, kill, use_kill, blo, bhi)
        if n < 0:
            capped += 1
            continue
        if fmax > max_gt and fmin <= min_le and bc > bcount_gt:
            return n, draws, capped
    return -1, draws, capped


@nb.njit(cache=True)
def stable_sums(state, n, steps, scale):
    """Row sums of `steps` totally skewed 3/2-stable variates (CMS method)."""
    a = 1.5
    t = np.tan(np.pi * a / 2.0)
    B = np.arctan(t) / a
    S = (1.0 + t * t) ** (1.0 / (2.0 * a))
    out = np.empty(n)
    for r in range(n):
        acc = 0.0
        for _ in range(steps):
            V = np.pi * (uniform(state) - 0.5)
            W = -np.log(uniform(state))
            acc += S * np.sin(a * (V + B)) / np.cos(V) ** (1.0 / a) * (
                np.cos(V - a * (V + B)) / W) ** ((1.0 - a) / a)
        out[r] = acc * scale
    return out


@nb.njit(cache=True)
def stable_exceedances(state, n, scale, thresholds):
    """Counts of n scaled 3/2-stable increments above each threshold."""
    a = 1.5
    t = np.tan(np.pi * a / 2.0)
    B = np.arctan(t) / a
    S = (1.0 + t * t) ** (1.0 / (2.0 * a))
    m = thresholds.shape[0]
    out = np.zeros(m, np.int64)
    for _ in range(n):
        V = np.pi * (uniform(state) - 0.5)
        W = -np.log(uniform(state))
        x = scale * S * np.sin(a * (V + B)) / np.cos(V) ** (1.0 / a) * (
            np.cos(V - a * (V + B)) / W) ** ((1.0 - a) / a)
        for j in range(m):
            if x > thresholds[j]:
                out[j] += 1
    return out
