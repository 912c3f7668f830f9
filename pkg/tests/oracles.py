"""Brute-force reference implementations used as independent oracles.

Everything here favors plain loops and first-principles formulas over
vectorized shortcuts so a disagreement with the package points at a
real defect rather than shared code.
"""

from __future__ import annotations

import colorsys
import itertools
import math

import numpy as np


# ---------------------------------------------------------------- imaging

def bilinear_resize(plane, out_h, out_w):
    """Corner-aligned bilinear resample, scalar loops."""
    in_h, in_w = plane.shape
    out = np.zeros((out_h, out_w))
    for oy in range(out_h):
        sy = oy * (in_h - 1) / (out_h - 1) if out_h > 1 else 0.0
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, in_h - 1)
        fy = sy - y0
        for ox in range(out_w):
            sx = ox * (in_w - 1) / (out_w - 1) if out_w > 1 else 0.0
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, in_w - 1)
            fx = sx - x0
            top = plane[y0, x0] * (1 - fx) + plane[y0, x1] * fx
            bot = plane[y1, x0] * (1 - fx) + plane[y1, x1] * fx
            out[oy, ox] = top * (1 - fy) + bot * fy
    return out


def srgb_to_lab_scalar(r8, g8, b8):
    """Reference CIE conversion for one pixel."""
    def linearize(v):
        v = v / 255.0
        return v / 12.92 if v <= 0.04045 else ((v + 0.055) / 1.055) ** 2.4

    rl, gl, bl = linearize(r8), linearize(g8), linearize(b8)
    x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl
    y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl
    z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl
    xn, yn, zn = 0.95047, 1.0, 1.08883
    delta = 6.0 / 29.0

    def f(t):
        return t ** (1.0 / 3.0) if t > delta**3 else t / (3 * delta**2) + 4.0 / 29.0

    fx, fy, fz = f(x / xn), f(y / yn), f(z / zn)
    return 116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)


def otsu_scan(values):
    """Exhaustive between-class-variance scan over integer levels; the
    flat maximum across empty gaps is resolved to its mean level."""
    levels = np.clip(np.asarray(values, dtype=np.float64), 0, 255).astype(int).ravel()
    variances = {}
    for t in range(256):
        low = levels[levels <= t]
        high = levels[levels > t]
        if low.size == 0 or high.size == 0:
            continue
        w0 = low.size / levels.size
        w1 = high.size / levels.size
        variances[t] = w0 * w1 * (low.mean() - high.mean()) ** 2
    best = max(variances.values())
    winners = [t for t, v in variances.items() if v == best]
    return sum(winners) / len(winners)


def median_filter(plane, win=5):
    """Sort-and-pick-middle with edge replication."""
    h, w = plane.shape
    r = win // 2
    out = np.zeros_like(plane, dtype=np.float64)
    for y in range(h):
        for x in range(w):
            vals = []
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    vals.append(plane[yy, xx])
            vals.sort()
            out[y, x] = vals[len(vals) // 2]
    return out


def _box_count_window(a, win):
    """Per-pixel sum over the win x win window with edge replication,
    matching the median filter's border convention."""
    r = win // 2
    padded = np.pad(a, r, mode="edge")
    h, w = a.shape
    out = np.zeros((h, w), dtype=np.int64)
    for dy in range(win):
        for dx in range(win):
            out += padded[dy : dy + h, dx : dx + w]
    return out


def quadratic_surface_fit(xs, ys, values):
    """Normal-equations solve of the six-coefficient surface fit."""
    a = np.zeros((6, 6))
    b = np.zeros(6)
    for x, y, v in zip(xs, ys, values):
        row = np.array([x * x, y * y, x * y, x, y, 1.0])
        a += np.outer(row, row)
        b += row * v
    return np.linalg.solve(a, b)


# ----------------------------------------------------------- segmentation

def isnn_label(lab, seeds, m, s=None):
    """Per-pixel argmin of the combined color+space distance.

    ``seeds`` is a list of (x, y, is_foreground); ties keep the lowest
    seed index, and seed pixels keep their own label.  ``s`` is the
    diagonal normalizer; it defaults to the image diagonal.
    """
    h, w = lab.shape[:2]
    if s is None:
        s = math.sqrt(h * h + w * w)
    weight = m / s
    out = np.zeros((h, w), dtype=bool)
    for y in range(h):
        for x in range(w):
            best = math.inf
            best_fg = False
            for sx, sy, fg in seeds:
                dl = lab[y, x, 0] - lab[sy, sx, 0]
                da = lab[y, x, 1] - lab[sy, sx, 1]
                db = lab[y, x, 2] - lab[sy, sx, 2]
                d_lab = math.sqrt((dl * dl + da * da) + db * db)
                d_xy = math.sqrt((x - sx) ** 2 + (y - sy) ** 2)
                dist = d_lab + weight * d_xy
                if dist < best:
                    best = dist
                    best_fg = fg
            out[y, x] = best_fg
    for sx, sy, fg in seeds:
        out[sy, sx] = fg
    return out


def dilate_cross(mask):
    """Union of the mask with its four axis shifts."""
    h, w = mask.shape
    out = mask.copy()
    for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        shifted = np.zeros_like(mask)
        ys, xs = np.nonzero(mask)
        for y, x in zip(ys, xs):
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w:
                shifted[ny, nx] = True
        out |= shifted
    return out


def fill_holes_4(mask):
    """Flood the background from the border with 4-connectivity; pixels
    never reached are holes."""
    h, w = mask.shape
    reach = np.zeros((h, w), dtype=bool)
    stack = []
    for x in range(w):
        for y in (0, h - 1):
            if not mask[y, x] and not reach[y, x]:
                reach[y, x] = True
                stack.append((y, x))
    for y in range(h):
        for x in (0, w - 1):
            if not mask[y, x] and not reach[y, x]:
                reach[y, x] = True
                stack.append((y, x))
    while stack:
        y, x = stack.pop()
        for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and not mask[ny, nx] and not reach[ny, nx]:
                reach[ny, nx] = True
                stack.append((ny, nx))
    return mask | ~reach


# ----------------------------------------------- geometry for the features

def centroid(mask):
    ys, xs = np.nonzero(mask)
    return float(np.mean(xs)), float(np.mean(ys))


def center_on_canvas(mask, planes=()):
    """Replicates the canvas-embedding definition with explicit shifts."""
    ys, xs = np.nonzero(mask)
    cx, cy = np.mean(xs), np.mean(ys)
    if ys.size > 1:
        r_max = math.sqrt(max((x - cx) ** 2 + (y - cy) ** 2 for x, y in zip(xs, ys)))
    else:
        r_max = 0.0
    half = int(math.ceil(r_max)) + 3
    side = 2 * half + 1
    dy = half - int(round(cy))
    dx = half - int(round(cx))
    canvas = np.zeros((side, side), dtype=bool)
    shifted = [np.zeros((side, side)) for _ in planes]
    for y, x in zip(ys, xs):
        canvas[y + dy, x + dx] = True
        for k, plane in enumerate(planes):
            shifted[k][y + dy, x + dx] = plane[y, x]
    return (canvas, *shifted)


def principal_angle(mask):
    ys, xs = np.nonzero(mask)
    cx, cy = np.mean(xs), np.mean(ys)
    mu20 = np.mean((xs - cx) ** 2)
    mu02 = np.mean((ys - cy) ** 2)
    mu11 = np.mean((xs - cx) * (ys - cy))
    return 0.5 * math.atan2(2.0 * mu11, mu20 - mu02)


def rotate_bilinear(plane, angle):
    """Loop form of the inverse-mapped bilinear rotation."""
    side = plane.shape[0]
    k = side // 2
    cos_a, sin_a = np.cos(angle), np.sin(angle)
    out = np.zeros((side, side))
    for y in range(side):
        for x in range(side):
            sx = cos_a * (x - k) - sin_a * (y - k) + k
            sy = sin_a * (x - k) + cos_a * (y - k) + k
            x0, y0 = int(math.floor(sx)), int(math.floor(sy))
            fx, fy = sx - x0, sy - y0
            acc = 0.0
            for yy, xx, wgt in (
                (y0, x0, (1 - fy) * (1 - fx)),
                (y0, x0 + 1, (1 - fy) * fx),
                (y0 + 1, x0, fy * (1 - fx)),
                (y0 + 1, x0 + 1, fy * fx),
            ):
                if 0 <= yy < side and 0 <= xx < side:
                    acc += plane[yy, xx] * wgt
            out[y, x] = acc
    return out


def align_major_axis(mask, planes=()):
    embedded = center_on_canvas(mask, planes)
    angle = principal_angle(embedded[0])
    out_mask = rotate_bilinear(embedded[0].astype(float), angle) >= 0.5
    rotated = [rotate_bilinear(p, angle) for p in embedded[1:]]
    return (out_mask, *rotated)


def jaccard_sets(a, b):
    inter = np.logical_and(a, b).sum()
    union = np.logical_or(a, b).sum()
    return inter / union if union else 0.0


def boundary_pixels(mask):
    h, w = mask.shape
    out = []
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            edge = False
            for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                ny, nx = y + dy, x + dx
                if not (0 <= ny < h and 0 <= nx < w) or not mask[ny, nx]:
                    edge = True
                    break
            if edge:
                out.append((y, x))
    return out


_CLOCKWISE = {
    (0, -1): 0, (-1, -1): 1, (-1, 0): 2, (-1, 1): 3,
    (0, 1): 4, (1, 1): 5, (1, 0): 6, (1, -1): 7,
}
_OFFSETS = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]


def trace_moore(mask):
    """Second implementation of the clockwise Moore contour trace."""
    ys, xs = np.nonzero(mask)
    start = (int(ys[0]), int(xs[0]))
    if ys.size == 1:
        return [start]
    h, w = mask.shape

    def fg(p):
        return 0 <= p[0] < h and 0 <= p[1] < w and mask[p[0], p[1]]

    path = [start]
    cur = start
    back = (start[0], start[1] - 1)
    first = None
    for _ in range(8 * len(ys) + 16):
        k = _CLOCKWISE[(back[0] - cur[0], back[1] - cur[1])]
        nxt = None
        for s in range(1, 9):
            off = _OFFSETS[(k + s) % 8]
            cand = (cur[0] + off[0], cur[1] + off[1])
            if fg(cand):
                prev = _OFFSETS[(k + s - 1) % 8]
                nxt, back = cand, (cur[0] + prev[0], cur[1] + prev[1])
                break
        if nxt is None:
            return path
        if first is None:
            first = (cur, nxt)
        elif (cur, nxt) == first:
            path.pop()
            return path
        cur = nxt
        path.append(cur)
    return path


def contour_length(path):
    if len(path) < 2:
        return 0.0
    total = 0.0
    for i in range(len(path)):
        y0, x0 = path[i]
        y1, x1 = path[(i + 1) % len(path)]
        total += math.sqrt((y1 - y0) ** 2 + (x1 - x0) ** 2)
    return total


def components_8(mask):
    """8-connected components by flood fill, largest first."""
    h, w = mask.shape
    seen = np.zeros((h, w), dtype=bool)
    comps = []
    for y in range(h):
        for x in range(w):
            if mask[y, x] and not seen[y, x]:
                comp = np.zeros((h, w), dtype=bool)
                stack = [(y, x)]
                seen[y, x] = True
                while stack:
                    cy, cx = stack.pop()
                    comp[cy, cx] = True
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            ny, nx = cy + dy, cx + dx
                            if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not seen[ny, nx]:
                                seen[ny, nx] = True
                                stack.append((ny, nx))
                comps.append(comp)
    comps.sort(key=lambda c: int(c.sum()), reverse=True)
    return comps


def perimeter(mask):
    return sum(contour_length(trace_moore(c)) for c in components_8(mask))


def gift_wrap_hull(points):
    """Jarvis march; collinear intermediate points are skipped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    hull = []
    start = min(pts)
    cur = start
    while True:
        hull.append(cur)
        cand = pts[0] if pts[0] != cur else pts[1]
        for p in pts:
            if p == cur:
                continue
            cross = (cand[0] - cur[0]) * (p[1] - cur[1]) - (cand[1] - cur[1]) * (p[0] - cur[0])
            if cross > 0 or (
                cross == 0
                and (p[0] - cur[0]) ** 2 + (p[1] - cur[1]) ** 2
                > (cand[0] - cur[0]) ** 2 + (cand[1] - cur[1]) ** 2
            ):
                cand = p
        cur = cand
        if cur == start:
            break
    return hull


def hull_pixel_count(hull):
    if len(hull) < 3:
        return len(hull)
    # Orient the test by the polygon's signed area (shoelace).
    twice_area = sum(
        hull[i][0] * hull[(i + 1) % len(hull)][1]
        - hull[(i + 1) % len(hull)][0] * hull[i][1]
        for i in range(len(hull))
    )
    sign = 1 if twice_area > 0 else -1
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    count = 0
    for py in range(min(ys), max(ys) + 1):
        for px in range(min(xs), max(xs) + 1):
            inside = True
            for i in range(len(hull)):
                ax, ay = hull[i]
                bx, by = hull[(i + 1) % len(hull)]
                if sign * ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) < 0:
                    inside = False
                    break
            if inside:
                count += 1
    return count


def box_count_dimension(boundary, sizes=(2, 4, 8, 16, 32, 64)):
    """Second box-counting implementation with a hand-rolled line fit."""
    ys = [p[0] for p in boundary]
    xs = [p[1] for p in boundary]
    y_min, x_min = min(ys), min(xs)
    counts = []
    for r in sizes:
        boxes = {((y - y_min) // r, (x - x_min) // r) for y, x in boundary}
        counts.append(len(boxes))
    if max(counts) < 2:
        return 0.0
    pts = [(math.log(1.0 / r), math.log(n)) for r, n in zip(sizes, counts)]
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)


def sobel_magnitude_at(lum, y, x):
    """Explicit 3x3 correlation with edge replication at one pixel."""
    kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    h, w = lum.shape
    gx = gy = 0.0
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            yy = min(max(y + dy, 0), h - 1)
            xx = min(max(x + dx, 0), w - 1)
            gx += kx[dy + 1][dx + 1] * lum[yy, xx]
            gy += kx[dx + 1][dy + 1] * lum[yy, xx]
    return math.sqrt(gx * gx + gy * gy)


# ----------------------------------------------------------------- colors

def hsv_planes(rgb):
    h, w = rgb.shape[:2]
    hh = np.zeros((h, w))
    ss = np.zeros((h, w))
    vv = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            r, g, b = (rgb[y, x] / 255.0).tolist()
            hv, sv, vv_ = colorsys.rgb_to_hsv(r, g, b)
            hh[y, x], ss[y, x], vv[y, x] = hv, sv, vv_
    return hh, ss, vv


def binned_moments(values, bins=256):
    """Loop form of the histogram moment definitions."""
    counts = [0] * bins
    for v in values:
        idx = int(math.floor(v * (bins - 1) + 0.5))
        counts[min(max(idx, 0), bins - 1)] += 1
    n = sum(counts)
    mean = sum((i / (bins - 1)) * c for i, c in enumerate(counts)) / n
    var = sum(((i / (bins - 1)) - mean) ** 2 * c for i, c in enumerate(counts)) / n
    skew = sum(((i / (bins - 1)) - mean) ** 3 * c for i, c in enumerate(counts)) / n
    return mean, var, skew


def pixel_moments(values):
    """Direct pixel-list moments (no binning)."""
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    skew = sum((v - mean) ** 3 for v in values) / n
    return mean, var, skew


def chi_square(h1, h2):
    total = 0.0
    for a, b in zip(h1, h2):
        if a + b > 0:
            total += (a - b) ** 2 / (a + b)
    return total


def normalized_histogram(values, bins=256):
    counts = [0.0] * bins
    for v in values:
        idx = int(math.floor(v * (bins - 1) + 0.5))
        counts[min(max(idx, 0), bins - 1)] += 1.0
    n = sum(counts)
    return [c / n for c in counts]


# ---------------------------------------------------------------- texture

def quantize(gray, mask, levels=8):
    vals = [gray[y, x] for y, x in zip(*np.nonzero(mask))]
    gmin, gmax = min(vals), max(vals)
    h, w = gray.shape
    q = np.zeros((h, w), dtype=int)
    if gmax <= gmin:
        return q
    for y in range(h):
        for x in range(w):
            level = int(math.floor((gray[y, x] - gmin) / (gmax - gmin) * levels))
            q[y, x] = min(max(level, 0), levels - 1)
    return q


def glcm_pairs(q, mask, offset, levels=8):
    """Count, symmetrize and normalize pairs by explicit enumeration."""
    dy, dx = offset
    h, w = q.shape
    counts = np.zeros((levels, levels))
    for y in range(h):
        for x in range(w):
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and mask[y, x] and mask[ny, nx]:
                counts[q[y, x], q[ny, nx]] += 1
    counts = counts + counts.T
    total = counts.sum()
    return counts / total if total else counts


def glcm_props(p):
    levels = p.shape[0]
    contrast = energy = homog = 0.0
    for i in range(levels):
        for j in range(levels):
            contrast += p[i, j] * (i - j) ** 2
            energy += p[i, j] ** 2
            homog += p[i, j] / (1.0 + (i - j) ** 2)
    px = p.sum(axis=1)
    mu = sum(i * px[i] for i in range(levels))
    sigma2 = sum((i - mu) ** 2 * px[i] for i in range(levels))
    if sigma2 <= 0:
        corr = 0.0
    else:
        eij = sum(i * j * p[i, j] for i in range(levels) for j in range(levels))
        corr = (eij - mu * mu) / sigma2
    return contrast, corr, energy, homog


def _lines_for_angle(shape, angle):
    h, w = shape
    if angle == 0:
        return [[(y, x) for x in range(w)] for y in range(h)]
    if angle == 90:
        return [[(y, x) for y in range(h)] for x in range(w)]
    if angle == 45:
        lines = []
        for s in range(h + w - 1):
            line = [(y, s - y) for y in range(h - 1, -1, -1) if 0 <= s - y < w]
            lines.append(line)
        return lines
    if angle == 135:
        lines = []
        for d in range(-(w - 1), h):
            line = [(y, y - d) for y in range(h) if 0 <= y - d < w]
            lines.append(line)
        return lines
    raise ValueError(angle)


def glrlm_runs(q, mask, angle):
    """Runs per orientation via groupby over the in-mask segments."""
    runs = []
    for line in _lines_for_angle(q.shape, angle):
        segment = []
        for y, x in line:
            if mask[y, x]:
                segment.append(q[y, x])
            else:
                for lv, grp in itertools.groupby(segment):
                    runs.append((lv, len(list(grp))))
                segment = []
        for lv, grp in itertools.groupby(segment):
            runs.append((lv, len(list(grp))))
    return runs


def glrlm_stats(runs):
    """The seven run statistics from a flat (level, length) list."""
    h = len(runs)
    sre = sum(1.0 / (ln * ln) for _, ln in runs) / h
    lre = sum(float(ln * ln) for _, ln in runs) / h
    by_level = {}
    by_length = {}
    for lv, ln in runs:
        by_level[lv] = by_level.get(lv, 0) + 1
        by_length[ln] = by_length.get(ln, 0) + 1
    gln = sum(c * c for c in by_level.values()) / h
    rln = sum(c * c for c in by_length.values()) / h
    rp = h / sum(ln for _, ln in runs)
    lgre = sum(1.0 / ((lv + 1) ** 2) for lv, _ in runs) / h
    hgre = sum(float((lv + 1) ** 2) for lv, _ in runs) / h
    return sre, lre, gln, rln, rp, lgre, hgre


def hsv_pixel(r8, g8, b8):
    """Scalar HSV with hue as angle/360, matching the piecewise form."""
    r, g, b = r8 / 255.0, g8 / 255.0, b8 / 255.0
    v = max(r, g, b)
    cmin = min(r, g, b)
    delta = v - cmin
    s = delta / v if v > 0 else 0.0
    if delta <= 0:
        h = 0.0
    elif v == r:
        h = ((g - b) / delta) % 6.0
    elif v == g:
        h = (b - r) / delta + 2.0
    else:
        h = (r - g) / delta + 4.0
    return h / 6.0, s, v


# ------------------------------------------- full descriptor, loop form

def features_59(rgb, mask):
    """All 59 descriptor values recomputed from first principles."""
    mask = np.asarray(mask, dtype=bool)
    values = []

    def mirror_x(m, doubled):
        out = np.zeros_like(m)
        h2, w2 = m.shape
        for y in range(h2):
            for x in range(w2):
                sx = doubled - x
                if 0 <= sx < w2:
                    out[y, x] = m[y, sx]
        return out

    # Rotational symmetry: point reflection about the half-pixel centroid.
    canvas = center_on_canvas(mask)[0]
    ccx, ccy = centroid(canvas)
    rotated = mirror_x(mirror_x(canvas.T, int(round(2 * ccy))).T, int(round(2 * ccx)))
    a1 = jaccard_sets(canvas, rotated)

    # Mirror symmetries on the aligned mask.
    aligned = align_major_axis(mask)[0]
    cx, cy = centroid(aligned)
    a2 = jaccard_sets(aligned, mirror_x(aligned, int(round(2 * cx))))
    a3 = jaccard_sets(aligned.T, mirror_x(aligned.T, int(round(2 * cy))))
    values += [a1, a2, a3]

    # Color asymmetry over aligned halves split at the half-pixel line.
    channels = [rgb[:, :, c].astype(np.float64) / 255.0 for c in range(3)]
    packed = align_major_axis(mask, channels)
    amask, achan = packed[0], packed[1:]
    acx, acy = centroid(amask)
    rx, ry = int(round(2 * acx)), int(round(2 * acy))

    def chi_total(first_sel, second_sel):
        if not first_sel.any() or not second_sel.any():
            return 6.0
        total = 0.0
        for chan in achan:
            h1 = normalized_histogram([chan[p] for p in zip(*np.nonzero(first_sel))])
            h2 = normalized_histogram([chan[p] for p in zip(*np.nonzero(second_sel))])
            total += chi_square(h1, h2)
        return total

    xs_grid = 2 * np.arange(amask.shape[1])[None, :]
    ys_grid = 2 * np.arange(amask.shape[0])[:, None]
    a4 = chi_total(amask & (xs_grid < rx), amask & (xs_grid > rx))
    a5 = chi_total(amask & (ys_grid < ry), amask & (ys_grid > ry))
    values += [a4, a5]

    # Border group.
    area = int(mask.sum())
    p = perimeter(mask)
    b1 = p * p / (4.0 * math.pi * area)
    bpix = boundary_pixels(mask)
    b2 = box_count_dimension(bpix)
    mcx, mcy = centroid(mask)
    dists = [math.sqrt((x - mcx) ** 2 + (y - mcy) ** 2) for y, x in bpix]
    mean_d = sum(dists) / len(dists)
    b3 = (sum((d - mean_d) ** 2 for d in dists) / len(dists)) / (mean_d * mean_d)
    lum = rgb.astype(np.float64).mean(axis=2)
    grads = [sobel_magnitude_at(lum, y, x) for y, x in bpix]
    b4 = sum(grads) / len(grads)
    b5 = sum(g * g for g in grads) / len(grads) - b4 * b4
    ys, xs = np.nonzero(mask)
    hull = gift_wrap_hull(list(zip(xs.tolist(), ys.tolist())))
    b6 = 1.0 if len(hull) < 3 else area / hull_pixel_count(hull)
    b7 = jaworek_count(mask)
    values += [b1, b2, b3, b4, max(b5, 0.0), b6, b7]

    # Color group.
    chans = {}
    pix = list(zip(ys.tolist(), xs.tolist()))
    chans["r"] = [rgb[y, x, 0] / 255.0 for y, x in pix]
    chans["g"] = [rgb[y, x, 1] / 255.0 for y, x in pix]
    chans["b"] = [rgb[y, x, 2] / 255.0 for y, x in pix]
    hs, ss, vs = [], [], []
    for y, x in pix:
        hv, sv, vv = hsv_pixel(*rgb[y, x].tolist())
        hs.append(hv)
        ss.append(sv)
        vs.append(vv)
    chans["h"], chans["s"], chans["v"] = hs, ss, vs
    for name in ("r", "g", "b", "h", "s", "v"):
        values += list(binned_moments(chans[name]))
    for name in ("r", "g", "b", "h", "s", "v"):
        mean, var, _ = binned_moments(chans[name])
        ratio = var / mean if mean > 0 else 0.0
        values.append(math.log(max(ratio, 1e-9)))

    # Texture group.
    q = quantize(lum, mask)
    for angle, offset in ((0, (0, 1)), (45, (-1, 1)), (90, (-1, 0)), (135, (-1, -1))):
        pm = glcm_pairs(q, mask, offset)
        if pm.sum() == 0:
            values += [0.0, 0.0, 1.0, 1.0]
        else:
            values += list(glcm_props(pm))
    runs = []
    for angle in (0, 45, 90, 135):
        runs += glrlm_runs(q, mask, angle)
    values += list(glrlm_stats(runs))
    return values


def jaworek_count(mask):
    """Stationary points of the smoothed borderline distance, loop form."""
    aligned = align_major_axis(mask)[0]
    if not aligned.any():
        return 0.0
    largest = components_8(aligned)[0]
    path = trace_moore(largest)
    window = max(5, int(round(0.05 * len(path))))
    if len(path) <= window:
        return 0.0
    start = 0
    best = (math.inf, math.inf)
    for i, (y, x) in enumerate(path):
        if (x, y) < best:
            best = (x, y)
            start = i
    path = path[start:] + path[:start]
    ys = [p[0] for p in path]
    xs = [p[1] for p in path]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    f = [min(x - x0, x1 - x, y - y0, y1 - y) for y, x in path]
    n = len(f)
    half = window // 2
    smoothed = []
    for i in range(n):
        acc = 0.0
        for j in range(window):
            acc += f[(i - half + j) % n]
        smoothed.append(acc / window)
    diffs = [smoothed[(i + 1) % n] - smoothed[i] for i in range(n)]
    signs = [d for d in (np.sign(d) for d in diffs) if d != 0]
    if len(signs) < 2:
        return 0.0
    changes = sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])
    if signs[-1] != signs[0]:
        changes += 1
    return float(changes)


# ------------------------------------------------------------- classifier

def mann_whitney_auc(scores, labels):
    """Pairwise concordance with half credit for ties."""
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


def point_to_segment_distance(p, a, b):
    p, a, b = map(np.asarray, (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0:
        return float(np.linalg.norm(p - a))
    t = float((p - a) @ ab) / denom
    t = min(max(t, 0.0), 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def least_squares_beta(h, t):
    """Unregularized normal-equations solution via lstsq."""
    return np.linalg.lstsq(h, t, rcond=None)[0]
