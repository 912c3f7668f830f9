"""Mask geometry shared by the shape and border features: moments,
principal-axis alignment, contour tracing and convex hulls.

Coordinates follow image convention: x is the column, y is the row.
"""

from __future__ import annotations

import numpy as np

from lesioncad.imaging import InvalidInputError


def mask_centroid(mask: np.ndarray) -> tuple[float, float]:
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise InvalidInputError("empty mask")
    return float(xs.mean()), float(ys.mean())


def principal_angle(mask: np.ndarray) -> float:
    """Angle of the major (largest second-moment) axis from the x axis."""
    ys, xs = np.nonzero(mask)
    cx, cy = xs.mean(), ys.mean()
    dx = xs - cx
    dy = ys - cy
    mu20 = np.mean(dx * dx)
    mu02 = np.mean(dy * dy)
    mu11 = np.mean(dx * dy)
    return 0.5 * np.arctan2(2.0 * mu11, mu20 - mu02)


def center_on_canvas(mask: np.ndarray, *values: np.ndarray) -> tuple[np.ndarray, ...]:
    """Embed the mask on an odd square canvas with its rounded centroid
    at the canvas center, large enough that any rotation stays inside.

    Extra planes (e.g. image channels) are shifted identically.
    """
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise InvalidInputError("empty mask")
    cx, cy = xs.mean(), ys.mean()
    r_max = np.sqrt(((xs - cx) ** 2 + (ys - cy) ** 2).max()) if ys.size > 1 else 0.0
    half = int(np.ceil(r_max)) + 3
    side = 2 * half + 1
    k = half
    dy = k - int(round(cy))
    dx = k - int(round(cx))
    canvas = np.zeros((side, side), dtype=bool)
    canvas[ys + dy, xs + dx] = True
    shifted = [canvas]
    for plane in values:
        out = np.zeros((side, side), dtype=np.float64)
        out[ys + dy, xs + dx] = plane[ys, xs]
        shifted.append(out)
    return tuple(shifted)


def rotate_plane_bilinear(plane: np.ndarray, angle: float) -> np.ndarray:
    """Rotate content by -angle about the center pixel of a square plane.

    Output pixel p samples the input at c + R(angle) (p - c) with
    bilinear interpolation; out-of-range samples are zero.
    """
    side = plane.shape[0]
    k = side // 2
    cos_a, sin_a = np.cos(angle), np.sin(angle)
    yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
    rel_x = xx - k
    rel_y = yy - k
    src_x = cos_a * rel_x - sin_a * rel_y + k
    src_y = sin_a * rel_x + cos_a * rel_y + k
    x0 = np.floor(src_x).astype(int)
    y0 = np.floor(src_y).astype(int)
    fx = src_x - x0
    fy = src_y - y0
    out = np.zeros((side, side), dtype=np.float64)
    p = np.asarray(plane, dtype=np.float64)

    def sample(yi, xi):
        inside = (yi >= 0) & (yi < side) & (xi >= 0) & (xi < side)
        vals = np.zeros((side, side), dtype=np.float64)
        vals[inside] = p[yi[inside], xi[inside]]
        return vals

    out = (
        sample(y0, x0) * ((1 - fy) * (1 - fx))
        + sample(y0, x0 + 1) * ((1 - fy) * fx)
        + sample(y0 + 1, x0) * (fy * (1 - fx))
        + sample(y0 + 1, x0 + 1) * (fy * fx)
    )
    return out


def rotate_mask_bilinear(mask: np.ndarray, angle: float) -> np.ndarray:
    """Bilinear rotation of a binary mask, thresholded at 0.5."""
    return rotate_plane_bilinear(mask.astype(np.float64), angle) >= 0.5


def align_major_axis(mask: np.ndarray, *values: np.ndarray):
    """Center the mask on a square canvas and rotate it so the major
    axis is horizontal.  Extra planes get the identical transform."""
    planes = center_on_canvas(mask, *values)
    angle = principal_angle(planes[0])
    rotated_mask = rotate_mask_bilinear(planes[0], angle)
    out = [rotated_mask]
    for plane in planes[1:]:
        out.append(rotate_plane_bilinear(plane, angle))
    return tuple(out) if len(out) > 1 else out[0]


def boundary_pixels(mask: np.ndarray) -> np.ndarray:
    """Foreground pixels with at least one 4-neighbor outside the mask
    (image borders count as outside).  Returned as an (n, 2) array of
    (y, x) in raster order."""
    m = np.asarray(mask, dtype=bool)
    padded = np.pad(m, 1, mode="constant")
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    border = m & ~interior
    ys, xs = np.nonzero(border)
    return np.column_stack([ys, xs])


# Moore neighborhood scanned clockwise (y grows downward), starting west.
_MOORE = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]


def trace_contour(mask: np.ndarray) -> list[tuple[int, int]]:
    """Moore-neighbor trace of the outer contour of one connected
    component, clockwise, as an ordered cyclic list of (y, x).

    The mask must contain exactly one 8-connected component (callers
    split components first).
    """
    m = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(m)
    if ys.size == 0:
        raise InvalidInputError("empty mask")
    start = (int(ys[0]), int(xs[0]))
    if ys.size == 1:
        return [start]
    h, w = m.shape

    def is_fg(p):
        return 0 <= p[0] < h and 0 <= p[1] < w and m[p[0], p[1]]

    contour = [start]
    backtrack = (start[0], start[1] - 1)
    current = start
    first_move: tuple[tuple[int, int], tuple[int, int]] | None = None
    max_steps = 4 * int(m.sum()) + 8
    for _ in range(max_steps):
        offset = (backtrack[0] - current[0], backtrack[1] - current[1])
        try:
            k = _MOORE.index(offset)
        except ValueError:  # defensive: backtrack must be a Moore neighbor
            k = 0
        nxt = None
        for step in range(1, 9):
            cand_off = _MOORE[(k + step) % 8]
            cand = (current[0] + cand_off[0], current[1] + cand_off[1])
            if is_fg(cand):
                nxt = cand
                prev_off = _MOORE[(k + step - 1) % 8]
                backtrack = (current[0] + prev_off[0], current[1] + prev_off[1])
                break
        if nxt is None:
            return contour
        move = (current, nxt)
        if first_move is None:
            first_move = move
        elif move == first_move:
            contour.pop()
            return contour
        current = nxt
        contour.append(current)
    return contour


def component_masks(mask: np.ndarray) -> list[np.ndarray]:
    """Split into 8-connected components, largest first."""
    from scipy import ndimage

    labeled, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    comps = [(labeled == i).astype(bool) for i in range(1, n + 1)]
    comps.sort(key=lambda c: int(c.sum()), reverse=True)
    return comps


def contour_length(contour: list[tuple[int, int]]) -> float:
    """Closed path length; diagonal steps count sqrt(2)."""
    if len(contour) < 2:
        return 0.0
    total = 0.0
    n = len(contour)
    for i in range(n):
        y0, x0 = contour[i]
        y1, x1 = contour[(i + 1) % n]
        total += np.hypot(y1 - y0, x1 - x0)
    return total


def mask_perimeter(mask: np.ndarray) -> float:
    """Sum of traced outer-contour lengths over all components."""
    return sum(contour_length(trace_contour(c)) for c in component_masks(mask))


def convex_hull(points_xy: np.ndarray) -> list[tuple[int, int]]:
    """Monotone-chain convex hull of integer (x, y) points, returned in
    counter-clockwise order (in the x-right / y-up sense); collinear
    inputs yield fewer than three vertices."""
    pts = sorted(set(map(tuple, points_xy.tolist())))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_pixel_count(hull: list[tuple[int, int]]) -> int:
    """Number of integer pixel centers inside or on the hull polygon."""
    if len(hull) < 3:
        return len(hull)
    hx = np.array([p[0] for p in hull], dtype=np.int64)
    hy = np.array([p[1] for p in hull], dtype=np.int64)
    x0, x1 = hx.min(), hx.max()
    y0, y1 = hy.min(), hy.max()
    yy, xx = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
    inside = np.ones(xx.shape, dtype=bool)
    n = len(hull)
    for i in range(n):
        ax, ay = int(hx[i]), int(hy[i])
        bx, by = int(hx[(i + 1) % n]), int(hy[(i + 1) % n])
        cross = (bx - ax) * (yy - ay) - (by - ay) * (xx - ax)
        inside &= cross >= 0
    return int(inside.sum())
