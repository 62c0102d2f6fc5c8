"""Exact maximum colorful depth in the plane.

The depth function is piecewise constant on the open cells of the
arrangement of all lines through pairs of input points. Every bounded cell
has a vertex, and unbounded cells contain points outside the convex hull of
the input (depth 0), so the maximum over all points off the arrangement is
realized in a cell adjacent to an arrangement vertex or to an input point.

Rather than stepping a concrete epsilon into every wedge and re-counting,
each vertex is processed once: the closed-hull count at the vertex is
computed from exact side signs, then corrected per wedge by the tuples that
touch the vertex through an edge (for crossing vertices) or through a corner
(for input points). A concrete rational probe point is materialized only for
the winning wedges, stepped halfway to the nearest non-incident line, and
the reported depth is re-verified at that point by the independent sweep
counter.

All arithmetic is over integers after clearing coordinate denominators once,
so the search is exact for arbitrary rational input.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import (
    DimensionNotTwo,
    EmptyClass,
    GeneralPositionViolation,
)
from .geometry import ColoredPointSet, Point, general_position_check
from .depth import (
    DepthMethod,
    DepthResult,
    MaxDepthResult,
    SearchMethod,
    _angle_key,
    _query_dependency,
    _sweep_count_unchecked,
)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _closed_count(sides, lid, classes, n_sizes):
    """Closed-hull depth at a point from its side signs against every line.

    sides[t] is the sign of orient(p_i, p_j, v) for line t through the pair
    (i, j) with i < j; zero means v lies on the line. A tuple's closed
    simplex contains v exactly when its three cyclic orientation signs are
    all >= 0 or all <= 0.
    """
    P0, P1, P2 = classes
    n0, n1, n2 = n_sizes

    def pair_sign(i, j):
        return sides[lid[i][j]] if i < j else -sides[lid[j][i]]

    sab = [[pair_sign(a, b) for b in P1] for a in P0]
    sbc = [[pair_sign(b, c) for c in P2] for b in P1]
    sca = [[pair_sign(c, a) for c in P2] for a in P0]  # indexed [a][c]

    count = 0
    for ia in range(n0):
        row_ab = sab[ia]
        row_ca = sca[ia]
        for ib in range(n1):
            s1 = row_ab[ib]
            row_bc = sbc[ib]
            if s1 > 0:
                for ic in range(n2):
                    if row_bc[ic] >= 0 and row_ca[ic] >= 0:
                        count += 1
            elif s1 < 0:
                for ic in range(n2):
                    if row_bc[ic] <= 0 and row_ca[ic] <= 0:
                        count += 1
            else:
                for ic in range(n2):
                    s2 = row_bc[ic]
                    s3 = row_ca[ic]
                    if (s2 >= 0 and s3 >= 0) or (s2 <= 0 and s3 <= 0):
                        count += 1
    return count


def max_depth_exact2d(cps: ColoredPointSet) -> MaxDepthResult:
    """Exact maximizer of colorful depth over all general-position points of R^2.

    Probes every open cell of the line arrangement through a wedge at one of
    its vertices (crossing vertices and input points), plus the centroid of
    every colorful tuple as redundant coverage. Ties are broken by the
    lexicographically smallest materialized probe point.
    """
    if cps.dim != 2:
        raise DimensionNotTwo(f"exact search requires d=2, got d={cps.dim}")
    if any(len(c) == 0 for c in cps.classes):
        raise EmptyClass("every color class needs at least one point")
    gp = general_position_check(cps)
    if not gp.ok:
        raise GeneralPositionViolation(
            f"input points {gp.witness} are affinely dependent", witness=gp.witness
        )

    pts = cps.all_points()
    n = len(pts)
    n_sizes = cps.class_sizes
    total = cps.total_tuples

    # clear denominators once; depth is invariant under uniform scaling
    scale = 1
    for p in pts:
        for c in p.coords:
            scale = scale * c.denominator // gcd(scale, c.denominator)
    ipts = [(int(p[0] * scale), int(p[1] * scale)) for p in pts]
    color = [k for k, cls in enumerate(cps.classes) for _ in cls]
    classes = [
        [i for i in range(n) if color[i] == k] for k in range(3)
    ]

    # lines through all pairs, oriented so side(v) = sign(orient(p_i, p_j, v)), i < j
    coefs: list[tuple[int, int, int]] = []
    line_pts: list[tuple[int, int]] = []
    lid = [[-1] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        xi, yi = ipts[i]
        xj, yj = ipts[j]
        a = yi - yj
        b = xj - xi
        c = yj * xi - xj * yi
        lid[i][j] = lid[j][i] = len(coefs)
        coefs.append((a, b, c))
        line_pts.append((i, j))
    n_lines = len(coefs)

    # per-line side of every input point (zero only for the defining pair)
    psides = []
    for (a, b, c) in coefs:
        psides.append([_sgn(a * x + b * y + c) for (x, y) in ipts])

    # per-line correction data: for a bichromatic line, how many third-color
    # points lie on each side
    line_third: list[Optional[tuple[int, int, int]]] = []  # (third_color, plus, minus)
    for t, (i, j) in enumerate(line_pts):
        if color[i] == color[j]:
            line_third.append(None)
            continue
        k = 3 - color[i] - color[j]
        plus = sum(1 for idx in classes[k] if psides[t][idx] > 0)
        minus = sum(1 for idx in classes[k] if psides[t][idx] < 0)
        line_third.append((k, plus, minus))

    best_count = -1
    best_probes: list[tuple] = []  # ("wedge", xn, yn, den, ux, uy) or ("point", x, y, den)
    evaluated = 0

    def offer(count: int, probe: tuple) -> None:
        nonlocal best_count, best_probes
        if count > best_count:
            best_count = count
            best_probes = [probe]
        elif count == best_count:
            best_probes.append(probe)

    # --- centroid probes (redundant coverage; also seeds the running best) ---
    for combo in itertools.product(*classes):
        gx = sum(ipts[i][0] for i in combo)
        gy = sum(ipts[i][1] for i in combo)
        sides = []
        on_line = False
        for (a, b, c) in coefs:
            s = a * gx + b * gy + 3 * c
            if s == 0:
                on_line = True
                break
            sides.append(1 if s > 0 else -1)
        if on_line:
            continue
        evaluated += 1
        cnt = _closed_count(sides, lid, classes, n_sizes)
        offer(cnt, ("point", gx, gy, 3))

    # --- wedges around input points ---
    for ip in range(n):
        px, py = ipts[ip]
        others = [i for i in range(n) if i != ip]
        sides = [
            0 if ip in line_pts[t] else psides[t][ip] for t in range(n_lines)
        ]
        d_closed = _closed_count(sides, lid, classes, n_sizes)
        oc1, oc2 = [k for k in range(3) if k != color[ip]]
        own_tuples = n_sizes[oc1] * n_sizes[oc2]
        interior_others = d_closed - own_tuples

        o1 = classes[oc1]
        o2 = classes[oc2]
        # cone orientation of each (b, c) pair at p
        dvec = {i: (ipts[i][0] - px, ipts[i][1] - py) for i in others}
        c0 = {
            (bq, cq): _sgn(dvec[bq][0] * dvec[cq][1] - dvec[bq][1] * dvec[cq][0])
            for bq in o1
            for cq in o2
        }
        dirs = []
        for i in others:
            dx, dy = dvec[i]
            dirs.append((dx, dy))
            dirs.append((-dx, -dy))
        dirs.sort(key=lambda v: _angle_key(v[0], v[1]))
        m = len(dirs)
        for w in range(m):
            d1 = dirs[w]
            d2 = dirs[(w + 1) % m]
            ux, uy = d1[0] + d2[0], d1[1] + d2[1]
            cs = {i: _sgn(dvec[i][0] * uy - dvec[i][1] * ux) for i in others}
            covered = 0
            for bq in o1:
                cb = cs[bq]
                for cq in o2:
                    cc = cs[cq]
                    s0 = c0[(bq, cq)]
                    if s0 > 0:
                        if cb >= 0 and cc <= 0:
                            covered += 1
                    elif cb <= 0 and cc >= 0:
                        covered += 1
            evaluated += 1
            offer(interior_others + covered, ("wedge", px, py, 1, ux, uy))

    # --- crossing vertices of the arrangement ---
    seen: set[tuple[int, int, int]] = set()
    vertex_keys: list[tuple[int, int, int]] = []
    for t1, t2 in itertools.combinations(range(n_lines), 2):
        i1, j1 = line_pts[t1]
        i2, j2 = line_pts[t2]
        if i1 in (i2, j2) or j1 in (i2, j2):
            continue  # they meet at an input point, handled above
        a1, b1, c1 = coefs[t1]
        a2, b2, c2 = coefs[t2]
        den = a1 * b2 - a2 * b1
        if den == 0:
            continue  # parallel
        xn = b1 * c2 - b2 * c1
        yn = c1 * a2 - c2 * a1
        if den < 0:
            xn, yn, den = -xn, -yn, -den
        g = gcd(gcd(abs(xn), abs(yn)), den)
        key = (xn // g, yn // g, den // g)
        if key not in seen:
            seen.add(key)
            vertex_keys.append(key)

    for (xn, yn, den) in vertex_keys:
        sides = []
        incident = []
        for t in range(n_lines):
            a, b, c = coefs[t]
            v = a * xn + b * yn + c * den
            if v == 0:
                sides.append(0)
                incident.append(t)
            else:
                sides.append(1 if v > 0 else -1)
        d_closed = _closed_count(sides, lid, classes, n_sizes)
        if d_closed < best_count:
            continue  # no adjacent wedge can beat the running best

        # active edge corrections: bichromatic incident lines whose defining
        # segment strictly straddles the vertex
        active = []
        for t in incident:
            info = line_third[t]
            if info is None:
                continue
            i, j = line_pts[t]
            xi, yi = ipts[i]
            xj, yj = ipts[j]
            dx, dy = xj - xi, yj - yi
            dot = (xn - xi * den) * dx + (yn - yi * den) * dy
            if 0 < dot < den * (dx * dx + dy * dy):
                active.append((coefs[t], info[1], info[2]))

        dirs = []
        for t in incident:
            a, b, _ = coefs[t]
            dirs.append((b, -a))
            dirs.append((-b, a))
        dirs.sort(key=lambda v: _angle_key(v[0], v[1]))
        m = len(dirs)
        for w in range(m):
            d1 = dirs[w]
            d2 = dirs[(w + 1) % m]
            ux, uy = d1[0] + d2[0], d1[1] + d2[1]
            corr = 0
            for (a, b, _), plus, minus in active:
                corr += minus if a * ux + b * uy > 0 else plus
            evaluated += 1
            offer(d_closed - corr, ("wedge", xn, yn, den, ux, uy))

    if best_count < 0:
        raise GeneralPositionViolation("no usable probe found")

    # materialize every winning probe and take the lexicographically smallest
    candidates = []
    for probe in best_probes:
        if probe[0] == "point":
            _, gx, gy, gden = probe
            candidates.append((Fraction(gx, gden * scale), Fraction(gy, gden * scale)))
        else:
            _, xn, yn, den, ux, uy = probe
            t_min = None
            for a, b, c in coefs:
                su = a * ux + b * uy
                if su == 0:
                    continue
                f0 = a * xn + b * yn + c * den
                if f0 == 0:
                    continue  # line through the vertex
                if (f0 > 0) == (su > 0):
                    continue  # ray moves away from this line
                t = Fraction(-f0, den * su)
                if t_min is None or t < t_min:
                    t_min = t
            step = (t_min / 2) if t_min is not None else Fraction(1)
            px = (Fraction(xn, den) + step * ux) / scale
            py = (Fraction(yn, den) + step * uy) / scale
            candidates.append((px, py))
    best_xy = min(candidates)
    point = Point(best_xy)

    # independent re-verification of the winner with the sweep counter
    if _query_dependency(cps, point):
        raise GeneralPositionViolation(
            "internal: winning probe landed on the arrangement"
        )
    verified = _sweep_count_unchecked(cps, point)
    if verified != best_count:
        raise AssertionError(
            f"internal: wedge count {best_count} != sweep count {verified} at {point}"
        )

    depth = DepthResult(
        query=point, count=best_count, total=total, method=DepthMethod.SWEEP_2D
    )
    return MaxDepthResult(
        point=point,
        depth=depth,
        candidates_evaluated=evaluated,
        method=SearchMethod.ARRANGEMENT_2D,
    )
