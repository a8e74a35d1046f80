#!/usr/bin/env python3
"""Generate the L-shaped coupled fixture mesh and its manifest.

Solid: the L-shape (-1,1)^2 \\ [0,1)^2. Fluid: the disk of radius 3 around the
origin minus the solid (the notch square is fluid). The mesh is a structured
grid over the square region plus morphed rings from the square boundary to the
outer circle, smoothed with area-weighted Lloyd iterations plus Delaunay edge
flips (the same recipe the C++ annulus builder uses). Writes MSH 2.2 ASCII and
a JSON manifest with independently computed edge classification counts.

Usage: make_lshape_fixture.py [grid_n] [out_prefix]
  grid_n: cells per unit length in the square region (default 3)
"""

import json
import math
import sys


def build(n):
    verts = []
    vindex = {}

    def vid(x, y):
        key = (round(x, 12), round(y, 12))
        if key not in vindex:
            vindex[key] = len(verts)
            verts.append((x, y))
        return vindex[key]

    tris = []  # (v0, v1, v2, tag) tags: 1 elastic, 2 fluid

    # Square region [-1,1]^2: structured grid, alternating diagonals.
    # Cells in [0,1)x[0,1) (the notch) are fluid, the rest elastic.
    s = 1.0 / n
    for j in range(2 * n):
        for i in range(2 * n):
            x0, y0 = -1 + i * s, -1 + j * s
            x1, y1 = x0 + s, y0 + s
            notch = x0 >= -1e-12 and y0 >= -1e-12
            tag = 2 if notch else 1
            a, b = vid(x0, y0), vid(x1, y0)
            c, d = vid(x1, y1), vid(x0, y1)
            if (i + j) % 2 == 0:
                tris.append((a, b, c, tag))
                tris.append((a, c, d, tag))
            else:
                tris.append((a, b, d, tag))
                tris.append((b, c, d, tag))

    # Boundary walk of the square, counterclockwise from (1,-1).
    ring = []
    for k in range(2 * n):
        ring.append(vid(1.0, -1.0 + k * s))
    for k in range(2 * n):
        ring.append(vid(1.0 - k * s, 1.0))
    for k in range(2 * n):
        ring.append(vid(-1.0, 1.0 - k * s))
    for k in range(2 * n):
        ring.append(vid(-1.0 + k * s, -1.0))
    m = len(ring)

    # Rings morphing the square boundary onto the circle r = 3. The angles
    # follow the square walk so rays stay monotone.
    def square_point(k):
        return verts[ring[k]]

    n_rings = max(2, round((3.0 - 1.4) / (0.9 * s * 3.0)))
    prev = ring
    for layer in range(1, n_rings + 1):
        t = layer / n_rings
        cur = []
        for k in range(m):
            sx, sy = square_point(k)
            th = math.atan2(sy, sx)
            cx, cy = 3.0 * math.cos(th), 3.0 * math.sin(th)
            if layer == n_rings:
                px, py = cx, cy
            else:
                px, py = (1 - t) * sx + t * cx, (1 - t) * sy + t * cy
            cur.append(vid(px, py))
        for k in range(m):
            k1 = (k + 1) % m
            a, b, c, d = prev[k], prev[k1], cur[k1], cur[k]
            if (k + layer) % 2 == 0:
                tris.append((a, b, c, 2))
                tris.append((a, c, d, 2))
            else:
                tris.append((a, b, d, 2))
                tris.append((b, c, d, 2))
        prev = cur

    return verts, tris


def improve(verts, tris, sweep_rounds=40):
    """Lloyd smoothing + Delaunay flips; solid boundary and circle pinned."""
    verts = [list(v) for v in verts]

    def on_lshape_boundary(x, y):
        tol = 1e-9
        if abs(abs(x) - 1) < tol and y <= 1 + tol and y >= -1 - tol:
            return True
        if abs(abs(y) - 1) < tol and x <= 1 + tol and x >= -1 - tol:
            return True
        # notch edges
        if abs(x) < tol and -tol <= y <= 1 + tol:
            return True
        if abs(y) < tol and -tol <= x <= 1 + tol:
            return True
        return False

    vclass = []
    for x, y in verts:
        r = math.hypot(x, y)
        if abs(r - 3.0) < 1e-9:
            vclass.append(2)  # slide on the circle
        elif on_lshape_boundary(x, y):
            vclass.append(3)  # pinned (interface must stay exact)
        else:
            vclass.append(0)

    def area2(t):
        (x0, y0), (x1, y1), (x2, y2) = verts[t[0]], verts[t[1]], verts[t[2]]
        return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)

    def flip_pass():
        edge_map = {}
        for ti, t in enumerate(tris):
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                key = (min(a, b), max(a, b))
                edge_map.setdefault(key, []).append(ti)
        for (a, b), owners in edge_map.items():
            if len(owners) != 2:
                continue
            t1, t2 = owners
            if tris[t1][3] != tris[t2][3]:
                continue
            c = next(v for v in tris[t1][:3] if v not in (a, b))
            d = next(v for v in tris[t2][:3] if v not in (a, b))
            if c == d:
                continue
            ax, ay = verts[a][0] - verts[d][0], verts[a][1] - verts[d][1]
            bx, by = verts[b][0] - verts[d][0], verts[b][1] - verts[d][1]
            cx, cy = verts[c][0] - verts[d][0], verts[c][1] - verts[d][1]
            det = ((ax * ax + ay * ay) * (bx * cy - by * cx)
                   - (bx * bx + by * by) * (ax * cy - ay * cx)
                   + (cx * cx + cy * cy) * (ax * by - ay * bx))
            orient = area2((a, b, c, 0))
            sign = 1.0 if orient > 0 else -1.0
            scale = ((verts[a][0] - verts[b][0]) ** 2 + (verts[a][1] - verts[b][1]) ** 2) ** 2
            if sign * det <= 1e-9 * scale:
                continue
            n1 = (a, d, c, tris[t1][3])
            n2 = (d, b, c, tris[t1][3])
            a1, a2b = area2(n1), area2(n2)
            if abs(a1) < 1e-12 or abs(a2b) < 1e-12 or (a1 > 0) != (a2b > 0):
                continue
            tris[t1], tris[t2] = n1, n2
            return 1
        return 0

    star = [[] for _ in verts]
    for ti, t in enumerate(tris):
        for v in t[:3]:
            star[v].append(ti)

    for _ in range(sweep_rounds):
        for _ in range(3):
            new = [v[:] for v in verts]
            for v in range(len(verts)):
                if vclass[v] == 3 or not star[v]:
                    continue
                acc_x = acc_y = wsum = 0.0
                for ti in star[v]:
                    t = tris[ti]
                    (x0, y0), (x1, y1), (x2, y2) = verts[t[0]], verts[t[1]], verts[t[2]]
                    w = abs(area2(t))
                    acc_x += w * (x0 + x1 + x2) / 3.0
                    acc_y += w * (y0 + y1 + y2) / 3.0
                    wsum += w
                px, py = acc_x / wsum, acc_y / wsum
                if vclass[v] == 2:
                    r = math.hypot(px, py)
                    px, py = 3.0 * px / r, 3.0 * py / r
                new[v] = [px, py]
            verts = new
        guard = 0
        while flip_pass() and guard < 20000:
            guard += 1
        # smoothing moved vertices; rebuild stars after flips
        star = [[] for _ in verts]
        for ti, t in enumerate(tris):
            for v in t[:3]:
                star[v].append(ti)

    return [tuple(v) for v in verts], tris


def classify(verts, tris):
    """Independent edge classification for the manifest."""
    edge_map = {}
    for ti, t in enumerate(tris):
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = (min(a, b), max(a, b))
            edge_map.setdefault(key, []).append(ti)
    counts = {"interior_elastic": 0, "interior_fluid": 0, "interface": 0, "artificial": 0}
    for key, owners in edge_map.items():
        if len(owners) == 2:
            tags = {tris[owners[0]][3], tris[owners[1]][3]}
            if tags == {1}:
                counts["interior_elastic"] += 1
            elif tags == {2}:
                counts["interior_fluid"] += 1
            else:
                counts["interface"] += 1
        else:
            assert tris[owners[0]][3] == 2, "lone elastic boundary edge in fixture"
            counts["artificial"] += 1
    return counts


def mesh_size(verts, tris):
    h = 0.0
    for t in tris:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            h = max(h, math.dist(verts[a], verts[b]))
    return h


def write_msh(path, verts, tris):
    with open(path, "w") as out:
        out.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        out.write(f"$Nodes\n{len(verts)}\n")
        for i, (x, y) in enumerate(verts):
            out.write(f"{i+1} {x:.17g} {y:.17g} 0\n")
        out.write("$EndNodes\n")
        out.write(f"$Elements\n{len(tris)}\n")
        for i, (a, b, c, tag) in enumerate(tris):
            out.write(f"{i+1} 2 2 {tag} {tag} {a+1} {b+1} {c+1}\n")
        out.write("$EndElements\n")


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    prefix = sys.argv[2] if len(sys.argv) > 2 else "tests/fixtures/lshape_r3"
    verts, tris = build(n)
    verts, tris = improve(verts, tris)
    counts = classify(verts, tris)
    write_msh(prefix + ".msh", verts, tris)
    manifest = {
        "vertices": len(verts),
        "triangles": {
            "elastic": sum(1 for t in tris if t[3] == 1),
            "fluid": sum(1 for t in tris if t[3] == 2),
        },
        "h": mesh_size(verts, tris),
        "edges": counts,
        "grid_n": n,
        "outer_radius": 3.0,
    }
    with open(prefix + ".manifest.json", "w") as out:
        json.dump(manifest, out, indent=2)
        out.write("\n")
    print(json.dumps(manifest, indent=2))


if __name__ == "__main__":
    main()
