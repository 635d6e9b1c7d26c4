"""Independent oracles used to freeze expected values in the C++ unit tests.

Run: python3 tests/oracles/frozen_values.py
"""
import math
import numpy as np


def corners(cx, cy, w, h, theta_deg):
    t = math.radians(theta_deg)
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    local = np.array([[-w / 2, -h / 2], [w / 2, -h / 2], [w / 2, h / 2], [-w / 2, h / 2]])
    return local @ rot.T + np.array([cx, cy])


def raster_area(polys, n=4000):
    """Cell-count the intersection of convex CCW polygons on an n x n grid."""
    allpts = np.vstack(polys)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    xs = lo[0] + (np.arange(n) + 0.5) * (hi[0] - lo[0]) / n
    ys = lo[1] + (np.arange(n) + 0.5) * (hi[1] - lo[1]) / n
    X, Y = np.meshgrid(xs, ys)
    inside = np.ones_like(X, dtype=bool)
    for poly in polys:
        for i in range(len(poly)):
            a, b = poly[i], poly[(i + 1) % len(poly)]
            inside &= (b[0] - a[0]) * (Y - a[1]) - (b[1] - a[1]) * (X - a[0]) >= 0
    cell = (hi[0] - lo[0]) * (hi[1] - lo[1]) / n / n
    return inside.sum() * cell


def raster_iou(p, q, n=4000):
    union_box = np.vstack([p, q])
    inter = raster_area([p, q], n)
    ap = raster_area([p], n) if False else polygon_area(p)
    aq = polygon_area(q)
    return inter / (ap + aq - inter)


def polygon_area(p):
    x, y = p[:, 0], p[:, 1]
    return 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def min_rect_sweep(points, step=0.01):
    best = None
    for k in range(int(round(90 / step))):
        t = math.radians(k * step)
        u = np.array([math.cos(t), math.sin(t)])
        v = np.array([-math.sin(t), math.cos(t)])
        pu, pv = points @ u, points @ v
        area = (pu.max() - pu.min()) * (pv.max() - pv.min())
        if best is None or area < best[0]:
            best = (area, k * step)
    return best


def eleven_point(flags, num_gt):
    tp = fp = 0
    pts = []
    for f in flags:
        tp += f
        fp += 1 - f
        pts.append((tp / num_gt, tp / (tp + fp)))
    total = 0.0
    for i in range(11):
        t = i / 10
        cand = [p for r, p in pts if r >= t]
        total += max(cand) if cand else 0.0
    return total / 11


def all_point(flags, num_gt):
    tp = fp = 0
    pts = []
    for f in flags:
        tp += f
        fp += 1 - f
        pts.append((tp / num_gt, tp / (tp + fp)))
    area, prev_r = 0.0, 0.0
    for i, (r, _) in enumerate(pts):
        env = max(p for _, p in pts[i:])
        area += (r - prev_r) * env
        prev_r = r
    return area


if __name__ == "__main__":
    print("corners(5,5,4,2,30):", repr(corners(5, 5, 4, 2, 30).tolist()))
    sq = corners(0, 0, 2, 2, 0)
    sq45 = corners(0, 0, 2, 2, 45)
    print("raster IoU square vs 45deg:", raster_iou(sq, sq45))
    r2 = math.sqrt(2)
    octagon = 8 * (r2 - 1)  # octagon inscribed: area = 2*(1+sqrt2)*s^2, s = 2(sqrt2-1)... see test
    print("analytic:", 2 * (r2 - 1) / (2 - 2 * (r2 - 1)))
    trap = np.array([[0, 0], [4, 0], [4, 2], [1, 2]], dtype=float)
    rect = np.array([[0, 0], [4, 0], [4, 2], [0, 2]], dtype=float)
    print("trapezoid IoU vs min-rect:", raster_iou(trap, rect))
    print("diamond sweep:", min_rect_sweep(np.array([[0, 0], [1, 1], [2, 0], [1, -1]], dtype=float)))
    print("11pt TP,FP,TP,FP / 2:", repr(eleven_point([1, 0, 1, 0], 2)))
    print("all-point TP,FP,TP,FP / 2:", repr(all_point([1, 0, 1, 0], 2)))


# ---- random streams -------------------------------------------------------
M64 = (1 << 64) - 1


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def splitmix_seq(seed, n):
    out = []
    for _ in range(n):
        seed = (seed + 0x9E3779B97F4A7C15) & M64
        out.append(mix64(seed))
    return out


class Xoshiro:
    def __init__(self, s):
        self.s = list(s)

    @classmethod
    def seeded(cls, seed):
        return cls(splitmix_seq(seed, 4))

    def next(self):
        s = self.s
        rotl = lambda x, k: ((x << k) | (x >> (64 - k))) & M64
        result = (rotl((s[1] * 5) & M64, 7) * 9) & M64
        t = (s[1] << 17) & M64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def unit(self):
        return (self.next() >> 11) * 2.0**-53

    def rand_int(self, a, c):
        n = c - a + 1
        threshold = ((1 << 64) - n) % n
        while True:
            x = self.next()
            if x >= threshold:
                return a + x % n

    def rand_float(self, a, c):
        x = a + self.unit() * (c - a)
        return x if x < c else math.nextafter(c, a)


def substream_key(key, label):
    data = label.encode()
    h = mix64(key ^ 0x6A09E667F3BCC909)
    for i in range(0, len(data), 8):
        chunk = int.from_bytes(data[i:i + 8], "little")
        h = mix64(((h + 0x9E3779B97F4A7C15) & M64) ^ chunk)
    return mix64(h ^ ((len(data) * 0xD1B54A32D192ED03) & M64))


def noisy_default(box, rng):
    """Default setting: isotropic scale [0.99,1.01), rotation [-0.01,0.01), shift in {-1,0,1}."""
    cx, cy, w, h, th = box
    if w <= 16 or h <= 16:
        return box
    a = rng.rand_float(0.99, 1.01)
    th = th + rng.rand_float(-0.01, 0.01)
    t = rng.rand_int(-1, 1)
    return (cx + t, cy + t, w * a, h * a, th)


def rng_section():
    print("splitmix64(1234567):", splitmix_seq(1234567, 5))
    print("xoshiro{1,2,3,4} first:", Xoshiro([1, 2, 3, 4]).next())
    r = Xoshiro.seeded(42)
    print("rand_int(0,9) x10 seed 42:", [r.rand_int(0, 9) for _ in range(10)])
    r = Xoshiro.seeded(42)
    print("rand_float(0,1) x3 seed 42:", [repr(r.rand_float(0.0, 1.0)) for _ in range(3)])
    print("substream(42,'P0001'):", substream_key(42, "P0001"))
    print("substream(42,'P0001||trial-0'):", substream_key(42, "P0001||trial-0"))
    rng = Xoshiro.seeded(substream_key(7, "img"))
    boxes = [(100.0, 50.0, 40.0, 20.0, 10.0), (10.0, 10.0, 8.0, 30.0, 0.0), (300.0, 200.0, 64.0, 32.0, -45.0)]
    print("default pipeline seed 7 label img:")
    for b in boxes:
        print("  ", [repr(v) for v in noisy_default(b, rng)])


if __name__ == "__main__":
    rng_section()
