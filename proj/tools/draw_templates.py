#!/usr/bin/env python3
"""Render the ten 28x28 template digits used by `cwknn simgen`.

Each digit is a hand-placed pen path (polylines and arcs in pixel
coordinates) stroked with a round pen, box-filtered from an 8x
supersampled canvas and softened with a small Gaussian (pen bleed),
giving MNIST-like anti-aliased P5 files.

    python3 tools/draw_templates.py data/templates
"""
import math
import pathlib
import sys

SIDE = 28
SUPER = 8
PEN = 1.4  # pen radius in output pixels
BLEED = 0.7  # Gaussian sigma of the ink spread, output pixels


def arc(cx, cy, rx, ry, a0, a1, steps=24):
    """Points on an ellipse, angles in degrees, y pointing down."""
    return [(cx + rx * math.cos(math.radians(a0 + (a1 - a0) * t / steps)),
             cy - ry * math.sin(math.radians(a0 + (a1 - a0) * t / steps))) for t in range(steps + 1)]


STROKES = {
    0: [arc(14, 14, 5.5, 8.5, 100, 460)],
    1: [[(12.0, 8.5), (15.0, 5.5), (14.6, 22.5)]],
    2: [arc(13.8, 10, 5, 4.5, 160, -40) + [(9.0, 21.5), (19.5, 21.5)]],
    3: [arc(13.5, 9.8, 4.6, 4.0, 150, -90) + arc(13.5, 17.6, 5.2, 4.6, 90, -150)],
    4: [[(16.5, 5.5), (8.5, 17.0), (20.0, 17.0)], [(16.5, 10.0), (16.5, 22.5)]],
    5: [[(18.5, 6.0), (10.5, 6.0), (9.8, 12.5)] + arc(13.8, 16.8, 5.2, 5.2, 130, -150)],
    6: [[(17.5, 5.5)] + arc(14.5, 16.5, 5.5, 10.5, 120, 190, 10) + arc(14.0, 17.5, 4.8, 4.6, 190, 550)],
    7: [[(8.5, 6.5), (19.5, 6.5), (12.5, 22.5)]],
    8: [arc(14, 9.6, 4.2, 4.0, -90, 270), arc(14, 17.9, 5.0, 4.4, 90, 450)],
    9: [arc(14.0, 10.5, 4.8, 4.6, 0, 360), [(18.8, 10.5), (17.8, 16.0), (15.5, 22.5)]],
}


def dist_to_segment(px, py, a, b):
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    length2 = dx * dx + dy * dy
    t = 0.0 if length2 == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / length2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def render(strokes):
    segments = [(p[i], p[i + 1]) for p in strokes for i in range(len(p) - 1)]
    out = [0.0] * (SIDE * SIDE)
    for y in range(SIDE):
        for x in range(SIDE):
            ink = 0
            for sy in range(SUPER):
                for sx in range(SUPER):
                    px = x + (sx + 0.5) / SUPER
                    py = y + (sy + 0.5) / SUPER
                    if any(dist_to_segment(px, py, a, b) <= PEN for a, b in segments):
                        ink += 1
            out[y * SIDE + x] = ink / (SUPER * SUPER)
    return bytes(min(255, round(255 * v)) for v in bleed(out))


def bleed(cover):
    radius = math.ceil(3 * BLEED)
    kernel = [math.exp(-0.5 * (i / BLEED) ** 2) for i in range(-radius, radius + 1)]
    total = sum(kernel)
    kernel = [k / total for k in kernel]

    def blur(img, dx, dy):
        out = [0.0] * (SIDE * SIDE)
        for y in range(SIDE):
            for x in range(SIDE):
                acc = 0.0
                for i, k in enumerate(kernel):
                    sx, sy = x + dx * (i - radius), y + dy * (i - radius)
                    if 0 <= sx < SIDE and 0 <= sy < SIDE:
                        acc += k * img[sy * SIDE + sx]
                out[y * SIDE + x] = acc
        return out

    return blur(blur(cover, 1, 0), 0, 1)


def main():
    out_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/templates")
    out_dir.mkdir(parents=True, exist_ok=True)
    for digit, strokes in STROKES.items():
        header = f"P5\n{SIDE} {SIDE}\n255\n".encode()
        (out_dir / f"{digit}.pgm").write_bytes(header + render(strokes))


if __name__ == "__main__":
    main()
