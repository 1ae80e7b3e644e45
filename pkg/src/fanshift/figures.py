"""Deterministic SVG renderings of the spaces the package computes with.

Every figure is a pure function of its parameters; coordinates are rounded
to six decimals so identical inputs yield byte-identical files.
"""

from __future__ import annotations

from itertools import product as iter_product

from .itinerary import address_value, cantor_address, iter_words
from .mahavier import cantor_chunk_start, fiber_length
from .quotients import AParam, build_fan, host_bundle
from .xspace import XPoint, embed

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "glue")


def _fmt(v: float) -> str:
    return f"{v:.6f}"


class Svg:
    """Tiny append-only SVG document."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="#1f3552", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"'
            f' stroke="{stroke}" stroke-width="{_fmt(width)}"{d} />'
        )

    def polyline(self, pts, stroke="#1f3552", width=1.0):
        body = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{body}" fill="none" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}" />'
        )

    def circle(self, cx, cy, r, fill="#8c2d19"):
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="{fill}" />'
        )

    def text(self, x, y, s, size=14, fill="#333333"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}"'
            f' font-family="sans-serif" fill="{fill}">{s}</text>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}"'
            f' height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="#ffffff" />\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _cantor_addresses(depth: int) -> list[float]:
    out = []
    for digits in iter_product((0, 2), repeat=depth):
        v = 0.0
        scale = 1.0
        for d in digits:
            scale /= 3.0
            v += d * scale
        out.append(v)
    return sorted(out)


def fig_cantor_fan(depth: int = 6) -> str:
    """Straight legs from one apex to the points of a Cantor-set cross-bar."""
    svg = Svg(1000, 700)
    apex = (500.0, 660.0)
    for c in _cantor_addresses(depth):
        svg.line(apex[0], apex[1], 50.0 + 900.0 * c, 50.0, width=0.7)
    svg.circle(apex[0], apex[1], 3.0)
    return svg.render()


def fig_dense_endpoint_fan(depth: int = 7, seed: int = 0) -> str:
    """Decorative fan with endpoint heights smeared over the legs."""
    svg = Svg(1000, 700)
    apex = (500.0, 660.0)
    for i, c in enumerate(_cantor_addresses(depth)):
        h = (((i + 1) * 2654435761 + seed * 97) % 2**32) / 2**32
        h = 0.12 + 0.88 * h
        svg.line(
            apex[0],
            apex[1],
            apex[0] + (50.0 + 900.0 * c - apex[0]) * h,
            apex[1] + (50.0 - apex[1]) * h,
            width=0.7,
        )
    svg.circle(apex[0], apex[1], 3.0)
    return svg.render()


def fig_star_of_fans(depth: int = 5, copies: int = 6) -> str:
    """Shrinking fan copies joined at a common apex."""
    import math as _m

    svg = Svg(1000, 700)
    apex = (500.0, 360.0)
    for n in range(1, copies + 1):
        r = 560.0 * 2.0**-n
        theta0 = -95.0 + 57.0 * n
        for c in _cantor_addresses(depth):
            ang = _m.radians(theta0 + 36.0 * (c - 0.5))
            svg.line(
                apex[0],
                apex[1],
                apex[0] + r * _m.cos(ang),
                apex[1] + r * _m.sin(ang),
                width=0.6,
            )
    svg.circle(apex[0], apex[1], 3.0)
    return svg.render()


def fig_product_and_wedge(depth: int = 5) -> str:
    """Left: Cantor set times interval; right: its vertical compression."""
    svg = Svg(1000, 700)

    def ly(t):
        return 630.0 - 560.0 * t

    for c in _cantor_addresses(depth):
        x = 70.0 + 360.0 * c
        svg.line(x, ly(0.0), x, ly(1.0), width=0.8)
        x = 570.0 + 360.0 * c
        svg.line(x, ly(0.0), x, ly(c), width=0.8, stroke="#245c36")
    svg.text(230.0, 670.0, "product", size=16)
    svg.text(700.0, 670.0, "compressed wedge", size=16)
    return svg.render()


def fig_relation(kmax: int = 7, samples: int = 128) -> str:
    """All six families of the relation drawn in chart coordinates."""
    svg = Svg(1000, 1000)

    def pt(ex, ey):
        return 60.0 + 880.0 * ex, 940.0 - 880.0 * ey

    svg.line(*pt(0, 0), *pt(1, 0), stroke="#bbbbbb", width=0.6)
    svg.line(*pt(0, 0), *pt(0, 1), stroke="#bbbbbb", width=0.6)

    curve = []
    for i in range(samples + 1):
        u = i / samples
        x = XPoint(1, u)
        curve.append(pt(embed(x), embed(XPoint(1, u ** (1.0 / 3.0)))))
    svg.polyline(curve, stroke="#8c2d19", width=1.6)

    curve = []
    for i in range(samples + 1):
        u = i / samples
        curve.append(pt(embed(XPoint(2, u)), embed(XPoint(2, u * u))))
    svg.polyline(curve, stroke="#b4741e", width=1.6)

    for k in range(1, kmax):
        svg.line(
            *pt(embed(XPoint(k, 0.0)), embed(XPoint(k + 1, 0.0))),
            *pt(embed(XPoint(k, 1.0)), embed(XPoint(k + 1, 1.0))),
            stroke="#245c36",
            width=1.4,
        )
    for k in range(2, kmax + 1):
        svg.line(
            *pt(embed(XPoint(k, 0.0)), embed(XPoint(k - 1, 0.0))),
            *pt(embed(XPoint(k, 1.0)), embed(XPoint(k - 1, 1.0))),
            stroke="#2b5f8a",
            width=1.4,
        )
    for k in range(3, kmax + 1):
        svg.line(
            *pt(embed(XPoint(k, 0.0)), embed(XPoint(k, 0.0))),
            *pt(embed(XPoint(k, 1.0)), embed(XPoint(k, 1.0))),
            stroke="#5a3a78",
            width=1.4,
        )
    svg.circle(*pt(1.0, 1.0), 4.0)
    return svg.render()


def fig_model_space(kmax: int = 7, depth: int = 4) -> str:
    """Cantor bundles of shrinking heights plus the compactification dot."""
    svg = Svg(1000, 700)

    def pt(c, tau):
        return 40.0 + 920.0 * c, 640.0 - 1100.0 * tau

    for k in range(1, kmax + 1):
        h = fiber_length(k)
        x0 = cantor_chunk_start(k)
        for w in iter_words(k, depth):
            c = x0 + 3.0 ** (-k) * address_value(cantor_address(w))
            svg.line(*pt(c, 0.0), *pt(c, h), width=0.7)
    svg.circle(*pt(1.0, 0.0), 3.5)
    return svg.render()


def fig_gluing(a: AParam | None = None, depth: int = 3) -> str:
    """Host arcs with their glued guests, one panel per parameter block."""
    if a is None:
        a = AParam((2, 4))
    kmax_bundle = host_bundle(len(a)) + 2 * len(a)
    fan = build_fan(a, kmax_bundle, depth)
    svg = Svg(1000, 700)
    panel_w = 960.0 / len(a)
    for k in range(1, len(a) + 1):
        x0 = 20.0 + (k - 1) * panel_w
        jh = host_bundle(k)
        host_len = fiber_length(jh)

        def hy(tau, top=host_len):
            return 620.0 - 520.0 * (tau / top)

        cols = 2 + a[k]
        step = panel_w / cols
        host_leg = next(
            g.host for g in fan.gluings if fan.legs[g.host].bundle == str(jh)
        )
        hx = x0 + step
        svg.line(hx, hy(0.0), hx, hy(host_len), width=2.4, stroke="#8c2d19")
        for n, gi in enumerate(fan.guests_of(host_leg), start=1):
            gx = x0 + step * (1 + n)
            glen = fan.legs[gi].length
            svg.line(gx, hy(0.0), gx, hy(glen), width=1.6, dash="5,3")
            svg.line(hx, hy(glen), gx, hy(glen), width=0.8, stroke="#999999")
        svg.text(x0 + 8.0, 660.0, f"block {k}: {a[k]} guests", size=13)
    return svg.render()


def render_figure(
    figure_id: str,
    *,
    depth: int | None = None,
    seed: int = 0,
    a: AParam | None = None,
) -> str:
    """Dispatch on figure id; unknown ids raise ValueError."""
    if figure_id == "fig1":
        return fig_cantor_fan(depth or 6)
    if figure_id == "fig2":
        return fig_dense_endpoint_fan(depth or 7, seed)
    if figure_id == "fig3":
        return fig_star_of_fans(depth or 5)
    if figure_id == "fig4":
        return fig_product_and_wedge(depth or 5)
    if figure_id == "fig5":
        return fig_relation(kmax=7, samples=(2 ** (depth or 7)))
    if figure_id == "fig6":
        return fig_model_space(kmax=7, depth=depth or 4)
    if figure_id == "glue":
        return fig_gluing(a, depth or 3)
    raise ValueError(f"unknown figure id {figure_id!r}")
