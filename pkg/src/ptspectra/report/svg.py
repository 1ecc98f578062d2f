"""A small SVG line plotter with byte-deterministic output."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    out = []
    k = 0
    while first + k * step <= hi + 1e-12 * step:
        out.append(round(first + k * step, 12))
        k += 1
    return out


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _label(v: float) -> str:
    return f"{v:.6g}"


@dataclass
class Series:
    xs: list
    ys: list
    color: str
    kind: str = "curve"      # curve | ref | points
    dash: str = ""
    label: str = ""


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 480
    xlog: bool = False
    ylog: bool = False
    xlim: tuple | None = None
    ylim: tuple | None = None
    series: list = field(default_factory=list)

    def line(self, xs, ys, color=None, label="", dash=""):
        self.series.append(Series(list(map(float, xs)), list(map(float, ys)), color or self._next(), "curve", dash, label))

    def reference(self, xs, ys, color="#888888"):
        self.series.append(Series(list(map(float, xs)), list(map(float, ys)), color, "ref", "4,3"))

    def points(self, xs, ys, color=None, label=""):
        self.series.append(Series(list(map(float, xs)), list(map(float, ys)), color or self._next(), "points", "", label))

    def _next(self) -> str:
        return PALETTE[len([s for s in self.series if s.kind != "ref"]) % len(PALETTE)]

    def _t(self, v: float, log: bool) -> float:
        return math.log10(v) if log else v

    def _limits(self):
        def span(vals, log, fixed):
            if fixed is not None:
                return self._t(fixed[0], log), self._t(fixed[1], log)
            vs = [self._t(v, log) for v in vals if math.isfinite(v) and (v > 0 or not log)]
            if not vs:
                return 0.0, 1.0
            lo, hi = min(vs), max(vs)
            if hi == lo:
                lo, hi = lo - 0.5, hi + 0.5
            pad = 0.04 * (hi - lo)
            return lo - pad, hi + pad

        xs = [x for s in self.series for x in s.xs]
        ys = [y for s in self.series for y in s.ys]
        return span(xs, self.xlog, self.xlim), span(ys, self.ylog, self.ylim)

    def render(self) -> str:
        (x0, x1), (y0, y1) = self._limits()
        ml, mr, mt, mb = 70, 20, 36, 52
        pw, ph = self.width - ml - mr, self.height - mt - mb

        def px(x):
            return ml + (self._t(x, self.xlog) - x0) / (x1 - x0) * pw

        def py(y):
            return mt + ph - (self._t(y, self.ylog) - y0) / (y1 - y0) * ph

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
               f'viewBox="0 0 {self.width} {self.height}" font-family="sans-serif" font-size="12">',
               f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>',
               f'<clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath>']
        out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
        for t in nice_ticks(x0, x1):
            X = ml + (t - x0) / (x1 - x0) * pw
            lab = _label(10 ** t) if self.xlog else _label(t)
            out.append(f'<line class="tick" x1="{_fmt(X)}" y1="{mt + ph}" x2="{_fmt(X)}" y2="{mt + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{_fmt(X)}" y="{mt + ph + 18}" text-anchor="middle">{lab}</text>')
        for t in nice_ticks(y0, y1):
            Y = mt + ph - (t - y0) / (y1 - y0) * ph
            lab = _label(10 ** t) if self.ylog else _label(t)
            out.append(f'<line class="tick" x1="{ml - 5}" y1="{_fmt(Y)}" x2="{ml}" y2="{_fmt(Y)}" stroke="black"/>')
            out.append(f'<text x="{ml - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{lab}</text>')
        out.append(f'<text x="{self.width / 2}" y="20" text-anchor="middle" font-size="14">{escape(self.title)}</text>')
        out.append(f'<text x="{ml + pw / 2}" y="{self.height - 10}" text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {mt + ph / 2})">{escape(self.ylabel)}</text>')
        out.append('<g clip-path="url(#plot)">')
        for s in self.series:
            pts = [(px(x), py(y)) for x, y in zip(s.xs, s.ys)
                   if math.isfinite(x) and math.isfinite(y) and (x > 0 or not self.xlog) and (y > 0 or not self.ylog)]
            if s.kind == "points":
                out += [f'<circle class="points" cx="{_fmt(a)}" cy="{_fmt(b)}" r="2.5" fill="{s.color}"/>' for a, b in pts]
                continue
            if len(pts) < 2:
                continue
            d = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            title = f"<title>{escape(s.label)}</title>" if s.label else ""
            out.append(f'<polyline class="{s.kind}" points="{d}" fill="none" stroke="{s.color}" '
                       f'stroke-width="1.3"{dash}>{title}</polyline>')
        out.append("</g>")
        out.append("</svg>")
        return "\n".join(out) + "\n"
