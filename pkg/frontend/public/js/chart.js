/**
 * Minimal SVG time-series chart: named series, auto-scaled viewBox,
 * no dependencies. SVG (not canvas) so tests can read the geometry back.
 */
const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = ["#7b2d8b", "#b8860b", "#2e8b57", "#1e6fb8", "#c0392b", "#555"];
export class SeriesChart {
    el;
    series = new Map();
    width;
    height;
    constructor(width = 480, height = 160) {
        this.width = width;
        this.height = height;
        this.el = document.createElementNS(SVG_NS, "svg");
        this.el.setAttribute("viewBox", `0 0 ${width} ${height}`);
        this.el.setAttribute("class", "series-chart");
    }
    push(name, t, value) {
        let s = this.series.get(name);
        if (s === undefined) {
            const line = document.createElementNS(SVG_NS, "polyline");
            const color = PALETTE[this.series.size % PALETTE.length];
            line.setAttribute("fill", "none");
            line.setAttribute("stroke", color);
            line.setAttribute("stroke-width", "1.5");
            line.setAttribute("data-series", name);
            this.el.appendChild(line);
            s = { points: [], line, color };
            this.series.set(name, s);
        }
        s.points.push([t, value]);
        this.redraw();
    }
    clear() {
        for (const s of this.series.values())
            s.line.remove();
        this.series.clear();
    }
    seriesNames() {
        return [...this.series.keys()];
    }
    valuesOf(name) {
        return (this.series.get(name)?.points ?? []).map(([, v]) => v);
    }
    redraw() {
        let tMin = Infinity;
        let tMax = -Infinity;
        let vMin = Infinity;
        let vMax = -Infinity;
        for (const s of this.series.values()) {
            for (const [t, v] of s.points) {
                tMin = Math.min(tMin, t);
                tMax = Math.max(tMax, t);
                vMin = Math.min(vMin, v);
                vMax = Math.max(vMax, v);
            }
        }
        if (!isFinite(tMin))
            return;
        const tSpan = tMax - tMin || 1;
        const vSpan = vMax - vMin || 1;
        const pad = 8;
        for (const s of this.series.values()) {
            const coords = s.points
                .map(([t, v]) => {
                const x = pad + ((t - tMin) / tSpan) * (this.width - 2 * pad);
                const y = this.height -
                    pad -
                    ((v - vMin) / vSpan) * (this.height - 2 * pad);
                return `${x.toFixed(1)},${y.toFixed(1)}`;
            })
                .join(" ");
            s.line.setAttribute("points", coords);
        }
    }
}
//# sourceMappingURL=chart.js.map