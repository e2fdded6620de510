/**
 * Minimal SVG time-series chart: named series, auto-scaled viewBox,
 * no dependencies. SVG (not canvas) so tests can read the geometry back.
 */

const SVG_NS = "http://www.w3.org/2000/svg";
const PALETTE = ["#7b2d8b", "#b8860b", "#2e8b57", "#1e6fb8", "#c0392b", "#555"];

interface Series {
    points: Array<[number, number]>;
    line: SVGPolylineElement;
    color: string;
}

export class SeriesChart {
    readonly el: SVGSVGElement;
    private series = new Map<string, Series>();
    private width: number;
    private height: number;

    constructor(width = 480, height = 160) {
        this.width = width;
        this.height = height;
        this.el = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
        this.el.setAttribute("viewBox", `0 0 ${width} ${height}`);
        this.el.setAttribute("class", "series-chart");
    }

    push(name: string, t: number, value: number): void {
        let s = this.series.get(name);
        if (s === undefined) {
            const line = document.createElementNS(
                SVG_NS,
                "polyline",
            ) as SVGPolylineElement;
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

    clear(): void {
        for (const s of this.series.values()) s.line.remove();
        this.series.clear();
    }

    seriesNames(): string[] {
        return [...this.series.keys()];
    }

    valuesOf(name: string): number[] {
        return (this.series.get(name)?.points ?? []).map(([, v]) => v);
    }

    private redraw(): void {
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
        if (!isFinite(tMin)) return;
        const tSpan = tMax - tMin || 1;
        const vSpan = vMax - vMin || 1;
        const pad = 8;
        for (const s of this.series.values()) {
            const coords = s.points
                .map(([t, v]) => {
                    const x = pad + ((t - tMin) / tSpan) * (this.width - 2 * pad);
                    const y =
                        this.height -
                        pad -
                        ((v - vMin) / vSpan) * (this.height - 2 * pad);
                    return `${x.toFixed(1)},${y.toFixed(1)}`;
                })
                .join(" ");
            s.line.setAttribute("points", coords);
        }
    }
}
