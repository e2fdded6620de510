import { beforeEach, describe, expect, it } from "vitest";

import { ContainerInfo, TrajectoryPoint } from "../src/api.js";
import { SeriesChart } from "../src/chart.js";
import {
    applyPoint,
    buildCreateForm,
    buildPourDialog,
    renderCard,
    rgbaCss,
    rgbaKey,
    updateCard,
} from "../src/components.js";
import { BenchStore } from "../src/state.js";

function sampleInfo(overrides: Partial<ContainerInfo> = {}): ContainerInfo {
    return {
        id: "A",
        volume_l: 0.1,
        temperature_c: 25.0,
        components: { "MnO4-": 0.01, "K+": 0.01 },
        pending: null,
        representation: {
            rgba: { r: 128, g: 0, b: 128, alpha: 0.6837722339831622 },
            ph: 7.0,
            temperature_c: 25.0,
            heat_released_kj: 0.0,
            states: { "MnO4-": "aq", "K+": "aq" },
        },
        ...overrides,
    };
}

beforeEach(() => {
    document.body.innerHTML = "";
});

describe("container card", () => {
    it("paints the swatch verbatim from the service rgba", () => {
        const info = sampleInfo();
        const card = renderCard(info);
        const swatch = card.querySelector<HTMLElement>(".swatch")!;
        expect(swatch.dataset.rgba).toBe("128,0,128,0.6837722339831622");
        expect(swatch.style.backgroundColor.startsWith("rgba(")).toBe(true);
    });

    it("shows pH at toFixed(2) but keeps full precision on data-ph", () => {
        const info = sampleInfo();
        info.representation!.ph = 1.4142135623730951;
        const card = renderCard(info);
        const gauge = card.querySelector<HTMLElement>(".ph-gauge")!;
        expect(gauge.dataset.ph).toBe("1.4142135623730951");
        expect(gauge.querySelector("label")!.textContent).toBe("pH 1.41");
    });

    it("sorts the mole table by species name", () => {
        const card = renderCard(
            sampleInfo({ components: { "K+": 0.01, "Cl-": 0.1, "H+": 0.08 } }),
        );
        const names = [...card.querySelectorAll(".moles td:first-child")].map(
            (td) => td.textContent,
        );
        expect(names).toEqual(["Cl-", "H+", "K+"]);
    });

    it("hides the pending banner unless a relaxation is underway", () => {
        const card = renderCard(sampleInfo());
        const banner = card.querySelector<HTMLElement>(".pending")!;
        expect(banner.style.display).toBe("none");
        updateCard(card, sampleInfo({ pending: { elapsed_s: 2.5, duration_s: 10 } }));
        expect(banner.style.display).not.toBe("none");
        expect(banner.textContent).toContain("2.5 / 10.0 s");
    });

    it("applyPoint repaints swatch, gauge and moles from one point", () => {
        const card = renderCard(sampleInfo());
        const point: TrajectoryPoint = {
            t_s: 1.5,
            amounts_mol: { "Fe^3+": 0.025, "Cl-": 0.18 },
            ph: 1.2,
            temperature_c: 29.5,
            rgba: { r: 200, g: 180, b: 40, alpha: 0.5 },
        };
        applyPoint(card, point);
        expect(card.querySelector<HTMLElement>(".swatch")!.dataset.rgba).toBe(
            "200,180,40,0.5",
        );
        expect(card.querySelector<HTMLElement>(".ph-gauge")!.dataset.ph).toBe("1.2");
        expect(card.querySelector<HTMLElement>(".thermo")!.dataset.temp).toBe("29.5");
        const names = [...card.querySelectorAll(".moles td:first-child")].map(
            (td) => td.textContent,
        );
        expect(names).toEqual(["Cl-", "Fe^3+"]);
    });
});

describe("rgba helpers", () => {
    it("round-trip doubles without loss", () => {
        const rgba = { r: 1, g: 2, b: 3, alpha: 1 - Math.pow(10, -0.5) };
        const [r, g, b, a] = rgbaKey(rgba).split(",");
        expect(Number(a)).toBe(rgba.alpha);
        expect([r, g, b]).toEqual(["1", "2", "3"]);
        expect(rgbaCss(rgba)).toBe(`rgba(1, 2, 3, ${rgba.alpha})`);
    });
});

describe("create form", () => {
    it("collects reagent rows into an amounts map", () => {
        let got: { id: string; amounts: Record<string, number>; volume_l: number } | null =
            null;
        const form = buildCreateForm((body) => {
            got = body;
        });
        document.body.appendChild(form.root);
        form.addReagentRow();
        const rows = form.root.querySelectorAll(".reagent-row");
        (rows[0].querySelector(".reagent-name") as HTMLInputElement).value = "KMnO4";
        (rows[0].querySelector(".reagent-mol") as HTMLInputElement).value = "0.01";
        (rows[1].querySelector(".reagent-name") as HTMLInputElement).value = "HCl";
        (rows[1].querySelector(".reagent-mol") as HTMLInputElement).value = "0.08";
        (form.root.querySelector('[name="container-id"]') as HTMLInputElement).value =
            "A";
        (form.root.querySelector('[name="volume-l"]') as HTMLInputElement).value =
            "0.1";
        form.root.dispatchEvent(new Event("submit"));
        expect(got).toEqual({
            id: "A",
            amounts: { KMnO4: 0.01, HCl: 0.08 },
            volume_l: 0.1,
        });
    });

    it("shows and clears the inline error", () => {
        const form = buildCreateForm(() => {});
        const error = form.root.querySelector<HTMLElement>(".form-error")!;
        expect(error.style.display).toBe("none");
        form.setError("charge_imbalance: net charge +0.01");
        expect(error.style.display).not.toBe("none");
        expect(error.textContent).toContain("charge_imbalance");
        form.setError(null);
        expect(error.style.display).toBe("none");
    });
});

describe("pour dialog", () => {
    it("keeps the current selection when options refresh", () => {
        const dialog = buildPourDialog(() => {});
        dialog.refreshOptions(["A", "B"]);
        const src = dialog.root.querySelector<HTMLSelectElement>(".pour-src")!;
        src.value = "B";
        dialog.refreshOptions(["A", "B", "C"]);
        expect(src.value).toBe("B");
        expect(src.options.length).toBe(3);
    });

    it("fires onPour with parsed volume", () => {
        let poured: [string, string, number] | null = null;
        const dialog = buildPourDialog((s, d, v) => {
            poured = [s, d, v];
        });
        dialog.refreshOptions(["A", "B"]);
        dialog.root.querySelector<HTMLSelectElement>(".pour-src")!.value = "A";
        dialog.root.querySelector<HTMLSelectElement>(".pour-dst")!.value = "B";
        dialog.root.querySelector<HTMLInputElement>(".pour-volume")!.value = "0.1";
        dialog.root.querySelector<HTMLButtonElement>(".pour-go")!.click();
        expect(poured).toEqual(["A", "B", 0.1]);
    });
});

describe("series chart", () => {
    it("tracks one polyline per series and scales into the viewBox", () => {
        const chart = new SeriesChart(100, 50);
        chart.push("pH", 0, 1);
        chart.push("pH", 1, 7);
        chart.push("temp", 0, 25);
        expect(chart.seriesNames()).toEqual(["pH", "temp"]);
        expect(chart.valuesOf("pH")).toEqual([1, 7]);
        const line = chart.el.querySelector('[data-series="pH"]')!;
        const coords = line.getAttribute("points")!.split(" ");
        expect(coords.length).toBe(2);
        for (const pair of coords) {
            const [x, y] = pair.split(",").map(Number);
            expect(x).toBeGreaterThanOrEqual(0);
            expect(x).toBeLessThanOrEqual(100);
            expect(y).toBeGreaterThanOrEqual(0);
            expect(y).toBeLessThanOrEqual(50);
        }
    });

    it("clear() removes every line", () => {
        const chart = new SeriesChart();
        chart.push("a", 0, 1);
        chart.clear();
        expect(chart.seriesNames()).toEqual([]);
        expect(chart.el.querySelectorAll("polyline").length).toBe(0);
    });
});

describe("store mutation discipline", () => {
    it("rejects overlapping mutations instead of queueing", async () => {
        let release!: () => void;
        const parked = new Promise<{ clock_s: number }>((resolve) => {
            release = () => resolve({ clock_s: 1 });
        });
        const api = {
            openSession: async () => ({ session_id: "s", ttl_s: 60 }),
            tick: () => parked,
        };
        const store = new BenchStore(api as never);
        await store.open();
        const first = store.tick(1.0);
        await expect(store.tick(1.0)).rejects.toThrow(/in flight/);
        release();
        await first;
        expect(store.busy).toBe(false);
        // settled: the next mutation is welcome again
        await store.tick(1.0);
    });
});
