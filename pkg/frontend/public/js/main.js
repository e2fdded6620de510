/**
 * Bench bootstrap: open a session, wire the form / pour dialog / tick
 * controls to the store, and stream trajectory points into the active
 * card and the chart.
 */
import { BenchApi } from "./api.js";
import { SeriesChart } from "./chart.js";
import { applyPoint, buildCreateForm, buildPourDialog, syncCards, } from "./components.js";
import { TrajectoryPoller } from "./poller.js";
import { BenchStore } from "./state.js";
function fault(store, which) {
    const f = which === "create" ? store.createError : store.pourError;
    return f === null ? null : `${f.code}: ${f.message}`;
}
export function mountBench(root, api = new BenchApi()) {
    const store = new BenchStore(api);
    const chart = new SeriesChart();
    const grid = document.createElement("div");
    grid.className = "card-grid";
    const form = buildCreateForm((body) => {
        void store.createContainer(body).then((ok) => {
            form.setError(ok ? null : fault(store, "create"));
        });
    });
    let poller = null;
    const dialog = buildPourDialog((src, dst, volumeL) => {
        void store.pour(src, dst, volumeL).then((ok) => {
            dialog.setError(ok ? null : fault(store, "pour"));
            if (!ok || store.live === null)
                return;
            chart.clear();
            poller?.stop();
            poller = new TrajectoryPoller(api, store, (point) => {
                const card = grid.querySelector(`[data-container-id="${store.live?.containerId}"]`);
                if (card)
                    applyPoint(card, point);
                if (point.ph !== undefined)
                    chart.push("pH", point.t_s, point.ph);
                if (point.temperature_c !== undefined) {
                    chart.push("temp C", point.t_s, point.temperature_c);
                }
            });
            void poller.run();
        });
    });
    const tickControls = document.createElement("div");
    tickControls.className = "tick-controls";
    const clock = document.createElement("span");
    clock.className = "clock";
    clock.textContent = "t = 0.0 s";
    for (const dt of [1, 5, 30]) {
        const btn = document.createElement("button");
        btn.textContent = `+${dt}s`;
        btn.className = "tick-btn";
        btn.addEventListener("click", () => void store.tick(dt));
        tickControls.appendChild(btn);
    }
    tickControls.appendChild(clock);
    store.subscribe(() => {
        const ids = [...store.cards.keys()].sort();
        syncCards(grid, store);
        dialog.refreshOptions(ids);
        clock.textContent = `t = ${store.clockS.toFixed(1)} s`;
        for (const btn of tickControls.querySelectorAll("button")) {
            btn.disabled = store.busy;
        }
        form.root
            .querySelectorAll("button")
            .forEach((b) => (b.disabled = store.busy));
    });
    root.appendChild(form.root);
    root.appendChild(dialog.root);
    root.appendChild(tickControls);
    root.appendChild(grid);
    root.appendChild(chart.el);
    void store.open();
    return store;
}
// auto-mount in the browser; tests import mountBench and drive it directly
if (typeof document !== "undefined" && document.getElementById("bench-root")) {
    mountBench(document.getElementById("bench-root"));
}
//# sourceMappingURL=main.js.map