/**
 * DOM builders for the bench. No framework — each component is a plain
 * element factory plus an update function the store/poller can call.
 *
 * Color rule: the swatch always carries the service-reported RGBA, both
 * as the painted style and verbatim on data-rgba. No client-side color
 * math, ever (the whole point of the bench is that the server is the
 * source of truth).
 */

import { ContainerInfo, Rgba, TrajectoryPoint } from "./api.js";
import { BenchStore } from "./state.js";

export function rgbaKey(rgba: Rgba): string {
    // String(n) round-trips IEEE doubles, so equality against the JSON
    // payload is exact, not approximate
    return `${rgba.r},${rgba.g},${rgba.b},${rgba.alpha}`;
}

export function rgbaCss(rgba: Rgba): string {
    return `rgba(${rgba.r}, ${rgba.g}, ${rgba.b}, ${rgba.alpha})`;
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

// -- container card ---------------------------------------------------------

function paintSwatch(swatch: HTMLElement, rgba: Rgba | null): void {
    if (rgba === null) {
        swatch.style.backgroundColor = "transparent";
        delete swatch.dataset.rgba;
        return;
    }
    swatch.style.backgroundColor = rgbaCss(rgba);
    swatch.dataset.rgba = rgbaKey(rgba);
}

function paintPh(gauge: HTMLElement, ph: number | null): void {
    const bar = gauge.querySelector<HTMLElement>(".bar")!;
    const label = gauge.querySelector<HTMLElement>("label")!;
    if (ph === null) {
        gauge.dataset.ph = "";
        bar.style.width = "0%";
        label.textContent = "pH —";
        return;
    }
    gauge.dataset.ph = String(ph);
    const frac = Math.min(Math.max(ph / 14, 0), 1);
    bar.style.width = `${(frac * 100).toFixed(1)}%`;
    label.textContent = `pH ${ph.toFixed(2)}`;
}

function paintTemperature(thermo: HTMLElement, tempC: number): void {
    thermo.dataset.temp = String(tempC);
    thermo.querySelector<HTMLElement>("label")!.textContent =
        `${tempC.toFixed(2)} °C`;
}

function paintMoles(table: HTMLTableElement, amounts: Record<string, number>): void {
    table.textContent = "";
    for (const name of Object.keys(amounts).sort()) {
        const row = table.insertRow();
        row.insertCell().textContent = name;
        const qty = row.insertCell();
        qty.textContent = amounts[name].toPrecision(4);
        qty.dataset.mol = String(amounts[name]);
    }
}

export function renderCard(info: ContainerInfo): HTMLElement {
    const card = el("article", "card");
    card.dataset.containerId = info.id;

    const header = el("header");
    header.appendChild(el("h3", undefined, info.id));
    header.appendChild(
        el("span", "volume", `${info.volume_l.toFixed(3)} L`),
    );
    card.appendChild(header);

    const swatch = el("div", "swatch");
    card.appendChild(swatch);

    const gauge = el("div", "gauge ph-gauge");
    gauge.appendChild(el("div", "bar"));
    gauge.appendChild(el("label"));
    card.appendChild(gauge);

    const thermo = el("div", "thermo");
    thermo.appendChild(el("label"));
    card.appendChild(thermo);

    const moles = document.createElement("table");
    moles.className = "moles";
    card.appendChild(moles);

    const pending = el("div", "pending");
    card.appendChild(pending);

    updateCard(card, info);
    return card;
}

export function updateCard(card: HTMLElement, info: ContainerInfo): void {
    card.querySelector<HTMLElement>(".volume")!.textContent =
        `${info.volume_l.toFixed(3)} L`;
    const rep = info.representation;
    paintSwatch(card.querySelector<HTMLElement>(".swatch")!, rep?.rgba ?? null);
    paintPh(card.querySelector<HTMLElement>(".ph-gauge")!, rep?.ph ?? null);
    paintTemperature(
        card.querySelector<HTMLElement>(".thermo")!,
        info.temperature_c,
    );
    paintMoles(
        card.querySelector<HTMLTableElement>(".moles")!,
        info.components,
    );
    const pending = card.querySelector<HTMLElement>(".pending")!;
    if (info.pending !== null) {
        pending.textContent =
            `relaxing ${info.pending.elapsed_s.toFixed(1)} / ` +
            `${info.pending.duration_s.toFixed(1)} s`;
        pending.style.display = "";
    } else {
        pending.textContent = "";
        pending.style.display = "none";
    }
}

/** Live update from a realized trajectory point (poller path). */
export function applyPoint(card: HTMLElement, point: TrajectoryPoint): void {
    if (point.rgba !== undefined) {
        paintSwatch(card.querySelector<HTMLElement>(".swatch")!, point.rgba);
    }
    if (point.ph !== undefined) {
        paintPh(card.querySelector<HTMLElement>(".ph-gauge")!, point.ph);
    }
    if (point.temperature_c !== undefined) {
        paintTemperature(
            card.querySelector<HTMLElement>(".thermo")!,
            point.temperature_c,
        );
    }
    paintMoles(
        card.querySelector<HTMLTableElement>(".moles")!,
        point.amounts_mol,
    );
}

// -- create-container form --------------------------------------------------

export interface CreateFormHandles {
    root: HTMLFormElement;
    addReagentRow: (name?: string, mol?: string) => void;
    setError: (text: string | null) => void;
}

export function buildCreateForm(
    onSubmit: (body: {
        id: string;
        amounts: Record<string, number>;
        volume_l: number;
    }) => void,
): CreateFormHandles {
    const form = document.createElement("form");
    form.className = "create-form";
    form.noValidate = true;

    const idInput = el("input") as HTMLInputElement;
    idInput.name = "container-id";
    idInput.placeholder = "container id";
    form.appendChild(idInput);

    const rows = el("div", "reagent-rows");
    form.appendChild(rows);

    const addReagentRow = (name = "", mol = ""): void => {
        const row = el("div", "reagent-row");
        const nameInput = el("input") as HTMLInputElement;
        nameInput.className = "reagent-name";
        nameInput.placeholder = "species / compound";
        nameInput.value = name;
        const molInput = el("input") as HTMLInputElement;
        molInput.className = "reagent-mol";
        molInput.placeholder = "mol";
        molInput.value = mol;
        row.appendChild(nameInput);
        row.appendChild(molInput);
        rows.appendChild(row);
    };
    addReagentRow();

    const addButton = el("button", "add-reagent", "+ reagent");
    addButton.type = "button";
    addButton.addEventListener("click", () => addReagentRow());
    form.appendChild(addButton);

    const volumeInput = el("input") as HTMLInputElement;
    volumeInput.name = "volume-l";
    volumeInput.placeholder = "volume (L)";
    form.appendChild(volumeInput);

    const submit = el("button", "create-submit", "create");
    submit.type = "submit";
    form.appendChild(submit);

    const error = el("div", "form-error");
    error.style.display = "none";
    form.appendChild(error);

    const setError = (text: string | null): void => {
        if (text === null) {
            error.style.display = "none";
            error.textContent = "";
        } else {
            error.style.display = "";
            error.textContent = text;
        }
    };

    form.addEventListener("submit", (event) => {
        event.preventDefault();
        const amounts: Record<string, number> = {};
        for (const row of rows.querySelectorAll(".reagent-row")) {
            const name = row.querySelector<HTMLInputElement>(".reagent-name")!
                .value.trim();
            const mol = Number(
                row.querySelector<HTMLInputElement>(".reagent-mol")!.value,
            );
            if (name !== "" && isFinite(mol)) amounts[name] = mol;
        }
        onSubmit({
            id: idInput.value.trim(),
            amounts,
            volume_l: Number(volumeInput.value),
        });
    });

    return { root: form, addReagentRow, setError };
}

// -- pour dialog ------------------------------------------------------------

export interface PourDialogHandles {
    root: HTMLElement;
    refreshOptions: (ids: string[]) => void;
    setError: (text: string | null) => void;
}

export function buildPourDialog(
    onPour: (src: string, dst: string, volumeL: number) => void,
): PourDialogHandles {
    const root = el("div", "pour-dialog");

    const srcSelect = document.createElement("select");
    srcSelect.className = "pour-src";
    const dstSelect = document.createElement("select");
    dstSelect.className = "pour-dst";
    const volume = el("input") as HTMLInputElement;
    volume.className = "pour-volume";
    volume.placeholder = "L";

    const go = el("button", "pour-go", "pour");
    go.type = "button";
    go.addEventListener("click", () => {
        onPour(srcSelect.value, dstSelect.value, Number(volume.value));
    });

    const error = el("div", "pour-error");
    error.style.display = "none";

    root.appendChild(srcSelect);
    root.appendChild(dstSelect);
    root.appendChild(volume);
    root.appendChild(go);
    root.appendChild(error);

    return {
        root,
        refreshOptions(ids: string[]): void {
            for (const select of [srcSelect, dstSelect]) {
                const keep = select.value;
                select.textContent = "";
                for (const id of ids) {
                    const opt = document.createElement("option");
                    opt.value = id;
                    opt.textContent = id;
                    select.appendChild(opt);
                }
                if (ids.includes(keep)) select.value = keep;
            }
        },
        setError(text: string | null): void {
            if (text === null) {
                error.style.display = "none";
                error.textContent = "";
            } else {
                error.style.display = "";
                error.textContent = text;
            }
        },
    };
}

// -- bench shell ------------------------------------------------------------

/** Keep a card grid in sync with the store's container map. */
export function syncCards(
    grid: HTMLElement,
    store: BenchStore,
): Map<string, HTMLElement> {
    const byId = new Map<string, HTMLElement>();
    for (const existing of grid.querySelectorAll<HTMLElement>(".card")) {
        const id = existing.dataset.containerId!;
        if (store.cards.has(id)) {
            byId.set(id, existing);
        } else {
            existing.remove();
        }
    }
    for (const [id, info] of store.cards) {
        const card = byId.get(id);
        if (card === undefined) {
            const fresh = renderCard(info);
            grid.appendChild(fresh);
            byId.set(id, fresh);
        } else {
            updateCard(card, info);
        }
    }
    return byId;
}
