/**
 * Typed client for the bench service /v1 API.
 *
 * Every value the UI renders originates from one of these payloads; the
 * client does no chemistry of its own — it just moves JSON.
 */

export interface Rgba {
    r: number;
    g: number;
    b: number;
    alpha: number;
}

export interface Representation {
    rgba: Rgba;
    ph: number;
    temperature_c: number;
    heat_released_kj: number;
    states: Record<string, string>;
}

export interface PendingInfo {
    elapsed_s: number;
    duration_s: number;
}

export interface ContainerInfo {
    id: string;
    volume_l: number;
    temperature_c: number;
    components: Record<string, number>;
    pending: PendingInfo | null;
    representation: Representation | null;
}

export interface TrajectoryPoint {
    t_s: number;
    amounts_mol: Record<string, number>;
    ph?: number;
    temperature_c?: number;
    rgba?: Rgba;
}

export interface TrajectoryWindow {
    trajectory_id: string;
    container_id: string;
    dt_s: number;
    duration_s: number;
    realized_s: number;
    complete: boolean;
    points: TrajectoryPoint[];
}

export interface ResolutionStep {
    reaction_id: number;
    quantity_mol: number;
    consumed_mol: Record<string, number>;
    produced_mol: Record<string, number>;
    heat_released_kj: number | null;
}

export interface PourResult {
    report: {
        steps: ResolutionStep[];
        final_mol: Record<string, number>;
        spectators: string[];
        total_heat_released_kj: number;
    };
    container: ContainerInfo;
    trajectory: {
        trajectory_id: string;
        dt_s: number;
        duration_s: number;
    } | null;
}

export interface SpeciesEntry {
    name: string;
    charge: number;
    formation_enthalpy_kj_mol: number | null;
    color_rgb: [number, number, number] | null;
    state: string;
}

/** Service-reported failure: status plus the machine-readable reason code. */
export class ApiRequestError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        message: string,
    ) {
        super(message);
        this.name = "ApiRequestError";
    }
}

export class BenchApi {
    constructor(readonly base: string = "") {}

    private async request<T>(
        method: string,
        path: string,
        body?: unknown,
    ): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const res = await fetch(this.base + path, init);
        if (res.status === 204) {
            return undefined as T;
        }
        let payload: unknown = null;
        try {
            payload = await res.json();
        } catch {
            // fall through; non-JSON bodies become a generic error below
        }
        if (!res.ok) {
            const fault = (payload as { error?: { code?: string; message?: string } })
                ?.error;
            throw new ApiRequestError(
                res.status,
                fault?.code ?? "http_error",
                fault?.message ?? `HTTP ${res.status}`,
            );
        }
        return payload as T;
    }

    openSession(): Promise<{ session_id: string; ttl_s: number }> {
        return this.request("POST", "/v1/sessions");
    }

    closeSession(sid: string): Promise<void> {
        return this.request("DELETE", `/v1/sessions/${sid}`);
    }

    listSpecies(): Promise<SpeciesEntry[]> {
        return this.request("GET", "/v1/db/species");
    }

    listContainers(sid: string): Promise<ContainerInfo[]> {
        return this.request("GET", `/v1/sessions/${sid}/containers`);
    }

    getContainer(sid: string, cid: string): Promise<ContainerInfo> {
        return this.request(
            "GET",
            `/v1/sessions/${sid}/containers/${encodeURIComponent(cid)}`,
        );
    }

    createContainer(
        sid: string,
        body: {
            id: string;
            amounts: Record<string, number>;
            volume_l: number;
            temperature_c?: number;
        },
    ): Promise<ContainerInfo> {
        return this.request("POST", `/v1/sessions/${sid}/containers`, body);
    }

    pour(
        sid: string,
        body: { src: string; dst: string; volume_l: number },
    ): Promise<PourResult> {
        return this.request("POST", `/v1/sessions/${sid}/actions/pour`, body);
    }

    tick(sid: string, dtS: number): Promise<{ clock_s: number }> {
        return this.request("POST", `/v1/sessions/${sid}/actions/tick`, {
            dt_s: dtS,
        });
    }

    trajectoryWindow(
        sid: string,
        tid: string,
        fromS: number,
        waitS = 0,
    ): Promise<TrajectoryWindow> {
        const qs = `from_s=${fromS}&wait_s=${waitS}`;
        return this.request(
            "GET",
            `/v1/sessions/${sid}/trajectories/${tid}?${qs}`,
        );
    }
}
