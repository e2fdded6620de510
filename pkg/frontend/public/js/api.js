/**
 * Typed client for the bench service /v1 API.
 *
 * Every value the UI renders originates from one of these payloads; the
 * client does no chemistry of its own — it just moves JSON.
 */
/** Service-reported failure: status plus the machine-readable reason code. */
export class ApiRequestError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
        this.name = "ApiRequestError";
    }
}
export class BenchApi {
    base;
    constructor(base = "") {
        this.base = base;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const res = await fetch(this.base + path, init);
        if (res.status === 204) {
            return undefined;
        }
        let payload = null;
        try {
            payload = await res.json();
        }
        catch {
            // fall through; non-JSON bodies become a generic error below
        }
        if (!res.ok) {
            const fault = payload
                ?.error;
            throw new ApiRequestError(res.status, fault?.code ?? "http_error", fault?.message ?? `HTTP ${res.status}`);
        }
        return payload;
    }
    openSession() {
        return this.request("POST", "/v1/sessions");
    }
    closeSession(sid) {
        return this.request("DELETE", `/v1/sessions/${sid}`);
    }
    listSpecies() {
        return this.request("GET", "/v1/db/species");
    }
    listContainers(sid) {
        return this.request("GET", `/v1/sessions/${sid}/containers`);
    }
    getContainer(sid, cid) {
        return this.request("GET", `/v1/sessions/${sid}/containers/${encodeURIComponent(cid)}`);
    }
    createContainer(sid, body) {
        return this.request("POST", `/v1/sessions/${sid}/containers`, body);
    }
    pour(sid, body) {
        return this.request("POST", `/v1/sessions/${sid}/actions/pour`, body);
    }
    tick(sid, dtS) {
        return this.request("POST", `/v1/sessions/${sid}/actions/tick`, {
            dt_s: dtS,
        });
    }
    trajectoryWindow(sid, tid, fromS, waitS = 0) {
        const qs = `from_s=${fromS}&wait_s=${waitS}`;
        return this.request("GET", `/v1/sessions/${sid}/trajectories/${tid}?${qs}`);
    }
}
//# sourceMappingURL=api.js.map