/**
 * Trajectory polling. The cadence comes from the service's dt — the
 * client never extrapolates; it only renders points the service has
 * realized. `pollOnce` is the testable unit; `run` is the browser loop
 * (long-poll via wait_s so an idle bench costs one parked request).
 */
export class TrajectoryPoller {
    api;
    store;
    onPoint;
    stopped = false;
    constructor(api, store, onPoint) {
        this.api = api;
        this.store = store;
        this.onPoint = onPoint;
    }
    /** One fetch of everything newer than the last seen sample. */
    async pollOnce(waitS = 0) {
        const live = this.store.live;
        const sid = this.store.sessionId;
        if (live === null || sid === null || live.complete)
            return [];
        const window = await this.api.trajectoryWindow(sid, live.trajectoryId, live.lastSeenS, waitS);
        this.store.absorbPoints(window.points, window.complete);
        if (this.onPoint) {
            for (const p of window.points)
                this.onPoint(p);
        }
        return window.points;
    }
    /** Long-poll until the trajectory completes or stop() is called. */
    async run() {
        this.stopped = false;
        while (!this.stopped) {
            const live = this.store.live;
            if (live === null || live.complete)
                break;
            try {
                await this.pollOnce(Math.max(live.dtS * 4, 1.0));
            }
            catch {
                // network hiccup: back off briefly, state is untouched
                await new Promise((r) => setTimeout(r, 500));
            }
        }
    }
    stop() {
        this.stopped = true;
    }
}
//# sourceMappingURL=poller.js.map