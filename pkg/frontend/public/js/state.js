/**
 * Bench view model. One store, one subscription stream, and a hard rule:
 * at most one mutation (create / pour / tick) in flight per session —
 * controls stay disabled until the previous action settles.
 */
import { ApiRequestError, } from "./api.js";
export class BenchStore {
    api;
    sessionId = null;
    cards = new Map();
    clockS = 0;
    busy = false;
    createError = null;
    pourError = null;
    live = null;
    lastReport = null;
    listeners = [];
    constructor(api) {
        this.api = api;
    }
    subscribe(fn) {
        this.listeners.push(fn);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== fn);
        };
    }
    emit() {
        for (const fn of this.listeners)
            fn();
    }
    async open() {
        const session = await this.api.openSession();
        this.sessionId = session.session_id;
        this.cards.clear();
        this.live = null;
        this.emit();
    }
    requireSession() {
        if (this.sessionId === null)
            throw new Error("no open session");
        return this.sessionId;
    }
    /** Serialise mutations; reject re-entry instead of queueing. */
    async mutate(run) {
        if (this.busy)
            throw new Error("an action is already in flight");
        this.busy = true;
        this.emit();
        try {
            return await run();
        }
        finally {
            this.busy = false;
            this.emit();
        }
    }
    async createContainer(body) {
        const sid = this.requireSession();
        return this.mutate(async () => {
            this.createError = null;
            try {
                const info = await this.api.createContainer(sid, body);
                this.cards.set(info.id, info);
                return true;
            }
            catch (err) {
                if (err instanceof ApiRequestError) {
                    this.createError = {
                        code: err.code,
                        message: err.message,
                        status: err.status,
                    };
                    return false;
                }
                throw err;
            }
        });
    }
    async pour(src, dst, volumeL) {
        const sid = this.requireSession();
        return this.mutate(async () => {
            this.pourError = null;
            try {
                const result = await this.api.pour(sid, {
                    src,
                    dst,
                    volume_l: volumeL,
                });
                this.cards.set(result.container.id, result.container);
                await this.refreshCard(src);
                this.lastReport = result.report;
                this.live = result.trajectory
                    ? {
                        trajectoryId: result.trajectory.trajectory_id,
                        containerId: dst,
                        dtS: result.trajectory.dt_s,
                        durationS: result.trajectory.duration_s,
                        lastSeenS: -1.0,
                        complete: false,
                        points: [],
                    }
                    : null;
                return true;
            }
            catch (err) {
                if (err instanceof ApiRequestError) {
                    this.pourError = {
                        code: err.code,
                        message: err.message,
                        status: err.status,
                    };
                    return false;
                }
                throw err;
            }
        });
    }
    async tick(dtS) {
        const sid = this.requireSession();
        await this.mutate(async () => {
            const res = await this.api.tick(sid, dtS);
            this.clockS = res.clock_s;
        });
    }
    async refreshCard(cid) {
        const sid = this.requireSession();
        const info = await this.api.getContainer(sid, cid);
        this.cards.set(info.id, info);
        this.emit();
    }
    /** Record freshly realized trajectory points (called by the poller). */
    absorbPoints(points, complete) {
        if (this.live === null || points.length === 0) {
            if (this.live !== null && complete && !this.live.complete) {
                this.live.complete = true;
                this.emit();
            }
            return;
        }
        this.live.points.push(...points);
        this.live.lastSeenS = points[points.length - 1].t_s;
        this.live.complete = complete;
        this.emit();
    }
}
//# sourceMappingURL=state.js.map