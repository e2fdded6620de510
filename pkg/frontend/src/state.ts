/**
 * Bench view model. One store, one subscription stream, and a hard rule:
 * at most one mutation (create / pour / tick) in flight per session —
 * controls stay disabled until the previous action settles.
 */

import {
    ApiRequestError,
    BenchApi,
    ContainerInfo,
    PourResult,
    TrajectoryPoint,
} from "./api.js";

export interface LivePour {
    trajectoryId: string;
    containerId: string;
    dtS: number;
    durationS: number;
    lastSeenS: number;
    complete: boolean;
    /** every point received so far, in time order */
    points: TrajectoryPoint[];
}

export interface InlineFault {
    code: string;
    message: string;
    status: number;
}

export type Listener = () => void;

export class BenchStore {
    sessionId: string | null = null;
    cards = new Map<string, ContainerInfo>();
    clockS = 0;
    busy = false;
    createError: InlineFault | null = null;
    pourError: InlineFault | null = null;
    live: LivePour | null = null;
    lastReport: PourResult["report"] | null = null;

    private listeners: Listener[] = [];

    constructor(readonly api: BenchApi) {}

    subscribe(fn: Listener): () => void {
        this.listeners.push(fn);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== fn);
        };
    }

    private emit(): void {
        for (const fn of this.listeners) fn();
    }

    async open(): Promise<void> {
        const session = await this.api.openSession();
        this.sessionId = session.session_id;
        this.cards.clear();
        this.live = null;
        this.emit();
    }

    private requireSession(): string {
        if (this.sessionId === null) throw new Error("no open session");
        return this.sessionId;
    }

    /** Serialise mutations; reject re-entry instead of queueing. */
    private async mutate<T>(run: () => Promise<T>): Promise<T> {
        if (this.busy) throw new Error("an action is already in flight");
        this.busy = true;
        this.emit();
        try {
            return await run();
        } finally {
            this.busy = false;
            this.emit();
        }
    }

    async createContainer(body: {
        id: string;
        amounts: Record<string, number>;
        volume_l: number;
        temperature_c?: number;
    }): Promise<boolean> {
        const sid = this.requireSession();
        return this.mutate(async () => {
            this.createError = null;
            try {
                const info = await this.api.createContainer(sid, body);
                this.cards.set(info.id, info);
                return true;
            } catch (err) {
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

    async pour(src: string, dst: string, volumeL: number): Promise<boolean> {
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
            } catch (err) {
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

    async tick(dtS: number): Promise<void> {
        const sid = this.requireSession();
        await this.mutate(async () => {
            const res = await this.api.tick(sid, dtS);
            this.clockS = res.clock_s;
        });
    }

    async refreshCard(cid: string): Promise<void> {
        const sid = this.requireSession();
        const info = await this.api.getContainer(sid, cid);
        this.cards.set(info.id, info);
        this.emit();
    }

    /** Record freshly realized trajectory points (called by the poller). */
    absorbPoints(points: TrajectoryPoint[], complete: boolean): void {
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
