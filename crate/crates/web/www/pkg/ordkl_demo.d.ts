/* tslint:disable */
/* eslint-disable */

export class Corners {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Mode-averaged density of the π sector if `pi`, else the zero sector.
     */
    density(pi: boolean): Float64Array;
    /**
     * `[w0, wπ]`, or empty on a phase boundary.
     */
    readonly invariants: Int32Array;
    readonly n0: number;
    readonly npi: number;
    readonly size: number;
}

export class WindingLoop {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Interleaved `(n_x, n_y)` pairs.
     */
    readonly points: Float64Array;
    /**
     * Winding number, or NaN on a phase boundary.
     */
    readonly winding: number;
}

export function cornerCensus(k1: number, k2: number, k3: number, k4: number, l: number): Corners;

export function phaseDiagram(k1: number, k2: number, k3: number, k4: number, axis_a: number, axis_b: number, kmax: number, n: number): Int32Array;

export function windingLoop(k1: number, k2: number, k3: number, k4: number, frame: number, n: number): WindingLoop;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_corners_free: (a: number, b: number) => void;
    readonly __wbg_windingloop_free: (a: number, b: number) => void;
    readonly cornerCensus: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly corners_density: (a: number, b: number) => [number, number];
    readonly corners_invariants: (a: number) => [number, number];
    readonly corners_n0: (a: number) => number;
    readonly corners_npi: (a: number) => number;
    readonly corners_size: (a: number) => number;
    readonly phaseDiagram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly windingLoop: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly windingloop_points: (a: number) => [number, number];
    readonly windingloop_winding: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
