/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_corners_free: (a: number, b: number) => void;
export const __wbg_windingloop_free: (a: number, b: number) => void;
export const cornerCensus: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const corners_density: (a: number, b: number) => [number, number];
export const corners_invariants: (a: number) => [number, number];
export const corners_n0: (a: number) => number;
export const corners_npi: (a: number) => number;
export const corners_size: (a: number) => number;
export const phaseDiagram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const windingLoop: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const windingloop_points: (a: number) => [number, number];
export const windingloop_winding: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
