/* tslint:disable */
/* eslint-disable */

export function couplingFrequencies(c_size: number, m: number, trials: number, seed: bigint): Float64Array;

/**
 * `mode` is one of `iid`, `noreplace`, `bernoulli`.
 */
export function samplingOperatorNorms(n: number, m: number, mode: string, trials: number, seed: bigint): Float64Array;

export function tailComparison(dim: number, size: number, ensemble_seed: bigint, m: number, trials: number, seed: bigint, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly couplingFrequencies: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly samplingOperatorNorms: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
    readonly tailComparison: (a: number, b: number, c: bigint, d: number, e: number, f: bigint, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
