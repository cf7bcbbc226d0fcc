/* tslint:disable */
/* eslint-disable */

/**
 * One sampled curve: `S` and `R` over a grid, with their maximisers.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    r(): Float64Array;
    s(): Float64Array;
    x(): Float64Array;
    readonly argmaxR: number;
    readonly argmaxS: number;
}

/**
 * Empirical and closed-form CDF of the number of uniform random coefficient
 * vectors needed to reach full rank.
 */
export class RankDistribution {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    analytic(): Float64Array;
    empirical(): Float64Array;
    j(): Float64Array;
    readonly expected: number;
    readonly mean: number;
}

export function rankDistribution(generation_size: number, u: number, trials: number, seed: number): RankDistribution;

export function throughputVsAlphabet(generation_size: number, n: number, snr_db: number, u_max: number, precode_k: number, literal: boolean): Curve;

export function throughputVsPacketLength(generation_size: number, u: number, snr_db: number, n_max: number, precode: string, precode_value: number, literal: boolean): Curve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_rankdistribution_free: (a: number, b: number) => void;
    readonly curve_argmax_r: (a: number) => number;
    readonly curve_argmax_s: (a: number) => number;
    readonly curve_r: (a: number) => [number, number];
    readonly curve_s: (a: number) => [number, number];
    readonly curve_x: (a: number) => [number, number];
    readonly rankDistribution: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly rankdistribution_analytic: (a: number) => [number, number];
    readonly rankdistribution_empirical: (a: number) => [number, number];
    readonly rankdistribution_expected: (a: number) => number;
    readonly rankdistribution_j: (a: number) => [number, number];
    readonly rankdistribution_mean: (a: number) => number;
    readonly throughputVsAlphabet: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly throughputVsPacketLength: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
