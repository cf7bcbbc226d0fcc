/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_rankdistribution_free: (a: number, b: number) => void;
export const curve_argmax_r: (a: number) => number;
export const curve_argmax_s: (a: number) => number;
export const curve_r: (a: number) => [number, number];
export const curve_s: (a: number) => [number, number];
export const curve_x: (a: number) => [number, number];
export const rankDistribution: (a: number, b: number, c: number, d: number) => [number, number, number];
export const rankdistribution_analytic: (a: number) => [number, number];
export const rankdistribution_empirical: (a: number) => [number, number];
export const rankdistribution_expected: (a: number) => number;
export const rankdistribution_j: (a: number) => [number, number];
export const rankdistribution_mean: (a: number) => number;
export const throughputVsAlphabet: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const throughputVsPacketLength: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
