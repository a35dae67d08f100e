/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_lbecurve_free: (a: number, b: number) => void;
export const __wbg_portrait_free: (a: number, b: number) => void;
export const case_k_values: (a: number, b: number) => [number, number, number, number];
export const case_names: () => [number, number];
export const lbe_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const lbecurve_crossing: (a: number) => number;
export const lbecurve_k: (a: number) => number;
export const lbecurve_log10: (a: number) => [number, number];
export const lbecurve_saturated: (a: number) => number;
export const lbecurve_steps: (a: number) => [number, number];
export const phase_portrait: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const portrait_epsilon: (a: number) => number;
export const portrait_metric: (a: number) => number;
export const portrait_verdict: (a: number) => [number, number];
export const portrait_y: (a: number) => [number, number];
export const portrait_y_aux: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
