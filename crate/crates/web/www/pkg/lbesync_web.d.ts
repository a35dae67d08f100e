/* tslint:disable */
/* eslint-disable */

/**
 * LBE of one K, thinned for plotting. The crossing is found on every step.
 */
export class LbeCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `log10(2 delta)`; NaN where the two orbits agree exactly.
     */
    log10(): Float64Array;
    steps(): Uint32Array;
    readonly crossing: number | undefined;
    readonly k: number;
    readonly saturated: boolean;
}

/**
 * Post-transient `(y, y')` samples of slave and auxiliary slave plus the verdict.
 */
export class Portrait {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    y_aux(): Float64Array;
    y(): Float64Array;
    readonly epsilon: number;
    readonly metric: number;
    readonly verdict: string;
}

export function case_k_values(_case: string): Float64Array;

export function case_names(): string[];

export function lbe_curve(_case: string, k: number, h: number, steps: number, points: number): LbeCurve;

export function phase_portrait(_case: string, k: number, h: number, steps: number, points: number): Portrait;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_lbecurve_free: (a: number, b: number) => void;
    readonly __wbg_portrait_free: (a: number, b: number) => void;
    readonly case_k_values: (a: number, b: number) => [number, number, number, number];
    readonly case_names: () => [number, number];
    readonly lbe_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly lbecurve_crossing: (a: number) => number;
    readonly lbecurve_k: (a: number) => number;
    readonly lbecurve_log10: (a: number) => [number, number];
    readonly lbecurve_saturated: (a: number) => number;
    readonly lbecurve_steps: (a: number) => [number, number];
    readonly phase_portrait: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly portrait_epsilon: (a: number) => number;
    readonly portrait_metric: (a: number) => number;
    readonly portrait_verdict: (a: number) => [number, number];
    readonly portrait_y: (a: number) => [number, number];
    readonly portrait_y_aux: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
