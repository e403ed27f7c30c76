/* tslint:disable */
/* eslint-disable */

/**
 * A particle minimisation advanced a few steps per animation frame.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Certificate of the current configuration as JSON.
     */
    certificate(): string;
    diameter(): number;
    dim(): number;
    energy(): number;
    grad_norm(): number;
    iterations(): number;
    constructor(family: string, params: Float64Array, dim: number, n: number, seed: bigint, init_radius: number);
    /**
     * Flattened `N x d` positions.
     */
    positions(): Float64Array;
    /**
     * Runs up to `steps` descent steps; returns how many were accepted.
     */
    step(steps: number): number;
}

/**
 * Bound parameters as JSON, or the pipeline's error message.
 */
export function bounds(family: string, params: Float64Array, dim: number): string;

/**
 * Morse grid over log-spaced `C_R/C_A` in `[0.1, 10]` and linear
 * `ell_A/ell_R` in `[1.1, 4]`, as a JSON array of cells.
 */
export function phase_diagram(dim: number, ratio_steps: number, length_steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly bounds: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly phase_diagram: (a: number, b: number, c: number) => [number, number, number, number];
    readonly simulation_certificate: (a: number) => [number, number, number, number];
    readonly simulation_diameter: (a: number) => number;
    readonly simulation_dim: (a: number) => number;
    readonly simulation_energy: (a: number) => number;
    readonly simulation_grad_norm: (a: number) => number;
    readonly simulation_iterations: (a: number) => number;
    readonly simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint, h: number) => [number, number, number];
    readonly simulation_positions: (a: number) => [number, number];
    readonly simulation_step: (a: number, b: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
