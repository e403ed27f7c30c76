/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const bounds: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const phase_diagram: (a: number, b: number, c: number) => [number, number, number, number];
export const simulation_certificate: (a: number) => [number, number, number, number];
export const simulation_diameter: (a: number) => number;
export const simulation_dim: (a: number) => number;
export const simulation_energy: (a: number) => number;
export const simulation_grad_norm: (a: number) => number;
export const simulation_iterations: (a: number) => number;
export const simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint, h: number) => [number, number, number];
export const simulation_positions: (a: number) => [number, number];
export const simulation_step: (a: number, b: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
