/* tslint:disable */
/* eslint-disable */
/**
 * Characters mod R with parity, conductor and L(1/2, χ).
 */
export function characterTable(q: number, modulus: string): string;
/**
 * One-twist moment table over sampled moduli, with per-degree maxima.
 */
export function momentScan(q: number, deg_lo: number, deg_hi: number, deg_h: number, sample: number, seed: number): string;
/**
 * One-twist reciprocity for prime P and H; `negative_control` flips the sign of the P twist.
 */
export function reciprocity(q: number, p: string, h: string, negative_control: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
  readonly memory: WebAssembly.Memory;
  readonly characterTable: (a: number, b: number, c: number) => [number, number, number, number];
  readonly momentScan: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
  readonly reciprocity: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
  readonly __wbindgen_export_0: WebAssembly.Table;
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
