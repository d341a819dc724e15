//! WebAssembly bindings for the browser demo. Every export takes plain
//! numbers and strings and returns a JSON document.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use fqmoments::fieldpoly::{Poly, PrimeField};
use fqmoments::lfunc::l_polynomial;
use fqmoments::moments::{
    one_twist_cells, reciprocity_one_twist, scan_moments, select_moduli, summarize, MomentEngine, MomentReport,
    ScanOptions, ScanSummary, RECIPROCITY_TOLERANCE,
};

/// Largest modulus degree the demo accepts; keeps a browser tab responsive.
pub const MAX_DEMO_DEG: usize = 6;

#[derive(Serialize)]
struct CharacterRow {
    kappa: Vec<u32>,
    parity: String,
    conductor: String,
    primitive: bool,
    l_half_re: Option<f64>,
    l_half_im: Option<f64>,
    l_half_sq: Option<f64>,
}

#[derive(Serialize)]
struct CharacterTable {
    modulus: String,
    digits: String,
    generators: Vec<String>,
    orders: Vec<u32>,
    characters: Vec<CharacterRow>,
}

#[derive(Serialize)]
struct Scan {
    rows: Vec<MomentReport>,
    summary: ScanSummary,
}

fn poly(field: PrimeField, s: &str) -> Result<Poly, String> {
    let p = Poly::parse(field, s).map_err(|e| e.to_string())?;
    if p.deg() > MAX_DEMO_DEG {
        return Err(format!("the demo is limited to degree ≤ {MAX_DEMO_DEG}"));
    }
    Ok(p)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn character_table_json(q: u32, modulus: &str) -> Result<String, String> {
    let field = PrimeField::new(q).map_err(|e| e.to_string())?;
    let r = poly(field, modulus)?;
    let group = MomentEngine::new().group(&r).map_err(|e| e.to_string())?;
    let mut characters = Vec::with_capacity(group.len());
    for chi in group.characters() {
        let chi = chi.map_err(|e| e.to_string())?;
        let l = if chi.is_principal() {
            None
        } else {
            Some(l_polynomial(&chi).map_err(|e| e.to_string())?.central_value())
        };
        characters.push(CharacterRow {
            kappa: chi.kappa().to_vec(),
            parity: chi.parity().to_string(),
            conductor: chi.conductor().to_string(),
            primitive: chi.is_primitive(),
            l_half_re: l.map(|v| v.l_half.re),
            l_half_im: l.map(|v| v.l_half.im),
            l_half_sq: l.map(|v| v.l_half_sq),
        });
    }
    let table = group.table();
    to_json(&CharacterTable {
        modulus: r.to_string(),
        digits: r.to_digits(),
        generators: table.generators().iter().map(ToString::to_string).collect(),
        orders: table.orders().to_vec(),
        characters,
    })
}

pub fn moment_scan_json(
    q: u32,
    deg_lo: usize,
    deg_hi: usize,
    deg_h: usize,
    sample: usize,
    seed: u64,
) -> Result<String, String> {
    let field = PrimeField::new(q).map_err(|e| e.to_string())?;
    if deg_lo == 0 || deg_lo > deg_hi || deg_hi > MAX_DEMO_DEG {
        return Err(format!("need 1 ≤ deg lo ≤ deg hi ≤ {MAX_DEMO_DEG}"));
    }
    let engine = MomentEngine::new();
    let mut cells = Vec::new();
    for d in deg_lo..=deg_hi {
        let moduli = select_moduli(field, d, Some(sample), seed);
        cells.extend(one_twist_cells(&moduli, deg_h).map_err(|e| e.to_string())?);
    }
    let rows = scan_moments(&engine, &cells, ScanOptions::default()).map_err(|e| e.to_string())?;
    let summary = summarize(&rows, |r| r.r.len() - 1);
    to_json(&Scan { rows, summary })
}

pub fn reciprocity_json(q: u32, p: &str, h: &str, negative_control: bool) -> Result<String, String> {
    let field = PrimeField::new(q).map_err(|e| e.to_string())?;
    let (p, h) = (poly(field, p)?, poly(field, h)?);
    let check = reciprocity_one_twist(&MomentEngine::new(), &p, &h, negative_control, RECIPROCITY_TOLERANCE)
        .map_err(|e| e.to_string())?;
    to_json(&check)
}

/// Characters mod R with parity, conductor and L(1/2, χ).
#[wasm_bindgen(js_name = characterTable)]
pub fn character_table(q: u32, modulus: &str) -> Result<String, JsError> {
    character_table_json(q, modulus).map_err(|e| JsError::new(&e))
}

/// One-twist moment table over sampled moduli, with per-degree maxima.
#[wasm_bindgen(js_name = momentScan)]
pub fn moment_scan(
    q: u32,
    deg_lo: usize,
    deg_hi: usize,
    deg_h: usize,
    sample: usize,
    seed: u32,
) -> Result<String, JsError> {
    moment_scan_json(q, deg_lo, deg_hi, deg_h, sample, u64::from(seed)).map_err(|e| JsError::new(&e))
}

/// One-twist reciprocity for prime P and H; `negative_control` flips the sign of the P twist.
#[wasm_bindgen]
pub fn reciprocity(q: u32, p: &str, h: &str, negative_control: bool) -> Result<String, JsError> {
    reciprocity_json(q, p, h, negative_control).map_err(|e| JsError::new(&e))
}
