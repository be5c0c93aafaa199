//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so the
//! logic can be tested natively.

use std::fmt::Write as _;

use principal_core::linalg;
use principal_core::poly::enumerate_monomials;
use principal_core::verify::{graded_dims, partition_oracle, primitive_form, weight_totals, Evaluator};
use principal_core::{BigradedIndex, ModuleTag, Monomial, PolyQ};
use wasm_bindgen::prelude::*;

/// Largest weight the page will compute; keeps the tab responsive.
pub const MAX_DEMO_WEIGHT: i64 = 24;

pub fn parse_module(name: &str) -> Result<ModuleTag, String> {
    match name.trim() {
        "lambda0" => Ok(ModuleTag::Lambda0),
        "lambda1" => Ok(ModuleTag::Lambda1),
        "lambda1prime" => Ok(ModuleTag::Lambda1Prime),
        other => Err(format!("unknown module {other:?}")),
    }
}

/// Reads `x(-3)*x(-1)`, `x(-2)^2` or a bare list like `-3 -1`.
pub fn parse_monomial(text: &str) -> Result<Monomial, String> {
    let text = text.trim();
    if text.is_empty() || text == "1" {
        return Ok(Monomial::one());
    }
    let mut indices = Vec::new();
    if text.contains('x') {
        for factor in text.split('*') {
            let factor = factor.trim();
            let (base, power) = match factor.split_once('^') {
                Some((b, p)) => (b.trim(), p.trim().parse::<usize>().map_err(|_| format!("bad exponent in {factor:?}"))?),
                None => (factor, 1),
            };
            let inner = base
                .strip_prefix("x(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| format!("expected x(m), got {factor:?}"))?;
            let m: i64 = inner.trim().parse().map_err(|_| format!("bad index in {factor:?}"))?;
            indices.extend(std::iter::repeat_n(m, power));
        }
    } else {
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if !tok.is_empty() {
                indices.push(tok.parse().map_err(|_| format!("bad index {tok:?}"))?);
            }
        }
    }
    Ok(Monomial::new(indices))
}

pub fn qseries_text(max_weight: i64) -> Result<String, String> {
    if !(0..=MAX_DEMO_WEIGHT).contains(&max_weight) {
        return Err(format!("weight must lie in 0..={MAX_DEMO_WEIGHT}"));
    }
    let t0 = weight_totals(&graded_dims(ModuleTag::Lambda0, max_weight), max_weight);
    let t1 = weight_totals(&graded_dims(ModuleTag::Lambda1Prime, max_weight), max_weight);
    let mut out = format!("{:>6} {:>8} {:>8} {:>13} {:>8}\n", "weight", "W(L0)", "oracle", "W(L1)'", "oracle");
    for n in 0..=max_weight {
        let o0: u64 = (0..=n).map(|k| partition_oracle(n, k, 1)).sum();
        let o1: u64 = (0..=n).map(|k| partition_oracle(n, k, 2)).sum();
        let _ = writeln!(out, "{n:>6} {:>8} {o0:>8} {:>13} {o1:>8}", t0[n as usize], t1[n as usize]);
    }
    Ok(out)
}

pub fn piece_text(module: &str, weight: i64, charge: u32) -> Result<String, String> {
    let tag = parse_module(module)?;
    if !(0..=MAX_DEMO_WEIGHT).contains(&weight) {
        return Err(format!("weight must lie in 0..={MAX_DEMO_WEIGHT}"));
    }
    let idx = BigradedIndex::new(weight, charge);
    let mut ev = Evaluator::new(tag);
    let report = ev.piece_report(idx);
    let domain = enumerate_monomials(idx, tag.floor());
    let kernel = linalg::kernel_basis(&ev.eval_matrix(idx));

    let mut out = String::new();
    let _ = writeln!(out, "{tag} piece {idx}");
    let _ = writeln!(out, "domain ({}): {}", domain.len(), join(domain.iter().map(|m| m.to_string())));
    let _ = writeln!(out, "rank {}, kernel {}, ideal {}", report.rank_eval, report.dim_kernel, report.dim_ideal_piece);
    for v in &kernel {
        let _ = writeln!(out, "  kernel: {}", primitive_form(&PolyQ::from_coordinates(&domain, v)));
    }
    let verdict = if report.equality_ok { "kernel = ideal" } else { "kernel != ideal" };
    let _ = writeln!(out, "{verdict}");
    if let Some(w) = &report.witness {
        let _ = writeln!(out, "witness: {w}");
    }
    Ok(out)
}

pub fn apply_text(module: &str, monomial: &str) -> Result<String, String> {
    let tag = parse_module(module)?;
    let mono = parse_monomial(monomial)?;
    if let Some(m) = mono.max_index().filter(|&m| m > tag.floor()) {
        return Err(format!("x({m}) is not a generator for {tag}; indices must be <= {}", tag.floor()));
    }
    if mono.weight() > MAX_DEMO_WEIGHT {
        return Err(format!("weight must be at most {MAX_DEMO_WEIGHT}"));
    }
    let v = Evaluator::new(tag).apply(&mono);
    Ok(format!("{mono} . v = {v}"))
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

/// Weight totals of both principal subspaces next to the partition counts.
#[wasm_bindgen]
pub fn qseries(max_weight: i32) -> Result<String, JsError> {
    qseries_text(max_weight.into()).map_err(|e| JsError::new(&e))
}

/// Kernel, ideal and verdict for one bigraded piece.
#[wasm_bindgen]
pub fn piece(module: &str, weight: i32, charge: u32) -> Result<String, JsError> {
    piece_text(module, weight.into(), charge).map_err(|e| JsError::new(&e))
}

/// A monomial applied to the highest weight vector, as a Fock-space vector.
#[wasm_bindgen]
pub fn apply(module: &str, monomial: &str) -> Result<String, JsError> {
    apply_text(module, monomial).map_err(|e| JsError::new(&e))
}
