//! TSV and JSON renderings. Grids put `u` ascending left to right and the
//! most negative `2δ` in the top row, as in the published figure-eight table.

use std::collections::BTreeMap;

use kappa_core::khcomplex::{determinant, is_thin, jones_polynomial, GradedVectorSpace};
use kappa_core::limit::{structure_report, AmphicheiralityReport, KappaInvariant, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

/// `q` from its double, as `-10` or `-19/2`.
pub fn q_string(q2: i32) -> String {
    if q2 % 2 == 0 {
        (q2 / 2).to_string()
    } else {
        format!("{q2}/2")
    }
}

fn q_json(q2: i32) -> Value {
    if q2 % 2 == 0 {
        json!(q2 / 2)
    } else {
        json!(q2 as f64 / 2.0)
    }
}

/// `(u, 2δ) -> dim` as a grid. Rows step by two so one parity fills the grid.
pub fn grid(cells: &BTreeMap<(i32, i32), usize>) -> String {
    let mut out = String::from("2delta\\u");
    if cells.is_empty() {
        out.push('\n');
        return out;
    }
    let (u_lo, u_hi) = (cells.keys().map(|k| k.0).min().unwrap(), cells.keys().map(|k| k.0).max().unwrap());
    let (d_lo, d_hi) = (cells.keys().map(|k| k.1).min().unwrap(), cells.keys().map(|k| k.1).max().unwrap());
    for u in u_lo..=u_hi {
        out.push_str(&format!("\t{u}"));
    }
    out.push('\n');
    let mut d = d_lo;
    while d <= d_hi {
        out.push_str(&d.to_string());
        for u in u_lo..=u_hi {
            out.push_str(&format!("\t{}", cells.get(&(u, d)).copied().unwrap_or(0)));
        }
        out.push('\n');
        d += 2;
    }
    out
}

pub fn kh_tsv(name: &str, h: &GradedVectorSpace) -> String {
    let mut out = format!("# kh {name}\nu\tq\tdim\n");
    for ((u, q2), d) in h.iter() {
        out.push_str(&format!("{u}\t{}\t{d}\n", q_string(q2)));
    }
    out.push_str("# delta grid\n");
    out.push_str(&grid(&h.delta_table()));
    out.push_str(&format!("# total\t{}\n", h.total_dim()));
    out.push_str(&format!("# jones\t{}\n", jones_polynomial(h)));
    let det = determinant(h).map_or_else(|| "undefined".to_string(), |d| d.to_string());
    out.push_str(&format!("# determinant\t{det}\n"));
    out.push_str(&format!("# thin\t{}\n", is_thin(h)));
    out
}

pub fn kh_json(name: &str, h: &GradedVectorSpace) -> String {
    let cells: Vec<Value> = h.iter().map(|((u, q2), d)| json!({"u": u, "q": q_json(q2), "dim": d})).collect();
    let delta: Vec<Value> =
        h.delta_table().iter().map(|(&(u, d2), &d)| json!({"u": u, "two_delta": d2, "dim": d})).collect();
    let v = json!({
        "name": name,
        "cells": cells,
        "delta": delta,
        "total": h.total_dim(),
        "jones": jones_polynomial(h).to_string(),
        "determinant": determinant(h),
        "thin": is_thin(h),
    });
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

#[derive(Serialize)]
struct Entry {
    u: i32,
    two_delta: i32,
    dim: usize,
}

fn entries(k: &KappaInvariant) -> Vec<Entry> {
    k.table.iter().map(|(&(u, two_delta), &dim)| Entry { u, two_delta, dim }).collect()
}

fn kappa_value(name: &str, k: &KappaInvariant) -> Value {
    let c = &k.certificate;
    let s = structure_report(k);
    json!({
        "name": name,
        "entries": entries(k),
        "total": k.total_dim,
        "stabilization": {
            "window": [c.window.0, c.window.1],
            "agreements": c.agreements,
            "surjective_top": c.surjective_top,
            "injective_bottom": c.injective_bottom,
            "windows_tried": c.windows_tried.iter().map(|w| [w.0, w.1]).collect::<Vec<_>>(),
        },
        "diagnostics": {
            "total_mod4": s.residue_mod4,
            "v_translates": s.translates.iter().map(|t| json!({"u": t.0, "two_delta": t.1})).collect::<Vec<_>>(),
            "tiled": s.tiled(),
        },
    })
}

pub fn kappa_json(name: &str, k: &KappaInvariant) -> String {
    serde_json::to_string_pretty(&kappa_value(name, k)).unwrap() + "\n"
}

pub fn kappa_tsv(name: &str, k: &KappaInvariant) -> String {
    let c = &k.certificate;
    let s = structure_report(k);
    let mut out = format!("# kappa {name}\n");
    out.push_str(&grid(&k.table));
    out.push_str(&format!("# total\t{}\n", k.total_dim));
    out.push_str(&format!("# window\t{}:{}\n", c.window.0, c.window.1));
    out.push_str(&format!("# agreements\t{}\n", c.agreements));
    let tried: Vec<String> = c.windows_tried.iter().map(|w| format!("{}:{}", w.0, w.1)).collect();
    out.push_str(&format!("# windows_tried\t{}\n", tried.join(" ")));
    out.push_str(&format!("# total_mod4\t{}\n", s.residue_mod4));
    let tr: Vec<String> = s.translates.iter().map(|t| format!("{}:{}", t.0, t.1)).collect();
    out.push_str(&format!("# v_translates\t{}\n", tr.join(" ")));
    out.push_str(&format!("# tiled\t{}\n", s.tiled()));
    out
}

/// Partial data from a run that did not stabilize.
pub fn partial_json(name: &str, window: (i64, i64), agreements: usize, partial: &[((i32, i32), usize)]) -> String {
    let v = json!({
        "name": name,
        "status": "unstabilized",
        "window": [window.0, window.1],
        "agreements": agreements,
        "entries": partial.iter().map(|&((u, d2), d)| json!({"u": u, "two_delta": d2, "dim": d})).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Obstructed => "OBSTRUCTED",
        Verdict::Silent => "SILENT",
    }
}

fn by_u(k: &KappaInvariant) -> String {
    k.dims_by_u().iter().map(|(u, d)| format!("{u}:{d}")).collect::<Vec<_>>().join(" ")
}

pub fn mirror_tsv(name: &str, r: &AmphicheiralityReport) -> String {
    let mut out = format!("# mirror-check {name}\n");
    out.push_str(&format!("verdict\t{}\n", verdict_str(r.verdict)));
    out.push_str(&format!("kappa_by_u\t{}\n", by_u(&r.kappa)));
    out.push_str(&format!("reflected_by_u\t{}\n", by_u(&r.reflected)));
    out
}

pub fn mirror_json(name: &str, r: &AmphicheiralityReport) -> String {
    let v = json!({
        "name": name,
        "verdict": verdict_str(r.verdict),
        "kappa": kappa_value(name, &r.kappa),
        "reflected": {"entries": entries(&r.reflected), "total": r.reflected.total_dim},
    });
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}
