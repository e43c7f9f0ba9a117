//! Browser bindings: defect profile, Rauzy graph and decompositions of a
//! generated or typed word. Every export returns a JSON string.

use std::f64::consts::PI;
use std::fmt::Write as _;

use almostrich::analysis::{decompose_word, rauzy_report, theorem3_report, Method, RauzyReport};
use almostrich::config::{parse_word_text, resolve_generator, GenSpec, SeedArgs, ThetaSpec};
use almostrich::decompose::{theorem3_pipeline, PipelineOptions};
use almostrich::generators::DirectiveSequence;
use almostrich::palindromes::defect_profile;
use almostrich::{Antimorphism, Word};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_LEN: usize = 200_000;
/// Points kept when the defect profile is sent to the page.
const PROFILE_POINTS: usize = 400;

struct Input {
    descriptor: String,
    word: Word,
    theta: Antimorphism,
    standard: Option<(Word, DirectiveSequence)>,
}

/// `source` names a generator (as for `--gen`), or `word:<letters>` for a typed word.
fn load(source: &str, theta: &str, seed: &str, directive: &str, len: usize) -> Result<Input, String> {
    let err = |e: almostrich::Error| e.to_string();
    if len == 0 || len > MAX_LEN {
        return Err(format!("length must be between 1 and {MAX_LEN}"));
    }
    let spec = ThetaSpec::parse(theta).map_err(err)?;
    if let Some(text) = source.strip_prefix("word:") {
        let tokens = text.split_whitespace().count() > 1;
        let fixed = spec.fixed_alphabet().map_err(err)?;
        let word = parse_word_text(text, tokens, fixed.as_ref(), &spec.letters(), "word").map_err(err)?;
        let word = word.prefix(len.min(word.len()));
        let theta = spec.resolve(word.alphabet()).map_err(err)?;
        return Ok(Input {
            descriptor: "typed word".into(),
            word,
            theta,
            standard: None,
        });
    }
    let gen = GenSpec::parse(source).map_err(err)?;
    let args = SeedArgs {
        seed: Some(seed),
        directive: (!directive.trim().is_empty()).then_some(directive),
    };
    let r = resolve_generator(&gen, &spec, &args).map_err(err)?;
    Ok(Input {
        descriptor: r.source.describe(),
        word: r.source.prefix(len),
        theta: r.theta,
        standard: r.seed.zip(r.directive),
    })
}

fn defect_profile_json(source: &str, theta: &str, seed: &str, directive: &str, len: usize) -> Result<String, String> {
    let input = load(source, theta, seed, directive, len)?;
    let p = defect_profile(&input.theta, &input.word).map_err(|e| e.to_string())?;
    let step = p.values.len().div_ceil(PROFILE_POINTS).max(1);
    let points: Vec<(usize, usize)> = p
        .values
        .iter()
        .enumerate()
        .filter(|(k, _)| k % step == 0 || *k == p.values.len() - 1)
        .map(|(k, &d)| (k, d))
        .collect();
    let shown: String = input.word.prefix(input.word.len().min(120)).to_string();
    Ok(json!({
        "descriptor": input.descriptor,
        "antimorphism": input.theta.describe(),
        "length": input.word.len(),
        "prefix": shown,
        "final_defect": p.final_defect(),
        "last_increase": p.last_increase(),
        "stable_over_last_half": p.is_stable_over_tail(0.5),
        "palindromes": p.pal_counts.last(),
        "points": points,
    })
    .to_string())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn short(s: &str) -> String {
    if s.chars().count() <= 12 {
        s.to_string()
    } else {
        let head: String = s.chars().take(10).collect();
        format!("{head}…")
    }
}

/// Vertices on a circle; loops drawn as small circles outside the vertex,
/// parallel edges bent apart.
fn graph_svg(r: &RauzyReport) -> String {
    let (w, h) = (520.0, 520.0);
    let (cx, cy, radius) = (w / 2.0, h / 2.0, 170.0);
    let n = r.vertices.len();
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            if n == 1 {
                return (cx, cy);
            }
            let a = 2.0 * PI * i as f64 / n as f64 - PI / 2.0;
            (cx + radius * a.cos(), cy + radius * a.sin())
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#);
    let mut seen_pairs: Vec<((usize, usize), usize)> = Vec::new();
    let mut loops_at = vec![0usize; n];
    for e in &r.edges {
        let pal = e.path == e.image;
        let colour = if pal { "#2a7" } else { "#c33" };
        let title = if pal { escape(&e.path) } else { format!("{} / {}", escape(&e.path), escape(&e.image)) };
        if e.from == e.to {
            let k = loops_at[e.from];
            loops_at[e.from] += 1;
            let (x, y) = pos[e.from];
            let (dx, dy) = if n == 1 { (0.0, -1.0) } else { ((x - cx) / radius, (y - cy) / radius) };
            let rr = 18.0 + 9.0 * k as f64;
            let _ = write!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="{rr:.1}" fill="none" stroke="{colour}" stroke-width="2"><title>{title}</title></circle>"#,
                x + dx * rr,
                y + dy * rr
            );
        } else {
            let key = (e.from, e.to);
            let k = match seen_pairs.iter_mut().find(|(p, _)| *p == key) {
                Some((_, c)) => {
                    *c += 1;
                    *c
                }
                None => {
                    seen_pairs.push((key, 0));
                    0
                }
            };
            let ((x1, y1), (x2, y2)) = (pos[e.from], pos[e.to]);
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt().max(1.0);
            let bend = if k == 0 { 0.0 } else { 30.0 * k.div_ceil(2) as f64 * if k % 2 == 1 { 1.0 } else { -1.0 } };
            let (qx, qy) = (mx - (y2 - y1) / len * bend, my + (x2 - x1) / len * bend);
            let _ = write!(
                out,
                r#"<path d="M{x1:.1},{y1:.1} Q{qx:.1},{qy:.1} {x2:.1},{y2:.1}" fill="none" stroke="{colour}" stroke-width="2"><title>{title}</title></path>"#
            );
        }
    }
    for (i, (a, b)) in r.vertices.iter().enumerate() {
        let (x, y) = pos[i];
        let label = if a == b { short(a) } else { format!("{} | {}", short(a), short(b)) };
        let _ = write!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="7" fill="#246"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-family="monospace" font-size="12">{}</text>"##,
            y + 22.0,
            escape(&label)
        );
    }
    if n == 0 {
        let _ = write!(out, r#"<text x="{cx}" y="{cy}" text-anchor="middle" font-family="sans-serif">no special factors</text>"#);
    }
    out.push_str("</svg>");
    out
}

fn rauzy_json(source: &str, theta: &str, seed: &str, directive: &str, len: usize, n: usize) -> Result<String, String> {
    let input = load(source, theta, seed, directive, len)?;
    let (report, _) = rauzy_report(&input.descriptor, &input.theta, &input.word, n).map_err(|e| e.to_string())?;
    let svg = graph_svg(&report);
    serde_json::to_string(&json!({ "report": report, "svg": svg })).map_err(|e| e.to_string())
}

fn decompose_json(source: &str, theta: &str, seed: &str, directive: &str, len: usize, method: &str) -> Result<String, String> {
    let input = load(source, theta, seed, directive, len)?;
    let opts = PipelineOptions::default();
    let report = match method {
        "path" | "return" => {
            let m = if method == "path" { Method::Path } else { Method::Return };
            decompose_word(m, &input.descriptor, &input.theta, &input.word, None, None, &opts)
        }
        "theorem3" => {
            let (seed, d) = input
                .standard
                .as_ref()
                .ok_or("the theorem3 method needs the theta_standard generator")?;
            theorem3_pipeline(&input.theta, seed, d.clone(), input.word.len(), &opts).map(|o| theorem3_report(&input.theta, &o, &opts))
        }
        other => return Err(format!("unknown method `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = defectProfile)]
pub fn defect_profile_js(source: &str, theta: &str, seed: &str, directive: &str, len: usize) -> Result<String, JsError> {
    defect_profile_json(source, theta, seed, directive, len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = rauzyGraph)]
pub fn rauzy_graph_js(source: &str, theta: &str, seed: &str, directive: &str, len: usize, n: usize) -> Result<String, JsError> {
    rauzy_json(source, theta, seed, directive, len, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decompose)]
pub fn decompose_js(source: &str, theta: &str, seed: &str, directive: &str, len: usize, method: &str) -> Result<String, JsError> {
    decompose_json(source, theta, seed, directive, len, method).map_err(|e| JsError::new(&e))
}
