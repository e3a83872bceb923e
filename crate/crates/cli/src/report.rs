//! Text and JSON rendering. JSON objects use sorted keys and rationals are
//! written as exact strings, so equal inputs give byte-identical output.

use std::fmt::Write;

use lpdo_core::boxcert::{Certificate, ReportParams, Witness};
use lpdo_core::poly::Rational;
use serde_json::{json, Value};

use crate::app::{CertifyRow, ExactRow, FamilyRow, ResidualRow, SufficientRow};
use crate::expr::format_poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn r(v: &Rational) -> Value {
    Value::String(v.to_string())
}

fn json_line(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("values are always serializable");
    s.push('\n');
    s
}

pub fn parameters(p: &ReportParams) -> Value {
    json!({
        "eps": r(&p.eps),
        "m": r(p.rect.m()),
        "n": r(p.rect.n()),
        "depth": p.max_depth,
    })
}

pub fn certificate(c: &Certificate) -> Value {
    match c {
        Certificate::Inside { margin } => json!({ "kind": "inside", "margin": r(margin) }),
        Certificate::Violated { x, y, value } => {
            json!({ "kind": "violated", "witness": [r(x), r(y)], "value": r(value) })
        }
        Certificate::Unknown { gap } => json!({ "kind": "unknown", "gap": r(gap) }),
    }
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Inside { margin } => format!("inside, margin {margin}"),
        Certificate::Violated { x, y, value } => format!("violated at ({x}, {y}), value {value}"),
        Certificate::Unknown { gap } => format!("unknown, gap {gap}"),
    }
}

fn witness(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(w) => json!({ "witness": [r(&w.x), r(&w.y)], "value": r(&w.value) }),
    }
}

fn theorem1(t: Option<bool>) -> Value {
    t.map_or_else(|| Value::String("n/a".into()), Value::Bool)
}

fn theorem1_text(t: Option<bool>) -> String {
    t.map_or_else(|| "n/a".into(), |b| b.to_string())
}

fn params_text(p: &ReportParams) -> String {
    format!("eps = {}, m = {}, n = {}, depth = {}\n", p.eps, p.rect.m(), p.rect.n(), p.max_depth)
}

pub fn residual(rows: &[ResidualRow], f: Format) -> String {
    match f {
        Format::Json => json_line(json!({
            "roots": rows.iter().map(|row| json!({
                "omega": r(&row.omega),
                "residual": format_poly(&row.trace.r),
                "s": format_poly(&row.trace.s),
                "l_of_s": format_poly(&row.trace.l_of_s),
                "product": format_poly(&row.trace.product),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let _ = writeln!(out, "omega = {}", row.omega);
                let _ = writeln!(out, "  R = {}", format_poly(&row.trace.r));
            }
            out
        }
    }
}

pub fn exact(rows: &[ExactRow], f: Format) -> String {
    match f {
        Format::Json => json_line(json!({
            "roots": rows.iter().map(|row| json!({
                "omega": r(&row.omega),
                "residual": format_poly(&row.residual),
                "exact": row.exact,
                "system": row.system.as_ref().map(|s| s.residuals.iter().map(r).collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let _ = writeln!(out, "omega = {}", row.omega);
                let _ = writeln!(out, "  R = {}", format_poly(&row.residual));
                if let Some(s) = &row.system {
                    let vals: Vec<String> = s.residuals.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "  system = [{}]", vals.join(", "));
                }
                let _ = writeln!(out, "  exact = {}", row.exact);
            }
            out
        }
    }
}

pub fn certify(p: &ReportParams, rows: &[CertifyRow], f: Format) -> String {
    match f {
        Format::Json => json_line(json!({
            "parameters": parameters(p),
            "roots": rows.iter().map(|row| {
                let rep = &row.report;
                let mut v = json!({
                    "omega": r(&rep.root.omega),
                    "residual": format_poly(&rep.trace.r),
                    "difference": format_poly(&rep.difference),
                    "exact": rep.exact,
                    "certificate": certificate(&rep.certificate),
                    "sufficient": {
                        "theorem1": theorem1(rep.theorem1),
                        "triangle": rep.triangle,
                    },
                });
                if let Some(w) = &row.falsifier {
                    v["falsifier"] = witness(w);
                }
                v
            }).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = params_text(p);
            for row in rows {
                let rep = &row.report;
                let _ = writeln!(out, "omega = {}", rep.root.omega);
                let _ = writeln!(out, "  R = {}", format_poly(&rep.trace.r));
                let _ = writeln!(out, "  a00 - R = {}", format_poly(&rep.difference));
                let _ = writeln!(out, "  exact = {}", rep.exact);
                let _ = writeln!(out, "  certificate = {}", certificate_text(&rep.certificate));
                let _ = writeln!(out, "  theorem1 = {}", theorem1_text(rep.theorem1));
                let _ = writeln!(out, "  triangle = {}", rep.triangle);
                match &row.falsifier {
                    None => {}
                    Some(None) => out.push_str("  falsifier = none\n"),
                    Some(Some(w)) => {
                        let _ = writeln!(out, "  falsifier = ({}, {}), value {}", w.x, w.y, w.value);
                    }
                }
            }
            out
        }
    }
}

pub fn sufficient(p: &ReportParams, rows: &[SufficientRow], f: Format) -> String {
    match f {
        Format::Json => json_line(json!({
            "parameters": parameters(p),
            "roots": rows.iter().map(|row| json!({
                "omega": r(&row.omega),
                "sufficient": { "theorem1": theorem1(row.theorem1), "triangle": row.triangle },
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = params_text(p);
            for row in rows {
                let _ = writeln!(out, "omega = {}", row.omega);
                let _ = writeln!(out, "  theorem1 = {}", theorem1_text(row.theorem1));
                let _ = writeln!(out, "  triangle = {}", row.triangle);
            }
            out
        }
    }
}

pub fn family(rows: &[FamilyRow], f: Format) -> String {
    match f {
        Format::Json => json_line(json!({
            "roots": rows.iter().map(|row| json!({
                "omega": r(&row.omega),
                "a10": format_poly(&row.op.a10),
                "a01": format_poly(&row.op.a01),
                "a00": format_poly(&row.op.a00),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            for row in rows {
                let _ = writeln!(out, "omega = {}", row.omega);
                let _ = writeln!(out, "  a10 = {}", format_poly(&row.op.a10));
                let _ = writeln!(out, "  a01 = {}", format_poly(&row.op.a01));
                let _ = writeln!(out, "  a00 = {}", format_poly(&row.op.a00));
            }
            out
        }
    }
}
