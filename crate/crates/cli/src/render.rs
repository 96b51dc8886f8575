//! Text output, rebuilt from the JSON result of each command.

use std::fmt::Write;

use serde::de::DeserializeOwned;
use serde_json::Value;

use realcstar::catalog::{catalog_from_json, BaumConnesReport, PartitionReport};
use realcstar::chartab::CharacterTableFile;
use realcstar::intlinalg::FgAbGroup;
use realcstar::kcalc::GradedGroup;
use realcstar::realrep::RealAlgebra;
use realcstar::realspace::{BrauerData, SignChoices};
use realcstar::weyl::WeilIndicator;

use crate::CliError;

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T, CliError> {
    let item = v.get(key).ok_or_else(|| malformed(&format!("missing `{key}`")))?;
    serde_json::from_value(item.clone()).map_err(|e| malformed(&format!("`{key}`: {e}")))
}

fn whole<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| malformed(&e.to_string()))
}

fn malformed(msg: &str) -> CliError {
    CliError::Domain(format!("malformed result: {msg}"))
}

fn signed(n: i64) -> String {
    if n > 0 {
        format!("+{n}")
    } else {
        n.to_string()
    }
}

fn complex(re: f64, im: f64) -> String {
    let clean = |x: f64| {
        let r = (x * 1e4).round() / 1e4;
        let s = format!("{r:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    let (r, i) = (clean(re), clean(im));
    match (r.as_str(), i.as_str()) {
        (_, "0") => r,
        ("0", _) => format!("{i}i"),
        _ if im < 0.0 => format!("{r}{i}i"),
        _ => format!("{r}+{i}i"),
    }
}

pub fn text(v: &Value) -> Result<String, CliError> {
    let command: String = field(v, "command")?;
    let mut out = String::new();
    match command.as_str() {
        "group decompose" => {
            let name: String = field(v, "group")?;
            let algebra = RealAlgebra::from_json(format!("ℝ[{name}]"), &v["algebra"]).map_err(|e| malformed(&e.to_string()))?;
            writeln!(out, "{algebra}").unwrap();
        }
        "group types" => {
            let name: String = field(v, "group")?;
            let order: usize = field(v, "order")?;
            let irreps: Vec<Value> = field(v, "irreps")?;
            writeln!(out, "{name} (order {order})").unwrap();
            let mut nus = Vec::new();
            for r in &irreps {
                let i: usize = field(r, "index")?;
                let dim: usize = field(r, "dim")?;
                let nu: i64 = field(r, "indicator")?;
                let ty: String = field(r, "type")?;
                let partner: usize = field(r, "partner")?;
                write!(out, "  χ{i}: dim {dim}, ν = {}, {ty}", signed(nu)).unwrap();
                if partner != i {
                    write!(out, " (conjugate χ{partner})").unwrap();
                }
                writeln!(out).unwrap();
                nus.push(nu.to_string());
            }
            writeln!(out, "indicators: ({})", nus.join(",")).unwrap();
        }
        "group table" => {
            let name: String = field(v, "group")?;
            let t: CharacterTableFile = field(v, "table")?;
            writeln!(out, "{name} (order {}), {} classes", t.group_order, t.class_sizes.len()).unwrap();
            let sizes: Vec<String> = t.class_sizes.iter().map(ToString::to_string).collect();
            writeln!(out, "  class sizes: {}", sizes.join(" ")).unwrap();
            for (i, row) in t.characters.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|[re, im]| complex(*re, *im)).collect();
                writeln!(out, "  χ{i}: {}", cells.join("  ")).unwrap();
            }
        }
        "ktheory table" => {
            let name: String = field(v, "theory")?;
            let shift: i64 = field(v, "shift")?;
            let period: usize = field(v, "minimal_period")?;
            let g = GradedGroup::from_json(&v["degrees"]).map_err(|e| malformed(&e.to_string()))?;
            if shift == 0 {
                writeln!(out, "{name} (period {period})").unwrap();
            } else {
                writeln!(out, "{name} shifted by {shift} (period {period})").unwrap();
            }
            for n in 0..period {
                writeln!(out, "  {n}: {}", g.degree(n as i64)).unwrap();
            }
        }
        "ktheory shift-eq" => {
            let left: String = field(v, "left")?;
            let right: String = field(v, "right")?;
            let shifts: Vec<usize> = field(v, "shifts")?;
            if shifts.is_empty() {
                writeln!(out, "{left} and {right} are not shift-equivalent").unwrap();
            } else {
                let s: Vec<String> = shifts.iter().map(ToString::to_string).collect();
                writeln!(out, "{left} and {right} agree after shifting by {}", s.join(", ")).unwrap();
            }
        }
        "cyclic cohomology" | "cyclic homology" => {
            let kind: String = field(v, "kind")?;
            let order: u32 = field(v, "order")?;
            let rank: usize = field(v, "rank")?;
            writeln!(out, "ℤ/{order} acting on ℤ^{rank}").unwrap();
            let groups: Vec<Value> = field(v, "groups")?;
            for g in &groups {
                let n: u32 = field(g, "degree")?;
                let grp: FgAbGroup = field(g, "group")?;
                let label = if kind == "cohomology" { format!("H^{n}") } else { format!("H_{n}") };
                writeln!(out, "  {label} = {grp}").unwrap();
            }
        }
        "space brauer" => {
            let data: BrauerData = whole(v)?;
            let total: FgAbGroup = field(v, "total")?;
            write!(out, "{data}").unwrap();
            if !out.ends_with('\n') {
                out.push('\n');
            }
            writeln!(out, "total: {total}").unwrap();
        }
        "space signs" => {
            let space: String = field(v, "space")?;
            let choices: SignChoices = whole(v)?;
            writeln!(out, "{space}").unwrap();
            write!(out, "{choices}").unwrap();
        }
        "weyl su2" => {
            let irreps: Vec<Value> = field(v, "irreps")?;
            for r in &irreps {
                let spin: String = field(r, "spin")?;
                let dim: u32 = field(r, "dimension")?;
                let nu: i64 = field(r, "indicator")?;
                let ty: String = field(r, "type")?;
                let chi: String = field(r, "character")?;
                writeln!(out, "V_{spin}: dim {dim}, ν = {}, {ty}, χ = {chi}", signed(nu)).unwrap();
            }
        }
        "weyl weil-h" => {
            let rows: Vec<WeilIndicator> = field(v, "indicators")?;
            for r in &rows {
                writeln!(out, "{r}").unwrap();
            }
            let flagged: usize = field(v, "discrepancies")?;
            if flagged > 0 {
                writeln!(out, "{flagged} discrepancies flagged").unwrap();
            }
        }
        "catalog list" => {
            let theories = catalog_from_json(&v["theories"]).map_err(|e| malformed(&e.to_string()))?;
            for t in &theories {
                let signs: String = t.sign_choice.iter().map(ToString::to_string).collect();
                let signs = if signs.is_empty() { "-".to_string() } else { signs };
                let note = if t.sign_choice_stated { "" } else { " (signs unstated)" };
                writeln!(out, "[{}] {}  signs {signs}{note}", t.class_id, t.name).unwrap();
            }
        }
        "catalog verify" => {
            let report: PartitionReport = whole(v)?;
            write!(out, "{report}").unwrap();
        }
        "catalog bc-check" => {
            let report: BaumConnesReport = whole(v)?;
            write!(out, "{report}").unwrap();
        }
        other => return Err(malformed(&format!("unknown command `{other}`"))),
    }
    Ok(out)
}
