//! Resolved commands and their JSON results.

use serde_json::{json, Value};

use realcstar::catalog::{baum_connes_shift_check, build_catalog, catalog_to_json, verify_duality_partition};
use realcstar::chartab::{compute_character_table, parse_character_table, CharacterTable};
use realcstar::cyccoh::CyclicModule;
use realcstar::groups::{builtin as groups, parse_group_json};
use realcstar::kcalc::{equal_up_to_shift, ko_point, ko_torus2, ksc_point, ksp_point, ku_point, GradedGroup};
use realcstar::realrep::{classify_types, fs_indicators, wedderburn_real, IrrepType};
use realcstar::realspace::{brauer_group, builtin as spaces, enumerate_sign_choices, SimplicialRealSpace};
use realcstar::weyl::{fs_su2, fs_weil_h, su2_character, Spin};

use crate::cache::digest;
use crate::CliError;

/// Where an input comes from. File contents are read once, up front, so the
/// cache key covers exactly what is computed on.
#[derive(Clone, Debug)]
pub enum Source {
    Builtin(String),
    File { name: String, bytes: Vec<u8> },
}

impl Source {
    fn describe(&self) -> String {
        match self {
            Source::Builtin(n) => format!("builtin:{n}"),
            Source::File { bytes, .. } => format!("file:{}", digest(bytes)),
        }
    }

    fn label(&self) -> &str {
        match self {
            Source::Builtin(n) => n,
            Source::File { name, .. } => name,
        }
    }

    fn text(&self) -> Result<&str, CliError> {
        match self {
            Source::File { name, bytes } => {
                std::str::from_utf8(bytes).map_err(|_| CliError::Domain(format!("{name}: not UTF-8")))
            }
            Source::Builtin(_) => unreachable!("builtins carry no text"),
        }
    }

    fn json(&self) -> Result<Value, CliError> {
        serde_json::from_str(self.text()?).map_err(|e| CliError::Domain(format!("{}: {e}", self.label())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    Ko,
    Ku,
    Ksp,
    Ksc,
    KoTorus,
}

impl Theory {
    pub fn parse(s: &str) -> Option<Theory> {
        Some(match s.to_ascii_lowercase().as_str() {
            "ko" => Theory::Ko,
            "ku" => Theory::Ku,
            "ksp" => Theory::Ksp,
            "ksc" => Theory::Ksc,
            "ko-t2" => Theory::KoTorus,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Theory::Ko => "KO",
            Theory::Ku => "KU",
            Theory::Ksp => "KSp",
            Theory::Ksc => "KSC",
            Theory::KoTorus => "KO(T²)",
        }
    }

    fn groups(self) -> GradedGroup {
        match self {
            Theory::Ko => ko_point(),
            Theory::Ku => ku_point(),
            Theory::Ksp => ksp_point(),
            Theory::Ksc => ksc_point(),
            Theory::KoTorus => ko_torus2(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homological {
    Cohomology,
    Homology,
}

#[derive(Clone, Debug)]
pub enum ModuleSource {
    Builtin { name: String, order: u32, rank: usize },
    File(Source),
}

#[derive(Clone, Debug)]
pub enum Task {
    GroupDecompose(Source),
    GroupTypes(Source),
    GroupTable(Source),
    KTable { theory: Theory, shift: i64 },
    ShiftEq { left: Source, right: Source },
    Cyclic { kind: Homological, module: ModuleSource, degrees: Vec<u32> },
    SpaceBrauer(Source),
    SpaceSigns(Source),
    Su2 { spins: Vec<Spin> },
    WeilH { ns: Vec<i64> },
    CatalogList,
    CatalogVerify,
    CatalogBcCheck,
}

impl Task {
    pub fn command(&self) -> &'static str {
        match self {
            Task::GroupDecompose(_) => "group decompose",
            Task::GroupTypes(_) => "group types",
            Task::GroupTable(_) => "group table",
            Task::KTable { .. } => "ktheory table",
            Task::ShiftEq { .. } => "ktheory shift-eq",
            Task::Cyclic { kind: Homological::Cohomology, .. } => "cyclic cohomology",
            Task::Cyclic { kind: Homological::Homology, .. } => "cyclic homology",
            Task::SpaceBrauer(_) => "space brauer",
            Task::SpaceSigns(_) => "space signs",
            Task::Su2 { .. } => "weyl su2",
            Task::WeilH { .. } => "weyl weil-h",
            Task::CatalogList => "catalog list",
            Task::CatalogVerify => "catalog verify",
            Task::CatalogBcCheck => "catalog bc-check",
        }
    }

    /// Canonical description of everything the result depends on.
    pub fn key_material(&self, max_order: usize) -> String {
        let detail = match self {
            Task::GroupDecompose(s) | Task::GroupTypes(s) | Task::GroupTable(s) => {
                format!("{} max-order={max_order}", s.describe())
            }
            Task::KTable { theory, shift } => format!("{theory:?} shift={shift}"),
            Task::ShiftEq { left, right } => format!("{} {}", left.describe(), right.describe()),
            Task::Cyclic { module, degrees, .. } => {
                let m = match module {
                    ModuleSource::Builtin { name, order, rank } => format!("builtin:{name} order={order} rank={rank}"),
                    ModuleSource::File(s) => s.describe(),
                };
                format!("{m} degrees={degrees:?}")
            }
            Task::SpaceBrauer(s) | Task::SpaceSigns(s) => s.describe(),
            Task::Su2 { spins } => format!("{:?}", spins.iter().map(|s| s.twice()).collect::<Vec<_>>()),
            Task::WeilH { ns } => format!("{ns:?}"),
            Task::CatalogList | Task::CatalogVerify | Task::CatalogBcCheck => String::new(),
        };
        format!("realcstar {}\n{}\n{detail}", env!("CARGO_PKG_VERSION"), self.command())
    }

    pub fn compute(&self, max_order: usize) -> Result<Value, CliError> {
        let mut out = match self {
            Task::GroupDecompose(s) => {
                let t = table(s, max_order)?;
                let a = wedderburn_real(&t).map_err(domain)?;
                json!({"group": t.group_name, "order": t.group_order, "algebra": a.to_json()})
            }
            Task::GroupTypes(s) => {
                let t = table(s, max_order)?;
                let nu = fs_indicators(&t).map_err(domain)?;
                let inv = classify_types(&t).map_err(domain)?;
                let irreps: Vec<Value> = (0..t.dims.len())
                    .map(|i| {
                        json!({
                            "index": i,
                            "dim": t.dims[i],
                            "indicator": nu[i],
                            "type": inv.types[i],
                            "partner": inv.partner[i],
                        })
                    })
                    .collect();
                json!({
                    "group": t.group_name,
                    "order": t.group_order,
                    "irreps": irreps,
                    "counts": {
                        "REAL": inv.count(IrrepType::Real),
                        "COMPLEX": inv.count(IrrepType::Complex),
                        "QUATERNIONIC": inv.count(IrrepType::Quaternionic),
                    },
                })
            }
            Task::GroupTable(s) => {
                let t = table(s, max_order)?;
                json!({"group": t.group_name, "table": t.to_file_format()})
            }
            Task::KTable { theory, shift } => {
                let g = theory.groups().shift(*shift);
                json!({
                    "theory": theory.name(),
                    "shift": shift,
                    "minimal_period": g.minimal_period(),
                    "degrees": g.to_json(),
                })
            }
            Task::ShiftEq { left, right } => {
                let a = GradedGroup::from_json(&left.json()?).map_err(domain)?;
                let b = GradedGroup::from_json(&right.json()?).map_err(domain)?;
                let shifts = equal_up_to_shift(&a, &b).map_err(domain)?;
                json!({
                    "left": left.label(),
                    "right": right.label(),
                    "equivalent": !shifts.is_empty(),
                    "shifts": shifts,
                })
            }
            Task::Cyclic { kind, module, degrees } => {
                let m = match module {
                    ModuleSource::Builtin { name, order, rank } => builtin_module(name, *order, *rank)?,
                    ModuleSource::File(s) => CyclicModule::from_json(&s.json()?).map_err(domain)?,
                };
                let groups: Vec<Value> = degrees
                    .iter()
                    .map(|&n| {
                        let g = match kind {
                            Homological::Cohomology => m.cohomology(n),
                            Homological::Homology => m.homology(n),
                        };
                        json!({"degree": n, "group": g})
                    })
                    .collect();
                let action: Vec<Vec<Value>> = (0..m.rank())
                    .map(|i| (0..m.rank()).map(|j| json!(m.action().get(i, j).to_string())).collect())
                    .collect();
                json!({
                    "kind": match kind { Homological::Cohomology => "cohomology", Homological::Homology => "homology" },
                    "order": m.order(),
                    "rank": m.rank(),
                    "action": action,
                    "groups": groups,
                })
            }
            Task::SpaceBrauer(s) => {
                let x = space(s)?;
                let data = brauer_group(&x).map_err(domain)?;
                let mut v = serde_json::to_value(&data).expect("serializes");
                v["total"] = serde_json::to_value(data.total()).expect("serializes");
                v
            }
            Task::SpaceSigns(s) => {
                let x = space(s)?;
                let mut v = serde_json::to_value(enumerate_sign_choices(&x)).expect("serializes");
                v["space"] = json!(x.name());
                v
            }
            Task::Su2 { spins } => {
                let rows: Vec<Value> = spins
                    .iter()
                    .map(|&k| {
                        let nu = fs_su2(k);
                        json!({
                            "spin": k.to_string(),
                            "dimension": k.dimension(),
                            "character": su2_character(k).to_string(),
                            "indicator": nu,
                            "type": IrrepType::from_indicator(nu as i32),
                        })
                    })
                    .collect();
                json!({"irreps": rows})
            }
            Task::WeilH { ns } => {
                let rows = ns
                    .iter()
                    .map(|&n| fs_weil_h(n).map_err(domain))
                    .collect::<Result<Vec<_>, _>>()?;
                let flagged = rows.iter().filter(|r| r.discrepancy).count();
                json!({"indicators": rows, "discrepancies": flagged})
            }
            Task::CatalogList => json!({"theories": catalog_to_json(&build_catalog())}),
            Task::CatalogVerify => {
                let report = verify_duality_partition(&build_catalog()).map_err(domain)?;
                serde_json::to_value(report).expect("serializes")
            }
            Task::CatalogBcCheck => {
                let report = baum_connes_shift_check().map_err(domain)?;
                serde_json::to_value(report).expect("serializes")
            }
        };
        out["command"] = json!(self.command());
        Ok(out)
    }
}

fn domain(e: impl Into<realcstar::Error>) -> CliError {
    CliError::Domain(e.into().to_string())
}

fn table(s: &Source, max_order: usize) -> Result<CharacterTable, CliError> {
    let label = s.label().to_string();
    let tag = |e: realcstar::Error| CliError::Domain(format!("{label}: {e}"));
    match s {
        Source::Builtin(name) => {
            let g = groups::by_name(name).map_err(|e| tag(e.into()))?;
            if g.order() > max_order {
                return Err(CliError::Domain(format!(
                    "{name} has order {} above the bound {max_order}",
                    g.order()
                )));
            }
            compute_character_table(&g).map_err(|e| tag(e.into()))
        }
        Source::File { .. } => {
            let text = s.text()?;
            let v = s.json()?;
            if v.get("characters").is_some() {
                parse_character_table(text).map_err(|e| tag(e.into()))
            } else {
                let g = parse_group_json(text, max_order).map_err(|e| tag(e.into()))?;
                compute_character_table(&g).map_err(|e| tag(e.into()))
            }
        }
    }
}

fn space(s: &Source) -> Result<SimplicialRealSpace, CliError> {
    match s {
        Source::Builtin(name) => spaces::by_name(name).map_err(domain),
        Source::File { name, .. } => {
            let stem = std::path::Path::new(name)
                .file_stem()
                .map_or_else(|| name.clone(), |s| s.to_string_lossy().into_owned());
            SimplicialRealSpace::from_json(stem, &s.json()?).map_err(domain)
        }
    }
}

pub const MODULE_BUILTINS: &[&str] = &["trivial", "sign", "hyperbolic", "regular"];

fn builtin_module(name: &str, order: u32, rank: usize) -> Result<CyclicModule, CliError> {
    match name {
        "trivial" => CyclicModule::trivial(order, rank).map_err(domain),
        "sign" | "twisted" => CyclicModule::sign(order).map_err(domain),
        "hyperbolic" => Ok(CyclicModule::hyperbolic()),
        "regular" => CyclicModule::regular(order).map_err(domain),
        _ => Err(CliError::Domain(format!(
            "unknown module `{name}`; expected one of {}",
            MODULE_BUILTINS.join(", ")
        ))),
    }
}
