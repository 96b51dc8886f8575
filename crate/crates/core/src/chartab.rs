//! Complex character tables.
//!
//! Tables are computed by diagonalizing a random integer combination of the
//! class matrices: its eigenvectors are the central characters
//! `ω_χ(C_k) = |C_k| χ(z_k) / χ(1)`. The eigen-decomposition is done in double
//! precision and every table, computed or ingested, is accepted only after the
//! orthogonality relations have been checked.

use std::cmp::Ordering;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{class_matrix, conjugacy_data, ClassData, FiniteGroup};

/// Tolerance for the orthogonality relations.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
/// Tolerance for recovering integers (dimensions, indicators) by rounding, and
/// for matching complex-conjugate characters.
pub const ROUNDING_TOL: f64 = 1e-6;
/// Largest accepted a-posteriori error estimate for a computed table.
pub const ENTRY_ERROR_BOUND: f64 = 1e-9;

/// Seeds tried in order when a random combination of class matrices fails to
/// separate the central characters.
pub const SEPARATION_SEEDS: [u64; 8] = [
    0x5EED_0001,
    0x5EED_0002,
    0x5EED_0003,
    0x5EED_0004,
    0x5EED_0005,
    0x5EED_0006,
    0x5EED_0007,
    0x5EED_0008,
];
const COEFFICIENT_RANGE: i64 = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharTableError {
    #[error("class-matrix combinations failed to separate the characters after {attempts} seeds")]
    DegenerateEigenspaces { attempts: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid character table: {0}")]
    Format(String),
    #[error("{relation} orthogonality violated for ({a}, {b}): residual {residual:.3e}")]
    OrthogonalityViolation {
        relation: &'static str,
        a: usize,
        b: usize,
        residual: f64,
    },
    #[error("cannot read character table: {0}")]
    Io(String),
}

/// Character table with class data.
///
/// Column 0 is always the identity class; row order is canonical: ascending
/// dimension, then descending value tuple on a `1e-6` grid (so the trivial
/// character is row 0).
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub group_name: String,
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    pub squaring_map: Vec<usize>,
    pub inverse_map: Vec<usize>,
    pub dims: Vec<u64>,
    pub values: Vec<Vec<Complex64>>,
    /// Largest residual seen while computing or verifying the table.
    pub error_estimate: f64,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.dims.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Builds a table from raw data and runs every check. Dimensions are read
    /// off column 0 and snapped to exact integers.
    pub fn from_parts(
        group_name: String,
        group_order: usize,
        class_sizes: Vec<usize>,
        squaring_map: Vec<usize>,
        inverse_map: Option<Vec<usize>>,
        values: Vec<Vec<Complex64>>,
    ) -> Result<Self, CharTableError> {
        let r = class_sizes.len();
        let fmt = |s: String| Err(CharTableError::Format(s));
        if r == 0 {
            return fmt("no classes".into());
        }
        if values.len() != r {
            return fmt(format!("{} characters for {r} classes", values.len()));
        }
        if let Some(i) = values.iter().position(|row| row.len() != r) {
            return fmt(format!("character {i} has {} values, expected {r}", values[i].len()));
        }
        if class_sizes.iter().sum::<usize>() != group_order {
            return fmt(format!("class sizes sum to {}, not {group_order}", class_sizes.iter().sum::<usize>()));
        }
        if class_sizes[0] != 1 {
            return fmt("first class must be the identity class".into());
        }
        if class_sizes.iter().any(|&s| s == 0 || !group_order.is_multiple_of(s)) {
            return fmt("class sizes must divide the group order".into());
        }
        if squaring_map.len() != r || squaring_map.iter().any(|&c| c >= r) || squaring_map[0] != 0 {
            return fmt("squaring map must send classes to classes and fix the identity class".into());
        }
        if values.iter().any(|row| row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return fmt("non-finite character value".into());
        }
        let mut dims = Vec::with_capacity(r);
        for (i, row) in values.iter().enumerate() {
            let d = row[0];
            let rounded = d.re.round();
            if d.im.abs() > ROUNDING_TOL || (d.re - rounded).abs() > ROUNDING_TOL || rounded < 1.0 {
                return fmt(format!("character {i} has non-integral degree {d}"));
            }
            dims.push(rounded as u64);
        }
        let dim_sq: u64 = dims.iter().map(|d| d * d).sum();
        if dim_sq != group_order as u64 {
            return fmt(format!("sum of squared degrees is {dim_sq}, group order is {group_order}"));
        }
        let mut values = values;
        for (row, &d) in values.iter_mut().zip(&dims) {
            row[0] = Complex64::new(d as f64, 0.0);
        }
        let inverse_map = match inverse_map {
            Some(m) => m,
            None => conjugate_columns(&values)?,
        };
        if inverse_map.len() != r || inverse_map.iter().any(|&c| c >= r) {
            return fmt("inverse map must send classes to classes".into());
        }
        let mut table = CharacterTable {
            group_name,
            group_order,
            class_sizes,
            squaring_map,
            inverse_map,
            dims,
            values,
            error_estimate: 0.0,
        };
        let residual = table.verify()?;
        table.error_estimate = table.error_estimate.max(residual);
        table.sort_rows();
        Ok(table)
    }

    /// Checks both orthogonality relations and the presence of the trivial
    /// character; returns the largest residual.
    pub fn verify(&self) -> Result<f64, CharTableError> {
        let r = self.num_classes();
        let n = self.group_order as f64;
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in a..r {
                let s: Complex64 = (0..r)
                    .map(|k| self.class_sizes[k] as f64 * self.values[a][k] * self.values[b][k].conj())
                    .sum::<Complex64>()
                    / n;
                let target = if a == b { 1.0 } else { 0.0 };
                let residual = (s - target).norm();
                if residual > ORTHOGONALITY_TOL {
                    return Err(CharTableError::OrthogonalityViolation {
                        relation: "row",
                        a,
                        b,
                        residual,
                    });
                }
                worst = worst.max(residual);
            }
        }
        for i in 0..r {
            for j in i..r {
                let s: Complex64 = (0..r).map(|a| self.values[a][i] * self.values[a][j].conj()).sum();
                let scale = (self.class_sizes[i] as f64 * self.class_sizes[j] as f64).sqrt() / n;
                let target = if i == j { n / self.class_sizes[i] as f64 } else { 0.0 };
                let residual = (s - target).norm() * scale;
                if residual > ORTHOGONALITY_TOL {
                    return Err(CharTableError::OrthogonalityViolation {
                        relation: "column",
                        a: i,
                        b: j,
                        residual,
                    });
                }
                worst = worst.max(residual);
            }
        }
        let has_trivial = self
            .values
            .iter()
            .any(|row| row.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < ROUNDING_TOL));
        if !has_trivial {
            return Err(CharTableError::Format("no trivial character".into()));
        }
        Ok(worst)
    }

    fn sort_rows(&mut self) {
        let mut order: Vec<usize> = (0..self.num_irreps()).collect();
        order.sort_by(|&a, &b| {
            self.dims[a]
                .cmp(&self.dims[b])
                .then_with(|| grid_key(&self.values[b]).cmp(&grid_key(&self.values[a])))
        });
        self.dims = order.iter().map(|&i| self.dims[i]).collect();
        self.values = order.iter().map(|&i| self.values[i].clone()).collect();
    }

    /// `Σ_g χ(g)` for each irreducible, i.e. `|G|` times the multiplicity of
    /// the trivial character.
    pub fn row_sums(&self) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|row| row.iter().zip(&self.class_sizes).map(|(z, &s)| z * s as f64).sum())
            .collect()
    }

    pub fn to_file_format(&self) -> CharacterTableFile {
        CharacterTableFile {
            name: Some(self.group_name.clone()),
            group_order: self.group_order,
            class_sizes: self.class_sizes.clone(),
            squaring_map: self.squaring_map.clone(),
            characters: self
                .values
                .iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_format()).expect("table serializes")
    }
}

fn grid_key(row: &[Complex64]) -> Vec<(i64, i64)> {
    let snap = |x: f64| (x / ROUNDING_TOL).round() as i64;
    row.iter().map(|z| (snap(z.re), snap(z.im))).collect()
}

/// For each class `i` the class `j` whose column is the complex conjugate of
/// column `i`.
fn conjugate_columns(values: &[Vec<Complex64>]) -> Result<Vec<usize>, CharTableError> {
    let r = values.len();
    (0..r)
        .map(|i| {
            let matches: Vec<usize> = (0..r)
                .filter(|&j| values.iter().all(|row| (row[j] - row[i].conj()).norm() < ROUNDING_TOL))
                .collect();
            match matches.as_slice() {
                [j] => Ok(*j),
                _ => Err(CharTableError::Format(format!(
                    "class {i} has {} conjugate columns",
                    matches.len()
                ))),
            }
        })
        .collect()
}

/// On-disk character table format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTableFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    pub squaring_map: Vec<usize>,
    pub characters: Vec<Vec<[f64; 2]>>,
}

impl CharacterTableFile {
    pub fn into_table(self) -> Result<CharacterTable, CharTableError> {
        let values = self
            .characters
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        CharacterTable::from_parts(
            self.name.unwrap_or_else(|| "G".into()),
            self.group_order,
            self.class_sizes,
            self.squaring_map,
            None,
            values,
        )
    }
}

pub fn parse_character_table(text: &str) -> Result<CharacterTable, CharTableError> {
    let file: CharacterTableFile = serde_json::from_str(text).map_err(|e| CharTableError::Format(e.to_string()))?;
    file.into_table()
}

pub fn ingest_character_table(path: impl AsRef<Path>) -> Result<CharacterTable, CharTableError> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| CharTableError::Io(e.to_string()))?;
    parse_character_table(&text)
}

/// Computes the character table of `g`.
pub fn compute_character_table(g: &FiniteGroup) -> Result<CharacterTable, CharTableError> {
    let classes = conjugacy_data(g);
    compute_with_classes(g, &classes)
}

pub fn compute_with_classes(g: &FiniteGroup, classes: &ClassData) -> Result<CharacterTable, CharTableError> {
    let r = classes.num_classes();
    let class_mats: Vec<DMatrix<f64>> = (0..r)
        .map(|i| {
            let m = class_matrix(g, classes, i);
            DMatrix::from_fn(r, r, |a, b| {
                // class matrix entries are bounded by |G|
                num_traits::ToPrimitive::to_f64(m.get(a, b)).expect("small entries")
            })
        })
        .collect();

    for &seed in &SEPARATION_SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<f64> = (0..r)
            .map(|_| rng.random_range(-COEFFICIENT_RANGE..=COEFFICIENT_RANGE) as f64)
            .collect();
        let mut combo = DMatrix::<f64>::zeros(r, r);
        for (c, m) in coeffs.iter().zip(&class_mats) {
            combo += m * *c;
        }
        let Some(central) = central_characters(&combo) else {
            continue;
        };
        // Certify every vector against every class matrix: M_i w = w_i w
        // because row 0 of M_i is the indicator of class i.
        let mut residual: f64 = 0.0;
        for w in &central {
            for (i, m) in class_mats.iter().enumerate() {
                let mc = m.map(|x| Complex64::new(x, 0.0));
                let lhs = &mc * w;
                let rhs = w * w[i];
                residual = residual.max((lhs - rhs).camax() / (1.0 + w[i].norm()));
            }
        }
        if residual > ENTRY_ERROR_BOUND {
            continue;
        }
        let n = g.order() as f64;
        let mut values = Vec::with_capacity(r);
        for w in &central {
            let norm: f64 = (0..r).map(|k| w[k].norm_sqr() / classes.class_sizes[k] as f64).sum();
            let d = (n / norm).sqrt();
            if (d - d.round()).abs() > ROUNDING_TOL {
                return Err(CharTableError::Numerical(format!("degree {d} is not an integer")));
            }
            let d = d.round();
            values.push((0..r).map(|k| w[k] * d / classes.class_sizes[k] as f64).collect());
        }
        let mut table = CharacterTable::from_parts(
            g.name().to_string(),
            g.order(),
            classes.class_sizes.clone(),
            classes.squaring_map.clone(),
            Some(classes.inverse_map.clone()),
            values,
        )?;
        table.error_estimate = table.error_estimate.max(residual);
        if table.error_estimate > ENTRY_ERROR_BOUND {
            return Err(CharTableError::Numerical(format!(
                "error estimate {:.3e} exceeds {ENTRY_ERROR_BOUND:e}",
                table.error_estimate
            )));
        }
        return Ok(table);
    }
    Err(CharTableError::DegenerateEigenspaces {
        attempts: SEPARATION_SEEDS.len(),
    })
}

/// Eigenvectors of `combo`, normalized to 1 at the identity class, or `None`
/// when two eigenvalues are too close to separate.
fn central_characters(combo: &DMatrix<f64>) -> Option<Vec<DVector<Complex64>>> {
    let r = combo.nrows();
    let eig = combo.complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for a in 0..r {
        for b in 0..a {
            if (eig[a] - eig[b]).norm() < 1e-6 * scale {
                return None;
            }
        }
    }
    let mc = combo.map(|x| Complex64::new(x, 0.0));
    let mut out = Vec::with_capacity(r);
    for &lambda in eig.iter() {
        let shifted = &mc - DMatrix::<Complex64>::identity(r, r) * lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t?;
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(Ordering::Equal))?;
        let mut w: DVector<Complex64> = v_t.row(idx).adjoint();
        if w[0].norm() < 1e-8 {
            return None;
        }
        w /= w[0];
        // two steps of inverse iteration with a Rayleigh-type update
        for _ in 0..2 {
            let lam = (&mc * &w)[0];
            let perturbed = &mc - DMatrix::<Complex64>::identity(r, r) * (lam + Complex64::new(1e-10 * scale, 0.0));
            let Some(x) = perturbed.lu().solve(&w) else {
                break;
            };
            if x[0].norm() == 0.0 || !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                break;
            }
            w = &x / x[0];
        }
        out.push(w);
    }
    Some(out)
}
