//! Real, complex and quaternionic types of irreducible representations, and
//! finite-dimensional real C*-algebras written as sums of matrix algebras over
//! ℝ, ℂ and ℍ.

mod structure;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::{CharacterTable, ROUNDING_TOL};
use crate::multiplicity::Multiplicity;

pub use structure::{decompose_by_structure_constants, StructureConstants};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealRepError {
    #[error("indicator of irreducible {irrep} is {value}, not an integer in {{-1, 0, 1}}")]
    NonIntegralIndicator { irrep: usize, value: Complex64 },
    #[error("irreducible {irrep} has indicator 0 but no complex-conjugate partner")]
    PairingFailure { irrep: usize },
    #[error("quaternionic irreducible {irrep} has odd degree {dim}")]
    OddQuaternionicDim { irrep: usize, dim: u64 },
    #[error("real dimension {found} does not match the expected {expected}")]
    DimensionMismatch { expected: u64, found: u64 },
    #[error("operation needs a finite algebra, found an ω multiplicity")]
    InfiniteUnsupported,
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("algebra has no two-sided unit")]
    NotUnital,
    #[error("algebra is not semisimple: trace form has rank {rank} < {dim}")]
    NotSemisimple { rank: usize, dim: usize },
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("invalid input: {0}")]
    Format(String),
}

/// Commutant type of an irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IrrepType {
    Real,
    Complex,
    Quaternionic,
}

impl IrrepType {
    pub fn from_indicator(nu: i32) -> Option<IrrepType> {
        match nu {
            1 => Some(IrrepType::Real),
            0 => Some(IrrepType::Complex),
            -1 => Some(IrrepType::Quaternionic),
            _ => None,
        }
    }
}

impl fmt::Display for IrrepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrrepType::Real => "real",
            IrrepType::Complex => "complex",
            IrrepType::Quaternionic => "quaternionic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DivisionRing {
    R,
    C,
    H,
}

impl DivisionRing {
    pub const ALL: [DivisionRing; 3] = [DivisionRing::R, DivisionRing::C, DivisionRing::H];

    pub fn real_dim(self) -> u64 {
        match self {
            DivisionRing::R => 1,
            DivisionRing::C => 2,
            DivisionRing::H => 4,
        }
    }

    /// `D ⊗_ℝ D'` as a list of `(ring, matrix size, count)`.
    pub fn tensor(self, other: DivisionRing) -> (DivisionRing, u64, u64) {
        use DivisionRing::*;
        match (self, other) {
            (R, d) | (d, R) => (d, 1, 1),
            (C, C) => (C, 1, 2),
            (C, H) | (H, C) => (C, 2, 1),
            (H, H) => (R, 4, 1),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            DivisionRing::R => "R",
            DivisionRing::C => "C",
            DivisionRing::H => "H",
        }
    }

    fn parse(s: &str) -> Option<DivisionRing> {
        match s {
            "R" | "ℝ" => Some(DivisionRing::R),
            "C" | "ℂ" => Some(DivisionRing::C),
            "H" | "ℍ" => Some(DivisionRing::H),
            _ => None,
        }
    }
}

impl fmt::Display for DivisionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `multiplicity` copies of `M_size(ring)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub ring: DivisionRing,
    pub size: u64,
    pub multiplicity: Multiplicity,
}

impl Summand {
    pub fn new(ring: DivisionRing, size: u64, multiplicity: impl Into<Multiplicity>) -> Self {
        Summand {
            ring,
            size,
            multiplicity: multiplicity.into(),
        }
    }

    /// Real dimension of a single copy.
    pub fn block_dim(&self) -> u64 {
        self.size * self.size * self.ring.real_dim()
    }
}

/// Direct sum of matrix algebras over ℝ, ℂ, ℍ in canonical order
/// (ring `R < C < H`, then size), with equal blocks merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealAlgebra {
    pub name: String,
    summands: Vec<Summand>,
}

impl RealAlgebra {
    pub fn new(name: impl Into<String>, summands: impl IntoIterator<Item = Summand>) -> Self {
        let mut merged: BTreeMap<(DivisionRing, u64), Multiplicity> = BTreeMap::new();
        for s in summands {
            if s.size == 0 || s.multiplicity.is_zero() {
                continue;
            }
            let slot = merged.entry((s.ring, s.size)).or_insert(Multiplicity::ZERO);
            *slot = *slot + s.multiplicity;
        }
        RealAlgebra {
            name: name.into(),
            summands: merged
                .into_iter()
                .map(|((ring, size), multiplicity)| Summand {
                    ring,
                    size,
                    multiplicity,
                })
                .collect(),
        }
    }

    /// `M_size(ring)`.
    pub fn simple(ring: DivisionRing, size: u64) -> Self {
        Self::new(format!("M{size}({ring})"), [Summand::new(ring, size, 1)])
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_finite(&self) -> bool {
        self.summands.iter().all(|s| !s.multiplicity.is_omega())
    }

    pub fn real_dimension(&self) -> Result<u64, RealRepError> {
        self.summands
            .iter()
            .map(|s| {
                s.multiplicity
                    .finite()
                    .map(|m| m * s.block_dim())
                    .ok_or(RealRepError::InfiniteUnsupported)
            })
            .sum()
    }

    /// Structural equality ignoring the name.
    pub fn same_blocks(&self, other: &RealAlgebra) -> bool {
        self.summands == other.summands
    }

    /// JSON list of `[ring, size, multiplicity]` triples.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.summands
                .iter()
                .map(|s| serde_json::json!([s.ring.symbol(), s.size, s.multiplicity]))
                .collect(),
        )
    }

    pub fn from_json(name: impl Into<String>, value: &serde_json::Value) -> Result<Self, RealRepError> {
        let bad = |msg: &str| RealRepError::Format(msg.to_string());
        let items = value.as_array().ok_or_else(|| bad("expected a list of summands"))?;
        let mut summands = Vec::with_capacity(items.len());
        for item in items {
            let triple = item.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("summand must be [ring, size, multiplicity]"))?;
            let ring = triple[0]
                .as_str()
                .and_then(DivisionRing::parse)
                .ok_or_else(|| bad("ring must be \"R\", \"C\" or \"H\""))?;
            let size = triple[1].as_u64().filter(|&n| n > 0).ok_or_else(|| bad("size must be a positive integer"))?;
            let multiplicity: Multiplicity =
                serde_json::from_value(triple[2].clone()).map_err(|e| RealRepError::Format(e.to_string()))?;
            summands.push(Summand::new(ring, size, multiplicity));
        }
        Ok(RealAlgebra::new(name, summands))
    }
}

impl fmt::Display for RealAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let block = format!("M{}({})", s.size, s.ring);
                match s.multiplicity {
                    Multiplicity::Finite(1) => block,
                    m => format!("{m}·{block}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Involution on the irreducibles induced by complex conjugation: fixed
/// points are real or quaternionic, 2-cycles are complex pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualInvolution {
    pub partner: Vec<usize>,
    pub types: Vec<IrrepType>,
}

impl DualInvolution {
    pub fn count(&self, ty: IrrepType) -> usize {
        self.types.iter().filter(|&&t| t == ty).count()
    }

    /// Number of complex-conjugate pairs.
    pub fn complex_pairs(&self) -> usize {
        self.count(IrrepType::Complex) / 2
    }
}

/// Frobenius–Schur indicators `(1/|G|) Σ_g χ(g²)`, evaluated classwise through
/// the squaring map and rounded with residual below `1e-6`.
pub fn fs_indicators(t: &CharacterTable) -> Result<Vec<i32>, RealRepError> {
    let n = t.group_order as f64;
    t.values
        .iter()
        .enumerate()
        .map(|(irrep, row)| {
            let s: Complex64 = (0..t.num_classes())
                .map(|k| row[t.squaring_map[k]] * t.class_sizes[k] as f64)
                .sum::<Complex64>()
                / n;
            let rounded = s.re.round();
            if s.im.abs() >= ROUNDING_TOL || (s.re - rounded).abs() >= ROUNDING_TOL || rounded.abs() > 1.0 {
                return Err(RealRepError::NonIntegralIndicator { irrep, value: s });
            }
            Ok(rounded as i32)
        })
        .collect()
}

pub fn classify_types(t: &CharacterTable) -> Result<DualInvolution, RealRepError> {
    let nu = fs_indicators(t)?;
    let r = t.num_irreps();
    let mut partner: Vec<usize> = (0..r).collect();
    let mut types = Vec::with_capacity(r);
    for a in 0..r {
        let ty = IrrepType::from_indicator(nu[a]).expect("indicator in range");
        if ty == IrrepType::Quaternionic && t.dims[a] % 2 == 1 {
            return Err(RealRepError::OddQuaternionicDim { irrep: a, dim: t.dims[a] });
        }
        if ty == IrrepType::Complex {
            let candidates: Vec<usize> = (0..r)
                .filter(|&b| b != a && nu[b] == 0)
                .filter(|&b| {
                    t.values[a]
                        .iter()
                        .zip(&t.values[b])
                        .all(|(x, y)| (x - y.conj()).norm() < ROUNDING_TOL)
                })
                .collect();
            match candidates.as_slice() {
                [b] => partner[a] = *b,
                _ => return Err(RealRepError::PairingFailure { irrep: a }),
            }
        }
        types.push(ty);
    }
    if (0..r).any(|a| partner[partner[a]] != a) {
        let irrep = (0..r).find(|&a| partner[partner[a]] != a).unwrap_or(0);
        return Err(RealRepError::PairingFailure { irrep });
    }
    Ok(DualInvolution { partner, types })
}

/// Decomposition of the real group algebra `ℝG` from its character table.
pub fn wedderburn_real(t: &CharacterTable) -> Result<RealAlgebra, RealRepError> {
    let inv = classify_types(t)?;
    let mut summands = Vec::new();
    for (a, &ty) in inv.types.iter().enumerate() {
        let d = t.dims[a];
        match ty {
            IrrepType::Real => summands.push(Summand::new(DivisionRing::R, d, 1)),
            IrrepType::Quaternionic => {
                if d % 2 == 1 {
                    return Err(RealRepError::OddQuaternionicDim { irrep: a, dim: d });
                }
                summands.push(Summand::new(DivisionRing::H, d / 2, 1));
            }
            IrrepType::Complex if a < inv.partner[a] => summands.push(Summand::new(DivisionRing::C, d, 1)),
            IrrepType::Complex => {}
        }
    }
    let algebra = RealAlgebra::new(format!("ℝ[{}]", t.group_name), summands);
    let found = algebra.real_dimension()?;
    let expected = t.group_order as u64;
    if found != expected {
        return Err(RealRepError::DimensionMismatch { expected, found });
    }
    Ok(algebra)
}

/// `ℂG` read off the character degrees, written with complex blocks.
pub fn wedderburn_complex(t: &CharacterTable) -> RealAlgebra {
    RealAlgebra::new(
        format!("ℂ[{}]", t.group_name),
        t.dims.iter().map(|&d| Summand::new(DivisionRing::C, d, 1)),
    )
}

/// `A ⊗_ℝ ℂ`: `M_n(ℝ) → M_n(ℂ)`, `M_n(ℂ) → 2·M_n(ℂ)`, `M_n(ℍ) → M_2n(ℂ)`.
pub fn complexify(a: &RealAlgebra) -> RealAlgebra {
    let summands = a.summands.iter().map(|s| match s.ring {
        DivisionRing::R => Summand::new(DivisionRing::C, s.size, s.multiplicity),
        DivisionRing::C => Summand::new(DivisionRing::C, s.size, s.multiplicity + s.multiplicity),
        DivisionRing::H => Summand::new(DivisionRing::C, 2 * s.size, s.multiplicity),
    });
    let out = RealAlgebra::new(format!("{}⊗ℂ", a.name), summands);
    if let (Ok(before), Ok(after)) = (a.real_dimension(), out.real_dimension()) {
        assert_eq!(after, 2 * before, "complexification doubles the real dimension");
    }
    out
}

/// `A ⊗_ℝ B` by the division-ring tensor table, extended bilinearly.
pub fn tensor_real(a: &RealAlgebra, b: &RealAlgebra) -> Result<RealAlgebra, RealRepError> {
    let dim_a = a.real_dimension()?;
    let dim_b = b.real_dimension()?;
    let mut summands = Vec::new();
    for x in &a.summands {
        for y in &b.summands {
            let (ring, size, count) = x.ring.tensor(y.ring);
            summands.push(Summand::new(
                ring,
                x.size * y.size * size,
                x.multiplicity * y.multiplicity * Multiplicity::Finite(count),
            ));
        }
    }
    let out = RealAlgebra::new(format!("{}⊗{}", a.name, b.name), summands);
    let found = out.real_dimension()?;
    if found != dim_a * dim_b {
        return Err(RealRepError::DimensionMismatch {
            expected: dim_a * dim_b,
            found,
        });
    }
    Ok(out)
}
