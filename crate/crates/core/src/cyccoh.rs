//! Group cohomology and homology of `ℤ/m` with coefficients in a ℤ-free
//! module, from the 2-periodic resolution.

use serde::Deserialize;
use thiserror::Error;

use crate::intlinalg::{cokernel, subquotient, FgAbGroup, IntMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("action matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("action matrix does not satisfy T^{order} = I")]
    WrongOrder { order: u32 },
    #[error("sign module needs an even group order, got {0}")]
    OddOrder(u32),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid module: {0}")]
    Format(String),
}

/// `ℤ^r` with a generator of `ℤ/m` acting by `T`, `T^m = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicModule {
    order: u32,
    action: IntMatrix,
    /// `1 - T`
    difference: IntMatrix,
    /// `N = Σ_{i<m} T^i`
    norm: IntMatrix,
}

#[derive(Deserialize)]
struct ModuleFile {
    order: u32,
    matrix: Vec<Vec<i64>>,
}

impl CyclicModule {
    pub fn new(order: u32, action: IntMatrix) -> Result<Self, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        if !action.is_square() {
            return Err(CycError::NotSquare {
                rows: action.rows(),
                cols: action.cols(),
            });
        }
        let r = action.rows();
        let id = IntMatrix::identity(r);
        if action.pow(order)? != id {
            return Err(CycError::WrongOrder { order });
        }
        let mut norm = IntMatrix::zeros(r, r);
        let mut power = id.clone();
        for _ in 0..order {
            norm = norm.add(&power)?;
            power = power.mul(&action)?;
        }
        let difference = id.sub(&action)?;
        Ok(CyclicModule {
            order,
            action,
            difference,
            norm,
        })
    }

    /// Parses `{"order": m, "matrix": [[...]]}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, CycError> {
        let file: ModuleFile = serde_json::from_value(value.clone()).map_err(|e| CycError::Format(e.to_string()))?;
        let m = IntMatrix::from_rows(&file.matrix)?;
        CyclicModule::new(file.order, m)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    /// `ℤ^r` with trivial action.
    pub fn trivial(order: u32, rank: usize) -> Result<Self, CycError> {
        CyclicModule::new(order, IntMatrix::identity(rank))
    }

    /// `ℤ` with the generator acting by `-1`.
    pub fn sign(order: u32) -> Result<Self, CycError> {
        if order % 2 == 1 {
            return Err(CycError::OddOrder(order));
        }
        CyclicModule::new(order, IntMatrix::identity(1).neg())
    }

    /// `ℤ²` with `ℤ/2` swapping the basis vectors.
    pub fn hyperbolic() -> Self {
        CyclicModule::new(2, IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]).expect("2x2")).expect("swap is an involution")
    }

    /// The regular representation `ℤ[ℤ/m]`.
    pub fn regular(order: u32) -> Result<Self, CycError> {
        let m = order as usize;
        let mut t = IntMatrix::zeros(m, m);
        for i in 0..m {
            t.set((i + 1) % m, i, 1.into());
        }
        CyclicModule::new(order, t)
    }

    fn zero_map(&self) -> IntMatrix {
        IntMatrix::zeros(self.rank(), 0)
    }

    /// `H^n(ℤ/m; M)`.
    pub fn cohomology(&self, n: u32) -> FgAbGroup {
        let result = match n {
            0 => subquotient(&self.difference, &self.zero_map()),
            n if n % 2 == 1 => subquotient(&self.norm, &self.difference),
            _ => subquotient(&self.difference, &self.norm),
        };
        result.expect("N(1-T) = (1-T)N = 0")
    }

    /// `H_n(ℤ/m; M)`.
    pub fn homology(&self, n: u32) -> FgAbGroup {
        let result = match n {
            0 => return cokernel(&self.difference),
            n if n % 2 == 1 => subquotient(&self.difference, &self.norm),
            _ => subquotient(&self.norm, &self.difference),
        };
        result.expect("N(1-T) = (1-T)N = 0")
    }
}
