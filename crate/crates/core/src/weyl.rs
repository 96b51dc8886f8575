//! Frobenius–Schur indicators for `SU(2)` and for the compact group
//! `H = 𝕋 ∪ j𝕋` (`j² = -1`, `jzj⁻¹ = z̄`), by constant-term extraction on
//! Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kcalc::{direct_sum, ko_of_algebra, ko_point, ksp_point, GradedGroup};
use crate::multiplicity::Multiplicity;
use crate::realrep::{DivisionRing, IrrepType, RealAlgebra, Summand};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("π_n needs n ≠ 0; the one-dimensional characters are separate")]
    ZeroParameter,
    #[error("invalid spin `{0}`: expected a non-negative integer or half-integer such as 3/2")]
    InvalidSpin(String),
}

/// Finite Laurent polynomial in `z` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentChar {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentChar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coefficient: i64, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coefficient);
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    fn add_term(&mut self, exponent: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(exponent).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn coefficient(&self, exponent: i64) -> i64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn constant_term(&self) -> i64 {
        self.coefficient(0)
    }

    /// Invariant under `z ↦ z⁻¹`.
    pub fn is_palindromic(&self) -> bool {
        self.terms().all(|(e, c)| self.coefficient(-e) == c)
    }

    pub fn add(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = LaurentChar::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// `p(z^k)`.
    pub fn substitute_power(&self, k: i64) -> LaurentChar {
        let mut out = LaurentChar::zero();
        for (e, c) in self.terms() {
            out.add_term(e * k, c);
        }
        out
    }

    /// Value at `z = 1` or `z = -1`.
    pub fn at_sign(&self, negative: bool) -> i64 {
        self.terms()
            .map(|(e, c)| if negative && e.rem_euclid(2) == 1 { -c } else { c })
            .sum()
    }

    pub fn dimension(&self) -> i64 {
        self.at_sign(false)
    }
}

impl fmt::Display for LaurentChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    match e {
                        1 => write!(f, "z")?,
                        _ => write!(f, "z^{e}")?,
                    }
                }
            }
        }
        Ok(())
    }
}

/// A spin `k ∈ ½ℕ`, stored as `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    pub fn integer(k: u32) -> Self {
        Spin(2 * k)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn dimension(self) -> u32 {
        self.0 + 1
    }
}

impl FromStr for Spin {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, WeylError> {
        let bad = || WeylError::InvalidSpin(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((num, "2")) => num.trim().parse::<u32>().map(Spin).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => t.parse::<u32>().ok().and_then(|k| k.checked_mul(2)).map(Spin).ok_or_else(bad),
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Character of `V_k` on the maximal torus: `Σ_{j=-k..k} z^{2j}`.
pub fn su2_character(k: Spin) -> LaurentChar {
    let t = k.twice() as i64;
    (0..=t).fold(LaurentChar::zero(), |acc, i| acc.add(&LaurentChar::monomial(1, -t + 2 * i)))
}

/// `2 - z² - z⁻²`, twice the Weyl density of `SU(2)`.
fn weyl_density() -> LaurentChar {
    LaurentChar::constant(2)
        .add(&LaurentChar::monomial(-1, 2))
        .add(&LaurentChar::monomial(-1, -2))
}

/// `∫_{SU(2)} f = ½·CT[f · (2 - z² - z⁻²)]` for a class function `f`.
fn haar_su2(f: &LaurentChar) -> i64 {
    let twice = f.mul(&weyl_density()).constant_term();
    assert!(twice % 2 == 0, "Weyl integral of an integral class function is integral");
    twice / 2
}

pub fn fs_su2(k: Spin) -> i64 {
    haar_su2(&su2_character(k).substitute_power(2))
}

/// `∫ |χ_k|²`, which is 1 for an irreducible character.
pub fn su2_norm(k: Spin) -> i64 {
    let chi = su2_character(k);
    haar_su2(&chi.mul(&chi))
}

/// Indicator of `π_n` on `H`, with the comparison against the claim that
/// every `π_n` is quaternionic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilIndicator {
    pub n: i64,
    pub indicator: i64,
    pub irrep_type: IrrepType,
    pub claimed_indicator: i64,
    pub discrepancy: bool,
}

impl fmt::Display for WeilIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π_{}: indicator {} ({})", self.n, self.indicator, self.irrep_type)?;
        if self.discrepancy {
            write!(
                f,
                " [DISCREPANCY: claimed {}; (jz)² = -1 gives π_n(-1) = (-1)^n, so even n is real]",
                self.claimed_indicator
            )?;
        }
        Ok(())
    }
}

/// `ν = ½·∫_𝕋 χ(z²) + ½·χ(-1)`, since `(jz)² = -1` on the `j`-component.
fn weil_indicator(torus_character: &LaurentChar) -> i64 {
    let twice = torus_character.substitute_power(2).constant_term() + torus_character.at_sign(true);
    assert!(twice % 2 == 0, "indicator of a character of H is integral");
    twice / 2
}

/// `π_n = Ind_𝕋^H(z ↦ zⁿ)`, with torus character `zⁿ + z⁻ⁿ`.
pub fn fs_weil_h(n: i64) -> Result<WeilIndicator, WeylError> {
    if n == 0 {
        return Err(WeylError::ZeroParameter);
    }
    let chi = LaurentChar::monomial(1, n).add(&LaurentChar::monomial(1, -n));
    let indicator = weil_indicator(&chi);
    let irrep_type = IrrepType::from_indicator(indicator as i32).expect("indicator in {-1, 0, 1}");
    Ok(WeilIndicator {
        n,
        indicator,
        irrep_type,
        claimed_indicator: -1,
        discrepancy: indicator != -1,
    })
}

/// The characters `χ₀^±` (trivial on `𝕋`, `j ↦ ±1`); both restrict to the
/// constant 1 on `𝕋`, so the sign does not enter.
pub fn fs_weil_h_onedim(_sign_plus: bool) -> i64 {
    weil_indicator(&LaurentChar::constant(1))
}

/// `C*_ℝ(SU(2))` in K-theory: one `KO` per real-type and one `KSp` per
/// quaternionic-type irreducible, read off `fs_su2` over both spin parities.
pub fn ko_su2_group_algebra() -> GradedGroup {
    let mut parts = Vec::new();
    // Spin parity determines the type, so each parity class is infinite.
    for twice in 0..2 {
        let base = match fs_su2(Spin::from_twice(twice)) {
            1 => ko_point(),
            -1 => ksp_point(),
            other => unreachable!("SU(2) has no complex-type irreducibles, got {other}"),
        };
        parts.push(base.scale(Multiplicity::Omega));
    }
    direct_sum(&parts).expect("equal periods")
}

/// `C*_ℝ(H)` from the computed types: `χ₀^±` and `π_n` for `n ≥ 1`.
pub fn weil_h_algebra() -> RealAlgebra {
    let mut summands = Vec::new();
    for plus in [true, false] {
        assert_eq!(fs_weil_h_onedim(plus), 1, "one-dimensional characters of H are real-valued");
        summands.push(Summand::new(DivisionRing::R, 1, 1));
    }
    for n in 1..=2 {
        let block = match fs_weil_h(n).expect("n ≠ 0").irrep_type {
            IrrepType::Real => Summand::new(DivisionRing::R, 2, Multiplicity::Omega),
            IrrepType::Quaternionic => Summand::new(DivisionRing::H, 1, Multiplicity::Omega),
            IrrepType::Complex => Summand::new(DivisionRing::C, 2, Multiplicity::Omega),
        };
        summands.push(block);
    }
    RealAlgebra::new("C*(H)", summands)
}

pub fn ko_weil_h() -> GradedGroup {
    ko_of_algebra(&weil_h_algebra())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters() {
        assert_eq!(su2_character(Spin::integer(0)), LaurentChar::constant(1));
        assert_eq!(su2_character("1/2".parse().unwrap()).to_string(), "z + z^-1");
        assert_eq!(su2_character(Spin::integer(1)).to_string(), "z^2 + 1 + z^-2");
        assert_eq!(su2_character(Spin::from_twice(7)).dimension(), 8);
        assert!(su2_character(Spin::from_twice(5)).is_palindromic());
    }

    #[test]
    fn spin_parsing() {
        assert_eq!("3/2".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("4".parse::<Spin>().unwrap(), Spin::integer(4));
        assert!("1/3".parse::<Spin>().is_err());
        assert!("-1".parse::<Spin>().is_err());
        assert_eq!(Spin::from_twice(5).to_string(), "5/2");
    }

    #[test]
    fn su2_indicators() {
        assert_eq!(fs_su2(Spin::integer(1)), 1);
        assert_eq!(fs_su2(Spin::from_twice(1)), -1);
        assert_eq!(fs_su2(Spin::integer(0)), 1);
        for twice in 0..=40 {
            let k = Spin::from_twice(twice);
            assert_eq!(fs_su2(k), if k.is_integral() { 1 } else { -1 });
            assert_eq!(su2_norm(k), 1);
        }
    }

    #[test]
    fn weil_group() {
        assert_eq!(fs_weil_h_onedim(true), 1);
        assert_eq!(fs_weil_h_onedim(false), 1);
        let one = fs_weil_h(1).unwrap();
        assert_eq!((one.indicator, one.discrepancy), (-1, false));
        let two = fs_weil_h(2).unwrap();
        assert_eq!((two.indicator, two.discrepancy), (1, true));
        assert!(two.to_string().contains("DISCREPANCY"));
        assert_eq!(fs_weil_h(0), Err(WeylError::ZeroParameter));
        assert_eq!(fs_weil_h(-3).unwrap().indicator, -1);
    }

    #[test]
    fn k_theory() {
        let k = ko_su2_group_algebra();
        assert_eq!(k.degree(1).to_string(), "ω·ℤ/2");
        assert!(k.degree(3).is_zero());
        assert_eq!(k.degree(0).to_string(), "ω·ℤ");
        assert_eq!(ko_weil_h(), k);
        assert_eq!(weil_h_algebra().to_string(), "2·M1(R) ⊕ ω·M2(R) ⊕ ω·M1(H)");
    }

    #[test]
    fn laurent_arithmetic() {
        let a = LaurentChar::monomial(3, -2).add(&LaurentChar::constant(1));
        let b = LaurentChar::monomial(-1, 1).add(&LaurentChar::monomial(2, 3));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).constant_term(), 0);
        assert_eq!(a.at_sign(true), 4);
        assert_eq!(b.at_sign(true), -1);
    }
}
