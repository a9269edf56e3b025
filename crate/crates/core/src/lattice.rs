//! Divisor classes on the blowup of the plane at a cluster, with the
//! intersection form of the orthogonal basis `L, E₁, …, E_s` of total
//! transforms: `L² = 1`, `Eᵢ·Eⱼ = −δᵢⱼ`, `L·Eᵢ = 0`.
//!
//! A class is stored as `C = dL − Σ mᵢEᵢ`, the sign convention used for
//! curve classes throughout.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Integral divisor class `dL − Σ mᵢEᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl DivisorClass {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        DivisorClass { degree, mults }
    }

    pub fn zero(s: usize) -> Self {
        DivisorClass {
            degree: 0,
            mults: vec![0; s],
        }
    }

    pub fn s(&self) -> usize {
        self.mults.len()
    }

    /// Intersection number `d₁d₂ − Σ m₁ᵢm₂ᵢ`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<i64> {
        if self.s() != other.s() {
            return Err(Error::Dimension(format!(
                "classes on {} and {} exceptional divisors",
                self.s(),
                other.s()
            )));
        }
        let mut acc = self.degree as i128 * other.degree as i128;
        for (m, n) in self.mults.iter().zip(&other.mults) {
            acc -= *m as i128 * *n as i128;
        }
        i64::try_from(acc).map_err(|_| Error::Limit("intersection number overflow".into()))
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self).expect("equal lengths")
    }

    /// `C·κ = −3d + Σ mᵢ` against the canonical class.
    pub fn kappa_degree(&self) -> i64 {
        let mut acc = -3i128 * self.degree as i128;
        for m in &self.mults {
            acc += *m as i128;
        }
        i64::try_from(acc).expect("kappa degree overflow")
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        if self.s() != other.s() {
            return Err(Error::Dimension("class addition length mismatch".into()));
        }
        Ok(DivisorClass {
            degree: self.degree + other.degree,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass {
            degree: self.degree * k,
            mults: self.mults.iter().map(|m| m * k).collect(),
        }
    }

    /// Render as `dL - m₁E₁ - … - m_sE_s` with zero terms suppressed,
    /// numbering the exceptional divisors from `start_index`.
    pub fn render_from(&self, start_index: usize) -> String {
        let mut out = String::new();
        if self.degree != 0 {
            if self.degree == 1 {
                out.push('L');
            } else if self.degree == -1 {
                out.push_str("-L");
            } else {
                out.push_str(&format!("{}L", self.degree));
            }
        }
        for (i, m) in self.mults.iter().enumerate() {
            if *m == 0 {
                continue;
            }
            let idx = start_index + i;
            let coeff = m.abs();
            let sign = if *m > 0 { "-" } else { "+" };
            if out.is_empty() && *m < 0 {
                // leading positive term: no '+'
                if coeff == 1 {
                    out.push_str(&format!("E{idx}"));
                } else {
                    out.push_str(&format!("{coeff}E{idx}"));
                }
            } else if coeff == 1 {
                out.push_str(&format!("{sign}E{idx}"));
            } else {
                out.push_str(&format!("{sign}{coeff}E{idx}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn render(&self) -> String {
        self.render_from(1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Canonical class `κ = −3L + E₁ + … + E_s`.
pub fn canonical_class(s: usize) -> DivisorClass {
    DivisorClass {
        degree: -3,
        mults: vec![-1; s],
    }
}

/// Numerical type of a class; irreducibility is not decided here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    MinusOneClass,
    MinusTwoClass,
    Other,
}

/// `(−1)`-class iff `C² = C·κ = −1`; `(−2)`-class iff `C² = −2`, `C·κ = 0`.
pub fn classify_negative(c: &DivisorClass) -> ClassKind {
    let sq = c.self_intersection();
    let k = c.kappa_degree();
    if sq == -1 && k == -1 {
        ClassKind::MinusOneClass
    } else if sq == -2 && k == 0 {
        ClassKind::MinusTwoClass
    } else {
        ClassKind::Other
    }
}

/// Divisor class with rational coefficients, as produced by [`dual_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalClass {
    pub degree: Rational,
    pub mults: Vec<Rational>,
}

impl RationalClass {
    pub fn intersect_class(&self, other: &DivisorClass) -> Result<Rational> {
        if self.mults.len() != other.mults.len() {
            return Err(Error::Dimension(
                "rational class intersection length mismatch".into(),
            ));
        }
        let mut acc = &self.degree * Rational::from_integer(other.degree.into());
        for (m, n) in self.mults.iter().zip(&other.mults) {
            acc -= m * Rational::from_integer((*n).into());
        }
        Ok(acc)
    }

    /// The class as an integral one, when all coefficients are integers.
    pub fn to_integral(&self) -> Option<DivisorClass> {
        if !self.degree.is_integer() || self.mults.iter().any(|m| !m.is_integer()) {
            return None;
        }
        Some(DivisorClass {
            degree: i64::try_from(self.degree.to_integer()).ok()?,
            mults: self
                .mults
                .iter()
                .map(|m| i64::try_from(m.to_integer()).ok())
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

/// Solve `M x = rhs` over ℚ by Gaussian elimination.
pub(crate) fn solve_linear(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) || rhs.len() != n {
        return Err(Error::Dimension("linear system is not square".into()));
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= p.clone();
        }
        rhs[col] /= p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..n {
                    let v = &m[col][c] * &f;
                    m[r][c] -= v;
                }
                let v = &rhs[col] * &f;
                rhs[r] -= v;
            }
        }
    }
    Ok(rhs)
}

/// Dual basis `D₀, …, D_s` with `Dᵢ·Ẽⱼ = δᵢⱼ` for the given `s+1` linearly
/// independent classes `Ẽ₀, …, Ẽ_s` (each living on `s` exceptional divisors).
pub fn dual_basis(components: &[DivisorClass]) -> Result<Vec<RationalClass>> {
    let n = components.len();
    if n == 0 {
        return Err(Error::Dimension("empty component list".into()));
    }
    let s = components[0].s();
    if n != s + 1 {
        return Err(Error::Dimension(format!(
            "need s+1 = {} components, got {n}",
            s + 1
        )));
    }
    if components.iter().any(|c| c.s() != s) {
        return Err(Error::Dimension("components of unequal length".into()));
    }
    // unknown X = (x₀; x₁..x_s) as dL − Σ mᵢEᵢ; row j encodes X·Ẽⱼ
    let matrix: Vec<Vec<Rational>> = components
        .iter()
        .map(|comp| {
            let mut row = Vec::with_capacity(s + 1);
            row.push(Rational::from_integer(comp.degree.into()));
            for m in &comp.mults {
                row.push(Rational::from_integer((-m).into()));
            }
            row
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut rhs = vec![Rational::zero(); n];
        rhs[i] = Rational::one();
        let sol = solve_linear(matrix.clone(), rhs)?;
        out.push(RationalClass {
            degree: sol[0].clone(),
            mults: sol[1..].to_vec(),
        });
    }
    Ok(out)
}

/// Naive dimension count `max{0, (d+1)(d+2)/2 − Σ mᵢ(mᵢ+1)/2}`.
pub fn expected_dim(d: i64, mults: &[i64]) -> i64 {
    let mut acc = (d as i128 + 1) * (d as i128 + 2) / 2;
    for m in mults {
        acc -= *m as i128 * (*m as i128 + 1) / 2;
    }
    i64::try_from(acc.max(0)).expect("expected_dim overflow")
}
