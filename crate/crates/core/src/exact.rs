//! Exact arithmetic over ℚ and real quadratic extensions ℚ(√D), plus
//! continued fractions.
//!
//! Rationals are arbitrary-precision (`num_rational::BigRational`, re-exported
//! as [`Rational`]).  A [`QuadNum`] represents `a + b·√D` with rational `a, b`
//! and squarefree `D`; every comparison is decided symbolically by sign
//! cascades (at most two squarings), never by floating point.  This matters:
//! the interval endpoints handled here can agree to four decimal digits and
//! beyond.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Convenience constructor for small rationals.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parse `"p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}"))),
        Some((p, q)) => {
            let p = p
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q = q
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Render a rational as `p/q`, or plain `p` when the denominator is one.
pub fn render_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

/// Continued fraction expansion of a rational `t ≥ 1`.
///
/// Returns `[n₁, …, n_r]` with `t = n₁ + 1/(n₂ + 1/(… + 1/n_r))`.  The
/// Euclidean algorithm yields the canonical form with `n_r ≥ 2` whenever
/// `r > 1`, so each rational has a unique expansion (a trailing `…, k, 1]`
/// never occurs).
pub fn cf_expand(t: &Rational) -> Result<Vec<u64>> {
    if *t < Rational::one() {
        return Err(Error::Domain(format!(
            "continued fraction expansion needs t >= 1, got {}",
            render_rational(t)
        )));
    }
    let mut p = t.numer().clone();
    let mut q = t.denom().clone();
    let mut out = Vec::new();
    while !q.is_zero() {
        let (n, r) = p.div_rem(&q);
        let n = n
            .to_u64()
            .ok_or_else(|| Error::Limit("continued fraction entry exceeds u64".into()))?;
        out.push(n);
        p = q;
        q = r;
    }
    debug_assert!(out.len() == 1 || *out.last().unwrap() >= 2);
    Ok(out)
}

/// Reassemble a rational from its continued fraction expansion.
pub fn cf_value(cf: &[u64]) -> Result<Rational> {
    if cf.is_empty() {
        return Err(Error::Domain("empty continued fraction".into()));
    }
    let mut acc = Rational::from_integer(BigInt::from(*cf.last().unwrap()));
    for &n in cf[..cf.len() - 1].iter().rev() {
        acc = Rational::from_integer(BigInt::from(n)) + acc.recip();
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Squarefree decomposition
// ---------------------------------------------------------------------------

const TRIAL_BOUND: u128 = 1_000_000;

/// Write `n = r² · f` with `f` squarefree; returns `(r, f)`.
///
/// Trial division up to 10⁶ followed by a perfect-square test.  This is
/// complete for `n < 10¹⁸` (a non-square remainder coprime to every prime
/// below the bound has at most two prime factors there); larger inputs whose
/// squarefree part cannot be certified are rejected.
fn squarefree_decompose(n: &BigUint) -> Result<(BigUint, u64)> {
    if n.is_zero() {
        return Ok((BigUint::zero(), 0));
    }
    let mut m = n
        .to_u128()
        .ok_or_else(|| Error::Limit("squarefree decomposition input exceeds u128".into()))?;
    let mut root: u128 = 1;
    let mut free: u128 = 1;
    let mut p: u128 = 2;
    while p <= TRIAL_BOUND && p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                root *= p;
            }
            if e % 2 == 1 {
                free = free
                    .checked_mul(p)
                    .ok_or_else(|| Error::Limit("squarefree part overflow".into()))?;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let s = BigUint::from(m).sqrt().to_u128().unwrap();
        if s * s == m {
            root *= s;
        } else if m < TRIAL_BOUND * TRIAL_BOUND * TRIAL_BOUND {
            // at most two prime factors, both above the trial bound
            free = free
                .checked_mul(m)
                .ok_or_else(|| Error::Limit("squarefree part overflow".into()))?;
        } else {
            return Err(Error::Limit(format!(
                "cannot certify squarefree part of {n}"
            )));
        }
    }
    let free = u64::try_from(free)
        .map_err(|_| Error::Limit("squarefree part exceeds u64".into()))?;
    Ok((BigUint::from(root), free))
}

// ---------------------------------------------------------------------------
// QuadNum
// ---------------------------------------------------------------------------

/// An element `a + b·√d` of a real quadratic field (or of ℚ when `b = 0`).
///
/// Canonical form: `d` squarefree and ≠ 1, and `b = 0` forces `d = 0`, so
/// structural equality coincides with numerical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadNum {
    /// Build `a + b·√d_raw`, normalizing the radicand to its squarefree part.
    pub fn new(a: Rational, b: Rational, d_raw: u64) -> Result<Self> {
        if b.is_zero() || d_raw == 0 {
            return Ok(Self::from_rational(a));
        }
        let (root, free) = squarefree_decompose(&BigUint::from(d_raw))?;
        let b = b * Rational::from_integer(BigInt::from(root));
        if free <= 1 {
            // √1 = 1 (or √0 = 0): the value collapses to a rational
            let extra = if free == 1 { b } else { Rational::zero() };
            return Ok(Self::from_rational(a + extra));
        }
        Ok(QuadNum { a, b, d: free })
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadNum {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Exact square, which stays in the same field.
    pub fn square(&self) -> QuadNum {
        let d = Rational::from_integer(BigInt::from(self.d));
        let a = &self.a * &self.a + &self.b * &self.b * d;
        let b = ratio(2, 1) * &self.a * &self.b;
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            QuadNum { a, b, d: self.d }
        }
    }

    pub fn add_rational(&self, r: &Rational) -> QuadNum {
        QuadNum {
            a: &self.a + r,
            b: self.b.clone(),
            d: self.d,
        }
    }

    pub fn scale(&self, r: &Rational) -> QuadNum {
        if r.is_zero() {
            return Self::from_rational(Rational::zero());
        }
        QuadNum {
            a: &self.a * r,
            b: &self.b * r,
            d: self.d,
        }
    }

    pub fn neg(&self) -> QuadNum {
        self.scale(&ratio(-1, 1))
    }

    /// Sum within a single quadratic field.
    ///
    /// Both operands must be rational or carry the same radicand; mixing two
    /// distinct radicands is a logic error in the caller.
    pub fn add(&self, other: &QuadNum) -> Result<QuadNum> {
        if !self.b.is_zero() && !other.b.is_zero() && self.d != other.d {
            return Err(Error::Domain(format!(
                "cannot add elements of Q(sqrt {}) and Q(sqrt {})",
                self.d, other.d
            )));
        }
        let d = if self.b.is_zero() { other.d } else { self.d };
        let b = &self.b + &other.b;
        if b.is_zero() {
            Ok(Self::from_rational(&self.a + &other.a))
        } else {
            Ok(QuadNum {
                a: &self.a + &other.a,
                b,
                d,
            })
        }
    }

    pub fn sub(&self, other: &QuadNum) -> Result<QuadNum> {
        self.add(&other.neg())
    }

    /// Exact square root, if the value is a perfect square in some real
    /// quadratic field: rationals go through [`sqrt_rational`], and
    /// `a + b√d` is resolved as `(x + y√d)²` when that has a solution.
    pub fn sqrt(&self) -> Option<QuadNum> {
        if self.is_rational() {
            if self.a.is_negative() {
                return None;
            }
            return sqrt_rational(&self.a).ok();
        }
        if self.sign() == Ordering::Less {
            return None;
        }
        // (x + y√d)² = a + b√d  ⟺  x² + y²d = a, 2xy = b.
        // x² is a root of z² − a·z + b²d/4, so a² − b²d must be a rational square.
        let d = Rational::from_integer(BigInt::from(self.d));
        let disc = &self.a * &self.a - &self.b * &self.b * &d;
        if disc.is_negative() {
            return None;
        }
        let u = sqrt_rational(&disc).ok()?;
        let u = u.as_rational()?.clone();
        for cand in [(&self.a + &u) / ratio(2, 1), (&self.a - &u) / ratio(2, 1)] {
            if cand.is_negative() || cand.is_zero() {
                continue;
            }
            if let Ok(x) = sqrt_rational(&cand) {
                if let Some(x) = x.as_rational() {
                    let y = &self.b / (ratio(2, 1) * x);
                    let root = QuadNum {
                        a: x.clone(),
                        b: y,
                        d: self.d,
                    };
                    if root.square() == *self && root.sign() != Ordering::Less {
                        return Some(root);
                    }
                }
            }
        }
        None
    }

    /// Sign of the value, decided exactly.
    pub fn sign(&self) -> Ordering {
        sign_one_radical(&self.a, &self.b, self.d)
    }

    /// Exact `⌊self · 10^digits⌋`.
    pub fn floor_scaled(&self, digits: u32) -> BigInt {
        let pow = BigInt::from(10u32).pow(digits);
        // value = (A + B√d) / Q with integers A, B, Q > 0
        let q = self.a.denom().lcm(self.b.denom());
        let a_int = self.a.numer() * (&q / self.a.denom()) * &pow;
        let b_int = self.b.numer() * (&q / self.b.denom()) * &pow;
        if b_int.is_zero() {
            return a_int.div_floor(&q);
        }
        let rad = (&b_int * &b_int * BigInt::from(self.d))
            .to_biguint()
            .unwrap()
            .sqrt();
        let rad = BigInt::from(rad);
        // B√d is irrational, so it lies strictly between consecutive integers
        let shift = if b_int.is_positive() {
            rad
        } else {
            -rad - BigInt::one()
        };
        (a_int + shift).div_floor(&q)
    }

    /// Decimal rendering truncated (towards −∞) to `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = self.floor_scaled(digits);
        let neg = scaled.is_negative();
        let mag = scaled.magnitude().to_string();
        let digits = digits as usize;
        let (int_part, frac_part) = if mag.len() > digits {
            let (i, f) = mag.split_at(mag.len() - digits);
            (i.to_string(), f.to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", mag, width = digits))
        };
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Render exactly: `p/q` when rational, `(a)+(b)*sqrt(D)` otherwise.
    pub fn render(&self) -> String {
        if self.is_rational() {
            render_rational(&self.a)
        } else {
            format!(
                "({})+({})*sqrt({})",
                render_rational(&self.a),
                render_rational(&self.b),
                self.d
            )
        }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn sign_rational(x: &Rational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Exact sign of `p + q·√d` for squarefree `d`.
fn sign_one_radical(p: &Rational, q: &Rational, d: u64) -> Ordering {
    if d == 0 || q.is_zero() {
        return sign_rational(p);
    }
    if p.is_zero() {
        return sign_rational(q);
    }
    let sp = sign_rational(p);
    let sq = sign_rational(q);
    if sp == sq {
        return sp;
    }
    // opposite signs: compare p² against q²·d, the larger magnitude wins
    let cmp = (p * p).cmp(&(q * q * Rational::from_integer(BigInt::from(d))));
    match cmp {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact sign of `c + u·√a + v·√b` with distinct squarefree radicands and
/// `u, v ≠ 0`.  One extra squaring reduces to the one-radical case.
fn sign_two_radicals(c: &Rational, u: &Rational, a: u64, v: &Rational, b: u64) -> Ordering {
    let sx = sign_one_radical(c, u, a);
    let sy = sign_rational(v);
    if sx == Ordering::Equal {
        return sy;
    }
    if sx == sy {
        return sx;
    }
    // |c + u√a|² vs |v√b|²:  (c² + u²a − v²b) + 2cu·√a
    let p = c * c + u * u * Rational::from_integer(BigInt::from(a))
        - v * v * Rational::from_integer(BigInt::from(b));
    let q = ratio(2, 1) * c * u;
    match sign_one_radical(&p, &q, a) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        let c = &self.a - &other.a;
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => sign_rational(&c),
            (false, true) => sign_one_radical(&c, &self.b, self.d),
            (true, false) => sign_one_radical(&c, &(-other.b.clone()), other.d),
            (false, false) => {
                if self.d == other.d {
                    sign_one_radical(&c, &(&self.b - &other.b), self.d)
                } else {
                    sign_two_radicals(&c, &self.b, self.d, &(-other.b.clone()), other.d)
                }
            }
        }
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-way comparison of two quadratic numbers (possibly from distinct
/// fields), decided exactly.
pub fn quad_cmp(x: &QuadNum, y: &QuadNum) -> Ordering {
    x.cmp(y)
}

/// Exact square root of a nonnegative rational, as `c·√D` with `D` squarefree
/// (so the result is rational exactly when the input is a perfect square).
pub fn sqrt_rational(q: &Rational) -> Result<QuadNum> {
    if q.is_negative() {
        return Err(Error::Domain(format!(
            "square root of negative rational {}",
            render_rational(q)
        )));
    }
    if q.is_zero() {
        return Ok(QuadNum::from_rational(Rational::zero()));
    }
    // √(p/q) = √(pq)/q
    let n = (q.numer() * q.denom()).to_biguint().unwrap();
    let (root, free) = squarefree_decompose(&n)?;
    let coeff = Rational::new(BigInt::from(root), q.denom().clone());
    if free == 1 {
        Ok(QuadNum::from_rational(coeff))
    } else {
        Ok(QuadNum {
            a: Rational::zero(),
            b: coeff,
            d: free,
        })
    }
}

/// `⌊√n⌋` for a nonnegative big integer.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    let m = n
        .to_biguint()
        .ok_or_else(|| Error::Domain("isqrt of negative integer".into()))?;
    Ok(BigInt::from(m.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_expand(&q(31, 9)).unwrap(), vec![3, 2, 4]);
        assert_eq!(cf_expand(&q(7, 1)).unwrap(), vec![7]);
        assert_eq!(cf_expand(&q(15, 2)).unwrap(), vec![7, 2]);
        assert_eq!(cf_expand(&q(1, 1)).unwrap(), vec![1]);
    }

    #[test]
    fn cf_domain_error() {
        assert!(cf_expand(&q(1, 2)).is_err());
        assert!(cf_expand(&q(-3, 1)).is_err());
    }

    #[test]
    fn cf_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..500 {
            let denom = rng.gen_range(1i64..=999);
            let numer = rng.gen_range(denom + 1..=100 * denom);
            let t = q(numer, denom);
            if t <= q(1, 1) {
                continue;
            }
            let cf = cf_expand(&t).unwrap();
            assert_eq!(cf_value(&cf).unwrap(), t, "t = {numer}/{denom}");
            if cf.len() > 1 {
                assert!(*cf.last().unwrap() >= 2, "canonical form for {t}");
            }
        }
    }

    #[test]
    fn sqrt_rational_examples() {
        let r = sqrt_rational(&q(49, 4)).unwrap();
        assert_eq!(r.as_rational(), Some(&q(7, 2)));

        let r = sqrt_rational(&q(7, 1)).unwrap();
        assert!(r.rational_part().is_zero());
        assert_eq!(r.radical_coeff(), &q(1, 1));
        assert_eq!(r.radicand(), 7);

        let r = sqrt_rational(&q(63, 4)).unwrap();
        assert_eq!(r.radical_coeff(), &q(3, 2));
        assert_eq!(r.radicand(), 7);

        assert!(sqrt_rational(&q(-1, 3)).is_err());
    }

    #[test]
    fn sqrt_rational_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        for _ in 0..200 {
            let x = q(rng.gen_range(0i64..=100_000), rng.gen_range(1i64..=10_000));
            let r = sqrt_rational(&x).unwrap();
            let sq = r.square();
            assert_eq!(sq.as_rational(), Some(&x), "sqrt({x})² = {x}");
        }
    }

    #[test]
    fn quad_cmp_examples() {
        // (4+√2)/2 vs 11/4
        let x = QuadNum::new(q(2, 1), q(1, 2), 2).unwrap();
        let y = QuadNum::from_rational(q(11, 4));
        assert_eq!(quad_cmp(&x, &y), Ordering::Less);

        let s7 = sqrt_rational(&q(7, 1)).unwrap();
        assert_eq!(quad_cmp(&s7, &s7.clone()), Ordering::Equal);

        // (32−√177)/7 vs (16+√179)/11: agree to four decimals, decided exactly
        let x = QuadNum::new(q(32, 7), q(-1, 7), 177).unwrap();
        let y = QuadNum::new(q(16, 11), q(1, 11), 179).unwrap();
        assert_eq!(quad_cmp(&x, &y), Ordering::Greater);
    }

    fn random_quad(rng: &mut ChaCha8Rng) -> QuadNum {
        let ds = [0, 2, 3, 5, 7, 177, 179, 455, 457];
        let d = ds[rng.gen_range(0..ds.len())];
        QuadNum::new(
            q(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=9)),
            q(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=9)),
            d,
        )
        .unwrap()
    }

    /// Oracle: compare through exact decimal truncations, refining until the
    /// truncations separate or structural equality certifies a tie.
    fn cmp_via_decimals(x: &QuadNum, y: &QuadNum) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        for digits in [100u32, 200, 400, 800] {
            let fx = x.floor_scaled(digits);
            let fy = y.floor_scaled(digits);
            if fx != fy {
                return fx.cmp(&fy);
            }
        }
        panic!("oracle failed to separate {x} and {y}");
    }

    #[test]
    fn quad_cmp_agrees_with_decimal_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabcd);
        for _ in 0..1000 {
            let x = random_quad(&mut rng);
            let y = random_quad(&mut rng);
            assert_eq!(quad_cmp(&x, &y), cmp_via_decimals(&x, &y), "{x} vs {y}");
        }
    }

    #[test]
    fn quad_cmp_total_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0db8);
        for _ in 0..400 {
            let a = random_quad(&mut rng);
            let b = random_quad(&mut rng);
            let c = random_quad(&mut rng);
            // antisymmetry
            assert_eq!(quad_cmp(&a, &b), quad_cmp(&b, &a).reverse());
            // transitivity on the sorted triple
            let mut v = vec![a.clone(), b.clone(), c.clone()];
            v.sort();
            assert!(quad_cmp(&v[0], &v[1]) != Ordering::Greater);
            assert!(quad_cmp(&v[1], &v[2]) != Ordering::Greater);
            assert!(quad_cmp(&v[0], &v[2]) != Ordering::Greater);
        }
    }

    #[test]
    fn quad_sqrt_in_field() {
        // ((24+√457)/17)² has square root (24+√457)/17
        let root = QuadNum::new(q(24, 17), q(1, 17), 457).unwrap();
        let sq = root.square();
        let back = sq.sqrt().unwrap();
        assert_eq!(back, root);

        // golden ratio: φ⁴ = (7+3√5)/2, √(φ⁴) = φ² = (3+√5)/2
        let phi4 = QuadNum::new(q(7, 2), q(3, 2), 5).unwrap();
        let phi2 = QuadNum::new(q(3, 2), q(1, 2), 5).unwrap();
        assert_eq!(phi4.sqrt().unwrap(), phi2);
    }

    #[test]
    fn rendering() {
        assert_eq!(render_rational(&q(5, 1)), "5");
        assert_eq!(render_rational(&q(31, 9)), "31/9");
        let x = QuadNum::new(q(1033, 289), q(48, 289), 457).unwrap();
        assert_eq!(x.render(), "(1033/289)+(48/289)*sqrt(457)");
        assert_eq!(QuadNum::from_rational(q(8, 3)).render(), "8/3");
    }

    #[test]
    fn decimal_rendering() {
        let s5 = sqrt_rational(&q(5, 1)).unwrap();
        assert_eq!(s5.to_decimal(10), "2.2360679774");
        assert_eq!(QuadNum::from_rational(q(5, 2)).to_decimal(3), "2.500");
        assert_eq!(QuadNum::from_rational(q(3, 1)).to_decimal(0), "3");
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("31/9").unwrap(), q(31, 9));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("7/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
