use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Dense univariate polynomial in `z` with rational coefficients, lowest
/// degree first. Trailing zero coefficients are never stored, so the zero
/// polynomial has an empty coefficient list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| super::int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Poly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, z: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * z + c)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::DegenerateInput("polynomial division by zero".into()));
        };
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Integer coefficients and the positive lcm `d` of the denominators,
    /// with `self = ints / d`.
    fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let d = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| {
                if c.denom() == &d {
                    c.numer().clone()
                } else {
                    c.numer() * (&d / c.denom())
                }
            })
            .collect();
        (ints, d)
    }

    /// Quotient of a division known to be exact.
    pub(crate) fn exact_div(&self, divisor: &Poly) -> Poly {
        if divisor.is_one() {
            return self.clone();
        }
        let (q, r) = self
            .div_rem(divisor)
            .expect("exact_div called with zero divisor");
        debug_assert!(r.is_zero(), "exact_div left a remainder");
        q
    }
}

/// Monic gcd by the Euclidean algorithm over the rationals. Remainders are
/// made monic at each step to keep coefficient growth in check.
///
/// Coprime inputs, the common case, are detected first by a gcd modulo a
/// large prime: the image of the true gcd divides the modular gcd, and keeps
/// its degree as long as the prime does not divide a leading coefficient.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateInput("gcd of two zero polynomials".into()));
    }
    if a.degree() == Some(0) || b.degree() == Some(0) || modp::certainly_coprime(a, b) {
        return Ok(Poly::one());
    }
    let mut x = a.monic();
    let mut y = b.monic();
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y)?;
        x = y;
        y = r.monic();
    }
    Ok(x)
}

mod modp {
    use num_bigint::{BigInt, Sign};

    use super::Poly;

    const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        let x = a as u128 * b as u128;
        let r = (x as u64 & P) + (x >> 61) as u64;
        let r = (r & P) + (r >> 61);
        if r >= P {
            r - P
        } else {
            r
        }
    }

    fn pow(mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn reduce_int(x: &BigInt) -> u64 {
        let (sign, digits) = x.to_u64_digits();
        // 2^64 = 8 (mod P)
        let r = digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| (mul(acc, 8) + d % P) % P);
        if sign == Sign::Minus && r != 0 {
            P - r
        } else {
            r
        }
    }

    /// Image mod P, or `None` if a denominator or the leading coefficient
    /// vanishes there. Denominators are inverted together with one modular
    /// inversion.
    fn image(p: &Poly) -> Option<Vec<u64>> {
        let dens: Vec<u64> = p.coeffs.iter().map(|c| reduce_int(c.denom())).collect();
        let mut prefix = Vec::with_capacity(dens.len());
        let mut acc = 1;
        for &d in &dens {
            if d == 0 {
                return None;
            }
            prefix.push(acc);
            acc = mul(acc, d);
        }
        let mut inv_acc = inv(acc);
        let mut img = vec![0; dens.len()];
        for k in (0..dens.len()).rev() {
            let d_inv = mul(inv_acc, prefix[k]);
            inv_acc = mul(inv_acc, dens[k]);
            img[k] = mul(reduce_int(p.coeffs[k].numer()), d_inv);
        }
        (*img.last()? != 0).then_some(img)
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
        let db = b.len() - 1;
        let lead_inv = inv(b[db]);
        while a.len() > db {
            let top = a.len() - 1;
            let c = mul(a[top], lead_inv);
            if c != 0 {
                let shift = top - db;
                for (j, &bj) in b.iter().enumerate() {
                    let t = mul(c, bj);
                    a[shift + j] = if a[shift + j] >= t {
                        a[shift + j] - t
                    } else {
                        a[shift + j] + P - t
                    };
                }
            }
            a.pop();
            trim(&mut a);
        }
        a
    }

    pub(super) fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
        let (Some(mut x), Some(mut y)) = (image(a), image(b)) else {
            return false;
        };
        while !y.is_empty() {
            let r = rem(x, &y);
            x = y;
            y = r;
        }
        x.len() == 1
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    /// Multiplies integer images over a common denominator, so only the
    /// output coefficients are reduced.
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (a, da) = self.integer_form();
        let (b, db) = rhs.integer_form();
        let mut coeffs = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        let den = da * db;
        Poly::new(
            coeffs
                .into_iter()
                .map(|c| Rat::new(c, den.clone()))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}
