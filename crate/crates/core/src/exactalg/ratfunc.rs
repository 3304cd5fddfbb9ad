use std::fmt;
use std::ops::Neg;

use num_traits::{One, Zero};

use super::{degree_cap, poly_gcd, Poly, Rat};
use crate::error::{Error, Result};

/// Ratio of two polynomials in canonical form: coprime parts and a monic
/// denominator, with zero stored as `0/1`. Because the form is canonical,
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFunction {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateInput(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.recip();
            (num.scale(&inv), den.scale(&inv))
        };
        Self::checked(num, den)
    }

    // Parts must already be coprime with a monic denominator.
    fn checked(num: Poly, den: Poly) -> Result<Self> {
        let cap = degree_cap();
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        debug_assert!(den.is_monic());
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Result<Self> {
        Self::checked(p, Poly::one())
    }

    /// Convenience constructor from integer coefficient lists, lowest degree
    /// first.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(Poly::from_ints(num), Poly::from_ints(den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant value, if the function does not depend on `z`.
    pub fn as_constant(&self) -> Option<Rat> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rat::zero()),
            (Some(0), Some(0)) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self::new(num, &self.den * &rhs.den)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-rhs)
    }

    /// Product with cross-cancellation, so the result needs no final gcd.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let g1 = poly_gcd(&self.num, &rhs.den)?;
        let g2 = poly_gcd(&rhs.num, &self.den)?;
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        Self::checked(num, den)
    }

    pub fn recip(&self) -> Result<Self> {
        let Some(lc) = self.num.leading() else {
            return Err(Error::DegenerateInput(
                "reciprocal of the zero rational function".into(),
            ));
        };
        let inv = lc.recip();
        Self::checked(self.den.scale(&inv), self.num.scale(&inv))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DegenerateInput(
                "division by the zero rational function".into(),
            ));
        }
        self.checked_mul(&rhs.recip()?)
    }

    /// Multiplies by a scalar; the degree cannot grow.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Result<Self> {
        Self::one().checked_sub(self)
    }

    pub fn eval(&self, z0: &Rat) -> Result<Rat> {
        let d = self.den.eval(z0);
        if d.is_zero() {
            return Err(Error::Pole { at: z0.clone() });
        }
        Ok(self.num.eval(z0) / d)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

pub fn rf_normalize(num: Poly, den: Poly) -> Result<RationalFunction> {
    RationalFunction::new(num, den)
}

pub fn rf_arith(
    a: &RationalFunction,
    b: &RationalFunction,
    op: ArithOp,
) -> Result<RationalFunction> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

pub fn rf_eval(f: &RationalFunction, z0: &Rat) -> Result<Rat> {
    f.eval(z0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat, DEFAULT_DEGREE_CAP};

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::from_ints(num, den).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let r = rf(&[2, 2], &[0, 2, 2]);
        assert_eq!(r.num(), &Poly::one());
        assert_eq!(r.den(), &Poly::z());
        // cross-multiplication: (2z+2)·z == 1·(2z²+2z)
        assert_eq!(
            &Poly::from_ints(&[2, 2]) * r.den(),
            r.num() * &Poly::from_ints(&[0, 2, 2])
        );
        assert_eq!(rf(&[0], &[5, 1]), RationalFunction::zero());
        assert_eq!(rf(&[0], &[5, 1]).den(), &Poly::one());
        let z = rf(&[0, 1], &[1]);
        assert_eq!(z.num(), &Poly::z());
        assert_eq!(z.den(), &Poly::one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(
            RationalFunction::new(Poly::one(), Poly::zero()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn denominator_made_monic() {
        let r = rf(&[3], &[4, 2]);
        assert_eq!(r.den(), &Poly::from_ints(&[2, 1]));
        assert_eq!(r.num(), &Poly::constant(rat(3, 2)));
    }

    #[test]
    fn arithmetic_examples() {
        let inv_z = rf(&[1], &[0, 1]);
        let sum = rf_arith(&inv_z, &RationalFunction::one(), ArithOp::Add).unwrap();
        assert_eq!(sum, rf(&[1, 1], &[0, 1]));

        let a = rf(&[0, 1], &[1, 1]);
        let b = rf(&[1, 1], &[0, 1]);
        assert!(rf_arith(&a, &b, ArithOp::Mul).unwrap().is_one());

        let c = rf(&[1], &[2, 1]);
        assert!(rf_arith(&c, &c, ArithOp::Div).unwrap().is_one());
        assert!(rf_arith(&c, &c, ArithOp::Sub).unwrap().is_zero());
        assert!(matches!(
            rf_arith(&c, &RationalFunction::zero(), ArithOp::Div),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(rf_eval(&rf(&[1], &[0, 1]), &int(2)).unwrap(), rat(1, 2));
        assert_eq!(
            rf_eval(&rf(&[1, 1], &[-1, 1]), &int(1)),
            Err(Error::Pole { at: int(1) })
        );
        let raw = rf(&[2, 2], &[0, 2, 2]);
        assert_eq!(rf_eval(&raw, &int(3)).unwrap(), rat(1, 3));
    }

    #[test]
    fn degree_cap_is_a_hard_error() {
        let mut coeffs = vec![0; 41];
        coeffs[40] = 1;
        let z40 = RationalFunction::from_poly(Poly::from_ints(&coeffs)).unwrap();
        assert_eq!(
            z40.checked_mul(&z40),
            Err(Error::DegreeCap {
                degree: 80,
                cap: DEFAULT_DEGREE_CAP
            })
        );
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[1], &[-1, 1]).to_string(), "(1)/(z - 1)");
        assert_eq!(rf(&[0, 2], &[1]).to_string(), "2z");
    }
}
