use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rat;

/// Value plus exact gradient with respect to a fixed set of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRat {
    value: Rat,
    derivs: Vec<Rat>,
}

impl DualRat {
    /// A constant in an ambient space of `vars` variables.
    pub fn constant(value: Rat, vars: usize) -> Self {
        DualRat {
            value,
            derivs: vec![Rat::zero(); vars],
        }
    }

    /// The `index`-th variable, seeded with a unit derivative.
    pub fn variable(value: Rat, index: usize, vars: usize) -> Self {
        let mut d = Self::constant(value, vars);
        d.derivs[index] = Rat::one();
        d
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }

    pub fn derivs(&self) -> &[Rat] {
        &self.derivs
    }

    pub fn vars(&self) -> usize {
        self.derivs.len()
    }

    /// `None` when the value is zero.
    pub fn recip(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let inv = self.value.recip();
        let factor = -(&inv * &inv);
        Some(DualRat {
            derivs: self.derivs.iter().map(|d| d * &factor).collect(),
            value: inv,
        })
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&Rat, &Rat) -> Rat) -> Vec<Rat> {
        assert_eq!(
            self.vars(),
            rhs.vars(),
            "dual numbers over different variable sets"
        );
        self.derivs
            .iter()
            .zip(&rhs.derivs)
            .map(|(a, b)| f(a, b))
            .collect()
    }
}

/// Seeds one dual variable per edge gain.
pub fn dual_lift(edges: &[Rat]) -> Vec<DualRat> {
    edges
        .iter()
        .enumerate()
        .map(|(i, g)| DualRat::variable(g.clone(), i, edges.len()))
        .collect()
}

impl Add for &DualRat {
    type Output = DualRat;

    fn add(self, rhs: &DualRat) -> DualRat {
        DualRat {
            value: &self.value + &rhs.value,
            derivs: self.zip(rhs, |a, b| a + b),
        }
    }
}

impl Sub for &DualRat {
    type Output = DualRat;

    fn sub(self, rhs: &DualRat) -> DualRat {
        DualRat {
            value: &self.value - &rhs.value,
            derivs: self.zip(rhs, |a, b| a - b),
        }
    }
}

impl Mul for &DualRat {
    type Output = DualRat;

    // product rule
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &DualRat) -> DualRat {
        DualRat {
            value: &self.value * &rhs.value,
            derivs: self.zip(rhs, |a, b| a * &rhs.value + &self.value * b),
        }
    }
}

impl Neg for &DualRat {
    type Output = DualRat;

    fn neg(self) -> DualRat {
        DualRat {
            value: -&self.value,
            derivs: self.derivs.iter().map(|d| -d).collect(),
        }
    }
}
