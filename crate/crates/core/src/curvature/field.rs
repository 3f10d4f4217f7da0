//! Exact scalars for pointwise curvature: rationals, and dual numbers
//! `a + b t` with `t² = 0` for first-order linearization.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactmath::ExactScalar;

pub trait Field: Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn from_rational(q: ExactScalar) -> Self;
    fn zero() -> Self {
        Self::from_rational(<ExactScalar as num_traits::Zero>::zero())
    }
    fn one() -> Self {
        Self::from_rational(<ExactScalar as num_traits::One>::one())
    }
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    /// The `t⁰` part; the value itself for rationals.
    fn real(&self) -> ExactScalar;
}

impl Field for ExactScalar {
    fn from_rational(q: ExactScalar) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        (!num_traits::Zero::is_zero(self)).then(|| self.recip())
    }
    fn real(&self) -> ExactScalar {
        self.clone()
    }
}

/// `re + eps t` with `t² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dual {
    pub re: ExactScalar,
    pub eps: ExactScalar,
}

impl Dual {
    pub fn new(re: ExactScalar, eps: ExactScalar) -> Self {
        Dual { re, eps }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        let eps = &self.re * &o.eps + &self.eps * &o.re;
        Dual::new(self.re * o.re, eps)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Field for Dual {
    fn from_rational(q: ExactScalar) -> Self {
        Dual::new(q, <ExactScalar as num_traits::Zero>::zero())
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(&self.re) && num_traits::Zero::is_zero(&self.eps)
    }
    fn inverse(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(&self.re) {
            return None;
        }
        let inv = self.re.recip();
        let eps = -(&self.eps * &inv * &inv);
        Some(Dual::new(inv, eps))
    }
    fn real(&self) -> ExactScalar {
        self.re.clone()
    }
}
