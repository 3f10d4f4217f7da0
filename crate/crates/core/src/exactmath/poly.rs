//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::scalar::{factorial, ExactScalar};

/// Exponent multi-index, one entry per variable.
pub type Monomial = Vec<u32>;

/// A polynomial in `nvars` variables. Terms with zero coefficient are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ExactScalar::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, ExactScalar::one())
    }

    pub fn monomial(exponents: Monomial, c: ExactScalar) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// Affine function `c0 + Σ c_i x_i`.
    pub fn affine(c0: ExactScalar, coeffs: &[ExactScalar]) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c0);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> ExactScalar {
        self.terms.get(exponents).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Monomial, c: ExactScalar) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn diff(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * ExactScalar::from_integer(BigInt::from(e[i])));
        }
        out
    }

    /// Mixed partial derivative along the listed variable indices.
    pub fn diff_multi(&self, indices: &[usize]) -> Self {
        indices.iter().fold(self.clone(), |p, &i| p.diff(i))
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.nvars, "point dimension does not match variable count");
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i -> subs[i]`; every substitute must share one variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let m = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(s.nvars), s.clone()]).collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out += &t;
        }
        out
    }

    /// Restriction to the segment `a + t (b - a)`, `t ∈ [0, 1]`, as a univariate polynomial in `t`.
    pub fn restrict_to_segment(&self, a: &[ExactScalar], b: &[ExactScalar]) -> MultiPoly {
        let subs: Vec<MultiPoly> = a.iter().zip(b).map(|(ai, bi)| MultiPoly::affine(ai.clone(), &[bi - ai])).collect();
        self.compose(&subs)
    }

    /// `∫_0^1 p(t) dt` for a univariate polynomial.
    pub fn integrate_unit_interval(&self) -> ExactScalar {
        assert_eq!(self.nvars, 1);
        self.terms.iter().map(|(e, c)| c / ExactScalar::from_integer(BigInt::from(e[0] + 1))).fold(ExactScalar::zero(), |a, b| a + b)
    }

    /// Integral over the reference triangle `{s, t ≥ 0, s + t ≤ 1}` of a bivariate polynomial.
    pub fn integrate_reference_triangle(&self) -> ExactScalar {
        assert_eq!(self.nvars, 2);
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let num = factorial(e[0]) * factorial(e[1]);
            let den = factorial(e[0] + e[1] + 2);
            acc += c * ExactScalar::new(num, den);
        }
        acc
    }

    /// Exact integral over the triangle with the given vertices.
    pub fn integrate_triangle(&self, v: [&[ExactScalar]; 3]) -> ExactScalar {
        assert_eq!(self.nvars, 2);
        let e1 = [&v[1][0] - &v[0][0], &v[1][1] - &v[0][1]];
        let e2 = [&v[2][0] - &v[0][0], &v[2][1] - &v[0][1]];
        let jac = (&e1[0] * &e2[1] - &e1[1] * &e2[0]).abs();
        let x = MultiPoly::affine(v[0][0].clone(), &[e1[0].clone(), e2[0].clone()]);
        let y = MultiPoly::affine(v[0][1].clone(), &[e1[1].clone(), e2[1].clone()]);
        self.compose(&[x, y]).integrate_reference_triangle() * jac
    }

    /// All partial derivatives up to `order` evaluated at `point`. Entry `k` of
    /// the result lists the order-`k` derivatives over nondecreasing index
    /// tuples `i_1 ≤ … ≤ i_k`, in lexicographic order.
    pub fn jet(&self, point: &[ExactScalar], order: usize) -> Vec<Vec<ExactScalar>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut level: Vec<(Vec<usize>, MultiPoly)> = vec![(vec![], self.clone())];
        for _ in 0..=order {
            out.push(level.iter().map(|(_, p)| p.eval(point)).collect());
            let mut next = Vec::new();
            for (idx, p) in &level {
                let start = idx.last().copied().unwrap_or(0);
                for i in start..self.nvars {
                    let mut idx2 = idx.clone();
                    idx2.push(i);
                    next.push((idx2, p.diff(i)));
                }
            }
            level = next;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> ExactScalar {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(ExactScalar::zero)
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first for readability
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { var_name(self.nvars, i) } else { format!("{}^{}", var_name(self.nvars, i), p) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", a, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// All exponent vectors in `nvars` variables with total degree `≤ degree`,
/// ordered by total degree then lexicographically descending in `x_1`.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(nvars, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        if nvars == 0 {
            if d == 0 {
                out.push(vec![]);
            }
            continue;
        }
        rec(nvars, d, &mut Vec::new(), &mut out);
    }
    out
}
