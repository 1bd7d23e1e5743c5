//! Quasipolynomials `sum f(z) e^(b z)` and univariate polynomials in `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Poly, Rational, SymbolTable};

/// Dense univariate polynomial over the rationals, lowest degree first, with
/// no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Univariate {
    coeffs: Vec<Rational>,
}

impl Univariate {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Univariate { coeffs }
    }

    pub fn one() -> Self {
        Univariate::new(vec![Rational::one()])
    }

    /// `t - b`.
    pub fn linear(b: &Rational) -> Self {
        Univariate::new(vec![-b, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &Univariate) -> Univariate {
        if self.is_zero() || other.is_zero() {
            return Univariate::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Univariate::new(out)
    }

    pub fn pow(&self, e: usize) -> Univariate {
        (0..e).fold(Univariate::one(), |acc, _| acc.mul(self))
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &Univariate) -> Univariate {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let lead = d.coeffs.last().expect("nonzero").clone();
        while r.len() >= d.coeffs.len() && !r.is_empty() {
            let f = r.last().expect("nonempty") / &lead;
            let shift = r.len() - d.coeffs.len();
            for (k, c) in d.coeffs.iter().enumerate() {
                r[shift + k] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Univariate::new(r)
    }

    pub fn divides(&self, other: &Univariate) -> bool {
        other.rem(self).is_zero()
    }

    /// As a [`Poly`] in the symbol `t`.
    pub fn to_poly(&self) -> Poly {
        let table = SymbolTable::new(&["t"]).expect("valid symbol");
        let t = Poly::var(&table, "t").expect("declared");
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (k, c)| acc + t.pow(k as u32).scale(c))
    }
}

impl fmt::Display for Univariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Falling factorial `k (k-1) ... (k-m+1)`.
fn falling(k: usize, m: usize) -> Rational {
    (0..m).fold(Rational::one(), |acc, r| {
        acc * Rational::from_integer(((k as i64) - (r as i64)).into())
    })
}

/// Finite sum of terms `f(z) e^(b z)` with distinct bases and nonzero `f`,
/// sorted by base.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuasiPolynomial {
    terms: BTreeMap<Rational, Univariate>,
}

impl QuasiPolynomial {
    /// Terms with equal bases are merged; terms that cancel are dropped.
    pub fn new(terms: Vec<(Vec<Rational>, Rational)>) -> Self {
        let mut merged: BTreeMap<Rational, Vec<Rational>> = BTreeMap::new();
        for (f, b) in terms {
            let slot = merged.entry(b).or_default();
            if slot.len() < f.len() {
                slot.resize(f.len(), Rational::zero());
            }
            for (k, c) in f.into_iter().enumerate() {
                slot[k] += c;
            }
        }
        QuasiPolynomial {
            terms: merged
                .into_iter()
                .map(|(b, f)| (b, Univariate::new(f)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
        }
    }

    pub fn zero() -> Self {
        QuasiPolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(f, b)` pairs in increasing order of `b`.
    pub fn terms(&self) -> impl Iterator<Item = (&Univariate, &Rational)> {
        self.terms.iter().map(|(b, f)| (f, b))
    }

    /// `k! [z^k]` of the series: `sum_m a_m (k)_m b^(k-m)` per term.
    pub fn normalized_coefficient(&self, k: usize) -> Rational {
        let mut total = Rational::zero();
        for (b, f) in &self.terms {
            for (m, a) in f.coeffs().iter().enumerate() {
                if m > k || a.is_zero() {
                    continue;
                }
                let power = if b.is_zero() {
                    if k == m {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                } else {
                    b.pow((k - m) as i32)
                };
                total += a * falling(k, m) * power;
            }
        }
        total
    }

    pub fn normalized_coefficients(&self, horizon: usize) -> Vec<Rational> {
        (0..=horizon).map(|k| self.normalized_coefficient(k)).collect()
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (b, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let z = p.to_poly().to_string().replace('t', "z");
            write!(f, "({z})*e^({b}*z)")?;
        }
        Ok(())
    }
}

/// `prod (t - b)^(deg f + 1)` over the terms: the minimal monic
/// constant-coefficient operator annihilating the quasipolynomial.
pub fn qp_annihilator(qp: &QuasiPolynomial) -> Result<Univariate> {
    if qp.is_zero() {
        return Err(Error::ZeroQuasipolynomial);
    }
    Ok(qp
        .terms()
        .fold(Univariate::one(), |acc, (f, b)| acc.mul(&Univariate::linear(b).pow(f.degree() + 1))))
}
