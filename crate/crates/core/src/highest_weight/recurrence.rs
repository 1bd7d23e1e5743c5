//! Minimal linear recurrences of rational sequences (Berlekamp-Massey).

use num_traits::{One, Zero};

use super::qp::Univariate;
use crate::scalar::Rational;

/// Monic `h` with `sum_j h_j c_{k+j} = 0` for `0 <= k <= verified_horizon - deg h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceCertificate {
    pub annihilator: Univariate,
    pub verified_horizon: usize,
}

impl RecurrenceCertificate {
    /// Re-checks the recurrence on `c[0..=verified_horizon]`.
    pub fn verify(&self, c: &[Rational]) -> bool {
        let h = self.annihilator.coeffs();
        let d = self.annihilator.degree();
        if !self.annihilator.is_monic() || c.len() <= self.verified_horizon || d > self.verified_horizon {
            return false;
        }
        (0..=self.verified_horizon - d).all(|k| {
            h.iter()
                .enumerate()
                .map(|(j, hj)| hj * &c[k + j])
                .sum::<Rational>()
                .is_zero()
        })
    }
}

/// Shortest recurrence `s_n + sum_{i=1..L} C_i s_{n-i} = 0` (`n >= L`) as the
/// connection polynomial `C` and length `L`.
pub fn berlekamp_massey(s: &[Rational]) -> (Vec<Rational>, usize) {
    let mut c = vec![Rational::one()];
    let mut b = vec![Rational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let f = &d / &bd;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &f * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = std::mem::replace(&mut c, next);
            bd = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
    }
    c.resize(l + 1, Rational::zero());
    (c, l)
}

/// Minimal monic annihilator of `c_0..c_K`, accepted only when its degree
/// `L` satisfies `2L <= K` (so it is unique and overdetermined) and
/// `L <= max_degree`. The zero sequence yields `h = t`.
pub fn detect_bounded(c: &[Rational], max_degree: Option<usize>) -> Option<RecurrenceCertificate> {
    if c.is_empty() {
        return None;
    }
    let horizon = c.len() - 1;
    if c.iter().all(Zero::is_zero) {
        return Some(RecurrenceCertificate {
            annihilator: Univariate::new(vec![Rational::zero(), Rational::one()]),
            verified_horizon: horizon,
        });
    }
    let (conn, l) = berlekamp_massey(c);
    if 2 * l > horizon || max_degree.is_some_and(|d| l > d) {
        return None;
    }
    // h(t) = t^L C(1/t)
    let annihilator = Univariate::new(conn.into_iter().rev().collect());
    let cert = RecurrenceCertificate {
        annihilator,
        verified_horizon: horizon,
    };
    debug_assert!(cert.verify(c));
    Some(cert)
}
