//! Quasifinite highest weight modules of `B(p,q)`.
//!
//! A weight `Lambda` is determined by its labels `Lambda_k = Lambda(L[0,k])`
//! and the central label. Its generating series has normalized coefficients
//! `c_k = (2q + (1-p^2) k) Lambda_k`; the module is quasifinite iff the series
//! is a quasipolynomial, i.e. `c` satisfies a linear recurrence with constant
//! coefficients. The second criterion looks for singular vectors
//! `a = sum c_i L[-1,i]`: `a v` is singular iff `Lambda` kills every
//! `[a, L[1,j]] = sum_i c_i (2q+i+j+p(i-j)) L[0,i+j]`.

mod qp;
mod recurrence;

pub use qp::{qp_annihilator, QuasiPolynomial, Univariate};
pub use recurrence::{berlekamp_massey, detect_bounded, RecurrenceCertificate};

use num_traits::Zero;

use crate::block::BlockParams;
use crate::error::{Error, Result};
use crate::lie::{BasisIndex, Element};
use crate::linalg;
use crate::scalar::{rat, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSource {
    /// `Lambda_0..Lambda_K`.
    Explicit(Vec<Rational>),
    /// Labels whose generating series for the algebra with parameters
    /// `(p, q)` is `qp`.
    Generated {
        qp: QuasiPolynomial,
        p: Rational,
        q: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub source: WeightSource,
    pub central_label: Rational,
}

/// `2q + (1-p^2) k`.
fn delta_factor(p: &Rational, q: &Rational, k: usize) -> Rational {
    rat(2) * q + (rat(1) - p * p) * rat(k as i64)
}

impl Weight {
    pub fn explicit(labels: Vec<Rational>) -> Self {
        Weight {
            source: WeightSource::Explicit(labels),
            central_label: Rational::zero(),
        }
    }

    pub fn with_central_label(mut self, c: Rational) -> Self {
        self.central_label = c;
        self
    }

    /// Largest horizon available, `None` for generator mode.
    pub fn horizon(&self) -> Option<usize> {
        match &self.source {
            WeightSource::Explicit(l) => l.len().checked_sub(1),
            WeightSource::Generated { .. } => None,
        }
    }

    /// `Lambda_0..Lambda_K`. Generated labels at singular indices are 0.
    pub fn labels(&self, horizon: usize) -> Result<Vec<Rational>> {
        match &self.source {
            WeightSource::Explicit(l) => {
                if l.len() <= horizon {
                    return Err(Error::HorizonShortfall {
                        required: horizon,
                        given: l.len().saturating_sub(1),
                    });
                }
                Ok(l[..=horizon].to_vec())
            }
            WeightSource::Generated { qp, p, q } => Ok(synthesize(qp, p, q, horizon)?.0),
        }
    }
}

fn synthesize(qp: &QuasiPolynomial, p: &Rational, q: &Rational, horizon: usize) -> Result<(Vec<Rational>, Vec<usize>)> {
    let mut labels = Vec::with_capacity(horizon + 1);
    let mut singular = Vec::new();
    for k in 0..=horizon {
        let c = qp.normalized_coefficient(k);
        let f = delta_factor(p, q, k);
        if f.is_zero() {
            if !c.is_zero() {
                return Err(Error::Unrealizable {
                    k,
                    value: c.to_string(),
                });
            }
            singular.push(k);
            labels.push(Rational::zero());
        } else {
            labels.push(c / f);
        }
    }
    Ok((labels, singular))
}

fn concrete(params: &BlockParams) -> Result<(Rational, Rational)> {
    Ok((params.p_value()?, params.q_value()?))
}

/// Normalized coefficients `c_k = k! [z^k] Delta`, `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSeries {
    pub coeffs: Vec<Rational>,
}

impl DeltaSeries {
    pub fn horizon(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `c_k = (2q + (1-p^2) k) Lambda_k` for `k = 0..=K`.
pub fn delta_from_labels(weight: &Weight, params: &BlockParams, horizon: usize) -> Result<DeltaSeries> {
    let (p, q) = concrete(params)?;
    let labels = weight.labels(horizon)?;
    Ok(DeltaSeries {
        coeffs: labels
            .iter()
            .enumerate()
            .map(|(k, l)| delta_factor(&p, &q, k) * l)
            .collect(),
    })
}

/// Weight whose generating series is `qp`, and the singular indices
/// `k` with `2q + (1-p^2) k = 0`, where the label is set to 0. Fails if `qp`
/// has a nonzero coefficient at a singular index up to the horizon.
pub fn labels_from_quasipolynomial(qp: &QuasiPolynomial, params: &BlockParams, horizon: usize) -> Result<(Weight, Vec<usize>)> {
    let (p, q) = concrete(params)?;
    let (_, singular) = synthesize(qp, &p, &q, horizon)?;
    let weight = Weight {
        source: WeightSource::Generated {
            qp: qp.clone(),
            p,
            q,
        },
        central_label: Rational::zero(),
    };
    Ok((weight, singular))
}

/// Minimal recurrence of the series, if one of degree at most `K/2` exists.
pub fn detect_linear_recurrence(series: &DeltaSeries) -> Option<RecurrenceCertificate> {
    detect_bounded(&series.coeffs, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasifiniteVerdict {
    Quasifinite,
    NotQuasifiniteUpToHorizon,
}

impl QuasifiniteVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            QuasifiniteVerdict::Quasifinite => "quasifinite",
            QuasifiniteVerdict::NotQuasifiniteUpToHorizon => "not_quasifinite_up_to_horizon",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: QuasifiniteVerdict,
    pub horizon: usize,
    pub series: DeltaSeries,
    pub certificate: Option<RecurrenceCertificate>,
    /// In generator mode with matching parameters: the annihilator of the
    /// generating quasipolynomial and whether the certificate equals it.
    pub generator_annihilator: Option<Univariate>,
    pub certificate_matches_generator: Option<bool>,
}

pub fn classify_quasifinite(weight: &Weight, params: &BlockParams, horizon: usize) -> Result<Classification> {
    let series = delta_from_labels(weight, params, horizon)?;
    let certificate = detect_linear_recurrence(&series);
    let verdict = if certificate.is_some() {
        QuasifiniteVerdict::Quasifinite
    } else {
        QuasifiniteVerdict::NotQuasifiniteUpToHorizon
    };
    let mut generator_annihilator = None;
    let mut certificate_matches_generator = None;
    if let WeightSource::Generated { qp, p, q } = &weight.source {
        if (p, q) == (&params.p_value()?, &params.q_value()?) && !qp.is_zero() {
            let h = qp_annihilator(qp)?;
            certificate_matches_generator = Some(certificate.as_ref().is_some_and(|c| c.annihilator == h));
            generator_annihilator = Some(h);
        }
    }
    Ok(Classification {
        verdict,
        horizon,
        series,
        certificate,
        generator_annihilator,
        certificate_matches_generator,
    })
}

/// Coefficients of a grade -1 element `a = sum c_i L[-1,i]` for which the
/// singular-vector conditions hold for `j = 0..=verified_horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularCandidate {
    pub coefficients: Vec<Rational>,
    pub verified_horizon: usize,
}

impl SingularCandidate {
    pub fn element(&self) -> Element {
        Element::from_terms(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| (BasisIndex::l(-1, i as i64), Poly::constant(c.clone()))),
        )
    }
}

/// `M[j][i] = (2q + i + j + p(i-j)) Lambda_{i+j}` for `j <= J`, `i <= D`.
pub fn singular_matrix(weight: &Weight, params: &BlockParams, d: usize, j: usize) -> Result<Vec<Vec<Rational>>> {
    let (p, q) = concrete(params)?;
    let labels = weight.labels(d + j)?;
    Ok((0..=j)
        .map(|jj| {
            (0..=d)
                .map(|i| {
                    let f = rat(2) * &q + rat((i + jj) as i64) + &p * rat(i as i64 - jj as i64);
                    f * &labels[i + jj]
                })
                .collect()
        })
        .collect())
}

/// Basis of the singular-vector solutions of degree at most `D`, checked for
/// `j = 0..=J`, normalized so that each vector's last nonzero entry is 1.
pub fn singular_vector_solve(weight: &Weight, params: &BlockParams, d: usize, j: usize) -> Result<Vec<SingularCandidate>> {
    let m = singular_matrix(weight, params, d, j)?;
    Ok(linalg::kernel(&m, d + 1)
        .into_iter()
        .map(|coefficients| SingularCandidate {
            coefficients,
            verified_horizon: j,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// The annihilator's coefficient vector lies in the kernel span (for a
    /// one-dimensional kernel: equals the kernel vector up to scale).
    Match,
    Mismatch,
    /// At least one route found nothing, or the annihilator has degree
    /// above `D`.
    NotCompared,
}

impl Comparison {
    pub fn name(&self) -> &'static str {
        match self {
            Comparison::Match => "match",
            Comparison::Mismatch => "mismatch",
            Comparison::NotCompared => "not_compared",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub delta_route: bool,
    pub kernel_route: bool,
    pub certificate: Option<RecurrenceCertificate>,
    pub kernel: Vec<SingularCandidate>,
    /// Annihilator coefficients, lowest degree first, padded to `D + 1`.
    pub annihilator_vector: Option<Vec<Rational>>,
    pub comparison: Comparison,
}

/// Runs the generating-series route (recurrence of degree at most `D` on the
/// horizon `D + J`) and the singular-vector route, and compares them.
pub fn criteria_cross_check(weight: &Weight, params: &BlockParams, d: usize, j: usize) -> Result<CrossCheck> {
    let series = delta_from_labels(weight, params, d + j)?;
    let zero_series = series.coeffs.iter().all(Zero::is_zero);
    let certificate = detect_bounded(&series.coeffs, if zero_series { None } else { Some(d) });
    let kernel = singular_vector_solve(weight, params, d, j)?;
    let annihilator_vector = certificate.as_ref().and_then(|c| {
        let h = &c.annihilator;
        (h.degree() <= d).then(|| (0..=d).map(|k| h.coeff(k)).collect::<Vec<_>>())
    });
    let comparison = match (&annihilator_vector, kernel.is_empty()) {
        (Some(h), false) => {
            let mut rows: Vec<Vec<Rational>> = kernel.iter().map(|c| c.coefficients.clone()).collect();
            let r = linalg::rank(&rows);
            rows.push(h.clone());
            if linalg::rank(&rows) == r {
                Comparison::Match
            } else {
                Comparison::Mismatch
            }
        }
        _ => Comparison::NotCompared,
    };
    Ok(CrossCheck {
        delta_route: certificate.is_some(),
        kernel_route: !kernel.is_empty(),
        certificate,
        kernel,
        annihilator_vector,
        comparison,
    })
}
