//! Modules of the intermediate series `A_{a,b}`, `A_a`, `B_a` over `B(p,q)`.
//!
//! All three have basis `v_mu`, `mu` in Z. Only `L[a,0]` acts nontrivially;
//! `L[a,i]` with `i > 0` and the central element act as 0.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::block::{BlockAlgebra, BlockParams};
use crate::error::{Error, Result};
use crate::lie::{bracket_apply, BasisIndex, Element, Window};
use crate::scalar::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntermediateKind {
    /// `L[a,0] v_mu = q(a + mu + b a) v_{a+mu}`, written with the module
    /// parameters `a`, `b`.
    Aab { a: Rational, b: Rational },
    /// `L[al,0] v_mu = q(mu + al) v_{al+mu}` for `mu != 0`,
    /// `L[al,0] v_0 = q al (a + al) v_al`.
    Aa { a: Rational },
    /// `L[al,0] v_mu = q mu v_{al+mu}` for `mu != -al`,
    /// `L[al,0] v_{-al} = -q al (a + al) v_0`.
    Ba { a: Rational },
}

impl IntermediateKind {
    pub fn name(&self) -> &'static str {
        match self {
            IntermediateKind::Aab { .. } => "Aab",
            IntermediateKind::Aa { .. } => "Aa",
            IntermediateKind::Ba { .. } => "Ba",
        }
    }
}

/// Finitely supported vector `sum x_mu v_mu`; no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleVector {
    terms: BTreeMap<i64, Rational>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector::default()
    }

    pub fn basis(mu: i64) -> Self {
        let mut v = ModuleVector::zero();
        v.add_term(mu, Rational::from_integer(1.into()));
        v
    }

    pub fn add_term(&mut self, mu: i64, c: Rational) {
        let slot = self.terms.entry(mu).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mu);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mu: i64) -> Rational {
        self.terms.get(&mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*v[{m}]")?;
        }
        Ok(())
    }
}

/// `L[al,0] v_mu` as `(target weight, coefficient)`.
fn level_zero_action(kind: &IntermediateKind, q: &Rational, al: i64, mu: i64) -> (i64, Rational) {
    let (alr, mur) = (rat(al), rat(mu));
    let c = match kind {
        IntermediateKind::Aab { a, b } => q * (a + &mur + b * &alr),
        IntermediateKind::Aa { a } => {
            if mu == 0 {
                q * &alr * (a + &alr)
            } else {
                q * (&mur + &alr)
            }
        }
        IntermediateKind::Ba { a } => {
            if mu == -al {
                return (0, -(q * &alr * (a + &alr)));
            }
            q * &mur
        }
    };
    (al + mu, c)
}

/// Action with the central element acting as `central` times the identity.
pub fn act_with_central(
    kind: &IntermediateKind,
    params: &BlockParams,
    x: &Element,
    v: &ModuleVector,
    central: &Rational,
) -> Result<ModuleVector> {
    let q = params.q_value()?;
    let xr = x
        .to_rational_terms()
        .map_err(|_| Error::SymbolicCoefficient(x.to_string()))?;
    let mut out = ModuleVector::zero();
    for (b, cx) in &xr {
        match *b {
            BasisIndex::Central => out = out.add(&v.scale(&(cx * central))),
            BasisIndex::Graded { grade, level: 0 } => {
                for (mu, cv) in v.terms() {
                    let (target, c) = level_zero_action(kind, &q, grade, *mu);
                    out.add_term(target, c * cx * cv);
                }
            }
            BasisIndex::Graded { .. } => {}
        }
    }
    Ok(out)
}

/// Linear action of an element of `B(p,q)`; `c` acts as 0.
pub fn act(kind: &IntermediateKind, params: &BlockParams, x: &Element, v: &ModuleVector) -> Result<ModuleVector> {
    act_with_central(kind, params, x, v, &Rational::zero())
}

/// A point where `[x,y] v != x(y v) - y(x v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub alpha: i64,
    pub i: i64,
    pub beta: i64,
    pub j: i64,
    pub mu: i64,
    /// `[x,y] v - x(y v) + y(x v)`.
    pub residual: ModuleVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleVerdict {
    HoldsOnWindow,
    Fails(Box<AxiomFailure>),
}

impl ModuleVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ModuleVerdict::HoldsOnWindow)
    }
}

/// Every failure of the module axiom for `x = L[al,i]`, `y = L[be,j]` in the
/// window and `v = v_mu` with `mu` in `weights`, scanning `al, i, be, j, mu`
/// in increasing order.
pub fn module_axiom_failures(
    kind: &IntermediateKind,
    params: &BlockParams,
    window: &Window,
    weights: std::ops::RangeInclusive<i64>,
    central: &Rational,
) -> Result<Vec<AxiomFailure>> {
    let alg = BlockAlgebra::new(params.clone())?;
    let mut out = Vec::new();
    for alpha in window.grades() {
        for i in 0..=window.level_max {
            for beta in window.grades() {
                for j in 0..=window.level_max {
                    let x = Element::l(alpha, i);
                    let y = Element::l(beta, j);
                    let xy = bracket_apply(&alg, &x, &y);
                    for mu in weights.clone() {
                        let v = ModuleVector::basis(mu);
                        let lhs = act_with_central(kind, params, &xy, &v, central)?;
                        let xyv = act_with_central(kind, params, &x, &act_with_central(kind, params, &y, &v, central)?, central)?;
                        let yxv = act_with_central(kind, params, &y, &act_with_central(kind, params, &x, &v, central)?, central)?;
                        let residual = lhs.add(&xyv.scale(&rat(-1))).add(&yxv);
                        if !residual.is_zero() {
                            out.push(AxiomFailure {
                                alpha,
                                i,
                                beta,
                                j,
                                mu,
                                residual,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Module axiom on the window with `c` acting as 0.
pub fn module_axiom_check(
    kind: &IntermediateKind,
    params: &BlockParams,
    window: &Window,
    weights: std::ops::RangeInclusive<i64>,
) -> Result<ModuleVerdict> {
    let failures = module_axiom_failures(kind, params, window, weights, &Rational::zero())?;
    Ok(match failures.into_iter().next() {
        None => ModuleVerdict::HoldsOnWindow,
        Some(f) => ModuleVerdict::Fails(Box::new(f)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundedness {
    pub kind: &'static str,
    /// Common bound on `dim V_mu`.
    pub bound: usize,
}

/// Every weight space is spanned by the single vector `v_mu`.
pub fn boundedness_report(kind: &IntermediateKind) -> Boundedness {
    Boundedness {
        kind: kind.name(),
        bound: 1,
    }
}
