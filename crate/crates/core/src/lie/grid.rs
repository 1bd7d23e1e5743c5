//! Polynomial identity testing of antisymmetry and Jacobi on finite grids.
//!
//! For an additive rule every structure coefficient is a polynomial in the
//! index symbols whose degree in each symbol is bounded by the rule. The
//! residual of an identity, collected per output shape, is then a polynomial
//! of bounded degree per symbol; vanishing on a product grid with more points
//! than that degree in every coordinate forces it to vanish identically.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::element::{BasisIndex, Element};
use super::rule::{
    BracketRule, GradeLaw, GradeTarget, IndexPoint, ALPHA, BETA, GAMMA, LEVEL_I, LEVEL_J, LEVEL_K,
};
use crate::error::{Error, Result};
use crate::scalar::{rat, Poly, Rational};

/// Index symbols in scan order: the grade and level of each of up to three
/// basis vectors.
pub const GRID_SYMBOLS: [&str; 6] = [ALPHA, BETA, GAMMA, LEVEL_I, LEVEL_J, LEVEL_K];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Antisymmetry,
    Jacobi,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Antisymmetry => "antisymmetry",
            Identity::Jacobi => "jacobi",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Identity::Antisymmetry => 2,
            Identity::Jacobi => 3,
        }
    }
}

/// Distinct sample values per index symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid {
    values: BTreeMap<String, Vec<Rational>>,
}

impl Grid {
    pub fn new() -> Self {
        Grid::default()
    }

    pub fn with(mut self, symbol: &str, values: Vec<Rational>) -> Result<Self> {
        for (k, v) in values.iter().enumerate() {
            if values[..k].contains(v) {
                return Err(Error::DuplicateGridValue(symbol.to_string()));
            }
        }
        self.values.insert(symbol.to_string(), values);
        Ok(self)
    }

    /// The same values for every index symbol.
    pub fn uniform(values: Vec<Rational>) -> Result<Self> {
        GRID_SYMBOLS
            .iter()
            .try_fold(Grid::new(), |g, s| g.with(s, values.clone()))
    }

    /// `n` consecutive integers starting at `start` for every index symbol.
    pub fn integers(start: i64, n: usize) -> Self {
        Grid::uniform((0..n as i64).map(|k| rat(start + k)).collect())
            .expect("consecutive integers are distinct")
    }

    pub fn values(&self, symbol: &str) -> &[Rational] {
        self.values.get(symbol).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sizes(&self) -> BTreeMap<String, usize> {
        self.values.iter().map(|(k, v)| (k.clone(), v.len())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualTerm {
    /// Set for a coefficient of the central element; grade and level are then 0.
    pub central: bool,
    pub grade: Rational,
    pub level: Rational,
    pub coeff: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Index values in [`GRID_SYMBOLS`] order, restricted to the symbols the
    /// identity uses.
    pub point: Vec<(String, Rational)>,
    /// Nonzero residual, sorted by grade then level.
    pub residual: Vec<ResidualTerm>,
}

impl Witness {
    /// The residual as an element, when every grade and level is an integer.
    pub fn residual_element(&self) -> Option<Element> {
        let mut out = Element::zero();
        for t in &self.residual {
            if t.central {
                out.add_term(BasisIndex::Central, t.coeff.clone());
                continue;
            }
            if !t.grade.is_integer() || !t.level.is_integer() {
                return None;
            }
            let g = i64::try_from(t.grade.to_integer()).ok()?;
            let l = i64::try_from(t.level.to_integer()).ok()?;
            out.add_term(BasisIndex::l(g, l), t.coeff.clone());
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Proved for all integer indices.
    HoldsUniversally,
    /// Checked exhaustively on a finite domain; no universality claim.
    HoldsOnWindow,
    Fails(Box<Witness>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::HoldsUniversally => "holds_universally",
            Verdict::HoldsOnWindow => "holds_on_window",
            Verdict::Fails(_) => "fails",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }
}

/// Output grade relative to the sum of all input grades of the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum GradeKey {
    Shift(i64),
    Absolute(Rational),
}

type Residual = BTreeMap<(GradeKey, i64), Poly>;

fn accumulate(res: &mut Residual, key: (GradeKey, i64), c: Poly) {
    let slot = res.entry(key).or_insert_with(Poly::zero);
    *slot = slot.widening_add(&c);
}

fn target_grade(t: GradeTarget, x: &IndexPoint, y: &IndexPoint) -> Rational {
    match t {
        GradeTarget::Shift(s) => &x.grade + &y.grade + rat(s),
        GradeTarget::Absolute(g) => rat(g),
    }
}

fn antisymmetry_residual(rule: &dyn BracketRule, x: &IndexPoint, y: &IndexPoint) -> Residual {
    let mut res = Residual::new();
    for (a, b) in [(x, y), (y, x)] {
        for t in rule.structure(a, b) {
            let key = match t.grade {
                GradeTarget::Shift(s) => GradeKey::Shift(s),
                GradeTarget::Absolute(g) => GradeKey::Absolute(rat(g)),
            };
            accumulate(&mut res, (key, t.level_shift), t.coeff);
        }
    }
    res
}

/// Adds `[[a,b],c]` to the residual.
fn nested(rule: &dyn BracketRule, a: &IndexPoint, b: &IndexPoint, c: &IndexPoint, res: &mut Residual) {
    for t1 in rule.structure(a, b) {
        let mid = IndexPoint::new(
            target_grade(t1.grade, a, b),
            &a.level + &b.level + rat(t1.level_shift),
        );
        for t2 in rule.structure(&mid, c) {
            let key = match (t1.grade, t2.grade) {
                (GradeTarget::Shift(s1), GradeTarget::Shift(s2)) => GradeKey::Shift(s1 + s2),
                (_, GradeTarget::Absolute(g)) => GradeKey::Absolute(rat(g)),
                (GradeTarget::Absolute(g1), GradeTarget::Shift(s2)) => {
                    GradeKey::Absolute(rat(g1) + &c.grade + rat(s2))
                }
            };
            accumulate(res, (key, t1.level_shift + t2.level_shift), t1.coeff.widening_mul(&t2.coeff));
        }
    }
}

fn jacobi_residual(rule: &dyn BracketRule, x: &IndexPoint, y: &IndexPoint, z: &IndexPoint) -> Residual {
    let mut res = Residual::new();
    nested(rule, x, y, z, &mut res);
    nested(rule, y, z, x, &mut res);
    nested(rule, z, x, y, &mut res);
    res
}

fn required_sizes(rule: &dyn BracketRule, identity: Identity) -> (usize, usize) {
    let b = rule.degree_bounds();
    let factor = match identity {
        Identity::Antisymmetry => 1,
        Identity::Jacobi => 2,
    };
    (
        (factor * b.grade()) as usize + 1,
        (factor * b.level()) as usize + 1,
    )
}

/// Checks `identity` for `rule` on `grid`.
///
/// For an additive rule the grid must have, per grade symbol, more points than
/// the residual degree (bound + 1 for antisymmetry, 2 * bound + 1 for Jacobi),
/// and likewise per level symbol; a passing check then holds universally. For
/// a tabulated rule grades range over the table and only levels are gridded.
/// The first failing point in scan order is reported.
pub fn grid_identity_check(rule: &dyn BracketRule, identity: Identity, grid: &Grid) -> Result<Verdict> {
    let arity = identity.arity();
    let (grade_req, level_req) = required_sizes(rule, identity);
    let law = rule.grade_law();
    let grade_syms = &GRID_SYMBOLS[..arity];
    let level_syms = &GRID_SYMBOLS[3..3 + arity];
    let mut axes: Vec<(String, Vec<Rational>)> = Vec::new();
    for &s in grade_syms {
        let vals = match &law {
            GradeLaw::Additive => {
                let v = grid.values(s);
                if v.len() < grade_req {
                    return Err(Error::InsufficientGrid {
                        symbol: s.to_string(),
                        required: grade_req,
                        given: v.len(),
                    });
                }
                v.to_vec()
            }
            GradeLaw::Tabulated(domain) => domain.iter().map(|&g| rat(g)).collect(),
        };
        axes.push((s.to_string(), vals));
    }
    for &s in level_syms {
        let v = grid.values(s);
        if v.len() < level_req {
            return Err(Error::InsufficientGrid {
                symbol: s.to_string(),
                required: level_req,
                given: v.len(),
            });
        }
        axes.push((s.to_string(), v.to_vec()));
    }

    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let coords = |mut n: usize| -> Vec<&Rational> {
        let mut out = vec![&axes[0].1[0]; axes.len()];
        for k in (0..axes.len()).rev() {
            let len = axes[k].1.len();
            out[k] = &axes[k].1[n % len];
            n /= len;
        }
        out
    };
    let failure = (0..total).into_par_iter().find_map_first(|n| {
        let c = coords(n);
        let pts: Vec<IndexPoint> = (0..arity)
            .map(|k| IndexPoint::new(c[k].clone(), c[arity + k].clone()))
            .collect();
        let res = match identity {
            Identity::Antisymmetry => antisymmetry_residual(rule, &pts[0], &pts[1]),
            Identity::Jacobi => jacobi_residual(rule, &pts[0], &pts[1], &pts[2]),
        };
        let total_grade: Rational = pts.iter().map(|p| p.grade.clone()).sum();
        let total_level: Rational = pts.iter().map(|p| p.level.clone()).sum();
        let mut residual: Vec<ResidualTerm> = res
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((g, l), coeff)| ResidualTerm {
                central: false,
                grade: match g {
                    GradeKey::Shift(s) => &total_grade + rat(s),
                    GradeKey::Absolute(a) => a,
                },
                level: &total_level + rat(l),
                coeff,
            })
            .collect();
        if residual.is_empty() {
            return None;
        }
        residual.sort_by(|a, b| (&a.grade, &a.level).cmp(&(&b.grade, &b.level)));
        let point = axes
            .iter()
            .zip(&c)
            .map(|((s, _), v)| (s.clone(), (*v).clone()))
            .collect();
        Some(Witness { point, residual })
    });
    Ok(match (failure, law) {
        (Some(w), _) => Verdict::Fails(Box::new(w)),
        (None, GradeLaw::Additive) => Verdict::HoldsUniversally,
        (None, GradeLaw::Tabulated(_)) => Verdict::HoldsOnWindow,
    })
}
