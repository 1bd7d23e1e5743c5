//! Bracket rules: closed-form structure constants on basis labels.
//!
//! A rule is evaluated on index points whose coordinates are rationals, so the
//! same closed form serves concrete brackets and polynomial identity testing
//! on arbitrary grids. Each output term names its target by a grade law
//! (shift relative to the sum of input grades, or an absolute grade from a
//! finite table) and a level shift relative to the sum of input levels.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::{BasisIndex, Element};
use crate::error::Error as EngineError;
use crate::scalar::{rat, Poly, Rational, SymbolTable};

/// Names of the index symbols used by polynomial templates.
pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const GAMMA: &str = "gamma";
pub const LEVEL_I: &str = "i";
pub const LEVEL_J: &str = "j";
pub const LEVEL_K: &str = "k";

/// Index coordinates of a basis vector `L[grade,level]`, allowed to be any
/// rational for identity testing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPoint {
    pub grade: Rational,
    pub level: Rational,
}

impl IndexPoint {
    pub fn new(grade: Rational, level: Rational) -> Self {
        IndexPoint { grade, level }
    }

    pub fn int(grade: i64, level: i64) -> Self {
        IndexPoint::new(rat(grade), rat(level))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradeTarget {
    /// Output grade is the sum of the input grades plus the shift.
    Shift(i64),
    /// Output grade is fixed (finite tabulated algebras).
    Absolute(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTerm {
    pub grade: GradeTarget,
    pub level_shift: i64,
    pub coeff: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradeLaw {
    /// Grades are integers and coefficients are polynomial in them.
    Additive,
    /// Grades range over a finite table; only levels are polynomial.
    Tabulated(Vec<i64>),
}

/// Per index symbol upper bounds on the degree of every structure
/// coefficient of `[L[alpha,i], L[beta,j]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegreeBounds {
    pub alpha: u32,
    pub beta: u32,
    pub i: u32,
    pub j: u32,
}

impl DegreeBounds {
    pub fn grade(&self) -> u32 {
        self.alpha.max(self.beta)
    }

    pub fn level(&self) -> u32 {
        self.i.max(self.j)
    }
}

pub trait BracketRule: Send + Sync {
    fn name(&self) -> String;

    fn grade_law(&self) -> GradeLaw {
        GradeLaw::Additive
    }

    /// Polynomial part of `[L[x], L[y]]`.
    fn structure(&self, x: &IndexPoint, y: &IndexPoint) -> Vec<StructureTerm>;

    /// Coefficient of `c` in `[L[x], L[y]]` for integer indices. This is where
    /// non-polynomial (Kronecker delta) terms live; grid checks never see it.
    fn central(&self, _x: (i64, i64), _y: (i64, i64)) -> Poly {
        Poly::zero()
    }

    fn degree_bounds(&self) -> DegreeBounds;

    /// Smallest admissible level, if the algebra restricts levels.
    fn min_level(&self) -> Option<i64> {
        None
    }
}

/// Bracket of two basis labels.
pub fn bracket_basis(rule: &dyn BracketRule, a: BasisIndex, b: BasisIndex) -> Element {
    let (
        BasisIndex::Graded {
            grade: ga,
            level: la,
        },
        BasisIndex::Graded {
            grade: gb,
            level: lb,
        },
    ) = (a, b)
    else {
        return Element::zero();
    };
    let mut out = Element::zero();
    for term in rule.structure(&IndexPoint::int(ga, la), &IndexPoint::int(gb, lb)) {
        let grade = match term.grade {
            GradeTarget::Shift(s) => ga + gb + s,
            GradeTarget::Absolute(g) => g,
        };
        out.add_term(BasisIndex::l(grade, la + lb + term.level_shift), term.coeff);
    }
    out.add_term(BasisIndex::Central, rule.central((ga, la), (gb, lb)));
    out
}

/// Bilinear extension of the rule.
pub fn bracket_apply(rule: &dyn BracketRule, x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let prod = ca.widening_mul(cb);
            let br = bracket_basis(rule, *a, *b);
            for (t, c) in br.terms() {
                out.add_term(*t, c.widening_mul(&prod));
            }
        }
    }
    out
}

/// One output term of a polynomial template rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateTerm {
    pub grade_shift: i64,
    pub level_shift: i64,
    /// Polynomial in `alpha, beta, i, j` and any parameter symbols.
    pub coeff: Poly,
}

/// Rule whose structure coefficients are polynomials in the index symbols
/// `alpha, beta, i, j` for `[L[alpha,i], L[beta,j]]`.
#[derive(Debug, Clone)]
pub struct PolyBracketRule {
    name: String,
    table: Arc<SymbolTable>,
    terms: Vec<TemplateTerm>,
    positions: [usize; 4],
    bounds: DegreeBounds,
}

impl PolyBracketRule {
    /// The coefficients must be expressed in `table`, which declares the four
    /// index symbols.
    pub fn new(
        name: impl Into<String>,
        table: Arc<SymbolTable>,
        terms: Vec<TemplateTerm>,
    ) -> Result<Self, EngineError> {
        let mut positions = [0usize; 4];
        for (slot, sym) in positions.iter_mut().zip([ALPHA, BETA, LEVEL_I, LEVEL_J]) {
            *slot = table
                .position(sym)
                .ok_or_else(|| EngineError::MissingIndexSymbol(sym.to_string()))?;
        }
        let mut lifted = Vec::with_capacity(terms.len());
        let mut bounds = DegreeBounds::default();
        for t in terms {
            let coeff = t.coeff.lift(&table)?;
            bounds.alpha = bounds.alpha.max(coeff.degree_bound(ALPHA));
            bounds.beta = bounds.beta.max(coeff.degree_bound(BETA));
            bounds.i = bounds.i.max(coeff.degree_bound(LEVEL_I));
            bounds.j = bounds.j.max(coeff.degree_bound(LEVEL_J));
            lifted.push(TemplateTerm { coeff, ..t });
        }
        Ok(PolyBracketRule {
            name: name.into(),
            table,
            terms: lifted,
            positions,
            bounds,
        })
    }

    /// Table holding the index symbols plus the symbols of `params`.
    pub fn template_table(params: &[&Poly]) -> Result<Arc<SymbolTable>, EngineError> {
        let mut table = SymbolTable::new(&[ALPHA, BETA, LEVEL_I, LEVEL_J])?;
        for p in params {
            for s in p.table().symbols() {
                if [ALPHA, BETA, GAMMA, LEVEL_I, LEVEL_J, LEVEL_K].contains(&s.name()) {
                    return Err(EngineError::ReservedSymbol(s.name().to_string()));
                }
            }
            table = table.union(p.table());
        }
        Ok(table)
    }

    /// `[L[a,i], L[b,j]] = ((i+q)(b+p) - (j+q)(a+p)) L[a+b,i+j] + (i-j) mu L[a+b+theta,i+j]`.
    pub fn block_pqmt(p: &Poly, q: &Poly, mu: &Poly, theta: i64) -> Result<Self, EngineError> {
        let table = Self::template_table(&[p, q, mu])?;
        let v = |n: &str| Poly::var(&table, n).expect("declared index symbol");
        let (p, q, mu) = (p.lift(&table)?, q.lift(&table)?, mu.lift(&table)?);
        let main = (v(LEVEL_I) + &q) * (v(BETA) + &p) - (v(LEVEL_J) + &q) * (v(ALPHA) + &p);
        let shifted = (v(LEVEL_I) - v(LEVEL_J)) * mu;
        Self::new(
            format!("B(p,q,mu,theta) with theta={theta}"),
            table,
            vec![
                TemplateTerm {
                    grade_shift: 0,
                    level_shift: 0,
                    coeff: main,
                },
                TemplateTerm {
                    grade_shift: theta,
                    level_shift: 0,
                    coeff: shifted,
                },
            ],
        )
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn templates(&self) -> &[TemplateTerm] {
        &self.terms
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl BracketRule for PolyBracketRule {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn structure(&self, x: &IndexPoint, y: &IndexPoint) -> Vec<StructureTerm> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.table.len()];
        values[self.positions[0]] = Some(&x.grade);
        values[self.positions[1]] = Some(&y.grade);
        values[self.positions[2]] = Some(&x.level);
        values[self.positions[3]] = Some(&y.level);
        let mut merged: BTreeMap<(i64, i64), Poly> = BTreeMap::new();
        for t in &self.terms {
            let c = t.coeff.substitute_positions(&values);
            if c.is_zero() {
                continue;
            }
            let slot = merged
                .entry((t.grade_shift, t.level_shift))
                .or_insert_with(Poly::zero);
            *slot = &*slot + &c;
        }
        merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((g, l), coeff)| StructureTerm {
                grade: GradeTarget::Shift(g),
                level_shift: l,
                coeff,
            })
            .collect()
    }

    fn degree_bounds(&self) -> DegreeBounds {
        self.bounds
    }
}

/// Spot-checks that the declared degree bounds are true upper bounds: along
/// each index coordinate, with the others fixed at sampled integers, the
/// `(bound+1)`-th finite difference of every output coefficient must vanish.
pub fn spot_check_degree_bounds(
    rule: &dyn BracketRule,
    samples: usize,
    seed: u64,
) -> Result<(), EngineError> {
    let bounds = rule.degree_bounds();
    let domain: Vec<i64> = match rule.grade_law() {
        GradeLaw::Additive => (-3..=3).collect(),
        GradeLaw::Tabulated(d) => d,
    };
    let floor = rule.min_level().unwrap_or(-3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = |n: usize| rng.gen_range(0..n);
    let key = |t: &StructureTerm| (t.grade, t.level_shift);
    for _ in 0..samples {
        let base = [
            domain[next(domain.len())],
            domain[next(domain.len())],
            floor + next(4) as i64,
            floor + next(4) as i64,
        ];
        let axes: [(usize, u32, &str); 4] = [
            (0, bounds.alpha, ALPHA),
            (1, bounds.beta, BETA),
            (2, bounds.i, LEVEL_I),
            (3, bounds.j, LEVEL_J),
        ];
        for (axis, bound, sym) in axes {
            if axis < 2 && matches!(rule.grade_law(), GradeLaw::Tabulated(_)) {
                continue;
            }
            let steps = bound as usize + 2;
            // Coefficient along the axis, grouped by the relative target so
            // that moving along the axis does not move the key.
            let mut series: BTreeMap<(GradeTarget, i64), Vec<Poly>> = BTreeMap::new();
            for s in 0..steps {
                let mut idx = base;
                idx[axis] += s as i64;
                let x = IndexPoint::int(idx[0], idx[2]);
                let y = IndexPoint::int(idx[1], idx[3]);
                for t in rule.structure(&x, &y) {
                    let entry = series
                        .entry(key(&t))
                        .or_insert_with(|| vec![Poly::zero(); steps]);
                    entry[s] = &entry[s] + &t.coeff;
                }
            }
            for values in series.values() {
                let mut diff = values.clone();
                for _ in 0..=bound {
                    diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
                }
                if diff.iter().any(|d| !d.is_zero()) {
                    return Err(EngineError::DegreeBoundViolated {
                        symbol: sym.to_string(),
                        bound,
                    });
                }
            }
        }
    }
    Ok(())
}
