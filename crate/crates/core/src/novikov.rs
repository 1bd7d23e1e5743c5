//! Novikov algebras on Witt indices and their affinization.
//!
//! A product rule gives `x_a x_b` as a combination of basis vectors `x_g`.
//! Affinizing at `q` yields the bracket
//! `[a[m], b[n]] = (m+q)(ab)[m+n] - (n+q)(ba)[m+n]` on labels `L[grade,m]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{
    bracket_apply, BasisIndex, BracketRule, DegreeBounds, Element, GradeLaw, GradeTarget, Grid,
    IndexPoint, PolyBracketRule, ResidualTerm, StructureTerm, Verdict, Window, Witness, ALPHA,
    BETA, GAMMA,
};
use crate::scalar::{rat, Poly, Rational, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    pub grade: GradeTarget,
    pub coeff: Poly,
}

pub trait ProductRule: Send + Sync {
    fn name(&self) -> String;

    fn grade_law(&self) -> GradeLaw {
        GradeLaw::Additive
    }

    /// `x_a x_b` at (possibly non-integer) grades.
    fn product(&self, a: &Rational, b: &Rational) -> Vec<ProductTerm>;

    /// Degree bounds of the coefficients in `alpha` and `beta`.
    fn degree_bounds(&self) -> (u32, u32);
}

/// `x_a x_b` at integer grades, with `x_g` stored as `L[g,0]`.
pub fn product_basis(rule: &dyn ProductRule, a: i64, b: i64) -> Element {
    let mut out = Element::zero();
    for t in rule.product(&rat(a), &rat(b)) {
        let g = match t.grade {
            GradeTarget::Shift(s) => a + b + s,
            GradeTarget::Absolute(g) => g,
        };
        out.add_term(BasisIndex::l(g, 0), t.coeff);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittNovikovParams {
    pub p: Poly,
    pub mu: Poly,
    pub theta: i64,
}

/// `x_a x_b = (b+p) x_{a+b} + mu x_{a+b+theta}`.
pub fn witt_novikov_product(params: &WittNovikovParams, a: i64, b: i64) -> Element {
    let mut out = Element::zero();
    out.add_term(BasisIndex::l(a + b, 0), params.p.widening_add(&Poly::int(b)));
    out.add_term(BasisIndex::l(a + b + params.theta, 0), params.mu.clone());
    out
}

/// Monomial of a template whose coefficient a mutation perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationSite {
    One,
    Alpha,
    Beta,
}

impl fmt::Display for MutationSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationSite::One => "1",
            MutationSite::Alpha => "alpha",
            MutationSite::Beta => "beta",
        })
    }
}

/// Product whose coefficients are polynomials in `alpha`, `beta` and
/// parameters, one template per grade shift.
#[derive(Debug, Clone)]
pub struct PolyProductRule {
    name: String,
    table: Arc<SymbolTable>,
    terms: Vec<(i64, Poly)>,
    alpha: usize,
    beta: usize,
}

impl PolyProductRule {
    pub fn new(name: impl Into<String>, table: Arc<SymbolTable>, terms: Vec<(i64, Poly)>) -> Result<Self> {
        let alpha = table
            .position(ALPHA)
            .ok_or_else(|| Error::MissingIndexSymbol(ALPHA.into()))?;
        let beta = table
            .position(BETA)
            .ok_or_else(|| Error::MissingIndexSymbol(BETA.into()))?;
        let terms = terms
            .into_iter()
            .map(|(s, c)| Ok((s, c.lift(&table)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyProductRule {
            name: name.into(),
            table,
            terms,
            alpha,
            beta,
        })
    }

    pub fn witt(params: &WittNovikovParams) -> Result<Self> {
        let table = PolyBracketRule::template_table(&[&params.p, &params.mu])?;
        let beta = Poly::var(&table, BETA)?;
        let main = beta + params.p.lift(&table)?;
        let shifted = params.mu.lift(&table)?;
        Self::new(
            format!("witt(p={}, mu={}, theta={})", params.p, params.mu, params.theta),
            table,
            vec![(0, main), (params.theta, shifted)],
        )
    }

    pub fn zero() -> Self {
        let table = PolyBracketRule::template_table(&[]).expect("no parameters");
        Self::new("zero", table, vec![]).expect("index symbols declared")
    }

    pub fn templates(&self) -> &[(i64, Poly)] {
        &self.terms
    }

    /// Adds `delta` times the site monomial to template `term`.
    pub fn perturbed(&self, term: usize, site: MutationSite, delta: &Rational) -> Self {
        let mono = match site {
            MutationSite::One => Poly::one(),
            MutationSite::Alpha => Poly::var(&self.table, ALPHA).expect("declared"),
            MutationSite::Beta => Poly::var(&self.table, BETA).expect("declared"),
        };
        let mut out = self.clone();
        out.terms[term].1 = &out.terms[term].1 + &mono.scale(delta);
        out.name = format!("{} + ({delta})*{site} in term {term}", self.name);
        out
    }

    /// Perturbs one coefficient of one template by a random nonzero rational
    /// with numerator in [-9,9] and denominator in [1,6].
    pub fn random_mutation<R: Rng>(&self, rng: &mut R) -> Self {
        let term = rng.gen_range(0..self.terms.len().max(1));
        let site = [MutationSite::One, MutationSite::Alpha, MutationSite::Beta][rng.gen_range(0..3)];
        let delta = loop {
            let n: i64 = rng.gen_range(-9..=9);
            if n != 0 {
                break crate::scalar::ratio(n, rng.gen_range(1..=6));
            }
        };
        self.perturbed(term, site, &delta)
    }
}

impl ProductRule for PolyProductRule {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn product(&self, a: &Rational, b: &Rational) -> Vec<ProductTerm> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.table.len()];
        values[self.alpha] = Some(a);
        values[self.beta] = Some(b);
        let mut merged: BTreeMap<i64, Poly> = BTreeMap::new();
        for (s, c) in &self.terms {
            let v = c.substitute_positions(&values);
            let slot = merged.entry(*s).or_insert_with(Poly::zero);
            *slot = &*slot + &v;
        }
        merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, coeff)| ProductTerm {
                grade: GradeTarget::Shift(s),
                coeff,
            })
            .collect()
    }

    fn degree_bounds(&self) -> (u32, u32) {
        self.terms.iter().fold((0, 0), |(a, b), (_, c)| {
            (a.max(c.degree_bound(ALPHA)), b.max(c.degree_bound(BETA)))
        })
    }
}

/// Product on a finite set of grades given by explicit structure constants.
/// Missing entries are zero. Checks over a table hold only on its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableProductRule {
    domain: Vec<i64>,
    entries: BTreeMap<(i64, i64), Vec<(i64, Rational)>>,
}

impl TableProductRule {
    pub fn new(domain: Vec<i64>, entries: BTreeMap<(i64, i64), Vec<(i64, Rational)>>) -> Result<Self> {
        for ((a, b), outs) in &entries {
            for g in [*a, *b].iter().chain(outs.iter().map(|(g, _)| g)) {
                if !domain.contains(g) {
                    return Err(Error::InvalidArgument(format!(
                        "product table is not closed: grade {g} outside the domain"
                    )));
                }
            }
        }
        Ok(TableProductRule { domain, entries })
    }
}

impl ProductRule for TableProductRule {
    fn name(&self) -> String {
        format!("table on grades {:?}", self.domain)
    }

    fn grade_law(&self) -> GradeLaw {
        GradeLaw::Tabulated(self.domain.clone())
    }

    fn product(&self, a: &Rational, b: &Rational) -> Vec<ProductTerm> {
        let (Ok(a), Ok(b)) = (i64::try_from(a.to_integer()), i64::try_from(b.to_integer())) else {
            return vec![];
        };
        let mut merged: BTreeMap<i64, Rational> = BTreeMap::new();
        for (g, c) in self.entries.get(&(a, b)).into_iter().flatten() {
            *merged.entry(*g).or_insert_with(Rational::zero) += c;
        }
        merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| ProductTerm {
                grade: GradeTarget::Absolute(g),
                coeff: Poly::constant(c),
            })
            .collect()
    }

    fn degree_bounds(&self) -> (u32, u32) {
        (0, 0)
    }
}

/// Output grade key relative to the sum of the three input grades.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Shift(i64),
    Absolute(Rational),
}

fn grade_of(t: GradeTarget, a: &Rational, b: &Rational) -> Rational {
    match t {
        GradeTarget::Shift(s) => a + b + rat(s),
        GradeTarget::Absolute(g) => rat(g),
    }
}

/// Adds `sign * (x_a x_b) x_c` or `sign * x_c (x_a x_b)` to `res`.
fn triple(
    rule: &dyn ProductRule,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    inner_left: bool,
    sign: i64,
    res: &mut BTreeMap<Key, Poly>,
) {
    for t1 in rule.product(a, b) {
        let m = grade_of(t1.grade, a, b);
        let outer = if inner_left {
            rule.product(&m, c)
        } else {
            rule.product(c, &m)
        };
        for t2 in outer {
            let key = match (t1.grade, t2.grade) {
                (GradeTarget::Shift(s1), GradeTarget::Shift(s2)) => Key::Shift(s1 + s2),
                (_, GradeTarget::Absolute(g)) => Key::Absolute(rat(g)),
                (GradeTarget::Absolute(g1), GradeTarget::Shift(s2)) => {
                    Key::Absolute(rat(g1) + c + rat(s2))
                }
            };
            let v = t1.coeff.widening_mul(&t2.coeff).scale(&rat(sign));
            let slot = res.entry(key).or_insert_with(Poly::zero);
            *slot = slot.widening_add(&v);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NovikovAxiom {
    /// `(ab)c - a(bc) = (ba)c - b(ac)`
    LeftSymmetry,
    /// `(ab)c = (ac)b`
    RightCommutativity,
}

impl NovikovAxiom {
    pub fn name(&self) -> &'static str {
        match self {
            NovikovAxiom::LeftSymmetry => "left_symmetry",
            NovikovAxiom::RightCommutativity => "right_commutativity",
        }
    }
}

fn axiom_residual(rule: &dyn ProductRule, axiom: NovikovAxiom, a: &Rational, b: &Rational, c: &Rational) -> BTreeMap<Key, Poly> {
    let mut res = BTreeMap::new();
    match axiom {
        NovikovAxiom::LeftSymmetry => {
            triple(rule, a, b, c, true, 1, &mut res); // (ab)c
            triple(rule, b, c, a, false, -1, &mut res); // a(bc)
            triple(rule, b, a, c, true, -1, &mut res); // (ba)c
            triple(rule, a, c, b, false, 1, &mut res); // b(ac)
        }
        NovikovAxiom::RightCommutativity => {
            triple(rule, a, b, c, true, 1, &mut res); // (ab)c
            triple(rule, a, c, b, true, -1, &mut res); // (ac)b
        }
    }
    res.retain(|_, v| !v.is_zero());
    res
}

/// Verdicts for both Novikov axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovVerdict {
    pub left_symmetry: Verdict,
    pub right_commutativity: Verdict,
}

impl NovikovVerdict {
    pub fn holds(&self) -> bool {
        self.left_symmetry.holds() && self.right_commutativity.holds()
    }
}

/// Grid check of both axioms on the symbols `alpha, beta, gamma`. Each axiom
/// residual has degree at most twice the rule's bound per symbol, so every
/// symbol needs `2 * bound + 1` values for an additive rule.
pub fn novikov_axiom_check(rule: &dyn ProductRule, grid: &Grid) -> Result<NovikovVerdict> {
    let (da, db) = rule.degree_bounds();
    let required = 2 * da.max(db) as usize + 1;
    let law = rule.grade_law();
    let mut axes: Vec<Vec<Rational>> = Vec::new();
    for s in [ALPHA, BETA, GAMMA] {
        match &law {
            GradeLaw::Additive => {
                let v = grid.values(s);
                if v.len() < required {
                    return Err(Error::InsufficientGrid {
                        symbol: s.to_string(),
                        required,
                        given: v.len(),
                    });
                }
                axes.push(v.to_vec());
            }
            GradeLaw::Tabulated(d) => axes.push(d.iter().map(|&g| rat(g)).collect()),
        }
    }
    let check = |axiom| -> Verdict {
        for a in &axes[0] {
            for b in &axes[1] {
                for c in &axes[2] {
                    let res = axiom_residual(rule, axiom, a, b, c);
                    if res.is_empty() {
                        continue;
                    }
                    let total = a + b + c;
                    let residual = res
                        .into_iter()
                        .map(|(k, coeff)| ResidualTerm {
                            central: false,
                            grade: match k {
                                Key::Shift(s) => &total + rat(s),
                                Key::Absolute(g) => g,
                            },
                            level: Rational::zero(),
                            coeff,
                        })
                        .collect();
                    let point = [ALPHA, BETA, GAMMA]
                        .iter()
                        .zip([a, b, c])
                        .map(|(s, v)| (s.to_string(), v.clone()))
                        .collect();
                    return Verdict::Fails(Box::new(Witness { point, residual }));
                }
            }
        }
        match law {
            GradeLaw::Additive => Verdict::HoldsUniversally,
            GradeLaw::Tabulated(_) => Verdict::HoldsOnWindow,
        }
    };
    Ok(NovikovVerdict {
        left_symmetry: check(NovikovAxiom::LeftSymmetry),
        right_commutativity: check(NovikovAxiom::RightCommutativity),
    })
}

/// Bracket on `L[grade,m]` obtained by affinizing a product rule at `q`.
#[derive(Debug, Clone)]
pub struct Affinization<R> {
    product: R,
    q: Poly,
}

pub fn affinize<R: ProductRule>(product: R, q: Poly) -> Affinization<R> {
    Affinization { product, q }
}

impl<R: ProductRule> Affinization<R> {
    pub fn product(&self) -> &R {
        &self.product
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }
}

impl<R: ProductRule> BracketRule for Affinization<R> {
    fn name(&self) -> String {
        format!("affinization of {} at q={}", self.product.name(), self.q)
    }

    fn grade_law(&self) -> GradeLaw {
        self.product.grade_law()
    }

    fn structure(&self, x: &IndexPoint, y: &IndexPoint) -> Vec<StructureTerm> {
        let mq = self.q.widening_add(&Poly::constant(x.level.clone()));
        let nq = self.q.widening_add(&Poly::constant(y.level.clone()));
        let mut merged: BTreeMap<GradeTarget, Poly> = BTreeMap::new();
        for t in self.product.product(&x.grade, &y.grade) {
            let slot = merged.entry(t.grade).or_insert_with(Poly::zero);
            *slot = slot.widening_add(&mq.widening_mul(&t.coeff));
        }
        for t in self.product.product(&y.grade, &x.grade) {
            let slot = merged.entry(t.grade).or_insert_with(Poly::zero);
            *slot = slot.widening_add(&(-nq.widening_mul(&t.coeff)));
        }
        merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(grade, coeff)| StructureTerm {
                grade,
                level_shift: 0,
                coeff,
            })
            .collect()
    }

    fn degree_bounds(&self) -> DegreeBounds {
        let (a, b) = self.product.degree_bounds();
        let g = a.max(b);
        DegreeBounds {
            alpha: g,
            beta: g,
            i: 1,
            j: 1,
        }
    }
}

/// Outcome of testing "L(A) is Lie iff A is Novikov" on one product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem22Probe {
    pub novikov: NovikovVerdict,
    pub jacobi: Verdict,
    pub equivalence_observed: bool,
}

/// Runs both checks and records whether their verdicts agree. The product
/// grid covers `alpha, beta, gamma`; the bracket grid also covers levels.
pub fn theorem22_probe<R: ProductRule + Clone>(
    rule: &R,
    q: &Poly,
    product_grid: &Grid,
    bracket_grid: &Grid,
) -> Result<Theorem22Probe> {
    let novikov = novikov_axiom_check(rule, product_grid)?;
    let aff = affinize(rule.clone(), q.clone());
    let jacobi = crate::lie::grid_identity_check(&aff, crate::lie::Identity::Jacobi, bracket_grid)?;
    let equivalence_observed = novikov.holds() == jacobi.holds();
    Ok(Theorem22Probe {
        novikov,
        jacobi,
        equivalence_observed,
    })
}

/// Checks, on every window index, that `R[a,i] = L[a-1,i]` turns the
/// `B(1, s-1, -s, 1)` bracket into
/// `[R[a,i], R[b,j]] = s(j-i) R[a+b,i+j] + ((i+s-1)b - (j+s-1)a) R[a+b-1,i+j]`.
pub fn block_sz_reindex_check(s: &Rational, window: &Window) -> Result<Verdict> {
    let sp = Poly::constant(s.clone());
    let rule = PolyBracketRule::block_pqmt(&Poly::one(), &(&sp - &Poly::one()), &(-&sp), 1)?;
    let r_to_l = |b: BasisIndex| match b {
        BasisIndex::Graded { grade, level } => BasisIndex::l(grade + 1, level),
        BasisIndex::Central => BasisIndex::Central,
    };
    for a in window.grades() {
        for b in window.grades() {
            for i in 0..=window.level_max {
                for j in 0..=window.level_max {
                    let lhs = bracket_apply(&rule, &Element::l(a - 1, i), &Element::l(b - 1, j)).relabel(r_to_l);
                    let (ir, jr, ar, br) = (rat(i), rat(j), rat(a), rat(b));
                    let c1 = s * (&jr - &ir);
                    let c2 = (&ir + s - rat(1)) * &br - (&jr + s - rat(1)) * &ar;
                    let rhs = Element::from_terms([
                        (BasisIndex::l(a + b, i + j), Poly::constant(c1)),
                        (BasisIndex::l(a + b - 1, i + j), Poly::constant(c2)),
                    ]);
                    let diff = &lhs - &rhs;
                    if !diff.is_zero() {
                        let point = [("alpha", a), ("beta", b), ("i", i), ("j", j)]
                            .iter()
                            .map(|(n, v)| (n.to_string(), rat(*v)))
                            .collect();
                        let residual = diff
                            .terms()
                            .map(|(b, c)| ResidualTerm {
                                central: *b == BasisIndex::Central,
                                grade: rat(b.grade()),
                                level: rat(b.level().unwrap_or(0)),
                                coeff: c.clone(),
                            })
                            .collect();
                        return Ok(Verdict::Fails(Box::new(Witness { point, residual })));
                    }
                }
            }
        }
    }
    Ok(Verdict::HoldsOnWindow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{grid_identity_check, Identity};
    use crate::scalar::ratio;

    fn witt(p: i64, mu: i64, theta: i64) -> PolyProductRule {
        PolyProductRule::witt(&WittNovikovParams {
            p: Poly::int(p),
            mu: Poly::int(mu),
            theta,
        })
        .unwrap()
    }

    #[test]
    fn witt_products() {
        let params = |p, mu, theta| WittNovikovParams {
            p: Poly::int(p),
            mu: Poly::int(mu),
            theta,
        };
        assert_eq!(witt_novikov_product(&params(2, 0, 0), 1, 2), Element::parse("4*L[3,0]").unwrap());
        assert_eq!(
            witt_novikov_product(&params(2, 3, 1), 1, 2),
            Element::parse("4*L[3,0] + 3*L[4,0]").unwrap()
        );
        assert!(witt_novikov_product(&params(0, 0, 0), 0, 0).is_zero());
        assert_eq!(product_basis(&witt(2, 3, 1), 1, 2), witt_novikov_product(&params(2, 3, 1), 1, 2));
    }

    #[test]
    fn witt_family_is_novikov() {
        let v = novikov_axiom_check(&witt(3, -2, 2), &Grid::integers(-1, 3)).unwrap();
        assert_eq!(v.left_symmetry, Verdict::HoldsUniversally);
        assert_eq!(v.right_commutativity, Verdict::HoldsUniversally);
        let z = novikov_axiom_check(&PolyProductRule::zero(), &Grid::integers(0, 1)).unwrap();
        assert!(z.holds());
    }

    #[test]
    fn alpha_mutation_breaks_right_commutativity() {
        // x_a x_b = (b+1) x_{a+b} + 2a x_{a+b+1}
        let table = PolyBracketRule::template_table(&[]).unwrap();
        let v = |n| Poly::var(&table, n).unwrap();
        let m = PolyProductRule::new(
            "mutant",
            table.clone(),
            vec![(0, v(BETA) + Poly::int(1)), (1, v(ALPHA).scale(&rat(2)))],
        )
        .unwrap();
        let verdict = novikov_axiom_check(&m, &Grid::integers(-1, 3)).unwrap();
        assert!(!verdict.right_commutativity.holds());
        let perturbed = witt(1, 2, 1).perturbed(1, MutationSite::Alpha, &rat(2));
        assert!(!novikov_axiom_check(&perturbed, &Grid::integers(-1, 3)).unwrap().holds());
    }

    #[test]
    fn affinized_witt_matches_block_rule() {
        let aff = affinize(witt(2, 3, 1), Poly::int(5));
        let block = PolyBracketRule::block_pqmt(&Poly::int(2), &Poly::int(5), &Poly::int(3), 1).unwrap();
        for (a, i, b, j) in [(1, 0, 2, 3), (-2, 1, 0, 0), (3, 2, -3, 2)] {
            assert_eq!(
                bracket_apply(&aff, &Element::l(a, i), &Element::l(b, j)),
                bracket_apply(&block, &Element::l(a, i), &Element::l(b, j))
            );
        }
        let zero = affinize(PolyProductRule::zero(), Poly::int(1));
        assert!(bracket_apply(&zero, &Element::l(1, 1), &Element::l(2, 0)).is_zero());
    }

    #[test]
    fn probe_on_witt_and_on_one_dimensional_table() {
        let g = Grid::integers(-1, 3);
        let p = theorem22_probe(&witt(1, 1, 1), &Poly::int(2), &g, &g).unwrap();
        assert!(p.novikov.holds() && p.jacobi.holds() && p.equivalence_observed);
        let t = TableProductRule::new(vec![0], BTreeMap::from([((0, 0), vec![(0, rat(1))])])).unwrap();
        let p = theorem22_probe(&t, &Poly::int(2), &g, &g).unwrap();
        assert_eq!(p.jacobi, Verdict::HoldsOnWindow);
        assert!(p.novikov.holds() && p.equivalence_observed);
        assert_eq!(
            grid_identity_check(&affinize(t, Poly::int(1)), Identity::Antisymmetry, &g).unwrap(),
            Verdict::HoldsOnWindow
        );
    }

    #[test]
    fn reindexing_to_block_sz() {
        let w = Window::new(-3, 3, 3).unwrap();
        for s in [rat(1), rat(2), ratio(5, 2)] {
            assert_eq!(block_sz_reindex_check(&s, &w).unwrap(), Verdict::HoldsOnWindow);
        }
    }
}
