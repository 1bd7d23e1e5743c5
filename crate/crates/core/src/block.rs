//! The centrally extended Block type Lie algebra `B(p,q)`.
//!
//! Basis `L[a,i]` with `a` any integer and `i >= 0`, plus a central `c`:
//! `[L[a,i], L[b,j]] = ((i+q)(b+p) - (j+q)(a+p)) L[a+b,i+j]
//!                     + delta(a+b,0) delta(i,0) delta(j,0) w(a) c`
//! with cocycle `w(a) = (a^3 - a)/12`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{
    bracket_apply, grid_identity_check, BasisIndex, BracketRule, DegreeBounds, Element, Grid,
    Identity, IndexPoint, PolyBracketRule, ResidualTerm, StructureTerm, Verdict, Window, Witness,
    ALPHA, BETA,
};
use crate::scalar::{rat, ratio, Poly, Rational, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockParams {
    pub p: Poly,
    pub q: Poly,
}

impl BlockParams {
    /// `q` must be nonzero. `p = 0` is accepted: the singular-vector
    /// comparison needs it even though the classification assumes `p != 0`.
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        Ok(BlockParams { p, q })
    }

    pub fn rational(p: Rational, q: Rational) -> Result<Self> {
        Self::new(Poly::constant(p), Poly::constant(q))
    }

    pub fn ints(p: i64, q: i64) -> Result<Self> {
        Self::rational(rat(p), rat(q))
    }

    /// `q` as a rational, if concrete.
    pub fn q_value(&self) -> Result<Rational> {
        self.q
            .as_constant()
            .ok_or_else(|| Error::SymbolicCoefficient(self.q.to_string()))
    }

    pub fn p_value(&self) -> Result<Rational> {
        self.p
            .as_constant()
            .ok_or_else(|| Error::SymbolicCoefficient(self.p.to_string()))
    }
}

/// `(alpha^3 - alpha)/12` in the single symbol `alpha`.
pub fn virasoro_cocycle() -> Poly {
    let t = SymbolTable::new(&[ALPHA]).expect("valid symbol");
    let a = Poly::var(&t, ALPHA).expect("declared");
    (a.pow(3) - a).scale(&ratio(1, 12))
}

#[derive(Debug, Clone)]
pub struct BlockAlgebra {
    params: BlockParams,
    rule: PolyBracketRule,
    cocycle: Poly,
}

impl BlockAlgebra {
    pub fn new(params: BlockParams) -> Result<Self> {
        let rule = PolyBracketRule::block_pqmt(&params.p, &params.q, &Poly::zero(), 0)?
            .with_name(format!("B(p,q) with p={}, q={}", params.p, params.q));
        Ok(BlockAlgebra {
            params,
            rule,
            cocycle: virasoro_cocycle(),
        })
    }

    /// Replaces the cocycle by a polynomial in `alpha`.
    pub fn with_cocycle(mut self, cocycle: Poly) -> Result<Self> {
        if cocycle.table().symbols().iter().any(|s| s.name() != ALPHA) && !cocycle.is_constant() {
            return Err(Error::InvalidArgument(format!(
                "cocycle `{cocycle}` may only involve `alpha`"
            )));
        }
        self.cocycle = cocycle;
        Ok(self)
    }

    pub fn params(&self) -> &BlockParams {
        &self.params
    }

    pub fn cocycle(&self) -> &Poly {
        &self.cocycle
    }

    /// Delta-free part of the bracket.
    pub fn polynomial_rule(&self) -> &PolyBracketRule {
        &self.rule
    }

    fn cocycle_at(&self, a: &Rational) -> Poly {
        self.cocycle.subs(&[(ALPHA, a.clone())])
    }
}

impl BracketRule for BlockAlgebra {
    fn name(&self) -> String {
        self.rule.name()
    }

    fn structure(&self, x: &IndexPoint, y: &IndexPoint) -> Vec<StructureTerm> {
        self.rule.structure(x, y)
    }

    fn central(&self, x: (i64, i64), y: (i64, i64)) -> Poly {
        if x.0 + y.0 == 0 && x.1 == 0 && y.1 == 0 {
            self.cocycle_at(&rat(x.0))
        } else {
            Poly::zero()
        }
    }

    fn degree_bounds(&self) -> DegreeBounds {
        self.rule.degree_bounds()
    }

    fn min_level(&self) -> Option<i64> {
        Some(0)
    }
}

fn check_levels(x: &Element) -> Result<()> {
    for b in x.support() {
        if let BasisIndex::Graded { grade, level } = *b {
            if level < 0 {
                return Err(Error::NegativeLevel { grade, level });
            }
        }
    }
    Ok(())
}

/// Bracket of `B(p,q)` including the central term.
pub fn block_bracket(params: &BlockParams, x: &Element, y: &Element) -> Result<Element> {
    check_levels(x)?;
    check_levels(y)?;
    Ok(bracket_apply(&BlockAlgebra::new(params.clone())?, x, y))
}

/// Which part of `B = B- + B0 + B+` a basis label belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TriangularPart {
    Negative,
    Zero,
    Positive,
}

pub fn triangular_part(b: &BasisIndex) -> TriangularPart {
    match b.grade() {
        g if g < 0 => TriangularPart::Negative,
        0 => TriangularPart::Zero,
        _ => TriangularPart::Positive,
    }
}

/// Checks the central part of antisymmetry and Jacobi.
///
/// A central term of `[[x,y],z]` needs all levels 0 and `a+b+g = 0`. With
/// `g = -a-b` the cyclic sum of `s(a,b) w(a+b)`, where `s` is the level-0
/// structure constant, is a polynomial in `a, b` of degree at most
/// `1 + deg w` per symbol. Antisymmetry needs `w(-a) = -w(a)`, degree
/// `deg w`. The grid must cover `alpha` and `beta` accordingly (5 values for
/// the cubic cocycle).
pub fn cocycle_jacobi_check(alg: &BlockAlgebra, grid: &Grid) -> Result<Verdict> {
    let d = alg.cocycle.degree_bound(ALPHA) as usize;
    let s_deg = alg.rule.degree_bounds().grade() as usize;
    let required = d + s_deg + 1;
    for sym in [ALPHA, BETA] {
        let given = grid.values(sym).len();
        if given < required {
            return Err(Error::InsufficientGrid {
                symbol: sym.to_string(),
                required,
                given,
            });
        }
    }
    let level0 = |a: &Rational, b: &Rational| -> Poly {
        let pa = IndexPoint::new(a.clone(), Rational::zero());
        let pb = IndexPoint::new(b.clone(), Rational::zero());
        alg.rule
            .structure(&pa, &pb)
            .into_iter()
            .filter(|t| t.grade == crate::lie::GradeTarget::Shift(0) && t.level_shift == 0)
            .fold(Poly::zero(), |acc, t| acc.widening_add(&t.coeff))
    };
    let fail = |point: Vec<(String, Rational)>, coeff: Poly| {
        Verdict::Fails(Box::new(Witness {
            point,
            residual: vec![ResidualTerm {
                central: true,
                grade: Rational::zero(),
                level: Rational::zero(),
                coeff,
            }],
        }))
    };
    for a in grid.values(ALPHA) {
        let anti = alg.cocycle_at(a).widening_add(&alg.cocycle_at(&-a));
        if !anti.is_zero() {
            return Ok(fail(vec![(ALPHA.into(), a.clone())], anti));
        }
    }
    for a in grid.values(ALPHA) {
        for b in grid.values(BETA) {
            let g = -(a + b);
            let term = |x: &Rational, y: &Rational| level0(x, y).widening_mul(&alg.cocycle_at(&(x + y)));
            let res = term(a, b).widening_add(&term(b, &g)).widening_add(&term(&g, a));
            if !res.is_zero() {
                return Ok(fail(vec![(ALPHA.into(), a.clone()), (BETA.into(), b.clone())], res));
            }
        }
    }
    Ok(Verdict::HoldsUniversally)
}

/// Antisymmetry and Jacobi of the whole bracket: grid identity testing on the
/// delta-free part plus [`cocycle_jacobi_check`] on the central part.
pub fn block_identity_checks(alg: &BlockAlgebra, grid: &Grid) -> Result<[(String, Verdict); 3]> {
    Ok([
        (
            "antisymmetry".into(),
            grid_identity_check(&alg.rule, Identity::Antisymmetry, grid)?,
        ),
        ("jacobi".into(), grid_identity_check(&alg.rule, Identity::Jacobi, grid)?),
        ("cocycle".into(), cocycle_jacobi_check(alg, grid)?),
    ])
}

fn window_failure(point: [(&str, i64); 4], diff: &Element) -> Verdict {
    let point = point.iter().map(|(n, v)| (n.to_string(), rat(*v))).collect();
    let residual = diff
        .terms()
        .map(|(b, c)| ResidualTerm {
            central: *b == BasisIndex::Central,
            grade: rat(b.grade()),
            level: rat(b.level().unwrap_or(0)),
            coeff: c.clone(),
        })
        .collect();
    Verdict::Fails(Box::new(Witness { point, residual }))
}

/// With `L_a = q^-1 L[a,0]` and `k = q^-2 c`, checks
/// `[L_a, L_b] = (b-a) L_{a+b} + delta(a+b,0) w(a) k` on the window grades.
/// Both sides are multiplied by `q^2` so that `q` may stay symbolic:
/// `[L[a,0], L[b,0]] = q(b-a) L[a+b,0] + delta(a+b,0) w(a) c`.
pub fn virasoro_embedding_check(params: &BlockParams, window: &Window) -> Result<Verdict> {
    if params.q.is_zero() {
        return Err(Error::ZeroQ);
    }
    let alg = BlockAlgebra::new(params.clone())?;
    for a in window.grades() {
        for b in window.grades() {
            let lhs = bracket_apply(&alg, &Element::l(a, 0), &Element::l(b, 0));
            let mut rhs = Element::term(BasisIndex::l(a + b, 0), params.q.scale(&rat(b - a)));
            if a + b == 0 {
                rhs.add_term(BasisIndex::Central, Poly::constant(ratio(a * a * a - a, 12)));
            }
            let diff = &lhs - &rhs;
            if !diff.is_zero() {
                return Ok(window_failure([("alpha", a), ("beta", b), ("i", 0), ("j", 0)], &diff));
            }
        }
    }
    Ok(Verdict::HoldsOnWindow)
}

/// Formal Laurent calculus for `x^a t^(m q + e)` with `q` never expanded.
mod laurent {
    use super::*;

    /// Exponents `(x power, multiple of q, integer offset)`.
    pub type Mono = (i64, i64, i64);

    #[derive(Debug, Clone, Default, PartialEq, Eq)]
    pub struct Series {
        pub terms: BTreeMap<Mono, Poly>,
    }

    impl Series {
        pub fn mono(m: Mono) -> Series {
            Series {
                terms: BTreeMap::from([(m, Poly::one())]),
            }
        }

        fn add_term(&mut self, m: Mono, c: Poly) {
            let slot = self.terms.entry(m).or_insert_with(Poly::zero);
            *slot = slot.widening_add(&c);
            if slot.is_zero() {
                self.terms.remove(&m);
            }
        }

        pub fn add(&self, other: &Series) -> Series {
            let mut out = self.clone();
            for (m, c) in &other.terms {
                out.add_term(*m, c.clone());
            }
            out
        }

        pub fn scale(&self, c: &Poly) -> Series {
            let mut out = Series::default();
            for (m, v) in &self.terms {
                out.add_term(*m, v.widening_mul(c));
            }
            out
        }

        pub fn mul(&self, other: &Series) -> Series {
            let mut out = Series::default();
            for ((x1, q1, e1), c1) in &self.terms {
                for ((x2, q2, e2), c2) in &other.terms {
                    out.add_term((x1 + x2, q1 + q2, e1 + e2), c1.widening_mul(c2));
                }
            }
            out
        }

        /// `d/dt`: `t^(mq+e)` becomes `(mq+e) t^(mq+e-1)`.
        pub fn d_dt(&self, q: &Poly) -> Series {
            let mut out = Series::default();
            for ((x, m, e), c) in &self.terms {
                let factor = q.scale(&rat(*m)).widening_add(&Poly::int(*e));
                out.add_term((*x, *m, e - 1), c.widening_mul(&factor));
            }
            out
        }

        /// Coefficient of `t^-1` (exponent `0 q - 1`), summed over x powers.
        pub fn residue(&self) -> Poly {
            self.terms
                .iter()
                .filter(|((_, m, e), _)| *m == 0 && *e == -1)
                .fold(Poly::zero(), |acc, (_, c)| acc.widening_add(c))
        }
    }
}

/// `[x^a f, x^b g]` in the Laurent realization, for `f = t^(q+i)`,
/// `g = t^(q+j)`, read back through `L[a,i] = x^a t^(q+i)`.
pub fn laurent_bracket(params: &BlockParams, a: i64, i: i64, b: i64, j: i64) -> Result<Element> {
    use laurent::Series;
    let q = &params.q;
    let f = Series::mono((0, 1, i));
    let g = Series::mono((0, 1, j));
    let bp = params.p.widening_add(&Poly::int(b));
    let ap = params.p.widening_add(&Poly::int(a));
    let inner = f
        .d_dt(q)
        .mul(&g)
        .scale(&bp)
        .add(&f.mul(&g.d_dt(q)).scale(&-ap));
    let body = Series::mono((a + b, -1, 1)).mul(&inner);
    let mut out = Element::zero();
    for ((x, m, e), c) in &body.terms {
        if *m != 1 || *e < 0 {
            return Err(Error::InvalidArgument(format!(
                "x^{x} t^({m}q+{e}) is not a basis monomial"
            )));
        }
        out.add_term(BasisIndex::l(*x, *e), c.clone());
    }
    if a + b == 0 {
        let res = Series::mono((0, -2, -1)).mul(&f).mul(&g).residue();
        let w = Poly::constant(ratio(a * a * a - a, 12));
        out.add_term(BasisIndex::Central, w.widening_mul(&res));
    }
    Ok(out)
}

/// Compares the Laurent realization with [`block_bracket`] on every pair of
/// window basis vectors.
pub fn laurent_realization_check(params: &BlockParams, window: &Window) -> Result<Verdict> {
    let alg = BlockAlgebra::new(params.clone())?;
    for a in window.grades() {
        for b in window.grades() {
            for i in 0..=window.level_max {
                for j in 0..=window.level_max {
                    let lhs = laurent_bracket(params, a, i, b, j)?;
                    let rhs = bracket_apply(&alg, &Element::l(a, i), &Element::l(b, j));
                    let diff = &lhs - &rhs;
                    if !diff.is_zero() {
                        return Ok(window_failure([("alpha", a), ("beta", b), ("i", i), ("j", j)], &diff));
                    }
                }
            }
        }
    }
    Ok(Verdict::HoldsOnWindow)
}

/// Spanning vectors `w_j = sum_i c_i (2q + i + j + p(i-j)) L[0,i+j]`,
/// `j = 0..=level_max`, of the degree-zero part of the parabolic subalgebra
/// generated by `a = sum_i c_i L[-1,i]`.
pub fn parabolic_degree_zero(params: &BlockParams, a: &Element, level_max: i64) -> Result<Vec<Element>> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    check_levels(a)?;
    if a.support().any(|b| *b == BasisIndex::Central || b.grade() != -1) {
        return Err(Error::NotHomogeneous {
            element: a.to_string(),
            grade: -1,
        });
    }
    let two_q = params.q.scale(&rat(2));
    Ok((0..=level_max)
        .map(|j| {
            let mut w = Element::zero();
            for (b, c) in a.terms() {
                let i = b.level().expect("graded");
                let k = two_q
                    .widening_add(&Poly::int(i + j))
                    .widening_add(&params.p.scale(&rat(i - j)));
                w.add_term(BasisIndex::l(0, i + j), c.widening_mul(&k));
            }
            w
        })
        .collect())
}
