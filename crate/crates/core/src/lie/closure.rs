//! Window-truncated subalgebra closure over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::element::{BasisIndex, Element};
use super::rule::{bracket_apply, BracketRule};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Grades `grade_min..=grade_max`, levels `0..=level_max`. The central element
/// is in the window iff grade 0 is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub grade_min: i64,
    pub grade_max: i64,
    pub level_max: i64,
}

impl Window {
    pub fn new(grade_min: i64, grade_max: i64, level_max: i64) -> Result<Self> {
        if grade_min > grade_max {
            return Err(Error::InvalidWindow(format!(
                "grade_min {grade_min} exceeds grade_max {grade_max}"
            )));
        }
        if level_max < 0 {
            return Err(Error::InvalidWindow(format!("negative level_max {level_max}")));
        }
        Ok(Window {
            grade_min,
            grade_max,
            level_max,
        })
    }

    pub fn contains(&self, b: &BasisIndex) -> bool {
        match b {
            BasisIndex::Graded { grade, level } => {
                (self.grade_min..=self.grade_max).contains(grade) && (0..=self.level_max).contains(level)
            }
            BasisIndex::Central => (self.grade_min..=self.grade_max).contains(&0),
        }
    }

    pub fn grades(&self) -> impl Iterator<Item = i64> {
        self.grade_min..=self.grade_max
    }

    /// Basis labels of the window in basis order.
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out: Vec<BasisIndex> = self
            .grades()
            .flat_map(|g| (0..=self.level_max).map(move |l| BasisIndex::l(g, l)))
            .collect();
        if self.contains(&BasisIndex::Central) {
            out.push(BasisIndex::Central);
        }
        out
    }
}

type Vector = BTreeMap<BasisIndex, Rational>;

/// Reduced row echelon basis of a subspace, keyed by pivot. Each row has
/// pivot coefficient 1 and no other row has a nonzero entry at its pivot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Echelon {
    rows: BTreeMap<BasisIndex, Vector>,
}

impl Echelon {
    fn reduce(&self, v: &Vector) -> Vector {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            let Some(f) = v.get(pivot).cloned() else {
                continue;
            };
            for (b, c) in row {
                let e = v.entry(*b).or_insert_with(Rational::zero);
                *e -= &f * c;
                if e.is_zero() {
                    v.remove(b);
                }
            }
        }
        v
    }

    /// Inserts `v` if independent; returns the new normalized row.
    fn insert(&mut self, v: &Vector) -> Option<Vector> {
        let mut r = self.reduce(v);
        let (&pivot, lead) = r.iter().next()?;
        let inv = lead.recip();
        for c in r.values_mut() {
            *c *= &inv;
        }
        debug_assert!(r[&pivot].is_one());
        for row in self.rows.values_mut() {
            let Some(f) = row.get(&pivot).cloned() else {
                continue;
            };
            for (b, c) in &r {
                let e = row.entry(*b).or_insert_with(Rational::zero);
                *e -= &f * c;
                if e.is_zero() {
                    row.remove(b);
                }
            }
        }
        self.rows.insert(pivot, r.clone());
        Some(r)
    }
}

/// Closure of a generating set: the smallest subspace of the window that
/// contains the generators and the in-window part of every bracket of its
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    window: Window,
    echelon: Echelon,
}

impl Closure {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.echelon.rows.len()
    }

    /// Reduced basis grouped by the grade of each row's pivot.
    pub fn graded_basis(&self) -> BTreeMap<i64, Vec<Element>> {
        let mut out: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
        for (pivot, row) in &self.echelon.rows {
            out.entry(pivot.grade())
                .or_default()
                .push(Element::from_rational_terms(row));
        }
        out
    }

    pub fn basis(&self) -> Vec<Element> {
        self.echelon
            .rows
            .values()
            .map(Element::from_rational_terms)
            .collect()
    }
}

fn to_vector(e: &Element) -> Result<Vector> {
    e.to_rational_terms()
        .map_err(|_| Error::SymbolicCoefficient(e.to_string()))
}

fn truncate(e: &Element, w: &Window) -> Element {
    Element::from_terms(e.terms().filter(|(b, _)| w.contains(b)).map(|(b, c)| (*b, c.clone())))
}

/// Closes `generators` under the bracket inside `window`. Generators are
/// truncated to the window first; bracket terms outside it are discarded.
pub fn subalgebra_closure(rule: &dyn BracketRule, generators: &[Element], window: Window) -> Result<Closure> {
    let mut echelon = Echelon::default();
    let mut found: Vec<Element> = Vec::new();
    let mut queue: Vec<Vector> = Vec::new();
    for g in generators {
        queue.push(to_vector(&truncate(g, &window))?);
    }
    while !queue.is_empty() {
        let mut fresh = Vec::new();
        for v in queue.drain(..) {
            if let Some(row) = echelon.insert(&v) {
                fresh.push(Element::from_rational_terms(&row));
            }
        }
        // Brackets of each fresh vector with everything found so far,
        // including the other fresh vectors, in both orders.
        let start = found.len();
        found.extend(fresh);
        let pairs: Vec<(usize, usize)> = (start..found.len())
            .flat_map(|n| (0..=n).map(move |m| (n, m)))
            .collect();
        let products: Vec<Result<Vec<Vector>>> = pairs
            .par_iter()
            .map(|&(n, m)| {
                let a = truncate(&bracket_apply(rule, &found[n], &found[m]), &window);
                let b = truncate(&bracket_apply(rule, &found[m], &found[n]), &window);
                Ok(vec![to_vector(&a)?, to_vector(&b)?])
            })
            .collect();
        for p in products {
            queue.extend(p?.into_iter().filter(|v| !v.is_empty()));
        }
    }
    Ok(Closure { window, echelon })
}

/// Whether `element` lies in the closure. The element must lie in the
/// closure's window.
pub fn membership(element: &Element, closure: &Closure) -> Result<bool> {
    if let Some(b) = element.support().find(|b| !closure.window.contains(b)) {
        return Err(Error::OutOfWindow(format!("{element} (term {b})")));
    }
    let v = to_vector(element)?;
    Ok(closure.echelon.reduce(&v).is_empty())
}
