//! Exact scalars: arbitrary-precision rationals and sparse multivariate
//! polynomials over the rationals.
//!
//! A [`Poly`] stores its terms against a [`SymbolTable`]; exponent vectors
//! are aligned with the table. Two polynomials can be combined when they share
//! a table, or when one of them is a constant. The checked operations report
//! a mismatch by naming the offending symbol; the operator impls panic with the
//! same message.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("symbol table mismatch: symbol `{symbol}` is not shared by both operands")]
    SymbolMismatch { symbol: String },
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("duplicate symbol `{0}` in symbol table")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is not declared in the symbol table")]
    UndeclaredSymbol(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial `{0}` is not a constant")]
    NotConstant(String),
}

/// Integer to rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a reduced rational. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a"` or `"a/b"` (decimal digits, optional leading minus).
pub fn parse_rational(input: &str) -> Result<Rational, ScalarError> {
    let s = input.trim();
    let err = |reason: &str| ScalarError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(err("expected an integer numerator"));
    }
    let n = BigInt::from_str(num).map_err(|e| err(&e.to_string()))?;
    let d = match den {
        Some(d) => {
            if !valid_int(d, false) {
                return Err(err("expected a positive integer denominator"));
            }
            BigInt::from_str(d).map_err(|e| err(&e.to_string()))?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// A formal indeterminate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, ScalarError> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if ok {
            Ok(Symbol(name.to_string()))
        } else {
            Err(ScalarError::InvalidSymbol(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered list of distinct symbols. Exponent vectors of a [`Poly`] are
/// aligned with this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, ScalarError> {
        let mut symbols: Vec<Symbol> = Vec::with_capacity(names.len());
        for name in names {
            let sym = Symbol::new(name.as_ref())?;
            if symbols.contains(&sym) {
                return Err(ScalarError::DuplicateSymbol(sym.0));
            }
            symbols.push(sym);
        }
        Ok(Arc::new(SymbolTable { symbols }))
    }

    /// The shared empty table used by constants.
    pub fn empty() -> Arc<Self> {
        static EMPTY: OnceLock<Arc<SymbolTable>> = OnceLock::new();
        EMPTY
            .get_or_init(|| Arc::new(SymbolTable { symbols: Vec::new() }))
            .clone()
    }

    /// Symbols of `self` followed by those of `other` not already present.
    pub fn union(&self, other: &SymbolTable) -> Arc<Self> {
        let mut symbols = self.symbols.clone();
        for s in &other.symbols {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
        Arc::new(SymbolTable { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.0 == name)
    }

    fn first_difference(&self, other: &SymbolTable) -> String {
        for s in &other.symbols {
            if !self.symbols.contains(s) {
                return s.0.clone();
            }
        }
        for s in &self.symbols {
            if !other.symbols.contains(s) {
                return s.0.clone();
            }
        }
        // Same symbols, different order.
        self.symbols
            .iter()
            .zip(&other.symbols)
            .find(|(a, b)| a != b)
            .map(|(a, _)| a.0.clone())
            .unwrap_or_default()
    }
}

type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Invariants: no stored zero coefficient; every exponent vector has the
/// length of the table.
#[derive(Clone)]
pub struct Poly {
    table: Arc<SymbolTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            table: SymbolTable::empty(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly {
            table: SymbolTable::empty(),
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// The polynomial consisting of the single symbol `name` of `table`.
    pub fn var(table: &Arc<SymbolTable>, name: &str) -> Result<Self, ScalarError> {
        let pos = table
            .position(name)
            .ok_or_else(|| ScalarError::UndeclaredSymbol(name.to_string()))?;
        let mut mono = vec![0; table.len()];
        mono[pos] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, Rational::one());
        Ok(Poly {
            table: table.clone(),
            terms,
        })
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial has no term involving a symbol.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn to_rational(&self) -> Result<Rational, ScalarError> {
        self.as_constant()
            .ok_or_else(|| ScalarError::NotConstant(self.to_string()))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Re-expresses the polynomial in a table that declares all its symbols.
    pub fn lift(&self, table: &Arc<SymbolTable>) -> Result<Self, ScalarError> {
        if Arc::ptr_eq(&self.table, table) || *self.table == **table {
            return Ok(Poly {
                table: table.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.table.len());
        for s in self.table.symbols() {
            map.push(table.position(&s.0));
        }
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut out = vec![0; table.len()];
            for (k, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[k] {
                    Some(pos) => out[pos] = e,
                    None => {
                        return Err(ScalarError::UndeclaredSymbol(
                            self.table.symbols()[k].0.clone(),
                        ))
                    }
                }
            }
            terms.insert(out, c.clone());
        }
        Ok(Poly {
            table: table.clone(),
            terms,
        })
    }

    fn common_table(&self, other: &Poly) -> Result<Arc<SymbolTable>, ScalarError> {
        if Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table {
            Ok(self.table.clone())
        } else if other.is_constant() {
            Ok(self.table.clone())
        } else if self.is_constant() {
            Ok(other.table.clone())
        } else {
            Err(ScalarError::SymbolMismatch {
                symbol: self.table.first_difference(&other.table),
            })
        }
    }

    fn aligned(&self, table: &Arc<SymbolTable>) -> std::borrow::Cow<'_, BTreeMap<Monomial, Rational>> {
        if Arc::ptr_eq(&self.table, table) || *self.table == **table {
            std::borrow::Cow::Borrowed(&self.terms)
        } else {
            // Only constants reach this branch.
            let mut terms = BTreeMap::new();
            if let Some(c) = self.as_constant() {
                if !c.is_zero() {
                    terms.insert(vec![0; table.len()], c);
                }
            }
            std::borrow::Cow::Owned(terms)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ScalarError> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, ScalarError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Poly, negate: bool) -> Result<Poly, ScalarError> {
        let table = self.common_table(other)?;
        let mut terms = self.aligned(&table).into_owned();
        for (mono, c) in other.aligned(&table).iter() {
            let entry = terms.entry(mono.clone()).or_insert_with(Rational::zero);
            if negate {
                *entry -= c;
            } else {
                *entry += c;
            }
            if entry.is_zero() {
                terms.remove(mono);
            }
        }
        Ok(Poly { table, terms })
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, ScalarError> {
        let table = self.common_table(other)?;
        let lhs = self.aligned(&table);
        let rhs = other.aligned(&table);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in lhs.iter() {
            for (mb, cb) in rhs.iter() {
                let mono: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(mono).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Poly { table, terms })
    }

    /// Common table for combining by symbol name: the shared table when one
    /// exists, otherwise the union of both tables.
    pub fn widened_table(&self, other: &Poly) -> Arc<SymbolTable> {
        match self.common_table(other) {
            Ok(t) => t,
            Err(_) => self.table.union(&other.table),
        }
    }

    /// Sum after widening both operands to a common table. Never fails.
    pub fn widening_add(&self, other: &Poly) -> Poly {
        let t = self.widened_table(other);
        self.lift_widened(&t).checked_add(&other.lift_widened(&t)).expect("widened tables agree")
    }

    /// Product after widening both operands to a common table. Never fails.
    pub fn widening_mul(&self, other: &Poly) -> Poly {
        let t = self.widened_table(other);
        self.lift_widened(&t).checked_mul(&other.lift_widened(&t)).expect("widened tables agree")
    }

    fn lift_widened(&self, table: &Arc<SymbolTable>) -> Poly {
        if self.is_constant() {
            return self.clone();
        }
        self.lift(table).expect("widened table declares every symbol")
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly {
                table: self.table.clone(),
                terms: BTreeMap::new(),
            };
        }
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Division by a nonzero rational constant.
    pub fn div_rational(&self, c: &Rational) -> Result<Poly, ScalarError> {
        if c.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluation homomorphism. Unbound symbols remain; the table is kept.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Rational>) -> Poly {
        let values: Vec<Option<&Rational>> = self
            .table
            .symbols()
            .iter()
            .map(|s| bindings.get(s))
            .collect();
        self.substitute_positions(&values)
    }

    /// Convenience form of [`Poly::substitute`] keyed by symbol name.
    pub fn subs(&self, bindings: &[(&str, Rational)]) -> Poly {
        let values: Vec<Option<&Rational>> = self
            .table
            .symbols()
            .iter()
            .map(|s| bindings.iter().find(|(n, _)| *n == s.0).map(|(_, v)| v))
            .collect();
        self.substitute_positions(&values)
    }

    /// Substitution with values aligned to the table positions.
    pub fn substitute_positions(&self, values: &[Option<&Rational>]) -> Poly {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = mono.clone();
            for (k, e) in rest.iter_mut().enumerate() {
                if *e == 0 {
                    continue;
                }
                if let Some(v) = values.get(k).copied().flatten() {
                    coeff *= v.pow(*e as i32);
                    *e = 0;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = terms.entry(rest).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly {
            table: self.table.clone(),
            terms,
        }
    }

    /// Exact maximum exponent of `sym` over the support (0 for the zero
    /// polynomial or an undeclared symbol).
    pub fn degree_bound(&self, sym: &str) -> u32 {
        match self.table.position(sym) {
            Some(pos) => self.terms.keys().map(|m| m[pos]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Terms as (symbol exponents, coefficient), highest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(&Symbol, u32)>, &Rational)> + '_ {
        self.terms.iter().rev().map(move |(mono, c)| {
            let powers = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| (&self.table.symbols()[k], e))
                .collect();
            (powers, c)
        })
    }

    /// Parses canonical text such as `2*p^2*q - 1/3` against `table`.
    pub fn parse(input: &str, table: &Arc<SymbolTable>) -> Result<Poly, ScalarError> {
        parse::parse_poly(input, table)
    }

    /// Parses text and declares every identifier it mentions, in order of
    /// first appearance.
    pub fn parse_auto(input: &str) -> Result<Poly, ScalarError> {
        let names = parse::identifiers(input);
        let table = if names.is_empty() {
            SymbolTable::empty()
        } else {
            SymbolTable::new(&names)?
        };
        parse::parse_poly(input, &table)
    }

    fn leading_is_negative(&self) -> bool {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
    }

    /// True when the text form needs parentheses as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }

    /// Text of `|self|` when `self` is a single negative term, else `None`.
    pub(crate) fn negated_single_term(&self) -> Option<Poly> {
        if self.terms.len() == 1 && self.leading_is_negative() {
            Some(-self)
        } else {
            None
        }
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table {
            return self.terms == other.terms;
        }
        if self.is_constant() && other.is_constant() {
            return self.as_constant() == other.as_constant();
        }
        // Compare by symbol names.
        let canon = |p: &Poly| {
            let mut v: Vec<(Vec<(String, u32)>, Rational)> = p
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut powers: Vec<(String, u32)> = m
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(k, &e)| (p.table.symbols()[k].0.clone(), e))
                        .collect();
                    powers.sort();
                    (powers, c.clone())
                })
                .collect();
            v.sort();
            v
        };
        canon(self) == canon(other)
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (powers, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if powers.is_empty() || !abs.is_one() {
                parts.push(abs.to_string());
            }
            for (s, e) in powers {
                if e == 1 {
                    parts.push(s.to_string());
                } else {
                    parts.push(format!("{s}^{e}"));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                match self.$checked(rhs) {
                    Ok(p) => p,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

mod parse {
    use super::*;

    pub(super) fn identifiers(input: &str) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut cur = String::new();
        let flush = |cur: &mut String, out: &mut Vec<String>| {
            if !cur.is_empty() {
                if !out.contains(cur) {
                    out.push(cur.clone());
                }
                cur.clear();
            }
        };
        for ch in input.chars() {
            if ch.is_ascii_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_ascii_digit()) {
                cur.push(ch);
            } else {
                flush(&mut cur, &mut out);
            }
        }
        flush(&mut cur, &mut out);
        out
    }

    struct Parser<'a> {
        src: &'a str,
        pos: usize,
        table: &'a Arc<SymbolTable>,
    }

    impl<'a> Parser<'a> {
        fn err(&self, reason: &str) -> ScalarError {
            ScalarError::Parse {
                input: self.src.to_string(),
                reason: format!("{reason} at offset {}", self.pos),
            }
        }

        fn skip_ws(&mut self) {
            while self.src[self.pos..].starts_with(char::is_whitespace) {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<char> {
            self.skip_ws();
            self.src[self.pos..].chars().next()
        }

        fn bump(&mut self) {
            self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
        }

        fn number(&mut self) -> Result<Rational, ScalarError> {
            self.skip_ws();
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a number"));
            }
            let mut text = self.src[start..self.pos].to_string();
            let save = self.pos;
            if self.peek() == Some('/') {
                self.bump();
                self.skip_ws();
                let ds = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if ds == self.pos {
                    self.pos = save;
                    return Err(self.err("expected a denominator"));
                }
                text.push('/');
                text.push_str(&self.src[ds..self.pos]);
            }
            parse_rational(&text)
        }

        fn ident(&mut self) -> Result<Poly, ScalarError> {
            self.skip_ws();
            let start = self.pos;
            while self.src[self.pos..]
                .starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
            {
                self.pos += 1;
            }
            Poly::var(self.table, &self.src[start..self.pos])
        }

        fn atom(&mut self) -> Result<Poly, ScalarError> {
            let base = match self.peek() {
                Some('(') => {
                    self.bump();
                    let inner = self.expr()?;
                    if self.peek() != Some(')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.bump();
                    inner
                }
                Some(c) if c.is_ascii_digit() => Poly::constant(self.number()?),
                Some(c) if c.is_ascii_alphabetic() || c == '_' => self.ident()?,
                _ => return Err(self.err("expected a number, symbol or `(`")),
            };
            if self.peek() == Some('^') {
                self.bump();
                self.skip_ws();
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let e: u32 = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("expected an exponent"))?;
                return Ok(base.pow(e));
            }
            Ok(base)
        }

        fn term(&mut self) -> Result<Poly, ScalarError> {
            let mut acc = self.atom()?;
            while self.peek() == Some('*') {
                self.bump();
                let rhs = self.atom()?;
                acc = acc.checked_mul(&rhs)?;
            }
            Ok(acc)
        }

        fn expr(&mut self) -> Result<Poly, ScalarError> {
            let mut negate = false;
            if self.peek() == Some('-') {
                self.bump();
                negate = true;
            } else if self.peek() == Some('+') {
                self.bump();
            }
            let mut acc = self.term()?;
            if negate {
                acc = -acc;
            }
            loop {
                match self.peek() {
                    Some('+') => {
                        self.bump();
                        let t = self.term()?;
                        acc = acc.checked_add(&t)?;
                    }
                    Some('-') => {
                        self.bump();
                        let t = self.term()?;
                        acc = acc.checked_sub(&t)?;
                    }
                    _ => return Ok(acc),
                }
            }
        }
    }

    pub(super) fn parse_poly(input: &str, table: &Arc<SymbolTable>) -> Result<Poly, ScalarError> {
        let mut p = Parser {
            src: input,
            pos: 0,
            table,
        };
        let out = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        // Keep the declared table even for constant results.
        out.lift(table)
    }
}
