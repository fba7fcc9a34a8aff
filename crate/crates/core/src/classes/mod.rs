//! Classes in the free polynomial image `Z[L][symbols]` of `K_0(Var_k)`.
//!
//! A [`MotivicClass`] is a sparse integer polynomial in the Lefschetz class
//! `L = [A^1]` and finitely many named base symbols such as `X/G`. The
//! scissor relations are never modelled; the classes we manipulate are the
//! ones produced by cell decompositions, projective bundles and blowups.

mod formulas;
mod parse;
mod zeta;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use formulas::{
    blowup_class, line_bundle_quotient, projective_space_class, torsor_quotient,
    vector_bundle_quotient, LineBundleSplit,
};
pub use zeta::{
    sym_power_class, zeta_coefficients, zeta_coefficients_bounded, ZetaSeries, DEFAULT_ZETA_TERMS,
};

/// Name of the distinguished Lefschetz variable in text and JSON forms.
pub const LEFSCHETZ: &str = "L";

/// A monomial `sym_1^{e_1} ... sym_k^{e_k} * L^l`.
///
/// Ordering puts pure `L` powers first, ascending, then symbol monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    symbols: Vec<(String, u32)>,
    l: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn l_power(l: u32) -> Self {
        Monomial {
            symbols: Vec::new(),
            l,
        }
    }

    pub fn l_degree(&self) -> u32 {
        self.l
    }

    pub fn symbols(&self) -> &[(String, u32)] {
        &self.symbols
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<String, u32> = BTreeMap::new();
        for (s, e) in self.symbols.iter().chain(other.symbols.iter()) {
            *merged.entry(s.clone()).or_default() += e;
        }
        Monomial {
            symbols: merged.into_iter().collect(),
            l: self.l + other.l,
        }
    }

    fn is_one(&self) -> bool {
        self.l == 0 && self.symbols.is_empty()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = self
            .symbols
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.clone()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        match self.l {
            0 => {}
            1 => factors.push(LEFSCHETZ.to_string()),
            l => factors.push(format!("{LEFSCHETZ}^{l}")),
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MotivicClass {
    terms: BTreeMap<Monomial, i128>,
}

impl MotivicClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(c: i128) -> Self {
        Self::from_terms([(Monomial::one(), c)])
    }

    /// `L = [A^1]`.
    pub fn lefschetz() -> Self {
        Self::l_power(1)
    }

    pub fn l_power(e: u32) -> Self {
        Self::from_terms([(Monomial::l_power(e), 1)])
    }

    /// A formal base symbol, e.g. the class of a quotient whose structure
    /// is not modelled.
    pub fn symbol(name: &str) -> Self {
        Self::from_terms([(
            Monomial {
                symbols: vec![(name.to_string(), 1)],
                l: 0,
            },
            1,
        )])
    }

    /// `Σ coeffs[i] L^i`.
    pub fn from_l_coefficients(coeffs: &[i128]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::l_power(i as u32), c)),
        )
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, i128)>) -> Self {
        let mut out = MotivicClass::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Whether no base symbol occurs.
    pub fn is_pure_l(&self) -> bool {
        self.terms.keys().all(|m| m.symbols.is_empty())
    }

    /// Coefficients of a pure `L` polynomial, lowest degree first.
    pub fn l_coefficients(&self) -> Option<Vec<i128>> {
        if !self.is_pure_l() {
            return None;
        }
        let deg = self
            .terms
            .keys()
            .map(|m| m.l)
            .max()
            .map_or(0, |d| d as usize + 1);
        let mut out = vec![0; deg];
        for (m, &c) in &self.terms {
            out[m.l as usize] = c;
        }
        Some(out)
    }

    /// Base symbols that occur, sorted.
    pub fn symbol_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.symbols.iter().map(|(s, _)| s.clone()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn pow(&self, e: u32) -> MotivicClass {
        let mut acc = MotivicClass::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reduction modulo the ideal `(L)`: every monomial with a positive `L`
    /// power is dropped.
    pub fn mod_l(&self) -> MotivicClass {
        MotivicClass {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.l == 0)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Substitutes `L ↦ q^m` and each symbol by its supplied count.
    pub fn evaluate_count(
        &self,
        q: u64,
        m: u32,
        symbol_counts: &BTreeMap<String, i128>,
    ) -> Result<i128> {
        let l_value = (q as i128)
            .checked_pow(m)
            .ok_or(Error::Overflow("evaluate_count"))?;
        self.evaluate_at(l_value, symbol_counts)
    }

    /// Substitutes `L ↦ l_value` and each symbol by its supplied count.
    pub fn evaluate_at(
        &self,
        l_value: i128,
        symbol_counts: &BTreeMap<String, i128>,
    ) -> Result<i128> {
        let overflow = || Error::Overflow("evaluate_count");
        let mut total: i128 = 0;
        for (mono, &c) in &self.terms {
            let mut v = l_value.checked_pow(mono.l).ok_or_else(overflow)?;
            for (s, e) in &mono.symbols {
                let base = *symbol_counts
                    .get(s)
                    .ok_or_else(|| Error::UnboundSymbol(s.clone()))?;
                v = v
                    .checked_mul(base.checked_pow(*e).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            total = total
                .checked_add(c.checked_mul(v).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        Ok(total)
    }

    /// Evaluation of a symbol-free class at `L = l_value`.
    pub fn evaluate_pure(&self, l_value: i128) -> Result<i128> {
        self.evaluate_at(l_value, &BTreeMap::new())
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact(&self, d: i128) -> Option<MotivicClass> {
        if d == 0 {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            if c % d != 0 {
                return None;
            }
            terms.insert(m.clone(), c / d);
        }
        Some(MotivicClass { terms })
    }

    /// `Σ c_i L^i ↦ Σ c_i L^{i·k}` (the class of the same cells over `F_{q^k}`).
    pub fn l_dilate(&self, k: u32) -> MotivicClass {
        MotivicClass {
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    (
                        Monomial {
                            symbols: m.symbols.clone(),
                            l: m.l * k,
                        },
                        c,
                    )
                })
                .collect(),
        }
    }
}

impl fmt::Display for MotivicClass {
    /// Canonical sparse form, e.g. `1 + 2*L + L^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c < 0 {
                ("-", c.unsigned_abs())
            } else {
                ("+", c as u128)
            };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl std::str::FromStr for MotivicClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_class(s)
    }
}

impl From<i128> for MotivicClass {
    fn from(c: i128) -> Self {
        MotivicClass::int(c)
    }
}

impl<'a> Add<&'a MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn add(self, rhs: &'a MotivicClass) -> MotivicClass {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn sub(self, rhs: &'a MotivicClass) -> MotivicClass {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn mul(self, rhs: &'a MotivicClass) -> MotivicClass {
        let mut out = MotivicClass::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MotivicClass {
    type Output = MotivicClass;
    fn neg(self) -> MotivicClass {
        MotivicClass {
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MotivicClass> for MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: MotivicClass) -> MotivicClass {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MotivicClass> for MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: &'a MotivicClass) -> MotivicClass {
                (&self).$method(rhs)
            }
        }
        impl $tr<MotivicClass> for &MotivicClass {
            type Output = MotivicClass;
            fn $method(self, rhs: MotivicClass) -> MotivicClass {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MotivicClass {
    type Output = MotivicClass;
    fn neg(self) -> MotivicClass {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    #[serde(flatten)]
    powers: BTreeMap<String, u32>,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    monomials: Vec<MonomialJson>,
}

impl Serialize for MotivicClass {
    /// `{"monomials":[{"L":2,"coeff":1}, ...]}`; the `L` key is always present.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut monomials = Vec::with_capacity(self.terms.len());
        for (m, &c) in &self.terms {
            let coeff = i64::try_from(c)
                .map_err(|_| serde::ser::Error::custom("coefficient exceeds i64"))?;
            let mut powers: BTreeMap<String, u32> = m.symbols.iter().cloned().collect();
            powers.insert(LEFSCHETZ.to_string(), m.l);
            monomials.push(MonomialJson { powers, coeff });
        }
        ClassJson { monomials }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MotivicClass {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let json = ClassJson::deserialize(deserializer)?;
        let mut out = MotivicClass::zero();
        for mj in json.monomials {
            let mut l = 0;
            let mut symbols = Vec::new();
            for (name, e) in mj.powers {
                if name == LEFSCHETZ {
                    l = e;
                } else if e > 0 {
                    if !parse::is_symbol_name(&name) {
                        return Err(serde::de::Error::custom(format!(
                            "invalid symbol name `{name}`"
                        )));
                    }
                    symbols.push((name, e));
                }
            }
            out.add_term(Monomial { symbols, l }, mj.coeff as i128);
        }
        Ok(out)
    }
}
