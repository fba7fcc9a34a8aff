use serde::{Deserialize, Serialize};

use crate::classes::{projective_space_class, MotivicClass};
use crate::error::{Error, Result};

/// `m ↦ N_m = #X(F_{q^m})`, either as a polynomial in `q^m` (valid for every
/// `q`) or as an explicit table measured over one fixed `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingSequence {
    Polynomial(MotivicClass),
    Table { q: u64, counts: Vec<i128> },
}

#[derive(Deserialize)]
struct TableJson {
    q: u64,
    #[serde(rename = "N")]
    n: Vec<i128>,
}

impl CountingSequence {
    /// A polynomial sequence; `class` must be a pure `L`-polynomial.
    pub fn polynomial(class: MotivicClass) -> Result<Self> {
        if !class.is_pure_l() {
            return Err(Error::UnsupportedClass(format!(
                "`{class}` has base symbols; counting sequences need an L-polynomial"
            )));
        }
        Ok(CountingSequence::Polynomial(class))
    }

    pub fn table(q: u64, counts: Vec<i128>) -> Result<Self> {
        crate::ffcount::PrimePower::new(q)?;
        if let Some(i) = counts.iter().position(|&n| n < 0) {
            return Err(Error::InvalidScenario(format!(
                "negative count N_{} in table",
                i + 1
            )));
        }
        Ok(CountingSequence::Table { q, counts })
    }

    /// Parses `{"q": 5, "N": [N_1, N_2, ...]}`.
    pub fn from_json_table(json: &str) -> Result<Self> {
        let t: TableJson = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::table(t.q, t.n)
    }

    pub fn point() -> Self {
        CountingSequence::Polynomial(MotivicClass::one())
    }

    pub fn affine(d: u32) -> Self {
        CountingSequence::Polynomial(MotivicClass::l_power(d))
    }

    pub fn projective(d: u32) -> Self {
        CountingSequence::Polynomial(projective_space_class(d))
    }

    pub fn torus(d: u32) -> Self {
        CountingSequence::Polynomial((MotivicClass::lefschetz() - MotivicClass::one()).pow(d))
    }

    /// The class behind a polynomial sequence.
    pub fn class(&self) -> Option<&MotivicClass> {
        match self {
            CountingSequence::Polynomial(c) => Some(c),
            CountingSequence::Table { .. } => None,
        }
    }

    /// `N_m` over `F_{q^m}`.
    pub fn count(&self, q: u64, m: u32) -> Result<i128> {
        if m == 0 {
            return Err(Error::range("m", 0, 1, i128::MAX));
        }
        match self {
            CountingSequence::Polynomial(c) => {
                let v = c.evaluate_count(q, m, &Default::default())?;
                if v < 0 {
                    return Err(Error::Inconsistent(format!(
                        "`{c}` has negative count {v} at q^{m} = {q}^{m}"
                    )));
                }
                Ok(v)
            }
            CountingSequence::Table { q: tq, counts } => {
                if *tq != q {
                    return Err(Error::Mismatch(format!(
                        "table measured over F_{tq}, queried at q = {q}"
                    )));
                }
                counts
                    .get(m as usize - 1)
                    .copied()
                    .ok_or(Error::InsufficientData {
                        needed: m as usize,
                        available: counts.len(),
                    })
            }
        }
    }

    fn combine(
        &self,
        other: &Self,
        poly: impl Fn(&MotivicClass, &MotivicClass) -> MotivicClass,
        num: impl Fn(i128, i128) -> i128,
    ) -> Result<Self> {
        use CountingSequence::*;
        Ok(match (self, other) {
            (Polynomial(a), Polynomial(b)) => Polynomial(poly(a, b)),
            (Table { q, counts }, Polynomial(c)) | (Polynomial(c), Table { q, counts }) => {
                let mut out = Vec::with_capacity(counts.len());
                for (i, &n) in counts.iter().enumerate() {
                    out.push(num(
                        n,
                        c.evaluate_count(*q, i as u32 + 1, &Default::default())?,
                    ));
                }
                Table { q: *q, counts: out }
            }
            (Table { q: qa, counts: a }, Table { q: qb, counts: b }) => {
                if qa != qb {
                    return Err(Error::Mismatch(format!("tables over F_{qa} and F_{qb}")));
                }
                Table {
                    q: *qa,
                    counts: a.iter().zip(b).map(|(&x, &y)| num(x, y)).collect(),
                }
            }
        })
    }

    /// `N_m(X × Y) = N_m(X)·N_m(Y)`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a * b, |x, y| x * y)
    }

    /// `N_m(X ⊔ Y) = N_m(X) + N_m(Y)`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b, |x, y| x + y)
    }

    /// Longest `m` for which `N_m` is known.
    pub fn max_m(&self) -> Option<u32> {
        match self {
            CountingSequence::Polynomial(_) => None,
            CountingSequence::Table { counts, .. } => Some(counts.len() as u32),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(CountingSequence::projective(1).count(3, 2).unwrap(), 10);
        assert_eq!(CountingSequence::affine(1).count(2, 3).unwrap(), 8);
        assert_eq!(CountingSequence::torus(2).count(7, 1).unwrap(), 36);
        assert_eq!(CountingSequence::point().count(5, 4).unwrap(), 1);
        assert!(CountingSequence::polynomial("X + L".parse().unwrap()).is_err());
    }

    #[test]
    fn closure_under_products_and_unions() {
        let a = CountingSequence::projective(1);
        let b = CountingSequence::table(5, vec![8, 40]).unwrap();
        let prod = a.product(&b).unwrap();
        assert_eq!(prod.count(5, 1).unwrap(), 6 * 8);
        assert_eq!(prod.count(5, 2).unwrap(), 26 * 40);
        let sum = a.disjoint_union(&CountingSequence::affine(2)).unwrap();
        assert_eq!(sum.count(3, 1).unwrap(), 4 + 9);
    }

    #[test]
    fn tables() {
        let t = CountingSequence::from_json_table(r#"{"q":5,"N":[8,32,104]}"#).unwrap();
        assert_eq!(t.count(5, 3).unwrap(), 104);
        assert!(matches!(
            t.count(5, 4),
            Err(Error::InsufficientData {
                needed: 4,
                available: 3
            })
        ));
        assert!(matches!(t.count(7, 1), Err(Error::Mismatch(_))));
        assert!(CountingSequence::from_json_table(r#"{"q":6,"N":[1]}"#).is_err());
        assert!(CountingSequence::from_json_table(r#"{"q":5,"N":[-1]}"#).is_err());
    }
}
