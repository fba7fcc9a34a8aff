//! Symmetric powers and truncated Kapranov zeta series of cell-decomposable
//! classes `Σ a_i L^i` with `a_i ≥ 0`, via `∏_i (1 - L^i t)^{-a_i}`.

use serde::{Deserialize, Serialize};

use super::MotivicClass;
use crate::error::{Error, Result};

/// Default truncation bound for zeta series.
pub const DEFAULT_ZETA_TERMS: usize = 32;

/// Truncated power series `Σ_{n ≤ N} [Sym^n Z] t^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSeries {
    pub coefficients: Vec<MotivicClass>,
}

impl ZetaSeries {
    /// Highest retained power of `t`.
    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Product of truncated series, truncated to the shorter length.
    pub fn mul_truncated(&self, other: &ZetaSeries) -> ZetaSeries {
        let len = self.coefficients.len().min(other.coefficients.len());
        let mut out = vec![MotivicClass::zero(); len];
        for (i, a) in self.coefficients.iter().take(len).enumerate() {
            for (j, b) in other.coefficients.iter().take(len - i).enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ZetaSeries { coefficients: out }
    }
}

fn cell_counts(c: &MotivicClass) -> Result<Vec<i128>> {
    let coeffs = c.l_coefficients().ok_or_else(|| {
        Error::UnsupportedClass(format!(
            "`{c}` involves base symbols; only L-polynomials are supported"
        ))
    })?;
    if let Some(neg) = coeffs.iter().position(|&a| a < 0) {
        return Err(Error::UnsupportedClass(format!(
            "`{c}` has negative coefficient at L^{neg}"
        )));
    }
    Ok(coeffs)
}

fn binomial(n: i128, k: i128) -> i128 {
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn series(c: &MotivicClass, terms: usize) -> Result<Vec<MotivicClass>> {
    let coeffs = cell_counts(c)?;
    let mut acc = vec![MotivicClass::zero(); terms + 1];
    acc[0] = MotivicClass::one();
    for (i, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        // (1 - L^i t)^{-a} = Σ_k C(a + k - 1, k) L^{ik} t^k
        let factor: Vec<MotivicClass> = (0..=terms)
            .map(|k| {
                &MotivicClass::int(binomial(a + k as i128 - 1, k as i128))
                    * &MotivicClass::l_power((i * k) as u32)
            })
            .collect();
        let mut next = vec![MotivicClass::zero(); terms + 1];
        for (p, x) in acc.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, f) in factor.iter().take(terms + 1 - p).enumerate() {
                next[p + k] = &next[p + k] + &(x * f);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `[Sym^n Z]` for a cell-decomposable class.
pub fn sym_power_class(c: &MotivicClass, n: usize) -> Result<MotivicClass> {
    if n > DEFAULT_ZETA_TERMS {
        return Err(Error::range("n", n as i128, 0, DEFAULT_ZETA_TERMS as i128));
    }
    Ok(series(c, n)?.pop().expect("nonempty series"))
}

/// Coefficients `0..=n` of `ζ_Z(t)`, bounded by [`DEFAULT_ZETA_TERMS`].
pub fn zeta_coefficients(c: &MotivicClass, n: usize) -> Result<ZetaSeries> {
    zeta_coefficients_bounded(c, n, DEFAULT_ZETA_TERMS)
}

pub fn zeta_coefficients_bounded(
    c: &MotivicClass,
    n: usize,
    max_terms: usize,
) -> Result<ZetaSeries> {
    if n > max_terms {
        return Err(Error::range("N", n as i128, 0, max_terms as i128));
    }
    Ok(ZetaSeries {
        coefficients: series(c, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> MotivicClass {
        s.parse().unwrap()
    }

    #[test]
    fn sym_powers_of_p1() {
        assert_eq!(sym_power_class(&c("1 + L"), 2).unwrap(), c("1 + L + L^2"));
        assert_eq!(
            sym_power_class(&c("1 + L"), 3).unwrap(),
            c("1 + L + L^2 + L^3")
        );
        for n in 0..8 {
            assert_eq!(
                sym_power_class(&MotivicClass::one(), n).unwrap(),
                MotivicClass::one()
            );
        }
    }

    #[test]
    fn zeta_examples() {
        let z = zeta_coefficients(&c("1 + L"), 3).unwrap();
        assert_eq!(
            z.coefficients,
            vec![c("1"), c("1 + L"), c("1 + L + L^2"), c("1 + L + L^2 + L^3")]
        );
        assert_eq!(
            zeta_coefficients(&c("L"), 2).unwrap().coefficients,
            vec![c("1"), c("L"), c("L^2")]
        );
        assert_eq!(
            zeta_coefficients(&c("2"), 2).unwrap().coefficients,
            vec![c("1"), c("2"), c("3")]
        );
        assert!(zeta_coefficients(&c("1"), 33).is_err());
        assert!(zeta_coefficients_bounded(&c("1"), 40, 64).is_ok());
    }

    #[test]
    fn unsupported_inputs() {
        assert!(matches!(
            sym_power_class(&c("X"), 2),
            Err(Error::UnsupportedClass(_))
        ));
        assert!(matches!(
            sym_power_class(&c("L - 1"), 2),
            Err(Error::UnsupportedClass(_))
        ));
    }

    #[test]
    fn multiplicative_on_disjoint_unions() {
        let a = c("1 + L");
        let b = c("2 + L^2");
        let za = zeta_coefficients(&a, 6).unwrap();
        let zb = zeta_coefficients(&b, 6).unwrap();
        let zab = zeta_coefficients(&(&a + &b), 6).unwrap();
        assert_eq!(za.mul_truncated(&zb), zab);
    }
}
