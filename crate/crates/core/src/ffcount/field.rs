//! Finite fields `F_{p^K}` realised by log/antilog tables over a primitive
//! modulus, and the prime-power bookkeeping `q = p^e`.
//!
//! Elements are encoded as integers `Σ c_i p^i` for the coefficient vector
//! of the residue polynomial. Moduli are the lexicographically first
//! primitive polynomials of the requested degree, so every field is
//! reproducible from `(p, K)` alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field we build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        Ok(PrimePower { p, e })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, lowest coefficient first.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let top = *r.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - factor * mi % p) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    trim(r)
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Monic polynomial of degree `deg` with low coefficients given by the base-`p`
/// digits of `index`.
fn monic_from_index(mut index: u64, deg: usize, p: u64) -> Poly {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push(index % p);
        index /= p;
    }
    f.push(1);
    f
}

/// Irreducibility by trial division against every monic polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let g = monic_from_index(idx, d, p);
            if poly_rem(f, &g, p) == vec![0] {
                return false;
            }
        }
    }
    true
}

/// Whether `x` generates the multiplicative group of `F_p[x]/(f)`.
fn is_primitive(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    let order = p.pow(deg as u32) - 1;
    let x: Poly = if deg == 1 {
        vec![(p - f[0]) % p]
    } else {
        vec![0, 1]
    };
    if poly_pow_mod(&x, order, f, p) != vec![1] {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| poly_pow_mod(&x, order / r, f, p) != vec![1])
}

/// Lexicographically first primitive monic polynomial of degree `deg` over `F_p`.
pub fn primitive_modulus(p: u64, deg: usize) -> Poly {
    (0..p.pow(deg as u32))
        .map(|idx| monic_from_index(idx, deg, p))
        .find(|f| f[0] != 0 && is_irreducible(f, p) && is_primitive(f, p))
        .expect("primitive polynomials exist in every degree")
}

/// The field `F_{q^m}` used for one query, with its defining data recorded
/// for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    /// `q = p^e`
    pub e: u32,
    /// working field is `F_{q^m}`
    pub m: u32,
    /// primitive modulus of degree `e` defining `F_q`
    pub base_modulus: Vec<u64>,
    /// primitive modulus of degree `e·m` defining `F_{q^m}`
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn new(q: u64, m: u32) -> Result<Self> {
        let pp = PrimePower::new(q)?;
        if m == 0 {
            return Err(Error::range("m", 0, 1, 64));
        }
        let degree = pp.e as u64 * m as u64;
        let size = (pp.p as u128)
            .checked_pow(degree as u32)
            .unwrap_or(u128::MAX);
        if size > MAX_FIELD_SIZE as u128 {
            return Err(Error::BudgetExceeded {
                needed: size.min(u64::MAX as u128) as u64,
                budget: MAX_FIELD_SIZE,
            });
        }
        Ok(FieldSpec {
            p: pp.p,
            e: pp.e,
            m,
            base_modulus: primitive_modulus(pp.p, pp.e as usize),
            modulus: primitive_modulus(pp.p, degree as usize),
        })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.e * self.m)
    }

    /// Human readable modulus, e.g. `x^2 + x + 2`.
    pub fn modulus_string(&self) -> String {
        poly_string(&self.modulus)
    }

    pub fn base_modulus_string(&self) -> String {
        poly_string(&self.base_modulus)
    }
}

fn poly_string(f: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    parts.join(" + ")
}

/// Table-driven arithmetic in `F_{q^m}`.
pub struct FiniteField {
    spec: FieldSpec,
    size: u32,
    degree: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(q: u64, m: u32) -> Result<Self> {
        let spec = FieldSpec::new(q, m)?;
        let p = spec.p;
        let degree = spec.e * spec.m;
        let size = spec.size() as u32;
        let order = size - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; size as usize];
        // coefficient vector of the current power of the generator
        let mut cur = vec![0u64; degree as usize];
        cur[0] = 1;
        let f = &spec.modulus;
        for (i, slot) in exp.iter_mut().enumerate() {
            let enc = encode(&cur, p);
            *slot = enc;
            log[enc as usize] = i as u32;
            // multiply by x, then reduce x^K = -Σ f_i x^i
            let top = cur[degree as usize - 1];
            for j in (1..degree as usize).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if degree == 1 {
                // the generator is the root -f_0 of x + f_0
                cur[0] = (top * ((p - f[0]) % p)) % p;
            } else if top != 0 {
                for j in 0..degree as usize {
                    cur[j] = (cur[j] + p * p - top * f[j] % p) % p;
                }
            }
        }
        Ok(FiniteField {
            spec,
            size,
            degree,
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.p
    }

    /// `q` of the base field `F_q ⊂ F_{q^m}`.
    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p as u32;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p as u32;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.size - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order as u64;
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let order = self.size - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = (self.size - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.q())
    }

    /// `x ↦ x^{q^t}`.
    pub fn frobenius_pow(&self, a: u32, t: u32) -> u32 {
        let mut x = a;
        for _ in 0..t {
            x = self.frobenius(x);
        }
        x
    }

    /// Elements of the subfield `F_{q^c}`, which exists when `c | m`.
    pub fn subfield(&self, c: u32) -> Result<Vec<u32>> {
        if c == 0 || !self.spec.m.is_multiple_of(c) {
            return Err(Error::Unsupported(format!(
                "F_{{q^{c}}} is not a subfield of F_{{q^{}}}",
                self.spec.m
            )));
        }
        let sub_size = self.q().pow(c);
        let step = (self.size as u64 - 1) / (sub_size - 1);
        let mut out: Vec<u32> = std::iter::once(0)
            .chain((0..sub_size - 1).map(|j| self.exp[(j * step) as usize]))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// A primitive `k`-th root of unity; requires `k | q^m - 1`.
    pub fn root_of_unity(&self, k: u32) -> Result<u32> {
        let order = self.size - 1;
        if k == 0 || !order.is_multiple_of(k) {
            return Err(Error::Unsupported(format!(
                "no primitive {k}-th root of unity in a field of size {}",
                self.size
            )));
        }
        Ok(self.exp[((order / k) % order) as usize])
    }
}

fn encode(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}
