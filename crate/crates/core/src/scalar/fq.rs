//! Finite fields F_q with q = p^r <= 256, arithmetic by lookup tables.
//!
//! An element is stored as the index sum c_i p^i of its coordinates in the
//! power basis of F_p[x]/(modulus).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size. Elements are stored in a `u8`.
pub const MAX_Q: u32 = 256;

#[derive(Debug)]
struct FqContext {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Shared handle to a finite field context.
#[derive(Clone)]
pub struct Fq(Arc<FqContext>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Fq {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Polynomial remainder over F_p, coefficient vectors ascending.
fn fp_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while a.len() > dm {
        let c = a[a.len() - 1] * lead_inv % p;
        let shift = a.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p * p - c * mi % p) % p;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
    a
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u32;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn digits(mut x: u32, p: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// True if the monic polynomial `m` over F_p has no monic factor of degree 1..=deg/2.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for dd in 1..=deg / 2 {
        let count = p.pow(dd as u32);
        for idx in 0..count {
            let mut f = digits(idx, p, dd as u32);
            f.push(1);
            if fp_poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Fq {
    /// Field of size `q`, with the smallest monic irreducible modulus in index order.
    pub fn new(q: u32) -> Result<Fq> {
        Self::new_bounded(q, MAX_Q)
    }

    /// Like [`Fq::new`] with a caller-chosen size bound (at most 256).
    pub fn new_bounded(q: u32, max_q: u32) -> Result<Fq> {
        if q > max_q.min(MAX_Q) {
            return Err(Error::InvalidField(format!("q = {q} exceeds bound {}", max_q.min(MAX_Q))));
        }
        let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            let count = p.pow(r);
            (0..count)
                .map(|idx| {
                    let mut f = digits(idx, p, r);
                    f.push(1);
                    f
                })
                .find(|f| f[0] != 0 && is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        Self::with_modulus(p, &modulus)
    }

    /// Field F_p[x]/(modulus); `modulus` is monic, ascending, and checked irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus must be monic with coefficients in [0,p)".into()));
        }
        let r = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{r} exceeds {MAX_Q}")))?;
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let qs = q as usize;
        let enc = |v: &[u32]| -> u8 {
            let mut x = 0u32;
            for &c in v.iter().rev() {
                x = x * p + c;
            }
            x as u8
        };
        let dig: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, r)).collect();
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = (0..r as usize).map(|i| (dig[a][i] + dig[b][i]) % p).collect();
                add[a * qs + b] = enc(&s);
                let mut prod = vec![0u32; 2 * r as usize];
                for i in 0..r as usize {
                    for j in 0..r as usize {
                        prod[i + j] = (prod[i + j] + dig[a][i] * dig[b][j]) % p;
                    }
                }
                while prod.last() == Some(&0) {
                    prod.pop();
                }
                let red = if prod.is_empty() { prod } else { fp_poly_rem(&prod, modulus, p) };
                let mut red = red;
                red.resize(r as usize, 0);
                mul[a * qs + b] = enc(&red);
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u8;
                }
                if a != 0 && mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Ok(Fq(Arc::new(FqContext { p, r, q, modulus: modulus.to_vec(), add, mul, neg, inv })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn r(&self) -> u32 {
        self.0.r
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.0.neg[b as usize])
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }
    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            Err(Error::ZeroDivision)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }
    /// Row of the multiplication table for fixed `a`.
    #[inline]
    pub fn mul_row(&self, a: u8) -> &[u8] {
        let qs = self.0.q as usize;
        &self.0.mul[a as usize * qs..(a as usize + 1) * qs]
    }
    #[inline]
    pub fn add_row(&self, a: u8) -> &[u8] {
        let qs = self.0.q as usize;
        &self.0.add[a as usize * qs..(a as usize + 1) * qs]
    }

    /// Image of the integer `n` under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.0.p as i64) as u8
    }

    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let mut r = 1u8;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Coordinates of `a` in the power basis.
    pub fn coords(&self, a: u8) -> Vec<u32> {
        digits(a as u32, self.0.p, self.0.r)
    }

    /// Element with the given power-basis coordinates (reduced mod p).
    pub fn from_coords(&self, c: &[i64]) -> Result<u8> {
        if c.len() > self.0.r as usize {
            return Err(Error::Parse(format!("expected at most {} coordinates", self.0.r)));
        }
        let mut x = 0u32;
        for &ci in c.iter().rev() {
            x = x * self.0.p + ci.rem_euclid(self.0.p as i64) as u32;
        }
        Ok(x as u8)
    }

    /// Text form of an element: an integer for prime fields, `[c0,c1,..]` otherwise.
    pub fn format_elem(&self, a: u8) -> String {
        if self.0.r == 1 {
            a.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|x| x.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    /// JSON form of an element, matching [`Fq::format_elem`].
    pub fn elem_to_json(&self, a: u8) -> serde_json::Value {
        if self.0.r == 1 {
            serde_json::Value::from(a)
        } else {
            serde_json::Value::from(self.coords(a))
        }
    }

    pub fn elem_from_json(&self, v: &serde_json::Value) -> Result<u8> {
        match v {
            serde_json::Value::Number(n) => {
                let n = n.as_i64().ok_or_else(|| Error::Parse("field element must be an integer".into()))?;
                if self.0.r == 1 {
                    Ok(self.from_int(n))
                } else {
                    self.from_coords(&[n])
                }
            }
            serde_json::Value::Array(a) => {
                let c: Result<Vec<i64>> = a
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| Error::Parse("coordinate must be an integer".into())))
                    .collect();
                self.from_coords(&c?)
            }
            _ => Err(Error::Parse("bad field element".into())),
        }
    }
}

/// Write `n = p^r`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Binomial coefficient C(m, j) mod p by Lucas' theorem.
pub fn lucas_binomial(mut m: u64, mut j: u64, p: u64) -> u64 {
    let mut res = 1u64;
    while m > 0 || j > 0 {
        let (a, b) = (m % p, j % p);
        if b > a {
            return 0;
        }
        res = res * small_binomial(a, b, p) % p;
        m /= p;
        j /= p;
    }
    res
}

fn small_binomial(a: u64, b: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * fp_inv(den as u32, p as u32) as u64 % p
}

/// Public value type for a single field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqElement {
    pub field: Fq,
    pub repr: u8,
}

impl FqElement {
    pub fn new(field: &Fq, repr: u8) -> Result<Self> {
        if repr as u32 >= field.q() {
            return Err(Error::Parse(format!("element index {repr} out of range")));
        }
        Ok(FqElement { field: field.clone(), repr })
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(self.repr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_default_modulus() {
        let f = Fq::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(512).is_err());
        assert!(Fq::new_bounded(9, 8).is_err());
        assert!(Fq::with_modulus(2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u32, 3, 4, 5, 8, 9, 16, 25, 27] {
            let f = Fq::new(q).unwrap();
            for a in 0..q as u8 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                // Frobenius x -> x^q is the identity on F_q
                assert_eq!(f.pow(a, q as u64), a);
                for b in 0..q as u8 {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q as u8 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2u64, 3, 5, 7] {
            let mut row = vec![1u64];
            for m in 0..60u64 {
                for j in 0..=m {
                    assert_eq!(lucas_binomial(m, j, p), row[j as usize] % p, "C({m},{j}) mod {p}");
                }
                let mut next = vec![1u64; row.len() + 1];
                for j in 1..row.len() {
                    next[j] = (row[j - 1] + row[j]) % p;
                }
                row = next;
            }
        }
        assert_eq!(lucas_binomial(3, 5, 2), 0);
    }
}
