//! Finite fields GF(p^e) with log/antilog tables, and towers F_q ⊂ F_{q^k}.
//!
//! An element is stored as the integer Σ c_i p^i, where c_0 + c_1 x + … is its
//! residue modulo the defining polynomial. The defining polynomial of GF(p^e) is
//! the first monic primitive polynomial of degree e when the coefficient tuples
//! (c_0, …, c_{e−1}) of x^e + c_{e−1}x^{e−1} + … + c_0 are ordered by Σ c_i p^i.

use crate::CensusError;

/// Largest field size with tables.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Base fields supported by the census.
pub const SUPPORTED_Q: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Debug)]
pub struct Gf {
    p: u32,
    e: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Splits a prime power into (p, a).
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut a) = (q, 0);
    while r % p == 0 {
        r /= p;
        a += 1;
    }
    (r == 1).then_some((p, a))
}

fn mul_by_x(digits: &mut [u32], modulus: &[u32], p: u32) {
    let top = *digits.last().unwrap();
    for i in (1..digits.len()).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    for (d, &c) in digits.iter_mut().zip(modulus) {
        *d = (*d + (p - c) * top) % p;
    }
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Antilog table of x modulo `modulus`, if x has order p^e − 1.
fn powers_of_x(modulus: &[u32], p: u32, size: u32) -> Option<Vec<u32>> {
    if modulus[0] == 0 {
        return None;
    }
    let mut digits = vec![0; modulus.len()];
    digits[0] = 1;
    let mut exp = Vec::with_capacity(size as usize - 1);
    for i in 0..size - 1 {
        let v = encode(&digits, p);
        if i > 0 && v == 1 {
            return None;
        }
        exp.push(v);
        mul_by_x(&mut digits, modulus, p);
    }
    (encode(&digits, p) == 1).then_some(exp)
}

impl Gf {
    pub fn new(p: u32, e: u32) -> Result<Self, CensusError> {
        let size = (p as u64).checked_pow(e).filter(|&s| s <= MAX_FIELD_SIZE as u64).ok_or(
            CensusError::FieldTooLarge { p, e },
        )? as u32;
        for code in 0..size {
            let modulus: Vec<u32> = (0..e).map(|i| code / p.pow(i) % p).collect();
            if let Some(mut exp) = powers_of_x(&modulus, p, size) {
                let mut log = vec![0; size as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                exp.extend_from_within(..);
                return Ok(Self { p, e, size, modulus, exp, log });
            }
        }
        unreachable!("primitive polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Low coefficients (c_0, …, c_{e−1}) of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of x, a generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn digit(&self, a: u32, t: u32) -> u32 {
        a / self.p.pow(t) % self.p
    }

    /// The prime-field element c mod p.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.size - 1 - self.log[a as usize]) % (self.size - 1)) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (k % (self.size as u64 - 1))) % (self.size as u64 - 1);
        self.exp[l as usize]
    }

    /// log of a nonzero element with respect to the generator.
    pub fn log(&self, a: u32) -> u32 {
        self.log[a as usize]
    }

    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.size as u64 - 1)) as usize]
    }

    /// Value at `x` of the monic polynomial with low coefficients `low` over the prime field.
    fn eval_monic(&self, low: &[u32], x: u32) -> u32 {
        let mut acc = 1;
        for &c in low.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

/// F_q together with F_{q^k}, k ≤ k_max, and embeddings F_q ↪ F_{q^k}.
#[derive(Clone, Debug)]
pub struct FieldTower {
    q: u32,
    a: u32,
    k_max: u32,
    base: Gf,
    exts: Vec<Gf>,
    embeds: Vec<Vec<u32>>,
}

impl FieldTower {
    pub fn new(q: u32, k_max: u32) -> Result<Self, CensusError> {
        if !SUPPORTED_Q.contains(&q) {
            return Err(CensusError::UnsupportedField(q));
        }
        if k_max == 0 {
            return Err(CensusError::InvalidTask("k_max must be at least 1".into()));
        }
        let (p, a) = prime_power(q).unwrap();
        let base = Gf::new(p, a)?;
        let exts = (1..=k_max).map(|k| Gf::new(p, a * k)).collect::<Result<Vec<_>, _>>()?;
        let embeds = exts.iter().map(|big| field_embedding(&base, big, |_| true).unwrap()).collect();
        Ok(Self { q, a, k_max, base, exts, embeds })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    /// Degree of F_q over its prime field.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn base(&self) -> &Gf {
        &self.base
    }

    /// F_{q^k}.
    pub fn ext(&self, k: u32) -> &Gf {
        &self.exts[k as usize - 1]
    }

    /// Image of each element of F_q in F_{q^k}.
    pub fn embed(&self, k: u32) -> &[u32] {
        &self.embeds[k as usize - 1]
    }

    /// An embedding F_{q^j} ↪ F_{q^k} for j | k that restricts to the fixed
    /// embeddings of F_q on both sides.
    pub fn embedding(&self, j: u32, k: u32) -> Option<Vec<u32>> {
        if j == 0 || k > self.k_max || k % j != 0 {
            return None;
        }
        let (small, big) = (self.ext(j), self.ext(k));
        let (to_small, to_big) = (self.embed(j), self.embed(k));
        field_embedding(small, big, |map| {
            to_small.iter().zip(to_big).all(|(&s, &b)| map[s as usize] == b)
        })
    }
}

/// The first embedding small ↪ big (sending the class of x to a root of the
/// defining polynomial of small) accepted by `accept`.
fn field_embedding(small: &Gf, big: &Gf, accept: impl Fn(&[u32]) -> bool) -> Option<Vec<u32>> {
    if small.p != big.p || big.e % small.e != 0 {
        return None;
    }
    let step = (big.size as u64 - 1) / (small.size as u64 - 1);
    for j in 0..small.size as u64 - 1 {
        let r = big.exp(j * step);
        if big.eval_monic(&small.modulus, r) != 0 {
            continue;
        }
        let map: Vec<u32> = (0..small.size)
            .map(|x| {
                let mut acc = 0;
                for t in (0..small.e).rev() {
                    acc = big.add(big.mul(acc, r), small.digit(x, t));
                }
                acc
            })
            .collect();
        if accept(&map) {
            return Some(map);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_polynomials() {
        // x^2 + x + 1, x^3 + x + 1, x^4 + x + 1, x^2 + x + 2 over F_3 (coded as 2 + x)
        assert_eq!(Gf::new(2, 2).unwrap().modulus(), &[1, 1]);
        assert_eq!(Gf::new(2, 3).unwrap().modulus(), &[1, 1, 0]);
        assert_eq!(Gf::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0]);
        assert_eq!(Gf::new(3, 2).unwrap().modulus(), &[2, 1]);
        assert!(Gf::new(3, 11).is_err());
    }

    #[test]
    fn field_axioms_on_small_fields() {
        for (p, e) in [(2, 3), (3, 2), (5, 1), (7, 1), (2, 4), (3, 3)] {
            let f = Gf::new(p, e).unwrap();
            for a in 0..f.size() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.pow(a, f.size() as u64), a);
                for b in 0..f.size() {
                    let c = (a * 7 + b) % f.size();
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
    }

    #[test]
    fn embeddings_are_compatible_homomorphisms() {
        for q in [2, 3, 4] {
            let t = FieldTower::new(q, 4).unwrap();
            for (j, k) in [(1, 2), (1, 4), (2, 4), (1, 3)] {
                let e = t.embedding(j, k).unwrap();
                let (s, b) = (t.ext(j), t.ext(k));
                for x in 0..s.size() {
                    for y in 0..s.size() {
                        assert_eq!(e[s.mul(x, y) as usize], b.mul(e[x as usize], e[y as usize]));
                        assert_eq!(e[s.add(x, y) as usize], b.add(e[x as usize], e[y as usize]));
                    }
                }
                // composite F_q → F_{q^j} → F_{q^k} is the fixed embedding
                for (x, &y) in t.embed(j).iter().enumerate() {
                    assert_eq!(e[y as usize], t.embed(k)[x]);
                }
            }
            assert!(t.embedding(2, 3).is_none());
        }
    }

    #[test]
    fn unsupported_fields() {
        assert!(matches!(FieldTower::new(6, 1), Err(CensusError::UnsupportedField(6))));
        assert!(matches!(FieldTower::new(11, 1), Err(CensusError::UnsupportedField(11))));
        assert!(matches!(FieldTower::new(9, 9), Err(CensusError::FieldTooLarge { .. })));
    }
}
