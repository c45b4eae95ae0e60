//! Homogeneous forms, projective points over extensions, and singularity conditions.

use rayon::prelude::*;

use crate::field::{FieldTower, Gf};
use crate::linear::System;

/// Exponent vectors of the degree-d monomials in n+1 variables, x_0^d first
/// (lexicographically decreasing).
pub fn monomials(d: u32, n: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(vars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as usize + 1, d, &mut Vec::new(), &mut out);
    out
}

/// A linear functional on forms: f ↦ Σ_m coeff_m · x^{exps_m}(P).
#[derive(Clone, Debug)]
struct Functional {
    terms: Vec<(usize, i64, Vec<u32>)>,
}

/// The conditions "P is a singular point of f".
#[derive(Clone, Debug)]
pub struct Conditions {
    n: u32,
    d: u32,
    dim: usize,
    functionals: Vec<Functional>,
}

impl Conditions {
    /// All partials vanish at P, and f(P) = 0 as well when the characteristic divides d.
    pub fn singular_point(d: u32, n: u32, p: u32) -> Self {
        let monos = monomials(d, n);
        let mut functionals: Vec<Functional> = (0..=n as usize)
            .map(|i| Functional {
                terms: monos
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m[i] % p != 0)
                    .map(|(j, m)| {
                        let mut e = m.clone();
                        e[i] -= 1;
                        (j, m[i] as i64, e)
                    })
                    .collect(),
            })
            .collect();
        if d % p == 0 {
            functionals.push(Self::vanishing_functional(&monos));
        }
        Self { n, d, dim: monos.len(), functionals }
    }

    /// f(P) = 0.
    pub fn vanishing(d: u32, n: u32) -> Self {
        let monos = monomials(d, n);
        Self { n, d, dim: monos.len(), functionals: vec![Self::vanishing_functional(&monos)] }
    }

    fn vanishing_functional(monos: &[Vec<u32>]) -> Functional {
        Functional { terms: monos.iter().cloned().enumerate().map(|(j, m)| (j, 1, m)).collect() }
    }

    /// Number of monomials.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Linear system over F_p on the F_p-digits of the coefficients, for a point
    /// with coordinates in F_{q^k}.
    pub fn system(&self, tower: &FieldTower, k: u32, point: &[u32]) -> System {
        let f = tower.ext(k);
        let a = tower.a();
        let embed = tower.embed(k);
        let basis: Vec<u32> = (0..a).map(|s| embed[tower.p().pow(s) as usize]).collect();
        let powers: Vec<Vec<u32>> = point
            .iter()
            .map(|&x| (0..=self.d).scan(1, |acc, _| {
                let v = *acc;
                *acc = f.mul(*acc, x);
                Some(v)
            }).collect())
            .collect();
        let cols = self.dim * a as usize;
        let mut system = System::new(tower.p(), cols);
        let mut values = vec![0u32; cols];
        for func in &self.functionals {
            values.iter_mut().for_each(|v| *v = 0);
            for (j, c, e) in &func.terms {
                let mono = e.iter().zip(&powers).fold(f.from_int(*c), |acc, (&ex, pw)| f.mul(acc, pw[ex as usize]));
                for (s, &b) in basis.iter().enumerate() {
                    values[j * a as usize + s] = f.mul(b, mono);
                }
            }
            for t in 0..f.degree() {
                let row: Vec<u32> = values.iter().map(|&v| f.digit(v, t)).collect();
                system.push(&row);
            }
        }
        system
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Value at P of the form with native F_q coefficients `coeffs` after applying `func`.
fn evaluate(func: &Functional, coeffs: &[u32], f: &Gf, embed: &[u32], point: &[u32]) -> u32 {
    func.terms.iter().fold(0, |acc, (j, c, e)| {
        let mono = e.iter().zip(point).fold(f.from_int(*c), |m, (&ex, &x)| f.mul(m, f.pow(x, ex as u64)));
        f.add(acc, f.mul(embed[coeffs[*j] as usize], mono))
    })
}

/// Normalized point number `index` of ℙⁿ(F) (first nonzero coordinate 1).
pub fn point(size: u32, n: u32, mut index: u64) -> Option<Vec<u32>> {
    for lead in 0..=n {
        let free = n - lead;
        let count = (size as u64).pow(free);
        if index < count {
            let mut v = vec![0; n as usize + 1];
            v[lead as usize] = 1;
            for c in v[lead as usize + 1..].iter_mut() {
                *c = (index % size as u64) as u32;
                index /= size as u64;
            }
            return Some(v);
        }
        index -= count;
    }
    None
}

pub fn point_count(size: u32, n: u32) -> u64 {
    (0..=n).map(|i| (size as u64).pow(i)).sum()
}

/// Whether a normalized point over F_{q^k} has degree exactly k and is the
/// lexicographically smallest in its Frobenius orbit.
pub fn is_orbit_representative(f: &Gf, q: u32, k: u32, pt: &[u32]) -> bool {
    let mut cur = pt.to_vec();
    for _ in 1..k {
        cur.iter_mut().for_each(|x| *x = f.pow(*x, q as u64));
        if cur.as_slice() <= pt {
            return false;
        }
    }
    true
}

/// Closed points of ℙⁿ of degree k over F_q, one per Frobenius orbit, mapped through `f`.
pub fn map_orbit_representatives<T: Send>(
    tower: &FieldTower,
    n: u32,
    k: u32,
    op: impl Fn(&[u32]) -> Option<T> + Sync,
) -> Vec<T> {
    let field = tower.ext(k);
    let total = point_count(field.size(), n);
    (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let pt = point(field.size(), n, i).unwrap();
            if is_orbit_representative(field, tower.q(), k, &pt) {
                op(&pt)
            } else {
                None
            }
        })
        .collect()
}

/// Whether the form with native coefficients `f` (in `monomials` order) has a
/// singular point over F_{q^k} for some k ≤ k_max, by direct evaluation.
pub fn is_singular(f: &[u32], d: u32, n: u32, tower: &FieldTower) -> bool {
    if f.iter().all(|&c| c == 0) {
        return true;
    }
    let conds = Conditions::singular_point(d, n, tower.p());
    assert_eq!(f.len(), conds.dim, "coefficient vector length");
    (1..=tower.k_max()).any(|k| {
        let field = tower.ext(k);
        let embed = tower.embed(k);
        (0..point_count(field.size(), n)).any(|i| {
            let pt = point(field.size(), n, i).unwrap();
            conds.functionals.iter().all(|func| evaluate(func, f, field, embed, &pt) == 0)
        })
    })
}
