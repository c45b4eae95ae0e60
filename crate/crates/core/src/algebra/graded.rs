use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Whether groups are tracked over ℚ (ranks only) or over ℤ (ranks plus torsion).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    #[default]
    Rational,
    Integral,
}

/// `multiplicity` copies of ℤ/prime^exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Torsion {
    pub prime: u64,
    pub exponent: u32,
    pub multiplicity: u32,
}

impl Torsion {
    pub fn order(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// One graded piece: ℤ^free_rank ⊕ torsion (or ℚ^free_rank).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub free_rank: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<Torsion>,
}

impl Entry {
    pub fn free(rank: u64) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn add(&mut self, other: &Entry) {
        self.free_rank += other.free_rank;
        self.torsion.extend(other.torsion.iter().copied());
        normalize_torsion(&mut self.torsion);
    }

    /// Adds the cyclic summands ℤ/d for each invariant d > 1.
    pub fn add_cyclic(&mut self, invariants: &[BigInt]) -> Result<(), AlgebraError> {
        for d in invariants {
            if d.is_one() {
                continue;
            }
            let d = d.to_u64().ok_or_else(|| AlgebraError::Overflow(d.to_string()))?;
            for (prime, exponent) in factor(d) {
                self.torsion.push(Torsion { prime, exponent, multiplicity: 1 });
            }
        }
        normalize_torsion(&mut self.torsion);
        Ok(())
    }
}

impl Entry {
    /// Display form, with ℚ written for free summands in rational mode.
    pub fn label(&self, mode: CoefficientMode) -> String {
        let s = self.to_string();
        match mode {
            CoefficientMode::Rational => s.replacen('Z', "Q", 1),
            CoefficientMode::Integral => s,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            let base = format!("Z{}", t.order());
            parts.push(if t.multiplicity == 1 { base } else { format!("{base}^{}", t.multiplicity) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

fn normalize_torsion(t: &mut Vec<Torsion>) {
    let mut merged: BTreeMap<(u64, u32), u32> = BTreeMap::new();
    for x in t.iter() {
        *merged.entry((x.prime, x.exponent)).or_default() += x.multiplicity;
    }
    *t = merged
        .into_iter()
        .filter(|&(_, m)| m > 0)
        .map(|((prime, exponent), multiplicity)| Torsion { prime, exponent, multiplicity })
        .collect();
}

pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

/// Finitely supported graded abelian group (or ℚ-vector space).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModuleRepr", into = "ModuleRepr")]
pub struct GradedModule {
    entries: BTreeMap<i64, Entry>,
    mode: CoefficientMode,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleRepr {
    #[serde(default)]
    mode: CoefficientMode,
    entries: Vec<DegreeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeRecord {
    degree: i64,
    #[serde(default)]
    free_rank: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    torsion: Vec<Torsion>,
}

impl TryFrom<ModuleRepr> for GradedModule {
    type Error = AlgebraError;

    fn try_from(r: ModuleRepr) -> Result<Self, AlgebraError> {
        let mut m = GradedModule::zero(r.mode);
        for rec in r.entries {
            let (deg, e) = (rec.degree, Entry { free_rank: rec.free_rank, torsion: rec.torsion });
            for t in &e.torsion {
                if r.mode == CoefficientMode::Rational {
                    return Err(AlgebraError::InvalidModule(format!(
                        "torsion at degree {deg} in a rational module"
                    )));
                }
                if !is_prime(t.prime) || t.exponent == 0 || t.multiplicity == 0 {
                    return Err(AlgebraError::InvalidModule(format!(
                        "bad torsion summand {t:?} at degree {deg}"
                    )));
                }
            }
            m.add_entry(deg, &e);
        }
        Ok(m)
    }
}

impl From<GradedModule> for ModuleRepr {
    fn from(m: GradedModule) -> Self {
        let entries = m
            .entries
            .into_iter()
            .map(|(degree, e)| DegreeRecord { degree, free_rank: e.free_rank, torsion: e.torsion })
            .collect();
        ModuleRepr { mode: m.mode, entries }
    }
}

impl GradedModule {
    pub fn zero(mode: CoefficientMode) -> Self {
        Self { entries: BTreeMap::new(), mode }
    }

    /// Rational module from (degree, rank) pairs; repeated degrees accumulate.
    pub fn from_ranks<I: IntoIterator<Item = (i64, u64)>>(ranks: I) -> Self {
        Self::free_with_mode(ranks, CoefficientMode::Rational)
    }

    pub fn free_with_mode<I: IntoIterator<Item = (i64, u64)>>(ranks: I, mode: CoefficientMode) -> Self {
        let mut m = Self::zero(mode);
        for (d, r) in ranks {
            m.add_entry(d, &Entry::free(r));
        }
        m
    }

    /// Rank one in degree 0.
    pub fn point(mode: CoefficientMode) -> Self {
        Self::free_with_mode([(0, 1)], mode)
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: CoefficientMode) -> Self {
        if mode == CoefficientMode::Rational {
            for e in self.entries.values_mut() {
                e.torsion.clear();
            }
            self.entries.retain(|_, e| !e.is_zero());
        }
        self.mode = mode;
        self
    }

    pub fn add_entry(&mut self, degree: i64, entry: &Entry) {
        if entry.is_zero() {
            return;
        }
        let mut entry = entry.clone();
        if self.mode == CoefficientMode::Rational {
            entry.torsion.clear();
            if entry.is_zero() {
                return;
            }
        }
        self.entries.entry(degree).or_default().add(&entry);
    }

    pub fn set_entry(&mut self, degree: i64, entry: Entry) {
        let mut entry = entry;
        if self.mode == CoefficientMode::Rational {
            entry.torsion.clear();
        }
        normalize_torsion(&mut entry.torsion);
        if entry.is_zero() {
            self.entries.remove(&degree);
        } else {
            self.entries.insert(degree, entry);
        }
    }

    pub fn entry(&self, degree: i64) -> Option<&Entry> {
        self.entries.get(&degree)
    }

    pub fn rank(&self, degree: i64) -> u64 {
        self.entries.get(&degree).map_or(0, |e| e.free_rank)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &Entry)> {
        self.entries.iter().map(|(&d, e)| (d, e))
    }

    /// Nonzero free ranks as (degree, rank).
    pub fn ranks(&self) -> Vec<(i64, u64)> {
        self.entries.iter().filter(|(_, e)| e.free_rank > 0).map(|(&d, e)| (d, e.free_rank)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|e| !e.torsion.is_empty())
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().map(|e| e.free_rank).sum()
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&d, e)| if d.rem_euclid(2) == 0 { e.free_rank as i64 } else { -(e.free_rank as i64) })
            .sum()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn shift(&self, by: i64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&d, e)| (d + by, e.clone())).collect(),
            mode: self.mode,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mode = self.combined_mode(other);
        let mut out = self.clone().with_mode(mode);
        for (d, e) in other.entries() {
            out.add_entry(d, e);
        }
        out
    }

    /// Künneth product. Over ℤ the Tor terms land one degree up.
    pub fn tensor(&self, other: &Self) -> Self {
        let mode = self.combined_mode(other);
        let mut out = Self::zero(mode);
        for (a, ea) in self.entries() {
            for (b, eb) in other.entries() {
                let mut e = Entry::free(ea.free_rank * eb.free_rank);
                if mode == CoefficientMode::Integral {
                    for t in &ea.torsion {
                        e.torsion.push(Torsion { multiplicity: t.multiplicity * eb.free_rank as u32, ..*t });
                    }
                    for t in &eb.torsion {
                        e.torsion.push(Torsion { multiplicity: t.multiplicity * ea.free_rank as u32, ..*t });
                    }
                    let mut tor = Entry::default();
                    for s in &ea.torsion {
                        for t in &eb.torsion {
                            if s.prime == t.prime {
                                let g = Torsion {
                                    prime: s.prime,
                                    exponent: s.exponent.min(t.exponent),
                                    multiplicity: s.multiplicity * t.multiplicity,
                                };
                                e.torsion.push(g);
                                tor.torsion.push(g);
                            }
                        }
                    }
                    normalize_torsion(&mut e.torsion);
                    normalize_torsion(&mut tor.torsion);
                    out.add_entry(a + b + 1, &tor);
                }
                out.add_entry(a + b, &e);
            }
        }
        out
    }

    /// Reflects degrees: i ↦ top - i (Poincaré duality over ℚ).
    pub fn reflect(&self, top: i64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&d, e)| (top - d, e.clone())).collect(),
            mode: self.mode,
        }
    }

    /// Drops one unit from degree 0 (reduced homology of a nonempty space).
    pub fn reduce(&self) -> Result<Self, AlgebraError> {
        if self.rank(0) == 0 {
            return Err(AlgebraError::InvalidModule("no degree-0 class to reduce".into()));
        }
        let mut out = self.clone();
        let mut e = out.entries[&0].clone();
        e.free_rank -= 1;
        out.set_entry(0, e);
        Ok(out)
    }

    /// Adds one unit to degree 0.
    pub fn unreduce(&self) -> Self {
        let mut out = self.clone();
        out.add_entry(0, &Entry::free(1));
        out
    }

    fn combined_mode(&self, other: &Self) -> CoefficientMode {
        if self.mode == CoefficientMode::Integral && other.mode == CoefficientMode::Integral {
            CoefficientMode::Integral
        } else {
            CoefficientMode::Rational
        }
    }
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.entries.iter().map(|(d, e)| format!("{d}:{}", e.label(self.mode))).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_merges_and_factors() {
        let mut e = Entry::default();
        e.add_cyclic(&[BigInt::from(2), BigInt::from(12), BigInt::from(1)]).unwrap();
        assert_eq!(
            e.torsion,
            vec![
                Torsion { prime: 2, exponent: 1, multiplicity: 1 },
                Torsion { prime: 2, exponent: 2, multiplicity: 1 },
                Torsion { prime: 3, exponent: 1, multiplicity: 1 },
            ]
        );
    }

    #[test]
    fn integral_kunneth_tor_term() {
        let mut a = GradedModule::zero(CoefficientMode::Integral);
        a.set_entry(1, Entry { free_rank: 0, torsion: vec![Torsion { prime: 2, exponent: 1, multiplicity: 1 }] });
        let p = a.tensor(&a);
        // Z2 ⊗ Z2 in degree 2, Tor in degree 3
        assert_eq!(p.entry(2).unwrap().torsion.len(), 1);
        assert_eq!(p.entry(3).unwrap().torsion.len(), 1);
    }

    #[test]
    fn rational_rejects_torsion_on_parse() {
        let s = r#"{"mode":"rational","entries":[{"degree":1,"torsion":[{"prime":2,"exponent":1,"multiplicity":1}]}]}"#;
        assert!(serde_json::from_str::<GradedModule>(s).is_err());
        let s = r#"{"mode":"integral","entries":[{"degree":1,"torsion":[{"prime":4,"exponent":1,"multiplicity":1}]}]}"#;
        assert!(serde_json::from_str::<GradedModule>(s).is_err());
    }

    #[test]
    fn negative_degrees_survive_shift_and_serde() {
        let m = GradedModule::from_ranks([(-1, 1), (3, 2)]);
        let back: GradedModule = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.shift(1).rank(0), 1);
        assert_eq!(m.euler_characteristic(), -3);
    }
}
