//! Small linear systems over F_p in the column order of coefficient vectors.
//!
//! Column c carries weight p^c, so a solution with digits (s_c) is the
//! coefficient vector with index Σ s_c p^c.

/// Rows of a homogeneous system; over F_2 each row is a bit mask.
#[derive(Clone, Debug)]
pub enum Rows {
    Gf2(Vec<u64>),
    Modp(Vec<Vec<u8>>),
}

#[derive(Clone, Debug)]
pub struct System {
    pub p: u32,
    pub cols: usize,
    pub rows: Rows,
}

/// A basis of the solution space.
#[derive(Clone, Debug)]
pub enum Kernel {
    Gf2(Vec<u64>),
    Modp { p: u32, basis: Vec<Vec<u8>> },
}

impl System {
    /// Empty system; `cols` ≤ 64 over F_2.
    pub fn new(p: u32, cols: usize) -> Self {
        let rows = if p == 2 {
            assert!(cols <= 64);
            Rows::Gf2(Vec::new())
        } else {
            Rows::Modp(Vec::new())
        };
        Self { p, cols, rows }
    }

    pub fn push(&mut self, row: &[u32]) {
        match &mut self.rows {
            Rows::Gf2(r) => r.push(row.iter().enumerate().fold(0, |m, (i, &v)| m | (((v & 1) as u64) << i))),
            Rows::Modp(r) => r.push(row.iter().map(|&v| v as u8).collect()),
        }
    }

    /// Whether the coefficient vector with the given index solves every row.
    pub fn is_solution(&self, index: u64, digits: &[u8]) -> bool {
        match &self.rows {
            Rows::Gf2(rows) => rows.iter().all(|r| (r & index).count_ones() % 2 == 0),
            Rows::Modp(rows) => rows.iter().all(|r| {
                r.iter().zip(digits).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % self.p == 0
            }),
        }
    }

    pub fn kernel(&self) -> Kernel {
        match &self.rows {
            Rows::Gf2(rows) => Kernel::Gf2(kernel_gf2(rows, self.cols)),
            Rows::Modp(rows) => Kernel::Modp { p: self.p, basis: kernel_modp(rows, self.cols, self.p) },
        }
    }
}

fn kernel_gf2(rows: &[u64], cols: usize) -> Vec<u64> {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let bit = 1u64 << c;
        let Some(i) = (r..m.len()).find(|&i| m[i] & bit != 0) else { continue };
        m.swap(r, i);
        let pivot = m[r];
        for (j, row) in m.iter_mut().enumerate() {
            if j != r && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u64 << free;
            for (row, &pc) in m.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            v
        })
        .collect()
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).unwrap()
}

fn kernel_modp(rows: &[Vec<u8>], cols: usize, p: u32) -> Vec<Vec<u8>> {
    let mut m: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&v| v as u32).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, i);
        let inv = inverse_mod(m[r][c], p);
        m[r].iter_mut().for_each(|v| *v = *v * inv % p);
        let pivot = m[r].clone();
        for (j, row) in m.iter_mut().enumerate() {
            let f = row[c];
            if j != r && f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = ((p - row[free]) % p) as u8;
            }
            v
        })
        .collect()
}

impl Kernel {
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Gf2(b) => b.len(),
            Kernel::Modp { basis, .. } => basis.len(),
        }
    }

    /// Indices of all solutions.
    pub fn indices(&self) -> Vec<u64> {
        match self {
            Kernel::Gf2(basis) => {
                let mut out = vec![0u64];
                for &b in basis {
                    let extra: Vec<u64> = out.iter().map(|&v| v ^ b).collect();
                    out.extend(extra);
                }
                out
            }
            Kernel::Modp { p, basis } => {
                let Some(first) = basis.first() else { return vec![0] };
                let mut out = vec![vec![0u8; first.len()]];
                for b in basis {
                    let mut next = Vec::with_capacity(out.len() * *p as usize);
                    for v in &out {
                        for s in 0..*p {
                            next.push(v.iter().zip(b).map(|(&x, &y)| ((x as u32 + s * y as u32) % p) as u8).collect());
                        }
                    }
                    out = next;
                }
                out.iter().map(|v| v.iter().rev().fold(0u64, |acc, &d| acc * *p as u64 + d as u64)).collect()
            }
        }
    }
}

/// Base-p digits of an index, least significant first.
pub fn digits(mut index: u64, p: u32, cols: usize) -> Vec<u8> {
    (0..cols)
        .map(|_| {
            let d = (index % p as u64) as u8;
            index /= p as u64;
            d
        })
        .collect()
}
