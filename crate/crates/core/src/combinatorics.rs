//! Partitions (Young diagrams) with 1-indexed cell statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("parts must be positive and non-increasing: {0:?}")]
    NotAPartition(Vec<u32>),
    #[error("cell ({i}, {j}) is outside the diagram")]
    CellOutOfDiagram { i: usize, j: usize },
}

/// A Young diagram, serialized as the JSON array of its parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = CombinatoricsError;
    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

/// Arm, leg and hook length of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellStats {
    pub arm: i64,
    pub leg: i64,
    pub hook: i64,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, CombinatoricsError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(CombinatoricsError::NotAPartition(parts))
        }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` for 1-indexed `i`, zero outside the diagram.
    pub fn part(&self, i: usize) -> i64 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).map_or(0, |&p| p as i64)
    }

    /// `λ′_j` for 1-indexed `j`, zero outside the diagram.
    pub fn conj_part(&self, j: usize) -> i64 {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&p| p as usize >= j).count() as i64
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.parts.first().copied().unwrap_or(0) as usize;
        Partition { parts: (1..=w).map(|j| self.conj_part(j) as u32).collect() }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && self.part(i) >= j as i64
    }

    pub fn cell_stats(&self, i: usize, j: usize) -> Result<CellStats, CombinatoricsError> {
        if !self.contains(i, j) {
            return Err(CombinatoricsError::CellOutOfDiagram { i, j });
        }
        let arm = self.part(i) - j as i64;
        let leg = self.conj_part(j) - i as i64;
        Ok(CellStats { arm, leg, hook: arm + leg + 1 })
    }

    /// Cells `(i, j)` row by row, 1-indexed.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (1..=p as usize).map(move |j| (i + 1, j)))
    }

    pub fn hook_product(&self) -> u128 {
        self.cells().map(|(i, j)| self.cell_stats(i, j).unwrap().hook as u128).product()
    }

    /// Multiplicity of each part value `k` as `(k, m_k)`.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((k, m)) if *k == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse-lexicographic order: `(n)` first, `(1^n)` last.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rem: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for k in (1..=rem.min(max)).rev() {
        cur.push(k as u32);
        fill(rem - k, k, cur, out);
        cur.pop();
    }
}

/// Partitions of `n` whose parts all lie in `allowed`, in reverse-lexicographic order.
pub fn partitions_with_parts(n: usize, allowed: &[u32]) -> Vec<Partition> {
    enumerate_partitions(n).into_iter().filter(|p| p.parts.iter().all(|x| allowed.contains(x))).collect()
}
