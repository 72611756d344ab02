//! The index sets `I_j` of tuples with entries at least 3.

use serde::{Deserialize, Serialize};

/// A tuple `γ = (γ_1, …, γ_r)` with every entry at least 3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndexGamma {
    entries: Vec<u32>,
}

impl MultiIndexGamma {
    /// Builds a tuple, rejecting entries below 3 or an empty tuple.
    pub fn new(entries: Vec<u32>) -> Option<Self> {
        if entries.is_empty() || entries.iter().any(|&e| e < 3) {
            return None;
        }
        Some(Self { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// `|γ|`, the sum of the entries.
    pub fn weight(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// The `j` with `γ ∈ I_j`, namely `|γ| − 2·rank(γ)`.
    pub fn order(&self) -> u32 {
        self.weight() - 2 * self.rank() as u32
    }
}

/// All `γ` with entries ≥ 3 and `|γ| = j + 2·rank(γ)`, in lexicographic order.
///
/// These correspond to compositions of `j` shifted by 2, so `|I_j| = 2^{j−1}`.
#[allow(non_snake_case)]
pub fn index_set_I(j: u32) -> Vec<MultiIndexGamma> {
    let mut out = Vec::new();
    if j == 0 {
        return out;
    }
    let mut cur = Vec::new();
    fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndexGamma>) {
        if rem == 0 {
            out.push(MultiIndexGamma { entries: cur.clone() });
            return;
        }
        for part in 1..=rem {
            cur.push(part + 2);
            rec(rem - part, cur, out);
            cur.pop();
        }
    }
    rec(j, &mut cur, &mut out);
    out.sort();
    out
}
