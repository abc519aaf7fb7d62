//! Integer wave vectors and the lattice shells `{k ∈ ℤ³ : |k|² = n}`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A lattice wave vector `k ∈ ℤ³`.
///
/// Ordering is lexicographic on `(k₁, k₂, k₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WaveVector(pub [i32; 3]);

impl WaveVector {
    pub const ZERO: WaveVector = WaveVector([0, 0, 0]);

    pub const fn new(k1: i32, k2: i32, k3: i32) -> Self {
        WaveVector([k1, k2, k3])
    }

    /// Unit lattice vector along `axis`.
    pub fn unit(axis: usize) -> Self {
        let mut k = [0; 3];
        k[axis] = 1;
        WaveVector(k)
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|&c| i64::from(c) * i64::from(c)).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Max-norm `|k|∞`, the quantity bounded by a truncation radius.
    pub fn inf_norm(&self) -> u32 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// True for the canonical member of a `±k` pair: the zero vector, or
    /// a vector whose first nonzero component is positive.
    pub fn is_representative(&self) -> bool {
        match self.0.iter().find(|&&c| c != 0) {
            None => true,
            Some(&c) => c > 0,
        }
    }

    /// The representative of `{k, −k}`.
    pub fn representative(&self) -> Self {
        if self.is_representative() {
            *self
        } else {
            -*self
        }
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [self.0[0] as f64, self.0[1] as f64, self.0[2] as f64]
    }

    /// `k · x` for a physical point.
    pub fn dot(&self, x: &[f64; 3]) -> f64 {
        self.0[0] as f64 * x[0] + self.0[1] as f64 * x[1] + self.0[2] as f64 * x[2]
    }

    pub fn is_parallel_to(&self, other: &WaveVector) -> bool {
        let [a1, a2, a3] = self.0.map(i64::from);
        let [b1, b2, b3] = other.0.map(i64::from);
        a2 * b3 - a3 * b2 == 0 && a3 * b1 - a1 * b3 == 0 && a1 * b2 - a2 * b1 == 0
    }
}

impl Neg for WaveVector {
    type Output = WaveVector;
    fn neg(self) -> WaveVector {
        WaveVector(self.0.map(|c| -c))
    }
}

impl Add for WaveVector {
    type Output = WaveVector;
    fn add(self, o: WaveVector) -> WaveVector {
        WaveVector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for WaveVector {
    type Output = WaveVector;
    fn sub(self, o: WaveVector) -> WaveVector {
        self + (-o)
    }
}

impl fmt::Display for WaveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// All wave vectors with `|k|² = n`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenShell {
    pub n: u32,
    pub vectors: Vec<WaveVector>,
}

impl EigenShell {
    /// `N_λ`, the dimension of the curl eigenspace with eigenvalue `√n`.
    pub fn multiplicity(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The eigenvalue `λ = √n`.
    pub fn eigenvalue(&self) -> f64 {
        f64::from(self.n).sqrt()
    }

    /// One representative per `±k` pair, in lexicographic order.
    pub fn representatives(&self) -> Vec<WaveVector> {
        self.vectors
            .iter()
            .copied()
            .filter(|k| k.is_representative() && !k.is_zero())
            .collect()
    }
}

/// Smallest integer `r` with `r² ≥ n`.
pub fn ceil_sqrt(n: u32) -> u32 {
    let mut r = f64::from(n).sqrt() as u32;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Enumerates the lattice shell `|k|² = n` inside the box `|k|∞ ≤ ⌈√n⌉`.
pub fn lattice_shell(n: u32) -> EigenShell {
    let r = ceil_sqrt(n) as i32;
    let target = i64::from(n);
    let mut vectors = Vec::new();
    for k1 in -r..=r {
        for k2 in -r..=r {
            for k3 in -r..=r {
                let k = WaveVector::new(k1, k2, k3);
                if k.norm_sq() == target {
                    vectors.push(k);
                }
            }
        }
    }
    // Loop order already yields lexicographic order.
    EigenShell { n, vectors }
}

/// The residue-class rule for admissible eigenvalues: `n mod 8 ∈ {1, 2, 3, 5, 6}`.
pub fn mod8_admissible(n: u32) -> bool {
    matches!(n % 8, 1 | 2 | 3 | 5 | 6)
}

/// Both admissibility predicates for a shell index, reported side by side.
///
/// They disagree on `n ≡ 0, 4 (mod 8)` whenever the shell is nonempty
/// (for instance `n = 4`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub n: u32,
    pub mod8_rule: bool,
    pub shell_nonempty: bool,
    pub multiplicity: usize,
}

impl Admissibility {
    pub fn of(n: u32) -> Self {
        let shell = lattice_shell(n);
        Admissibility {
            n,
            mod8_rule: mod8_admissible(n),
            shell_nonempty: !shell.is_empty(),
            multiplicity: shell.multiplicity(),
        }
    }

    pub fn predicates_agree(&self) -> bool {
        self.mod8_rule == self.shell_nonempty
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(n: u32) -> usize {
        let r = 11;
        let mut count = 0;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    if a * a + b * b + c * c == n as i32 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn unit_shell_has_six_vectors() {
        let shell = lattice_shell(1);
        assert_eq!(shell.multiplicity(), 6);
        assert_eq!(shell.representatives().len(), 3);
    }

    #[test]
    fn shell_two_has_twelve_vectors() {
        assert_eq!(lattice_shell(2).multiplicity(), 12);
    }

    #[test]
    fn shell_seven_is_empty() {
        assert!(lattice_shell(7).is_empty());
        assert!(!mod8_admissible(7));
    }

    #[test]
    fn multiplicities_match_brute_force_up_to_100() {
        for n in 0..=100 {
            assert_eq!(lattice_shell(n).multiplicity(), brute_force_count(n), "n = {n}");
        }
    }

    #[test]
    fn shells_are_sorted_and_closed_under_negation() {
        for n in 1..=50 {
            let shell = lattice_shell(n);
            assert!(shell.vectors.windows(2).all(|w| w[0] < w[1]));
            for k in &shell.vectors {
                assert!(shell.vectors.contains(&-*k));
            }
        }
    }

    #[test]
    fn mod8_rule_and_shell_disagree_at_four() {
        let adm = Admissibility::of(4);
        assert!(!adm.mod8_rule);
        assert!(adm.shell_nonempty);
        assert_eq!(adm.multiplicity, 6);
        assert!(!adm.predicates_agree());
        assert!(Admissibility::of(1).predicates_agree());
    }

    #[test]
    fn representative_picks_positive_leading_component() {
        assert!(WaveVector::new(0, 1, -3).is_representative());
        assert!(!WaveVector::new(0, -1, 3).is_representative());
        assert_eq!(WaveVector::new(-1, 2, 0).representative(), WaveVector::new(1, -2, 0));
        assert!(WaveVector::ZERO.is_representative());
    }

    #[test]
    fn ceil_sqrt_is_exact() {
        for n in 0..2000u32 {
            let r = ceil_sqrt(n);
            assert!(r * r >= n);
            assert!(r == 0 || (r - 1) * (r - 1) < n);
        }
    }
}
