//! Weight encodings and tests on them.
//!
//! A weight is stored as a rho-shifted integer n-tuple with a block cut `p`,
//! normalized so that the minimal entry is zero (the tuple is defined only up
//! to a common constant, and the minimum is the one normalization preserved
//! by permutations). Dominance becomes strict monotonicity, the grading
//! element acts through an exact rational functional, and the sorted
//! multiset of entries is a complete key for the infinitesimal character.
//!
//! Text syntax, bit-exact: whitespace-separated integers with a single `|`
//! at the block cut, e.g. `3 2 | 1 0`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Rat, Result};

/// A rho-shifted weight: integer n-tuple plus block cut, minimum entry zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    entries: Vec<i64>,
    p: usize,
}

/// Sorted-multiset key: two weights have the same infinitesimal character
/// exactly when their keys coincide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfCharKey(Vec<i64>);

impl Weight {
    /// Builds a weight, normalizing the entries to minimum zero.
    pub fn new(entries: Vec<i64>, p: usize) -> Result<Self> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::invalid("weight tuple needs at least two entries"));
        }
        if p == 0 || p >= n {
            return Err(Error::invalid(format!(
                "block cut p={p} must satisfy 1 <= p <= {}",
                n - 1
            )));
        }
        let min = *entries.iter().min().expect("nonempty");
        let entries = entries.into_iter().map(|a| a - min).collect();
        Ok(Weight { entries, p })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.n() - self.p
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn block1(&self) -> &[i64] {
        &self.entries[..self.p]
    }

    pub fn block2(&self) -> &[i64] {
        &self.entries[self.p..]
    }

    /// Strictly decreasing inside each block.
    pub fn is_p_dominant(&self) -> bool {
        strictly_decreasing(self.block1()) && strictly_decreasing(self.block2())
    }

    /// Strictly decreasing overall.
    pub fn is_g_dominant(&self) -> bool {
        strictly_decreasing(&self.entries)
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] >= w[1])
    }

    /// Scalar action of the grading element:
    /// `(q/n) * sum(block 1) - (p/n) * sum(block 2)`, independent of the
    /// normalization constant.
    pub fn e_action(&self) -> Rat {
        let n = self.n() as i64;
        let p = self.p as i64;
        let q = n - p;
        let s1: i64 = self.block1().iter().sum();
        let s2: i64 = self.block2().iter().sum();
        Rat::new((q * s1 - p * s2).into(), n.into())
    }

    /// Number of coincidences in the entry multiset: n minus the number of
    /// distinct entries. Zero means regular.
    pub fn singularity_level(&self) -> usize {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        sorted.dedup();
        self.n() - sorted.len()
    }

    pub fn inf_char_key(&self) -> InfCharKey {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        InfCharKey(sorted)
    }

    /// Same tuple entries rearranged by a position map: entry `i` of the
    /// result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Weight> {
        if perm.len() != self.n() {
            return Err(Error::invalid("permutation length mismatch"));
        }
        let entries = perm.iter().map(|&i| self.entries[i]).collect();
        Weight::new(entries, self.p)
    }
}

fn strictly_decreasing(xs: &[i64]) -> bool {
    xs.windows(2).all(|w| w[0] > w[1])
}

/// Converts Dynkin labels of a weight lambda (length n-1, possibly negative
/// over the crossed node) to the rho-shifted tuple: consecutive differences
/// are `label + 1`.
pub fn dynkin_to_tuple(labels: &[i64], p: usize) -> Result<Weight> {
    let n = labels.len() + 1;
    let mut entries = vec![0i64; n];
    for i in (0..n - 1).rev() {
        entries[i] = entries[i + 1] + labels[i] + 1;
    }
    Weight::new(entries, p)
}

/// Inverse of [`dynkin_to_tuple`]: consecutive differences minus one.
pub fn tuple_to_dynkin(w: &Weight) -> Vec<i64> {
    w.entries()
        .windows(2)
        .map(|pair| pair[0] - pair[1] - 1)
        .collect()
}

/// Whether two weights lie in one affine Weyl orbit, i.e. share their
/// infinitesimal character. Errors on mismatched n or p.
pub fn same_inf_char(a: &Weight, b: &Weight) -> Result<bool> {
    if a.n() != b.n() || a.p() != b.p() {
        return Err(Error::invalid(format!(
            "weights live in different settings: n={}/{} p={}/{}",
            a.n(),
            b.n(),
            a.p(),
            b.p()
        )));
    }
    Ok(a.inf_char_key() == b.inf_char_key())
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_block = |xs: &[i64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} | {}", fmt_block(self.block1()), fmt_block(self.block2()))
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 2 {
            return Err(Error::invalid(format!(
                "weight `{s}` must contain exactly one `|`"
            )));
        }
        let parse_block = |block: &str| -> Result<Vec<i64>> {
            block
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::invalid(format!("bad weight entry `{tok}`")))
                })
                .collect()
        };
        let b1 = parse_block(parts[0])?;
        let b2 = parse_block(parts[1])?;
        if b1.is_empty() || b2.is_empty() {
            return Err(Error::invalid(format!("weight `{s}` has an empty block")));
        }
        let p = b1.len();
        let mut entries = b1;
        entries.extend(b2);
        Weight::new(entries, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::inverse_cartan_row;
    use crate::rint;
    use num::Zero;
    use proptest::prelude::*;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn dynkin_round_trip_examples() {
        assert_eq!(dynkin_to_tuple(&[0, 0, 0], 2).unwrap(), w("3 2 | 1 0"));
        assert_eq!(
            dynkin_to_tuple(&[0, 0, 0, 0, 0], 3).unwrap(),
            w("5 4 3 | 2 1 0")
        );
        assert_eq!(dynkin_to_tuple(&[0], 1).unwrap(), w("1 | 0"));
        assert_eq!(tuple_to_dynkin(&w("3 2 | 1 0")), vec![0, 0, 0]);
        assert_eq!(tuple_to_dynkin(&w("3 1 | 2 0")), vec![1, -2, 1]);
        assert_eq!(tuple_to_dynkin(&w("2 1 | 1 0")), vec![0, -1, 0]);
    }

    #[test]
    fn dominance_flags() {
        assert!(w("3 1 | 2 0").is_p_dominant());
        assert!(!w("3 1 | 2 0").is_g_dominant());
        assert!(!w("1 1 | 2 0").is_p_dominant());
        assert!(w("2 1 | 1 0").is_p_dominant());
        assert!(w("3 2 | 1 0").is_g_dominant());
    }

    #[test]
    fn e_action_examples() {
        assert_eq!(w("3 2 | 1 0").e_action(), rint(2));
        assert_eq!(w("4 3 | 2 1 0").e_action(), rint(3));
        assert_eq!(w("1 0 | 3 2").e_action(), rint(-2));
    }

    #[test]
    fn e_action_shift_invariant() {
        let base = w("4 1 | 3 0");
        for c in [-3i64, 1, 7] {
            let shifted: Vec<i64> = base.entries().iter().map(|a| a + c).collect();
            let ws = Weight::new(shifted, 2).unwrap();
            assert_eq!(ws.e_action(), base.e_action());
        }
    }

    #[test]
    fn inf_char_examples() {
        assert!(same_inf_char(&w("3 2 | 1 0"), &w("1 0 | 3 2")).unwrap());
        assert!(!same_inf_char(&w("3 2 | 1 0"), &w("4 2 | 1 0")).unwrap());
        assert!(same_inf_char(&w("2 1 | 1 0"), &w("1 0 | 2 1")).unwrap());
        assert!(same_inf_char(&w("3 2 | 1 0"), &w("3 2 1 | 0")).is_err());
    }

    #[test]
    fn singularity_levels() {
        assert_eq!(w("3 2 | 1 0").singularity_level(), 0);
        assert_eq!(w("2 1 | 1 0").singularity_level(), 1);
        assert_eq!(w("1 1 | 0 0").singularity_level(), 2);
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["3 2 | 1 0", "2 1 | 1 0", "5 4 3 | 2 1 0", "0 | 1"] {
            let parsed = w(s);
            assert_eq!(parsed.to_string().parse::<Weight>().unwrap(), parsed);
        }
        // Printer output is canonical for normalized weights.
        assert_eq!(w("3 2 | 1 0").to_string(), "3 2 | 1 0");
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!("3 2 1 0".parse::<Weight>().is_err());
        assert!("3 | 2 | 1".parse::<Weight>().is_err());
        assert!("a b | 1 0".parse::<Weight>().is_err());
        assert!(" | 1 0".parse::<Weight>().is_err());
    }

    #[test]
    fn normalization_subtracts_min() {
        let weight = Weight::new(vec![5, 3, 4, 2], 2).unwrap();
        assert_eq!(weight.entries(), &[3, 1, 2, 0]);
    }

    #[test]
    fn e_action_matches_inverse_cartan_pairing() {
        // e(labels) - e(0) equals the inverse-Cartan row dotted with the
        // labels, exhaustively over small label boxes.
        for n in 2..=6usize {
            for p in 1..n {
                let icr = inverse_cartan_row(n, p).unwrap();
                let zero = dynkin_to_tuple(&vec![0; n - 1], p).unwrap();
                let mut labels = vec![0i64; n - 1];
                for trial in 0..200u64 {
                    let mut state = trial.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(n as u64);
                    for l in labels.iter_mut() {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        *l = (state % 7) as i64 - 3;
                    }
                    let tup = dynkin_to_tuple(&labels, p).unwrap();
                    let mut dot = Rat::zero();
                    for (c, l) in icr.iter().zip(&labels) {
                        dot += c * rint(*l);
                    }
                    assert_eq!(tup.e_action() - zero.e_action(), dot, "n={n} p={p} {labels:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dynkin_tuple_round_trip(labels in proptest::collection::vec(-4i64..6, 1..8), seed in 0usize..100) {
            let n = labels.len() + 1;
            let p = 1 + seed % (n - 1).max(1);
            let tup = dynkin_to_tuple(&labels, p).unwrap();
            prop_assert_eq!(tuple_to_dynkin(&tup), labels);
        }

        #[test]
        fn inf_char_is_permutation_invariant(entries in proptest::collection::vec(0i64..9, 4), swap in 0usize..4) {
            let a = Weight::new(entries.clone(), 2).unwrap();
            let mut permuted = entries;
            let other = (swap + 1) % 4;
            permuted.swap(swap, other);
            let b = Weight::new(permuted, 2).unwrap();
            prop_assert!(same_inf_char(&a, &b).unwrap());
        }
    }
}
