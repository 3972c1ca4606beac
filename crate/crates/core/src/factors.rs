//! Factor languages of fixed points, computed by monotone closure.
//!
//! Starting from the factors of a seed `σ^{m₀}(start)` with `|σ^{m₀}(start)| ≥ L`,
//! the set of length-`L` factors is closed under "take every length-`L`
//! window of `σ(w)`". Each length-`L` window of `σ^{m+1}(start)` lies inside
//! `σ(u)` for some length-`L` factor `u` of `σ^m(start)` because every letter
//! image is nonempty, so the stabilized set is exactly the set of length-`L`
//! factors of the fixed point. Shorter factors are the sub-factors of those.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::substitution::Word;
use crate::system::MorphicSystem;

/// Upper bound on the number of raw factors of the top length.
pub const DEFAULT_MAX_FACTORS: usize = 1 << 22;

/// Coded factors of a fixed point, grouped by length `1..=max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    max_len: usize,
    by_len: Vec<BTreeSet<Vec<u8>>>,
    rounds: usize,
    stabilized: bool,
}

impl FactorSet {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of closure rounds until no new factor appeared.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    /// Factors of exactly `len` letters (empty set when `len` is out of range).
    pub fn of_len(&self, len: usize) -> &BTreeSet<Vec<u8>> {
        static EMPTY: BTreeSet<Vec<u8>> = BTreeSet::new();
        if len == 0 || len > self.max_len {
            &EMPTY
        } else {
            &self.by_len[len - 1]
        }
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        w.is_empty() || self.of_len(w.len()).contains(w)
    }

    pub fn len(&self) -> usize {
        self.by_len.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.by_len.iter().flatten()
    }
}

pub fn factors_upto(system: &MorphicSystem, max_len: usize) -> Result<FactorSet> {
    factors_upto_capped(system, max_len, DEFAULT_MAX_FACTORS)
}

pub fn factors_upto_capped(
    system: &MorphicSystem,
    max_len: usize,
    max_factors: usize,
) -> Result<FactorSet> {
    if max_len == 0 {
        return Err(Error::OutOfRange("factor length 0".into()));
    }
    let sub = system.substitution();
    if sub.rules().iter().any(Vec::is_empty) {
        // unreachable for validated systems, kept for the soundness argument
        return Err(Error::InvalidSystem("erasing substitution".into()));
    }
    let m0 = system.depth_for(max_len);
    let seed_len = sub.image_len(system.start(), m0);
    let seed_cap = (max_len as u128).saturating_mul(sub.max_rule_len() as u128 + 1);
    if seed_len > seed_cap.max(1 << 20) {
        return Err(Error::ResourceLimit {
            what: "factor seed length",
            needed: seed_len,
            limit: seed_cap.max(1 << 20),
        });
    }
    let seed: Word = system.fixed_point().take(seed_len as usize).collect();

    let mut raw: HashSet<Word> = HashSet::new();
    let mut frontier: Vec<Word> = Vec::new();
    for win in seed.windows(max_len) {
        if raw.insert(win.to_vec()) {
            frontier.push(win.to_vec());
        }
    }

    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for w in &frontier {
            let image = sub.apply(w)?;
            for win in image.windows(max_len) {
                if !raw.contains(win) {
                    raw.insert(win.to_vec());
                    next.push(win.to_vec());
                }
            }
            if raw.len() > max_factors {
                return Err(Error::ResourceLimit {
                    what: "factor count",
                    needed: raw.len() as u128,
                    limit: max_factors as u128,
                });
            }
        }
        frontier = next;
    }

    let mut by_len = vec![BTreeSet::new(); max_len];
    for w in &raw {
        let coded = system.code_word(w);
        for len in 1..=max_len {
            for win in coded.windows(len) {
                if !by_len[len - 1].contains(win) {
                    by_len[len - 1].insert(win.to_vec());
                }
            }
        }
    }

    Ok(FactorSet {
        max_len,
        by_len,
        rounds,
        stabilized: true,
    })
}

/// Left contexts of a coded word in the factor language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftExtensions {
    /// Every length-`k` word `u` such that `u·w` is a factor.
    pub contexts: BTreeSet<Vec<u8>>,
    /// `w` also occurs at the start of the fixed point with fewer than `k`
    /// letters before it.
    pub boundary: bool,
}

pub fn left_extensions(system: &MorphicSystem, w: &[u8], k: usize) -> Result<LeftExtensions> {
    let total = w.len() + k;
    if total == 0 {
        return Err(Error::OutOfRange("empty word with empty context".into()));
    }
    let factors = factors_upto(system, total)?;
    let contexts = factors
        .of_len(total)
        .iter()
        .filter(|f| &f[k..] == w)
        .map(|f| f[..k].to_vec())
        .collect();
    let boundary = if k == 0 || w.is_empty() {
        false
    } else {
        let head = system.prefix(k + w.len() - 1);
        head.windows(w.len()).any(|win| win == w)
    };
    Ok(LeftExtensions { contexts, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    /// Brute-force scan of the factors of a long prefix.
    fn scanned(system: &MorphicSystem, prefix_len: usize, max_len: usize) -> BTreeSet<Vec<u8>> {
        let p = system.prefix(prefix_len);
        (1..=max_len)
            .flat_map(|l| p.windows(l).map(<[u8]>::to_vec).collect::<Vec<_>>())
            .collect()
    }

    #[test]
    fn fibonacci_has_no_11() {
        let f = factors_upto(&MorphicSystem::fibonacci(), 2).unwrap();
        let all: BTreeSet<Vec<u8>> = f.iter().cloned().collect();
        let expected: BTreeSet<Vec<u8>> =
            ["0", "1", "00", "01", "10"].iter().map(|s| bits(s)).collect();
        assert_eq!(all, expected);
        assert_eq!(all, scanned(&MorphicSystem::fibonacci(), 100, 2));
        assert!(f.stabilized());
    }

    #[test]
    fn von_neumann_forbidden_words() {
        let vn = MorphicSystem::von_neumann();
        let f3 = factors_upto(&vn, 3).unwrap();
        assert!(!f3.contains(&bits("010")));
        assert!(!f3.contains(&bits("111")));
        assert!(f3.contains(&bits("110")));
        let f6 = factors_upto(&vn, 6).unwrap();
        assert!(!f6.contains(&bits("101101")));
    }

    #[test]
    fn closure_agrees_with_long_scans() {
        for sys in MorphicSystem::builtins() {
            for l in [1, 4, 9, 14] {
                let closure: BTreeSet<Vec<u8>> =
                    factors_upto(&sys, l).unwrap().iter().cloned().collect();
                let found = scanned(&sys, 10 * l, l);
                assert!(found.is_subset(&closure), "{} L={l}", sys.name());
            }
        }
    }

    #[test]
    fn closed_under_subfactors() {
        let f = factors_upto(&MorphicSystem::von_neumann(), 10).unwrap();
        for w in f.iter() {
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    assert!(f.contains(&w[i..j]));
                }
            }
        }
    }

    #[test]
    fn von_neumann_unique_left_contexts() {
        let vn = MorphicSystem::von_neumann();
        let e = left_extensions(&vn, &bits("11"), 1).unwrap();
        assert_eq!(e.contexts, BTreeSet::from([bits("0")]));
        assert!(e.boundary);
        let e = left_extensions(&vn, &bits("101"), 3).unwrap();
        assert_eq!(e.contexts, BTreeSet::from([bits("001")]));
        let e = left_extensions(&vn, &bits("10110"), 2).unwrap();
        assert_eq!(e.contexts, BTreeSet::from([bits("01")]));
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(factors_upto(&MorphicSystem::fibonacci(), 0).is_err());
    }
}
