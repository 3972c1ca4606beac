//! Thue–Morse diagonal words: the doubling recursions, purity of the
//! power-of-two diagonals, the closed-form complements and the red/green
//! structure of `τⁿ`-blocks.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::product2d::{
    block_diagonal_profile, diagonal_in, product, DiagonalLabel, PairLetter,
};
use crate::sumset::{complement_upto, SumsetKind, SumsetQuery};
use crate::system::{IndexBase, MorphicSystem};

const ABCD: [PairLetter; 4] = [PairLetter::A, PairLetter::B, PairLetter::C, PairLetter::D];

/// `ij ↦ (i, 1−j)(1−i, j)`, i.e. `a↦bc, b↦ad, c↦da, d↦cb`.
pub fn sigma_diag(w: &[PairLetter]) -> Vec<PairLetter> {
    let mut out = Vec::with_capacity(2 * w.len());
    for p in w {
        out.push(PairLetter::new(p.first, 1 - p.second));
        out.push(PairLetter::new(1 - p.first, p.second));
    }
    out
}

/// `(ij, i'j') ↦ ij'` applied to every pair of adjacent letters, so a word
/// of length `m` maps to one of length `m−1`.
pub fn beta_diag(w: &[PairLetter]) -> Result<Vec<PairLetter>> {
    if w.len() % 2 == 1 {
        return Err(Error::OddLength(w.len()));
    }
    Ok(w.windows(2)
        .map(|pair| PairLetter::new(pair[0].first, pair[1].second))
        .collect())
}

/// First failure of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: u64,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub checked: u64,
    pub failure: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {} ({} cases)", self.name, self.checked),
            Some(c) => write!(
                f,
                "FAIL {} at n={}: expected {} found {}",
                self.name, c.n, c.expected, c.found
            ),
        }
    }
}

fn words(w: &[PairLetter]) -> String {
    w.iter().map(ToString::to_string).collect()
}

/// Checks `d_{2n} = σ(d_n)` and `d_{2n+1} = β(d_{2n+2})` for `1 ≤ n ≤ n_max`,
/// with every diagonal read directly from the Thue–Morse word.
pub fn verify_recursions(n_max: u64) -> Result<[CheckReport; 2]> {
    if n_max == 0 {
        return Err(Error::OutOfRange("n_max 0".into()));
    }
    let tm = MorphicSystem::thue_morse();
    let word = tm.indexed_prefix(2 * n_max + 2);
    let d = |n: u64| diagonal_in(&word, IndexBase::Zero, n).letters;

    let doubling = (1..=n_max).into_par_iter().find_first(|&n| sigma_diag(&d(n)) != d(2 * n));
    let pairing = (1..=n_max)
        .into_par_iter()
        .find_first(|&n| beta_diag(&d(2 * n + 2)).ok().as_deref() != Some(&d(2 * n + 1)[..]));

    Ok([
        CheckReport {
            name: "d(2n) = sigma(d(n))".into(),
            checked: n_max,
            failure: doubling.map(|n| Counterexample {
                n,
                expected: words(&d(2 * n)),
                found: words(&sigma_diag(&d(n))),
            }),
        },
        CheckReport {
            name: "d(2n+1) = beta(d(2n+2))".into(),
            checked: n_max,
            failure: pairing.map(|n| Counterexample {
                n,
                expected: words(&d(2 * n + 1)),
                found: beta_diag(&d(2 * n + 2)).map(|w| words(&w)).unwrap_or_default(),
            }),
        },
    ])
}

/// Checks that `d_{2^m}` is a word over `{b,c}` for odd `m` and over `{a,d}`
/// for even `m`, for every `2^m ≤ limit`.
pub fn verify_purity(limit: u64) -> Result<CheckReport> {
    if limit == 0 {
        return Err(Error::OutOfRange("purity limit 0".into()));
    }
    let tm = MorphicSystem::thue_morse();
    let word = tm.indexed_prefix(limit);
    let mut checked = 0;
    let mut m = 0;
    while 1u64 << m <= limit {
        let n = 1u64 << m;
        let d = diagonal_in(&word, IndexBase::Zero, n);
        let allowed: [PairLetter; 2] = if m % 2 == 1 {
            [PairLetter::B, PairLetter::C]
        } else {
            [PairLetter::A, PairLetter::D]
        };
        checked += 1;
        if let Some(bad) = d.letters.iter().find(|p| !allowed.contains(p)) {
            return Ok(CheckReport {
                name: "purity of d(2^m)".into(),
                checked,
                failure: Some(Counterexample {
                    n,
                    expected: format!("letters in {{{},{}}}", allowed[0], allowed[1]),
                    found: format!("letter {bad}"),
                }),
            });
        }
        m += 1;
    }
    Ok(CheckReport {
        name: "purity of d(2^m)".into(),
        checked,
        failure: None,
    })
}

/// How the power-of-two clause indexes the diagonals above the main one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperPowers {
    /// `d_i⁺` whose length `2ⁿ−i` is a power of two, mirroring `d_i` (length `i`)
    /// under the half-turn symmetry of `τⁿ`-blocks.
    ByLength,
    /// `d_i⁺` whose label `i` is a power of two.
    ByLabel,
}

/// Diagonals of a `τⁿ`-block that may avoid `a`: `d_i` with `i ≤ low`,
/// `d_i⁺` with `i ≥ 2ⁿ−high`, `d_i` with `i` a power of two at least 4, and
/// the upper diagonals picked out by `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllowedRed {
    pub low: usize,
    pub high: usize,
    pub upper: UpperPowers,
}

impl Default for AllowedRed {
    fn default() -> Self {
        Self {
            low: 5,
            high: 5,
            upper: UpperPowers::ByLength,
        }
    }
}

impl AllowedRed {
    pub fn offsets(self, n: u32) -> BTreeSet<usize> {
        let size = 1usize << n;
        let mut out = BTreeSet::new();
        for i in 1..=self.low.min(size) {
            out.insert(DiagonalLabel::Lower(i).offset(size));
        }
        for i in size.saturating_sub(self.high).max(1)..size {
            out.insert(DiagonalLabel::Upper(i).offset(size));
        }
        let mut p = 4;
        while p <= size {
            out.insert(DiagonalLabel::Lower(p).offset(size));
            if p < size {
                let i = match self.upper {
                    UpperPowers::ByLength => size - p,
                    UpperPowers::ByLabel => p,
                };
                out.insert(DiagonalLabel::Upper(i).offset(size));
            }
            p *= 2;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLevel {
    pub n: u32,
    pub letter: PairLetter,
    pub red: Vec<DiagonalLabel>,
    pub violations: Vec<DiagonalLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub levels: Vec<BlockLevel>,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.violations.is_empty())
    }

    pub fn first_violation(&self) -> Option<&BlockLevel> {
        self.levels.iter().find(|l| !l.violations.is_empty())
    }
}

pub fn verify_block_properties(n_lo: u32, n_hi: u32) -> Result<BlockReport> {
    verify_block_properties_with(n_lo, n_hi, AllowedRed::default())
}

/// Red diagonals of `τⁿ(p)` for every `p ∈ {a,b,c,d}` and `n_lo ≤ n ≤ n_hi`
/// must lie in the allowed set.
pub fn verify_block_properties_with(n_lo: u32, n_hi: u32, allowed: AllowedRed) -> Result<BlockReport> {
    if n_lo < 4 || n_lo > n_hi {
        return Err(Error::OutOfRange(format!("block levels {n_lo}..={n_hi}")));
    }
    let tau = product(MorphicSystem::thue_morse().substitution());
    let cases: Vec<(u32, PairLetter)> = (n_lo..=n_hi)
        .flat_map(|n| ABCD.into_iter().map(move |p| (n, p)))
        .collect();
    let levels = cases
        .into_par_iter()
        .map(|(n, p)| {
            let prof = block_diagonal_profile(&tau, p, n, PairLetter::A)?;
            let ok = allowed.offsets(n);
            let size = prof.size;
            Ok(BlockLevel {
                n,
                letter: p,
                red: prof.red_labels(),
                violations: prof
                    .red
                    .iter()
                    .filter(|o| !ok.contains(o))
                    .map(|&o| DiagonalLabel::of_offset(size, o))
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockReport { levels })
}

/// Expected complements from the closed forms.
pub fn closed_form(kind: SumsetKind, bound: u64) -> Vec<u64> {
    let odd_powers = (0..).map(|m| (1u64 << (2 * m + 1)) - 1).take_while(|&v| v <= bound);
    let even_powers = (0..).map(|m| (1u64 << (2 * m)) - 1).take_while(|&v| v <= bound);
    let mut out: Vec<u64> = match kind {
        SumsetKind::AA => [2, 4].into_iter().filter(|&v| v <= bound).chain(odd_powers).collect(),
        SumsetKind::BB => std::iter::once(0).chain(odd_powers).collect(),
        SumsetKind::AB => even_powers.collect(),
    };
    out.sort_unstable();
    out
}

pub fn tm_closed_form_check(bound: u64) -> Result<Vec<CheckReport>> {
    if bound < 8 {
        return Err(Error::OutOfRange(format!("bound {bound} below 8")));
    }
    let tm = MorphicSystem::thue_morse();
    SumsetKind::ALL
        .iter()
        .map(|&kind| {
            let report = complement_upto(&SumsetQuery::new(tm.clone(), kind), bound)?;
            let expected = closed_form(kind, bound);
            let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            Ok(CheckReport {
                name: if report.below_min.is_empty() {
                    format!("{kind} complement")
                } else {
                    format!("{kind} complement (below_min {})", join(&report.below_min))
                },
                checked: bound + 1,
                failure: (report.complement != expected).then(|| Counterexample {
                    n: report
                        .complement
                        .iter()
                        .zip(&expected)
                        .find(|(a, b)| a != b)
                        .map(|(a, _)| *a)
                        .unwrap_or(bound),
                    expected: join(&expected),
                    found: join(&report.complement),
                }),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product2d::{diagonal, parse_pair_word, pair_word_string};
    use proptest::prelude::*;

    fn w(s: &str) -> Vec<PairLetter> {
        parse_pair_word(s).unwrap()
    }

    #[test]
    fn sigma_table() {
        assert_eq!(pair_word_string(&sigma_diag(&w("abcd"))), "bcaddacb");
        assert_eq!(sigma_diag(&w("bc")), w("adda"));
        assert!(sigma_diag(&[]).is_empty());
        assert_eq!(sigma_diag(&sigma_diag(&w("a"))), w("adda"));
        assert_eq!(pair_word_string(&sigma_diag(&sigma_diag(&w("bcd")))), "bccbcbbcdaad");
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_diag(&w("bc")).unwrap(), w("a"));
        assert_eq!(beta_diag(&w("adda")).unwrap(), w("bdc"));
        assert_eq!(beta_diag(&w("bdc")), Err(Error::OddLength(3)));
        let tm = MorphicSystem::thue_morse();
        let d6 = diagonal(&tm, 6).unwrap().letters;
        let d5 = diagonal(&tm, 5).unwrap().letters;
        assert_eq!(beta_diag(&d6).unwrap(), d5);
        // β(σ(ij)) = ij
        for p in ABCD {
            assert_eq!(beta_diag(&sigma_diag(&[p])).unwrap(), vec![p]);
        }
    }

    #[test]
    fn recursions_hold() {
        for r in verify_recursions(4).unwrap() {
            assert!(r.passed(), "{r}");
        }
        for r in verify_recursions(1024).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn purity_holds() {
        let r = verify_purity(8192).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 14);
    }

    #[test]
    fn purity_follows_from_sigma_alone() {
        let mut d = w("a");
        for m in 1..=12 {
            d = sigma_diag(&d);
            let set: BTreeSet<PairLetter> = d.iter().copied().collect();
            if m % 2 == 1 {
                assert!(set.is_subset(&BTreeSet::from([PairLetter::B, PairLetter::C])));
            } else {
                assert!(set.is_subset(&BTreeSet::from([PairLetter::A, PairLetter::D])));
            }
        }
    }

    #[test]
    fn allowed_set_shape() {
        let off = AllowedRed::default().offsets(4);
        let labels: Vec<String> = off.iter().map(|&o| DiagonalLabel::of_offset(16, o).to_string()).collect();
        assert_eq!(
            labels,
            ["d1", "d2", "d3", "d4", "d5", "d8", "d16", "d8+", "d11+", "d12+", "d13+", "d14+", "d15+"]
        );
        let literal = AllowedRed {
            upper: UpperPowers::ByLabel,
            ..AllowedRed::default()
        };
        assert!(literal.offsets(4).contains(&DiagonalLabel::Upper(4).offset(16)));
    }

    #[test]
    fn block_properties_base_case() {
        let r = verify_block_properties(4, 4).unwrap();
        assert_eq!(r.levels.len(), 4);
        assert!(r.passed(), "{:?}", r.first_violation());
    }

    #[test]
    fn label_indexed_powers_break_at_level_five() {
        let literal = AllowedRed {
            upper: UpperPowers::ByLabel,
            ..AllowedRed::default()
        };
        let r = verify_block_properties_with(4, 5, literal).unwrap();
        let bad = r.first_violation().unwrap();
        assert_eq!((bad.n, bad.letter), (5, PairLetter::A));
        assert_eq!(bad.violations, vec![DiagonalLabel::Upper(24)]);
    }

    #[test]
    fn block_levels_below_four_are_rejected() {
        assert!(verify_block_properties(3, 5).is_err());
        assert!(verify_block_properties(6, 5).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form(SumsetKind::AA, 600), vec![1, 2, 4, 7, 31, 127, 511]);
        assert_eq!(closed_form(SumsetKind::AB, 600), vec![0, 3, 15, 63, 255]);
        assert_eq!(closed_form(SumsetKind::BB, 40), vec![0, 1, 7, 31]);
        for r in tm_closed_form_check(600).unwrap() {
            assert!(r.passed(), "{r}");
        }
        assert!(tm_closed_form_check(7).is_err());
    }

    fn swap_reverse(v: &[PairLetter]) -> Vec<PairLetter> {
        v.iter().rev().map(|p| p.transposed()).collect()
    }

    proptest! {
        #[test]
        fn sigma_commutes_with_mirror(v in prop::collection::vec(0usize..4, 0..50)) {
            let word: Vec<PairLetter> = v.into_iter().map(|i| ABCD[i]).collect();
            prop_assert_eq!(sigma_diag(&swap_reverse(&word)), swap_reverse(&sigma_diag(&word)));
        }
    }
}
