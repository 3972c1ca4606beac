//! Sumset membership by diagonal scanning, complements up to a bound, and
//! an independent brute-force oracle.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::product2d::{diagonal_for_sum, diagonal_in, PairLetter};
use crate::system::{IndexedWord, MorphicSystem};

/// Largest bound at which reports also run the quadratic oracle.
pub const ORACLE_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumsetKind {
    AA,
    AB,
    BB,
}

impl SumsetKind {
    pub const ALL: [SumsetKind; 3] = [SumsetKind::AA, SumsetKind::AB, SumsetKind::BB];

    /// Coded symbols `(t₁, t₂)`: `n` is a member iff `x_k = t₁` and
    /// `x_{n−k} = t₂` for some `k`.
    pub fn targets(self) -> (u8, u8) {
        match self {
            SumsetKind::AA => (0, 0),
            SumsetKind::AB => (0, 1),
            SumsetKind::BB => (1, 1),
        }
    }

    /// Pair letters whose presence on a diagonal witnesses membership.
    pub fn pair_targets(self) -> &'static [PairLetter] {
        match self {
            SumsetKind::AA => &[PairLetter::A],
            SumsetKind::AB => &[PairLetter::B, PairLetter::C],
            SumsetKind::BB => &[PairLetter::D],
        }
    }
}

impl fmt::Display for SumsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumsetKind::AA => "AA",
            SumsetKind::AB => "AB",
            SumsetKind::BB => "BB",
        })
    }
}

impl FromStr for SumsetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AA" => Ok(SumsetKind::AA),
            "AB" | "BA" => Ok(SumsetKind::AB),
            "BB" => Ok(SumsetKind::BB),
            _ => Err(Error::OutOfRange(format!("sumset kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetQuery {
    pub system: MorphicSystem,
    pub kind: SumsetKind,
}

impl SumsetQuery {
    pub fn new(system: MorphicSystem, kind: SumsetKind) -> Self {
        Self { system, kind }
    }

    /// Least index sum `2·index_base`.
    pub fn min_index_sum(&self) -> u64 {
        2 * self.system.index_base().value()
    }
}

/// Membership scanner over one shared coded prefix.
pub struct Scanner {
    word: IndexedWord,
    kind: SumsetKind,
    /// ascending positions of `t₁`
    first: Vec<u64>,
}

impl Scanner {
    pub fn new(word: IndexedWord, kind: SumsetKind) -> Self {
        let first = word.positions(kind.targets().0);
        Self { word, kind, first }
    }

    pub fn for_query(q: &SumsetQuery, last: u64) -> Self {
        Self::new(q.system.indexed_prefix(last), q.kind)
    }

    pub fn word(&self) -> &IndexedWord {
        &self.word
    }

    /// True iff `x_k = t₁` and `x_{n−k} = t₂` for some `k`, scanning `k`
    /// upward. Requires the prefix to cover index `n − index_base`.
    pub fn contains(&self, n: u64) -> bool {
        let b = self.word.base();
        if n < 2 * b {
            return false;
        }
        let t2 = self.kind.targets().1;
        for &k in &self.first {
            if k > n - b {
                break;
            }
            if self.word.at(n - k) == t2 {
                return true;
            }
        }
        false
    }

    /// The smallest `k` witnessing membership of `n`.
    pub fn witness(&self, n: u64) -> Option<u64> {
        let b = self.word.base();
        if n < 2 * b {
            return None;
        }
        let t2 = self.kind.targets().1;
        self.first
            .iter()
            .take_while(|&&k| k <= n - b)
            .find(|&&k| self.word.at(n - k) == t2)
            .copied()
    }
}

pub fn membership(q: &SumsetQuery, n: u64) -> Result<bool> {
    let lo = q.min_index_sum();
    if n < lo {
        return Err(Error::OutOfRange(format!("sum {n} below {lo}")));
    }
    let b = q.system.index_base().value();
    Ok(Scanner::for_query(q, n - b).contains(n))
}

/// Membership read off the diagonal word of index sum `n`.
pub fn membership_by_diagonal(q: &SumsetQuery, word: &IndexedWord, n: u64) -> bool {
    let base = q.system.index_base();
    let d = diagonal_in(word, base, diagonal_for_sum(base, n));
    q.kind.pair_targets().iter().any(|&p| d.contains(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Agree,
    /// first value where the scan and the oracle disagree
    Disagree(u64),
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetReport {
    pub system: String,
    pub kind: SumsetKind,
    pub bound: u64,
    /// Non-members in `[index_base, bound]`, ascending.
    pub complement: Vec<u64>,
    /// Those complement values below the least achievable sum.
    pub below_min: Vec<u64>,
    pub oracle: OracleStatus,
    /// Largest gap between consecutive complement values.
    pub largest_gap: Option<u64>,
}

impl SumsetReport {
    /// Complement values at or above the least achievable sum.
    pub fn exceptions(&self) -> Vec<u64> {
        self.complement
            .iter()
            .filter(|v| !self.below_min.contains(v))
            .copied()
            .collect()
    }

    pub fn to_line(&self) -> String {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let oracle = match self.oracle {
            OracleStatus::Agree => "ok".to_string(),
            OracleStatus::Disagree(n) => format!("fail@{n}"),
            OracleStatus::Skipped => "skipped".to_string(),
        };
        format!(
            "kind={} N={} complement={} below_min={} oracle={}",
            self.kind,
            self.bound,
            join(&self.complement),
            join(&self.below_min),
            oracle
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("system,kind,value,below_min\n");
        for v in &self.complement {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.system,
                self.kind,
                v,
                self.below_min.contains(v)
            ));
        }
        out
    }
}

/// Exact complement of the sumset within `[index_base, bound]`.
///
/// Values below `2·index_base` can never be sums and are reported as
/// complement elements; `below_min` separates everything below the least
/// sum actually achieved.
pub fn complement_upto(q: &SumsetQuery, bound: u64) -> Result<SumsetReport> {
    let lo = q.min_index_sum();
    if bound < lo {
        return Err(Error::OutOfRange(format!("bound {bound} below {lo}")));
    }
    let b = q.system.index_base().value();
    let scanner = Scanner::for_query(q, bound);
    let complement: Vec<u64> = (b..=bound)
        .into_par_iter()
        .filter(|&n| !scanner.contains(n))
        .collect();

    let (t1, t2) = q.kind.targets();
    let word = scanner.word();
    let least = match (
        word.positions(t1).first().copied(),
        word.positions(t2).first().copied(),
    ) {
        (Some(p), Some(r)) if p + r <= bound => Some(p + r),
        _ => None,
    };
    let below_min = complement
        .iter()
        .filter(|&&v| least.is_none_or(|m| v < m))
        .copied()
        .collect();
    let largest_gap = complement.windows(2).map(|w| w[1] - w[0]).max();

    let oracle = if bound <= ORACLE_LIMIT {
        match first_disagreement(&complement, &oracle_complement(q, bound)?) {
            None => OracleStatus::Agree,
            Some(n) => OracleStatus::Disagree(n),
        }
    } else {
        OracleStatus::Skipped
    };

    Ok(SumsetReport {
        system: q.system.name().to_string(),
        kind: q.kind,
        bound,
        complement,
        below_min,
        oracle,
        largest_gap,
    })
}

/// Complement by marking every pairwise sum of positions.
pub fn oracle_complement(q: &SumsetQuery, bound: u64) -> Result<BTreeSet<u64>> {
    let (t1, t2) = q.kind.targets();
    let b = q.system.index_base().value();
    if bound < b {
        return Err(Error::OutOfRange(format!("bound {bound} below {b}")));
    }
    let ps = q.system.positions(t1, bound);
    let qs = q.system.positions(t2, bound);
    let mut hit = vec![false; bound as usize + 1];
    for &p in &ps {
        for &r in &qs {
            let s = p + r;
            if s > bound {
                break;
            }
            hit[s as usize] = true;
        }
    }
    Ok((b..=bound).filter(|&n| !hit[n as usize]).collect())
}

fn first_disagreement(scan: &[u64], oracle: &BTreeSet<u64>) -> Option<u64> {
    let scan: BTreeSet<u64> = scan.iter().copied().collect();
    scan.symmetric_difference(oracle).next().copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCheck {
    pub agree: bool,
    pub first_disagreement: Option<u64>,
}

pub fn cross_check(q: &SumsetQuery, bound: u64) -> Result<CrossCheck> {
    let report = complement_upto(q, bound)?;
    let oracle = oracle_complement(q, bound)?;
    let first = first_disagreement(&report.complement, &oracle);
    Ok(CrossCheck {
        agree: first.is_none(),
        first_disagreement: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(system: MorphicSystem, kind: SumsetKind) -> SumsetQuery {
        SumsetQuery::new(system, kind)
    }

    #[test]
    fn membership_examples() {
        let fib = MorphicSystem::fibonacci();
        assert!(!membership(&q(fib.clone(), SumsetKind::AA), 3).unwrap());
        assert!(membership(&q(fib.clone(), SumsetKind::AA), 6).unwrap());
        assert!(!membership(&q(MorphicSystem::thue_morse(), SumsetKind::AA), 7).unwrap());
        assert!(membership(&q(MorphicSystem::von_neumann(), SumsetKind::BB), 2).unwrap());
        assert!(membership(&q(fib, SumsetKind::AA), 1).is_err());
    }

    #[test]
    fn complement_examples() {
        let r = complement_upto(&q(MorphicSystem::fibonacci(), SumsetKind::AA), 10_000).unwrap();
        assert_eq!(r.complement, vec![1, 3]);
        assert_eq!(r.below_min, vec![1]);
        assert_eq!(r.exceptions(), vec![3]);
        assert_eq!(r.oracle, OracleStatus::Agree);
        assert_eq!(r.to_line(), "kind=AA N=10000 complement=1,3 below_min=1 oracle=ok");

        let r = complement_upto(&q(MorphicSystem::thue_morse(), SumsetKind::AB), 300).unwrap();
        assert_eq!(r.complement, vec![0, 3, 15, 63, 255]);
        assert_eq!(r.below_min, vec![0]);

        let r = complement_upto(&q(MorphicSystem::von_neumann(), SumsetKind::AA), 10_000).unwrap();
        assert_eq!(r.complement, vec![1, 2, 3, 4, 5, 7, 8, 11, 15]);
        assert_eq!(r.below_min, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn oracle_examples() {
        let fib = q(MorphicSystem::fibonacci(), SumsetKind::AA);
        assert_eq!(oracle_complement(&fib, 100).unwrap(), BTreeSet::from([1, 3]));
        let tm = q(MorphicSystem::thue_morse(), SumsetKind::BB);
        assert_eq!(oracle_complement(&tm, 40).unwrap(), BTreeSet::from([0, 1, 7, 31]));
        // no sums exist yet: A of von Neumann starts at 3
        let vn = q(MorphicSystem::von_neumann(), SumsetKind::AA);
        assert_eq!(oracle_complement(&vn, 5).unwrap(), BTreeSet::from([1, 2, 3, 4, 5]));
    }

    #[test]
    fn small_bounds_report_everything_below_min() {
        let vn = q(MorphicSystem::von_neumann(), SumsetKind::AA);
        let r = complement_upto(&vn, 5).unwrap();
        assert_eq!(r.complement, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.below_min, r.complement);
        assert!(complement_upto(&vn, 1).is_err());
    }

    #[test]
    fn csv_rows() {
        let r = complement_upto(&q(MorphicSystem::fibonacci(), SumsetKind::AA), 50).unwrap();
        assert_eq!(
            r.to_csv(),
            "system,kind,value,below_min\nfibonacci,AA,1,true\nfibonacci,AA,3,false\n"
        );
    }

    #[test]
    fn cross_check_all_builtins() {
        for sys in MorphicSystem::builtins() {
            for kind in SumsetKind::ALL {
                let c = cross_check(&q(sys.clone(), kind), 2000).unwrap();
                assert!(c.agree, "{} {kind}: {:?}", sys.name(), c.first_disagreement);
            }
        }
        assert!(cross_check(&q(MorphicSystem::fibonacci(), SumsetKind::AA), 50).unwrap().agree);
    }

    fn sum_of_two_positive_squares(n: u64) -> bool {
        (1..).take_while(|a| a * a < n).any(|a| {
            let r = n - a * a;
            let s = (r as f64).sqrt() as u64;
            (s.saturating_sub(1)..=s + 1).any(|b| b >= 1 && b * b == r)
        })
    }

    #[test]
    fn squares_bb_is_sum_of_two_squares() {
        let sq = q(MorphicSystem::squares(), SumsetKind::BB);
        let scanner = Scanner::for_query(&sq, 2000);
        for n in 0..=2000 {
            assert_eq!(scanner.contains(n), sum_of_two_positive_squares(n), "n={n}");
        }
    }

    #[test]
    fn diagonal_route_matches_scan() {
        for sys in MorphicSystem::builtins() {
            let word = sys.indexed_prefix(2000);
            for kind in SumsetKind::ALL {
                let query = q(sys.clone(), kind);
                let scanner = Scanner::new(word.clone(), kind);
                for n in query.min_index_sum()..=2000 {
                    assert_eq!(
                        scanner.contains(n),
                        membership_by_diagonal(&query, &word, n),
                        "{} {kind} n={n}",
                        sys.name()
                    );
                }
            }
        }
    }

    #[test]
    fn membership_needs_only_the_prefix_up_to_n() {
        for sys in MorphicSystem::builtins() {
            let full = sys.indexed_prefix(600);
            let b = sys.index_base().value();
            for kind in SumsetKind::ALL {
                let long = Scanner::new(full.clone(), kind);
                for n in (2 * b..=600).step_by(7) {
                    let short = Scanner::new(full.truncate(n - b), kind);
                    assert_eq!(long.contains(n), short.contains(n));
                }
            }
        }
    }

    #[test]
    fn ab_one_orientation_suffices() {
        // (0,1) alone on the diagonal versus {(0,1),(1,0)}
        for sys in MorphicSystem::builtins() {
            let base = sys.index_base();
            let word = sys.indexed_prefix(800);
            for n in 2 * base.value()..=800 {
                let d = diagonal_in(&word, base, diagonal_for_sum(base, n));
                assert_eq!(d.contains(PairLetter::B), d.contains(PairLetter::B) || d.contains(PairLetter::C));
            }
        }
    }

    proptest! {
        #[test]
        fn witness_is_a_valid_pair(n in 2u64..5000) {
            let sys = MorphicSystem::von_neumann();
            let scanner = Scanner::for_query(&q(sys, SumsetKind::AA), 5000);
            if let Some(k) = scanner.witness(n) {
                prop_assert_eq!(scanner.word().at(k), 0);
                prop_assert_eq!(scanner.word().at(n - k), 0);
                prop_assert!(scanner.contains(n));
            } else {
                prop_assert!(!scanner.contains(n));
            }
        }
    }
}
