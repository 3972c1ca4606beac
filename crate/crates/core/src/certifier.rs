//! Finite-shift certificates for finite sumset complements.
//!
//! A certificate fixes positions `K` of the first target symbol with
//! `W = max K`. If every factor `w` of length `W + 1 − index_base` has some
//! `k ∈ K` with `w[W − k] = t₂`, then every `n ≥ W + index_base` is a member:
//! the window `x_{n−W} ⋯ x_{n−index_base}` is a factor, and the `k` it selects
//! gives `x_k = t₁`, `x_{n−k} = t₂`. Smaller `n` are scanned directly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factors::{factors_upto, FactorSet};
use crate::sumset::{Scanner, SumsetKind, SumsetQuery};
use crate::system::MorphicSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCertificate {
    pub system: String,
    pub kind: SumsetKind,
    /// ascending
    pub k_set: Vec<u64>,
    pub width: u64,
    /// ascending
    pub complement: Vec<u64>,
}

impl ShiftCertificate {
    /// First index sum covered by the window argument.
    pub fn threshold(&self, system: &MorphicSystem) -> u64 {
        self.width + system.index_base().value()
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::from("certificate\n");
        out += &format!("system {}\n", self.system);
        out += &format!("kind {}\n", self.kind);
        out += &format!("K {}\n", join(&self.k_set)).replace(" \n", "\n");
        out += &format!("W {}\n", self.width);
        out += &format!("complement {}\n", join(&self.complement)).replace(" \n", "\n");
        out
    }
}

impl fmt::Display for ShiftCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ShiftCertificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let syntax = |line: usize, message: String| Error::Syntax { line, message };
        let numbers = |line: usize, rest: &[&str]| -> Result<Vec<u64>> {
            rest.iter()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| syntax(line, format!("expected a number, got '{t}'")))
                })
                .collect()
        };

        let mut header = false;
        let mut system = None;
        let mut kind = None;
        let mut k_set = None;
        let mut width = None;
        let mut complement = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !header {
                if tokens != ["certificate"] {
                    return Err(syntax(line, "expected 'certificate'".into()));
                }
                header = true;
                continue;
            }
            match tokens[0] {
                "system" if tokens.len() == 2 => system = Some(tokens[1].to_string()),
                "kind" if tokens.len() == 2 => {
                    kind = Some(tokens[1].parse::<SumsetKind>().map_err(|e| syntax(line, e.to_string()))?)
                }
                "K" => k_set = Some(numbers(line, &tokens[1..])?),
                "W" if tokens.len() == 2 => width = Some(numbers(line, &tokens[1..])?[0]),
                "complement" => complement = Some(numbers(line, &tokens[1..])?),
                other => return Err(syntax(line, format!("unexpected '{other}'"))),
            }
        }
        let missing = |what: &str| syntax(text.lines().count().max(1), format!("missing '{what}' line"));
        if !header {
            return Err(missing("certificate"));
        }
        Ok(Self {
            system: system.ok_or_else(|| missing("system"))?,
            kind: kind.ok_or_else(|| missing("kind"))?,
            k_set: k_set.ok_or_else(|| missing("K"))?,
            width: width.ok_or_else(|| missing("W"))?,
            complement: complement.ok_or_else(|| missing("complement"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ShiftCertificate),
    /// No shift set within `k_max` works. `witness` is a factor of length
    /// `k_max + 1 − index_base` defeating all positions up to `k_max`.
    NotFound { k_max: u64, witness: Option<Vec<u8>> },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&ShiftCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

fn window_len(width: u64, base: u64) -> usize {
    (width + 1 - base) as usize
}

/// Does `k` select a `t₂` in window `w` of width `width`?
fn hits(w: &[u8], width: u64, k: u64, t2: u8) -> bool {
    w[(width - k) as usize] == t2
}

fn defeaters<'a>(
    factors: &'a FactorSet,
    len: usize,
    width: u64,
    ks: &[u64],
    t2: u8,
) -> Vec<&'a Vec<u8>> {
    factors
        .of_len(len)
        .iter()
        .filter(|w| !ks.iter().any(|&k| hits(w, width, k, t2)))
        .collect()
}

/// Values in `[index_base, n₀)` that are not sums.
fn base_cases(q: &SumsetQuery, threshold: u64) -> Vec<u64> {
    let base = q.system.index_base().value();
    let scanner = Scanner::for_query(q, threshold.max(base + 1));
    (base..threshold).filter(|&n| !scanner.contains(n)).collect()
}

pub fn search_certificate(q: &SumsetQuery, k_max: u64) -> Result<SearchOutcome> {
    let base = q.system.index_base().value();
    if k_max < base.max(1) {
        return Err(Error::OutOfRange(format!("k_max {k_max}")));
    }
    let (t1, t2) = q.kind.targets();
    let positions = q.system.positions(t1, k_max);
    let max_len = window_len(k_max, base);
    let factors = factors_upto(&q.system, max_len)?;

    for (i, &width) in positions.iter().enumerate() {
        let cands = &positions[..=i];
        let len = window_len(width, base);
        if !defeaters(&factors, len, width, cands, t2).is_empty() {
            continue;
        }
        let mut ks = vec![width];
        let mut alive = defeaters(&factors, len, width, &ks, t2);
        while !alive.is_empty() {
            let best = cands
                .par_iter()
                .filter(|k| !ks.contains(k))
                .map(|&k| {
                    let kills = alive.iter().filter(|w| hits(w, width, k, t2)).count();
                    (kills, k)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .expect("the full candidate set has no defeater");
            ks.push(best.1);
            alive.retain(|w| !hits(w, width, best.1, t2));
        }
        ks.sort_unstable();
        let complement = base_cases(q, width + base);
        return Ok(SearchOutcome::Found(ShiftCertificate {
            system: q.system.name().to_string(),
            kind: q.kind,
            k_set: ks,
            width,
            complement,
        }));
    }

    let witness = defeaters(&factors, max_len, k_max, &positions, t2)
        .first()
        .map(|w| w.to_vec());
    Ok(SearchOutcome::NotFound { k_max, witness })
}

/// One reason a certificate is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertFailure {
    SystemMismatch { expected: String, found: String },
    KindMismatch { expected: SumsetKind, found: SumsetKind },
    EmptyShiftSet,
    NotAscending,
    WidthNotMaxShift { width: u64, max_shift: u64 },
    WidthBelowBase(u64),
    NotPosition(u64),
    WindowDefeated(Vec<u8>),
    ComplementMismatch { at: u64, claimed: bool },
}

impl fmt::Display for CertFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertFailure::SystemMismatch { expected, found } => {
                write!(f, "certificate is for system '{found}', not '{expected}'")
            }
            CertFailure::KindMismatch { expected, found } => {
                write!(f, "certificate is for kind {found}, not {expected}")
            }
            CertFailure::EmptyShiftSet => write!(f, "empty shift set K"),
            CertFailure::NotAscending => write!(f, "K is not strictly ascending"),
            CertFailure::WidthNotMaxShift { width, max_shift } => {
                write!(f, "W={width} differs from max K={max_shift}")
            }
            CertFailure::WidthBelowBase(w) => write!(f, "W={w} is below the index base"),
            CertFailure::NotPosition(k) => write!(f, "k={k} is not a position of the first target"),
            CertFailure::WindowDefeated(w) => {
                let s: String = w.iter().map(|b| char::from(b'0' + b)).collect();
                write!(f, "factor {s} defeats every shift")
            }
            CertFailure::ComplementMismatch { at, claimed } => {
                if *claimed {
                    write!(f, "{at} is claimed as a non-sum but is a sum")
                } else {
                    write!(f, "{at} is a non-sum missing from the claimed complement")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertVerdict {
    pub failures: Vec<CertFailure>,
}

impl CertVerdict {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "PASS certificate");
        }
        write!(f, "FAIL certificate")?;
        for fail in &self.failures {
            write!(f, "\n  {fail}")?;
        }
        Ok(())
    }
}

/// Re-checks a certificate from scratch.
pub fn verify_certificate(q: &SumsetQuery, cert: &ShiftCertificate) -> Result<CertVerdict> {
    let mut failures = Vec::new();
    if cert.system != q.system.name() {
        failures.push(CertFailure::SystemMismatch {
            expected: q.system.name().to_string(),
            found: cert.system.clone(),
        });
    }
    if cert.kind != q.kind {
        failures.push(CertFailure::KindMismatch { expected: q.kind, found: cert.kind });
    }
    let base = q.system.index_base().value();
    let Some(&max_shift) = cert.k_set.iter().max() else {
        failures.push(CertFailure::EmptyShiftSet);
        return Ok(CertVerdict { failures });
    };
    if cert.width < base {
        failures.push(CertFailure::WidthBelowBase(cert.width));
        return Ok(CertVerdict { failures });
    }
    if cert.k_set.windows(2).any(|p| p[0] >= p[1]) {
        failures.push(CertFailure::NotAscending);
    }
    if cert.width != max_shift {
        failures.push(CertFailure::WidthNotMaxShift { width: cert.width, max_shift });
    }

    let (t1, t2) = q.kind.targets();
    let positions: BTreeSet<u64> = q.system.positions(t1, cert.width).into_iter().collect();
    for &k in &cert.k_set {
        if !positions.contains(&k) {
            failures.push(CertFailure::NotPosition(k));
        }
    }

    // shifts beyond W cannot be read from the window
    let usable: Vec<u64> = cert.k_set.iter().copied().filter(|&k| k <= cert.width).collect();
    let len = window_len(cert.width, base);
    let factors = factors_upto(&q.system, len)?;
    if let Some(w) = defeaters(&factors, len, cert.width, &usable, t2).first() {
        failures.push(CertFailure::WindowDefeated(w.to_vec()));
    }

    let actual = base_cases(q, cert.width + base);
    let claimed: BTreeSet<u64> = cert.complement.iter().copied().collect();
    let actual_set: BTreeSet<u64> = actual.iter().copied().collect();
    if let Some(&at) = claimed.symmetric_difference(&actual_set).next() {
        failures.push(CertFailure::ComplementMismatch { at, claimed: claimed.contains(&at) });
    }

    Ok(CertVerdict { failures })
}
