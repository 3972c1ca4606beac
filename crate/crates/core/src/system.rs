//! Morphic systems: a prolongable substitution, a start letter, a coding to
//! `{0,1}` and the index of the first letter of the fixed point.

use std::fmt;

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution};

/// Indexing convention for the fixed point: the first letter is `x_0` or `x_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexBase {
    Zero,
    One,
}

impl IndexBase {
    pub fn value(self) -> u64 {
        match self {
            IndexBase::Zero => 0,
            IndexBase::One => 1,
        }
    }

    pub fn from_value(v: u64) -> Option<Self> {
        match v {
            0 => Some(IndexBase::Zero),
            1 => Some(IndexBase::One),
            _ => None,
        }
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["fibonacci", "thue_morse", "von_neumann", "squares"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphicSystem {
    name: String,
    sub: Substitution,
    start: Letter,
    coding: Vec<u8>,
    index_base: IndexBase,
}

impl MorphicSystem {
    pub fn new(
        name: impl Into<String>,
        sub: Substitution,
        start: Letter,
        coding: Vec<u8>,
        index_base: IndexBase,
    ) -> Result<Self> {
        if start.id() >= sub.alphabet_size() {
            return Err(Error::LetterOutOfAlphabet(start.0));
        }
        let rule = sub.rule(start);
        if rule.len() < 2 || rule[0] != start {
            return Err(Error::NotProlongable(sub.glyph(start)));
        }
        if coding.len() < sub.alphabet_size() {
            return Err(Error::CodingNotTotal(sub.glyphs()[coding.len()]));
        }
        if coding.len() > sub.alphabet_size() {
            return Err(Error::InvalidSystem("coding has more entries than the alphabet".into()));
        }
        if let Some(&bad) = coding.iter().find(|&&c| c > 1) {
            return Err(Error::InvalidSystem(format!("letters must code to 0 or 1, not {bad}")));
        }
        Ok(Self {
            name: name.into(),
            sub,
            start,
            coding,
            index_base,
        })
    }

    /// One of the four compiled-in systems.
    pub fn builtin(name: &str) -> Result<Self> {
        let (images, start, coding, base): (&[&str], u8, &[u8], IndexBase) = match name {
            "fibonacci" => (&["01", "0"], 0, &[0, 1], IndexBase::One),
            "thue_morse" => (&["01", "10"], 0, &[0, 1], IndexBase::Zero),
            "von_neumann" => (&["0", "110"], 1, &[0, 1], IndexBase::One),
            "squares" => (&["01", "221", "2"], 0, &[0, 1, 0], IndexBase::Zero),
            other => return Err(Error::UnknownSystem(other.to_string())),
        };
        Self::new(
            name,
            Substitution::from_digits(images)?,
            Letter(start),
            coding.to_vec(),
            base,
        )
    }

    pub fn fibonacci() -> Self {
        Self::builtin("fibonacci").expect("built-in")
    }

    pub fn thue_morse() -> Self {
        Self::builtin("thue_morse").expect("built-in")
    }

    pub fn von_neumann() -> Self {
        Self::builtin("von_neumann").expect("built-in")
    }

    pub fn squares() -> Self {
        Self::builtin("squares").expect("built-in")
    }

    pub fn builtins() -> Vec<Self> {
        BUILTIN_NAMES.iter().map(|n| Self::builtin(n).expect("built-in")).collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    pub fn start(&self) -> Letter {
        self.start
    }

    pub fn coding(&self) -> &[u8] {
        &self.coding
    }

    pub fn code(&self, a: Letter) -> u8 {
        self.coding[a.id()]
    }

    pub fn code_word(&self, w: &[Letter]) -> Vec<u8> {
        w.iter().map(|&a| self.code(a)).collect()
    }

    pub fn index_base(&self) -> IndexBase {
        self.index_base
    }

    /// Smallest `m` with `|σ^m(start)| ≥ len`.
    pub fn depth_for(&self, len: usize) -> u32 {
        let mut m = 0;
        while self.sub.image_len(self.start, m) < len as u128 {
            m += 1;
        }
        m
    }

    /// Raw letters of the fixed point, produced lazily.
    pub fn fixed_point(&self) -> FixedPoint<'_> {
        FixedPoint::new(&self.sub, self.start)
    }

    /// First `len` coded letters of the fixed point.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        self.fixed_point().take(len).map(|a| self.code(a)).collect()
    }

    /// Coded fixed point covering every index up to and including `last`.
    pub fn indexed_prefix(&self, last: u64) -> IndexedWord {
        let base = self.index_base.value();
        let len = if last < base { 0 } else { (last - base + 1) as usize };
        IndexedWord {
            base,
            letters: self.prefix(len),
        }
    }

    /// Ascending indices `i ∈ [index_base, last]` with coded `x_i = target`.
    pub fn positions(&self, target: u8, last: u64) -> Vec<u64> {
        self.indexed_prefix(last).positions(target)
    }

    pub fn validate(&self) -> Diagnostics {
        let growing = self.sub.growing_letters();
        Diagnostics {
            prolongable: true,
            non_erasing: true,
            primitive: self.sub.is_primitive(),
            growing: self.sub.letters().filter(|a| growing[a.id()]).collect(),
            non_growing: self.sub.letters().filter(|a| !growing[a.id()]).collect(),
            glyphs: self.sub.glyphs().to_vec(),
        }
    }
}

/// Coded prefix of a fixed point addressed by absolute index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedWord {
    base: u64,
    letters: Vec<u8>,
}

impl IndexedWord {
    pub fn new(base: IndexBase, letters: Vec<u8>) -> Self {
        Self {
            base: base.value(),
            letters,
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Largest index covered, or `None` when empty.
    pub fn last(&self) -> Option<u64> {
        (!self.letters.is_empty()).then(|| self.base + self.letters.len() as u64 - 1)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    #[inline]
    pub fn at(&self, i: u64) -> u8 {
        self.letters[(i - self.base) as usize]
    }

    pub fn get(&self, i: u64) -> Option<u8> {
        i.checked_sub(self.base)
            .and_then(|o| self.letters.get(o as usize).copied())
    }

    pub fn positions(&self, target: u8) -> Vec<u64> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == target)
            .map(|(i, _)| i as u64 + self.base)
            .collect()
    }

    pub fn truncate(&self, last: u64) -> IndexedWord {
        let len = (last + 1).saturating_sub(self.base).min(self.letters.len() as u64);
        IndexedWord {
            base: self.base,
            letters: self.letters[..len as usize].to_vec(),
        }
    }
}

/// Streams the fixed point `x = σ(x)` starting at a prolongable letter.
///
/// With `σ(start) = start·r` the fixed point is `start · r · σ(r) · σ²(r) ⋯`;
/// each `σ^d(r)` is emitted by a depth-first walk over an explicit stack of
/// `(letter, remaining depth)` entries, so memory stays at
/// `O(depth · max rule length)`.
pub struct FixedPoint<'a> {
    sub: &'a Substitution,
    start: Letter,
    started: bool,
    depth: u32,
    stack: Vec<(Letter, u32)>,
    /// letters with `σ(a) = a`, emitted without descending
    stationary: Vec<bool>,
}

impl<'a> FixedPoint<'a> {
    fn new(sub: &'a Substitution, start: Letter) -> Self {
        let stationary = sub.letters().map(|a| sub.rule(a) == [a]).collect();
        Self {
            sub,
            start,
            started: false,
            depth: 0,
            stack: Vec::new(),
            stationary,
        }
    }
}

impl Iterator for FixedPoint<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if !self.started {
            self.started = true;
            return Some(self.start);
        }
        loop {
            match self.stack.pop() {
                Some((a, 0)) => return Some(a),
                Some((a, _)) if self.stationary[a.id()] => return Some(a),
                Some((a, d)) => {
                    for &b in self.sub.rule(a).iter().rev() {
                        self.stack.push((b, d - 1));
                    }
                }
                None => {
                    let tail = &self.sub.rule(self.start)[1..];
                    for &b in tail.iter().rev() {
                        self.stack.push((b, self.depth));
                    }
                    self.depth += 1;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub prolongable: bool,
    pub non_erasing: bool,
    pub primitive: bool,
    pub growing: Vec<Letter>,
    pub non_growing: Vec<Letter>,
    glyphs: Vec<char>,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ls: &[Letter]| -> String {
            if ls.is_empty() {
                "-".to_string()
            } else {
                ls.iter().map(|l| self.glyphs[l.id()].to_string()).collect::<Vec<_>>().join(",")
            }
        };
        writeln!(f, "prolongable={}", self.prolongable)?;
        writeln!(f, "non_erasing={}", self.non_erasing)?;
        writeln!(f, "primitive={}", self.primitive)?;
        writeln!(f, "growing={}", list(&self.growing))?;
        writeln!(f, "non_growing={}", list(&self.non_growing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(w: &[u8]) -> String {
        w.iter().map(|&b| char::from(b'0' + b)).collect()
    }

    #[test]
    fn prefixes_of_builtins() {
        assert_eq!(text(&MorphicSystem::fibonacci().prefix(12)), "010010100100");
        assert_eq!(text(&MorphicSystem::thue_morse().prefix(16)), "0110100110010110");
        assert_eq!(text(&MorphicSystem::von_neumann().prefix(13)), "1101100110110");
        assert_eq!(text(&MorphicSystem::squares().prefix(10)), "0100100001");
    }

    #[test]
    fn positions_respect_index_base() {
        assert_eq!(MorphicSystem::fibonacci().positions(0, 11), vec![1, 3, 4, 6, 8, 9, 11]);
        assert_eq!(MorphicSystem::von_neumann().positions(0, 13), vec![3, 6, 7, 10, 13]);
        assert_eq!(MorphicSystem::thue_morse().positions(1, 7), vec![1, 2, 4, 7]);
        assert!(MorphicSystem::fibonacci().positions(0, 0).is_empty());
    }

    #[test]
    fn streaming_matches_iteration() {
        for sys in MorphicSystem::builtins() {
            let sub = sys.substitution();
            for n in 0..12 {
                let w = sub.iterate(sys.start(), n, 1 << 22).unwrap();
                assert_eq!(sys.prefix(w.len()), sys.code_word(&w), "{} n={n}", sys.name());
            }
        }
    }

    #[test]
    fn squares_marks_perfect_squares() {
        let ones = MorphicSystem::squares().positions(1, 10_000);
        let squares: Vec<u64> = (1..=100).map(|n| n * n).collect();
        assert_eq!(ones, squares);
    }

    #[test]
    fn non_prolongable_start_is_rejected() {
        let sub = Substitution::from_digits(&["10", "0"]).unwrap();
        let err = MorphicSystem::new("x", sub, Letter(0), vec![0, 1], IndexBase::One).unwrap_err();
        assert_eq!(err, Error::NotProlongable('0'));
        let sub = Substitution::from_digits(&["0", "1"]).unwrap();
        assert!(MorphicSystem::new("x", sub, Letter(0), vec![0, 1], IndexBase::One).is_err());
    }

    #[test]
    fn coding_must_be_total() {
        let sub = Substitution::from_digits(&["01", "221", "2"]).unwrap();
        let err = MorphicSystem::new("x", sub, Letter(0), vec![0, 1], IndexBase::Zero).unwrap_err();
        assert_eq!(err, Error::CodingNotTotal('2'));
    }

    #[test]
    fn diagnostics() {
        let d = MorphicSystem::squares().validate();
        assert!(!d.primitive);
        assert_eq!(d.non_growing, vec![Letter(2)]);
        let d = MorphicSystem::fibonacci().validate();
        assert!(d.primitive && d.non_growing.is_empty());
        let d = MorphicSystem::von_neumann().validate();
        assert_eq!(d.non_growing, vec![Letter(0)]);
        assert!(d.prolongable);
    }

    #[test]
    fn positions_partition_the_range() {
        for sys in MorphicSystem::builtins() {
            let zeros = sys.positions(0, 500);
            let ones = sys.positions(1, 500);
            let mut all: Vec<u64> = zeros.iter().chain(&ones).copied().collect();
            all.sort_unstable();
            let expected: Vec<u64> = (sys.index_base().value()..=500).collect();
            assert_eq!(all, expected, "{}", sys.name());
        }
    }
}
