//! Substitutions (non-erasing monoid morphisms) over small alphabets.

use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter in an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Letter(pub u8);

impl Letter {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Letter>;

/// A substitution given by one nonempty image word per letter.
///
/// The alphabet carries a display glyph for every letter; letter `i` is
/// rendered as `glyphs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    glyphs: Vec<char>,
    rules: Vec<Word>,
}

impl Substitution {
    pub fn new(glyphs: Vec<char>, rules: Vec<Word>) -> Result<Self> {
        if glyphs.is_empty() {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        if glyphs.len() > u8::MAX as usize {
            return Err(Error::InvalidSystem("alphabet too large".into()));
        }
        if rules.len() != glyphs.len() {
            return Err(Error::InvalidSystem(format!(
                "{} rules for an alphabet of {} letters",
                rules.len(),
                glyphs.len()
            )));
        }
        for (i, g) in glyphs.iter().enumerate() {
            if glyphs[..i].contains(g) {
                return Err(Error::InvalidSystem(format!("duplicate glyph '{g}'")));
            }
        }
        for (a, rule) in rules.iter().enumerate() {
            if rule.is_empty() {
                return Err(Error::ErasingRule(glyphs[a]));
            }
            if let Some(bad) = rule.iter().find(|l| l.id() >= glyphs.len()) {
                return Err(Error::LetterOutOfAlphabet(bad.0));
            }
        }
        Ok(Self { glyphs, rules })
    }

    /// Builds a substitution over the digit glyphs `0`, `1`, ... from
    /// images written as digit strings, e.g. `["01", "0"]`.
    pub fn from_digits(images: &[&str]) -> Result<Self> {
        let glyphs: Vec<char> = (0..images.len())
            .map(|i| char::from_digit(i as u32, 36).expect("alphabet fits in base 36"))
            .collect();
        let rules = images
            .iter()
            .map(|img| {
                img.chars()
                    .map(|c| {
                        glyphs
                            .iter()
                            .position(|&g| g == c)
                            .map(|i| Letter(i as u8))
                            .ok_or(Error::UnknownGlyph(c))
                    })
                    .collect::<Result<Word>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(glyphs, rules)
    }

    pub fn alphabet_size(&self) -> usize {
        self.glyphs.len()
    }

    pub fn glyphs(&self) -> &[char] {
        &self.glyphs
    }

    pub fn glyph(&self, a: Letter) -> char {
        self.glyphs[a.id()]
    }

    pub fn letter(&self, glyph: char) -> Option<Letter> {
        self.glyphs
            .iter()
            .position(|&g| g == glyph)
            .map(|i| Letter(i as u8))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.glyphs.len()).map(|i| Letter(i as u8))
    }

    pub fn rule(&self, a: Letter) -> &[Letter] {
        &self.rules[a.id()]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn max_rule_len(&self) -> usize {
        self.rules.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every rule has the same length.
    pub fn is_uniform(&self) -> bool {
        self.rules.windows(2).all(|w| w[0].len() == w[1].len())
    }

    fn check(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|l| l.id() >= self.glyphs.len()) {
            Some(bad) => Err(Error::LetterOutOfAlphabet(bad.0)),
            None => Ok(()),
        }
    }

    /// Image of a word: the concatenation of the images of its letters.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        self.check(w)?;
        let mut out = Vec::with_capacity(w.len() * self.max_rule_len());
        for &a in w {
            out.extend_from_slice(self.rule(a));
        }
        Ok(out)
    }

    /// Length of `σⁿ(a)`, saturating at `u128::MAX`.
    pub fn image_len(&self, a: Letter, n: u32) -> u128 {
        let mut counts = vec![0u128; self.alphabet_size()];
        counts[a.id()] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; self.alphabet_size()];
            for (b, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for l in &self.rules[b] {
                    next[l.id()] = next[l.id()].saturating_add(c);
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// `σⁿ(a)`, refusing to build words longer than `max_len`.
    pub fn iterate(&self, a: Letter, n: u32, max_len: usize) -> Result<Word> {
        self.check(&[a])?;
        let needed = self.image_len(a, n);
        if needed > max_len as u128 {
            return Err(Error::ResourceLimit {
                what: "iterated word length",
                needed,
                limit: max_len as u128,
            });
        }
        let mut w = vec![a];
        for _ in 0..n {
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    /// Letters whose iterated images grow without bound.
    ///
    /// A letter is non-growing exactly when every letter reachable from it
    /// has an image of length one.
    pub fn growing_letters(&self) -> Vec<bool> {
        let n = self.alphabet_size();
        let mut grows: Vec<bool> = self.rules.iter().map(|r| r.len() > 1).collect();
        // propagate backwards along "b occurs in rule(a)" until stable
        loop {
            let mut changed = false;
            for a in 0..n {
                if !grows[a] && self.rules[a].iter().any(|l| grows[l.id()]) {
                    grows[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        grows
    }

    /// True when some power of the substitution maps every letter to a word
    /// containing every letter.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet_size();
        // reachability matrix of the incidence graph
        let mut reach = vec![vec![false; n]; n];
        for (row, rule) in reach.iter_mut().zip(&self.rules) {
            for l in rule {
                row[l.id()] = true;
            }
        }
        let mut power = reach.clone();
        // primitive iff power M^k > 0 for some k ≤ (n-1)^2 + 1 (Wielandt)
        let bound = (n - 1) * (n - 1) + 1;
        for _ in 1..bound.max(1) {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for a in 0..n {
                for b in 0..n {
                    if power[a][b] {
                        for c in 0..n {
                            if reach[b][c] {
                                next[a][c] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        power.iter().all(|row| row.iter().all(|&x| x))
    }

    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.glyph(l)).collect()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.letter(c).ok_or(Error::UnknownGlyph(c)))
            .collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.letters().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{}", self.glyph(a), self.render(self.rule(a)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fib() -> Substitution {
        Substitution::from_digits(&["01", "0"]).unwrap()
    }

    fn von_neumann() -> Substitution {
        Substitution::from_digits(&["0", "110"]).unwrap()
    }

    #[test]
    fn apply_concatenates_images() {
        let s = fib();
        let w = s.parse_word("01").unwrap();
        assert_eq!(s.render(&s.apply(&w).unwrap()), "010");
        assert!(s.apply(&[]).unwrap().is_empty());

        let v = von_neumann();
        let w = v.parse_word("110").unwrap();
        assert_eq!(v.render(&v.apply(&w).unwrap()), "1101100");
    }

    #[test]
    fn apply_rejects_foreign_letters() {
        assert_eq!(
            fib().apply(&[Letter(0), Letter(5)]),
            Err(Error::LetterOutOfAlphabet(5))
        );
    }

    #[test]
    fn iterate_by_hand() {
        let s = fib();
        assert_eq!(s.render(&s.iterate(Letter(0), 4, 1 << 20).unwrap()), "01001010");
        assert_eq!(s.render(&s.iterate(Letter(0), 5, 1 << 20).unwrap()), "0100101001001");
        assert_eq!(s.render(&s.iterate(Letter(1), 0, 1 << 20).unwrap()), "1");
        let v = von_neumann();
        assert_eq!(v.render(&v.iterate(Letter(1), 2, 1 << 20).unwrap()), "1101100");
    }

    #[test]
    fn iterate_respects_length_cap() {
        let err = fib().iterate(Letter(0), 40, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        assert_eq!(fib().image_len(Letter(0), 4), 8);
        assert_eq!(fib().image_len(Letter(0), 5), 13);
    }

    #[test]
    fn erasing_rules_are_rejected() {
        let err = Substitution::new(vec!['0', '1'], vec![vec![Letter(0)], vec![]]).unwrap_err();
        assert_eq!(err, Error::ErasingRule('1'));
    }

    #[test]
    fn growth_and_primitivity() {
        assert_eq!(fib().growing_letters(), vec![true, true]);
        assert!(fib().is_primitive());
        assert_eq!(von_neumann().growing_letters(), vec![false, true]);
        assert!(!von_neumann().is_primitive());
        let squares = Substitution::from_digits(&["01", "221", "2"]).unwrap();
        assert_eq!(squares.growing_letters(), vec![true, true, false]);
        assert!(!squares.is_primitive());
        let tm = Substitution::from_digits(&["01", "10"]).unwrap();
        assert!(tm.is_primitive() && tm.is_uniform());
    }

    fn word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0u8..3).prop_map(Letter), 0..max)
    }

    proptest! {
        #[test]
        fn apply_is_a_homomorphism(v in word(40), w in word(40)) {
            let s = Substitution::from_digits(&["01", "221", "2"]).unwrap();
            let mut vw = v.clone();
            vw.extend_from_slice(&w);
            let mut expected = s.apply(&v).unwrap();
            expected.extend(s.apply(&w).unwrap());
            prop_assert_eq!(s.apply(&vw).unwrap(), expected);
        }
    }
}
