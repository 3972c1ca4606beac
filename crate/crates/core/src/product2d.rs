//! Direct product substitutions `σ×σ`, their two-dimensional expansions and
//! the diagonal words of the fixed point `x×x`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::substitution::{Letter, Substitution};
use crate::system::{IndexBase, IndexedWord, MorphicSystem};

pub const DEFAULT_MAX_CELLS: usize = 1 << 26;

/// A letter of the product alphabet: `(first, second)`.
///
/// For the coded alphabet `{0,1}` the four pair letters are displayed as
/// `a=(0,0)`, `b=(0,1)`, `c=(1,0)`, `d=(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairLetter {
    pub first: u8,
    pub second: u8,
}

impl PairLetter {
    pub const A: PairLetter = PairLetter::new(0, 0);
    pub const B: PairLetter = PairLetter::new(0, 1);
    pub const C: PairLetter = PairLetter::new(1, 0);
    pub const D: PairLetter = PairLetter::new(1, 1);

    pub const fn new(first: u8, second: u8) -> Self {
        Self { first, second }
    }

    /// `a`..`d` for binary pairs.
    pub fn abcd(self) -> Option<char> {
        match (self.first, self.second) {
            (0, 0) => Some('a'),
            (0, 1) => Some('b'),
            (1, 0) => Some('c'),
            (1, 1) => Some('d'),
            _ => None,
        }
    }

    pub fn from_abcd(c: char) -> Option<Self> {
        match c {
            'a' => Some(Self::A),
            'b' => Some(Self::B),
            'c' => Some(Self::C),
            'd' => Some(Self::D),
            _ => None,
        }
    }

    pub fn transposed(self) -> Self {
        Self::new(self.second, self.first)
    }
}

impl fmt::Display for PairLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.abcd() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "{}{}", self.first, self.second),
        }
    }
}

/// Parses a word in the `abcd` coding.
pub fn parse_pair_word(s: &str) -> Result<Vec<PairLetter>> {
    s.chars()
        .map(|c| PairLetter::from_abcd(c).ok_or(Error::UnknownGlyph(c)))
        .collect()
}

pub fn pair_word_string(w: &[PairLetter]) -> String {
    w.iter().map(ToString::to_string).collect()
}

/// Dense rectangular array of pair letters; cell `(k, ℓ)` is column `k`,
/// row `ℓ`, both counted from zero at the lower left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block2D {
    width: usize,
    height: usize,
    cells: Vec<PairLetter>,
}

impl Block2D {
    pub fn new(width: usize, height: usize, cells: Vec<PairLetter>) -> Result<Self> {
        if width * height != cells.len() {
            return Err(Error::InvalidSystem(format!(
                "{width}x{height} block with {} cells",
                cells.len()
            )));
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    pub fn single(p: PairLetter) -> Self {
        Self {
            width: 1,
            height: 1,
            cells: vec![p],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, k: usize, l: usize) -> PairLetter {
        self.cells[l * self.width + k]
    }

    pub fn map(&self, f: impl Fn(PairLetter) -> PairLetter) -> Block2D {
        Block2D {
            width: self.width,
            height: self.height,
            cells: self.cells.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Plain-text grid, one row per line, row 0 printed last.
    pub fn to_text(&self) -> String {
        let wide = self.cells.iter().any(|p| p.abcd().is_none());
        let mut out = String::new();
        for l in (0..self.height).rev() {
            let row: Vec<String> = (0..self.width).map(|k| self.get(k, l).to_string()).collect();
            out.push_str(&row.join(if wide { " " } else { "" }));
            out.push('\n');
        }
        out
    }
}

/// The direct product `σ×σ` of a substitution with itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSubstitution {
    base: Substitution,
    images: Vec<Block2D>,
}

impl ProductSubstitution {
    pub fn base(&self) -> &Substitution {
        &self.base
    }

    /// The image of `(p, q)`: `|σ(p)|` columns, `|σ(q)|` rows, entry
    /// `(k, ℓ) = (σ(p)_k, σ(q)_ℓ)`.
    pub fn image(&self, p: PairLetter) -> &Block2D {
        let n = self.base.alphabet_size();
        &self.images[p.first as usize * n + p.second as usize]
    }

    fn check(&self, p: PairLetter) -> Result<()> {
        let n = self.base.alphabet_size() as u8;
        for c in [p.first, p.second] {
            if c >= n {
                return Err(Error::LetterOutOfAlphabet(c));
            }
        }
        Ok(())
    }
}

pub fn product(sub: &Substitution) -> ProductSubstitution {
    let mut images = Vec::with_capacity(sub.alphabet_size() * sub.alphabet_size());
    for p in sub.letters() {
        for q in sub.letters() {
            let (col, row) = (sub.rule(p), sub.rule(q));
            let mut cells = Vec::with_capacity(col.len() * row.len());
            for &Letter(r) in row {
                for &Letter(c) in col {
                    cells.push(PairLetter::new(c, r));
                }
            }
            images.push(Block2D {
                width: col.len(),
                height: row.len(),
                cells,
            });
        }
    }
    ProductSubstitution {
        base: sub.clone(),
        images,
    }
}

/// `[σ×σ]ⁿ(p)`, composed block by block.
///
/// Every cell of one column has an image of the same width and every cell of
/// one row an image of the same height, so sub-images are placed at the
/// cumulative column and row offsets.
pub fn expand2d(psub: &ProductSubstitution, p: PairLetter, n: u32, max_cells: usize) -> Result<Block2D> {
    psub.check(p)?;
    let sub = psub.base();
    let area = sub
        .image_len(Letter(p.first), n)
        .saturating_mul(sub.image_len(Letter(p.second), n));
    if area > max_cells as u128 {
        return Err(Error::ResourceLimit {
            what: "block cells",
            needed: area,
            limit: max_cells as u128,
        });
    }
    let mut block = Block2D::single(p);
    for _ in 0..n {
        let col_widths: Vec<usize> = (0..block.width).map(|k| psub.image(block.get(k, 0)).width).collect();
        let row_heights: Vec<usize> = (0..block.height).map(|l| psub.image(block.get(0, l)).height).collect();
        let width: usize = col_widths.iter().sum();
        let height: usize = row_heights.iter().sum();
        let mut cells = vec![PairLetter::A; width * height];
        let mut y0 = 0;
        for (l, &h) in row_heights.iter().enumerate() {
            let mut x0 = 0;
            for (k, &w) in col_widths.iter().enumerate() {
                let img = psub.image(block.get(k, l));
                if img.width != w || img.height != h {
                    return Err(Error::InvalidSystem("ragged product image".into()));
                }
                for dy in 0..h {
                    let dst = (y0 + dy) * width + x0;
                    cells[dst..dst + w].copy_from_slice(&img.cells[dy * w..(dy + 1) * w]);
                }
                x0 += w;
            }
            y0 += h;
        }
        block = Block2D { width, height, cells };
    }
    Ok(block)
}

/// `(x_k, x_ℓ)` read from the coded one-dimensional fixed point.
pub fn cell(system: &MorphicSystem, k: u64, l: u64) -> Result<PairLetter> {
    let base = system.index_base().value();
    if k < base || l < base {
        return Err(Error::OutOfRange(format!("cell ({k},{l}) below index base {base}")));
    }
    let word = system.indexed_prefix(k.max(l));
    Ok(cell_in(&word, k, l))
}

#[inline]
pub fn cell_in(word: &IndexedWord, k: u64, l: u64) -> PairLetter {
    PairLetter::new(word.at(k), word.at(l))
}

/// The anti-diagonal word `d_n` of `x×x`, letters ordered by increasing
/// first coordinate.
///
/// With index base 1, `d_n` collects the cells with `k+ℓ=n`, `k,ℓ≥1`
/// (length `n−1`); with index base 0 diagonals are indexed by their length,
/// `k+ℓ=n−1`, `k,ℓ≥0` (length `n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalWord {
    pub n: u64,
    pub base: IndexBase,
    pub letters: Vec<PairLetter>,
}

impl DiagonalWord {
    /// The index sum `k+ℓ` shared by all cells of this diagonal.
    pub fn index_sum(&self) -> u64 {
        diagonal_sum(self.base, self.n)
    }

    pub fn contains(&self, p: PairLetter) -> bool {
        self.letters.contains(&p)
    }
}

impl fmt::Display for DiagonalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pair_word_string(&self.letters))
    }
}

/// Index sum of the cells on diagonal `n`.
pub fn diagonal_sum(base: IndexBase, n: u64) -> u64 {
    n + base.value() - 1
}

/// Diagonal index whose cells have index sum `s`.
pub fn diagonal_for_sum(base: IndexBase, s: u64) -> u64 {
    s + 1 - base.value()
}

/// Smallest valid diagonal index.
pub fn min_diagonal(base: IndexBase) -> u64 {
    match base {
        IndexBase::One => 2,
        IndexBase::Zero => 1,
    }
}

pub fn diagonal(system: &MorphicSystem, n: u64) -> Result<DiagonalWord> {
    let base = system.index_base();
    if n < min_diagonal(base) {
        return Err(Error::OutOfRange(format!("diagonal index {n}")));
    }
    let s = diagonal_sum(base, n);
    let word = system.indexed_prefix(s - base.value());
    Ok(diagonal_in(&word, base, n))
}

/// Diagonal `n` read from a prefix that covers index `k+ℓ−index_base`.
pub fn diagonal_in(word: &IndexedWord, base: IndexBase, n: u64) -> DiagonalWord {
    let b = base.value();
    let s = diagonal_sum(base, n);
    let letters = (b..=s - b).map(|k| cell_in(word, k, s - k)).collect();
    DiagonalWord { n, base, letters }
}

/// Label of an anti-diagonal inside an `S×S` block: `d_i` for the diagonals
/// starting on the left border (offset `i−1`), `d_i⁺` for those above the
/// main anti-diagonal (offset `S−1+i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagonalLabel {
    Lower(usize),
    Upper(usize),
}

impl DiagonalLabel {
    pub fn of_offset(size: usize, offset: usize) -> Self {
        if offset < size {
            DiagonalLabel::Lower(offset + 1)
        } else {
            DiagonalLabel::Upper(offset + 1 - size)
        }
    }

    pub fn offset(self, size: usize) -> usize {
        match self {
            DiagonalLabel::Lower(i) => i - 1,
            DiagonalLabel::Upper(i) => size - 1 + i,
        }
    }
}

impl fmt::Display for DiagonalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalLabel::Lower(i) => write!(f, "d{i}"),
            DiagonalLabel::Upper(i) => write!(f, "d{i}+"),
        }
    }
}

/// Which anti-diagonals of a square block avoid (red) or contain (green) a
/// target letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProfile {
    pub size: usize,
    pub red: BTreeSet<usize>,
    pub green: BTreeSet<usize>,
}

impl DiagonalProfile {
    pub fn red_labels(&self) -> Vec<DiagonalLabel> {
        self.red.iter().map(|&o| DiagonalLabel::of_offset(self.size, o)).collect()
    }

    pub fn is_red(&self, label: DiagonalLabel) -> bool {
        self.red.contains(&label.offset(self.size))
    }
}

pub fn block_profile(block: &Block2D, target: PairLetter) -> Result<DiagonalProfile> {
    if block.width != block.height {
        return Err(Error::NonSquare {
            width: block.width,
            height: block.height,
        });
    }
    let s = block.width;
    let mut hit = vec![false; 2 * s - 1];
    for l in 0..s {
        for k in 0..s {
            if block.get(k, l) == target {
                hit[k + l] = true;
            }
        }
    }
    let (green, red) = (0..2 * s - 1).partition(|&o| hit[o]);
    Ok(DiagonalProfile { size: s, red, green })
}

pub fn block_diagonal_profile(
    psub: &ProductSubstitution,
    p: PairLetter,
    n: u32,
    target: PairLetter,
) -> Result<DiagonalProfile> {
    let block = expand2d(psub, p, n, DEFAULT_MAX_CELLS)?;
    block_profile(&block, target)
}
