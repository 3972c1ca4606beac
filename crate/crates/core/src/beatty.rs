//! Exact golden-mean Beatty sequence.

use crate::error::{Error, Result};

/// `⌊n·α⌋` for the golden mean `α = (1+√5)/2`, computed exactly as
/// `⌊(n + isqrt(5n²))/2⌋`.
pub fn beatty_golden(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange("beatty index 0".into()));
    }
    let n = n as u128;
    let five_n2 = n
        .checked_mul(n)
        .and_then(|sq| sq.checked_mul(5))
        .ok_or(Error::Overflow("5n²"))?;
    let v = (n + five_n2.isqrt()) / 2;
    u64::try_from(v).map_err(|_| Error::Overflow("⌊nα⌋"))
}
