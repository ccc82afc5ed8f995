//! One representative per equivalence class of small-coefficient matrices.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::canonical::{canonical_entries, canonical_rect, key_cmp, sign_normalized};
use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::exec::Executor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Generate-and-canonicalize up to 16 entries, row augmentation beyond.
    Auto,
    /// Canonicalize every matrix over the alphabet and deduplicate.
    Generate,
    /// Grow canonical matrices row by row, keeping only canonical prefixes.
    RowAugmentation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub rows: usize,
    pub cols: usize,
    pub alphabet: Vec<i8>,
    /// Drop matrices with an all-zero row or column.
    pub filter_trivial: bool,
    /// Upper bound on the number of raw matrices in generate mode.
    pub budget: u64,
    pub mode: EnumerationMode,
}

impl EnumerationConfig {
    pub fn new(rows: usize, cols: usize, alphabet: &[i8]) -> Self {
        Self {
            rows,
            cols,
            alphabet: alphabet.to_vec(),
            filter_trivial: true,
            budget: 1 << 32,
            mode: EnumerationMode::Auto,
        }
    }

    fn validate(&self) -> Result<Vec<i8>> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Dimension("empty shape".into()));
        }
        let mut alphabet = self.alphabet.clone();
        alphabet.sort_unstable_by(|a, b| b.cmp(a));
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(Error::Domain("empty alphabet".into()));
        }
        if alphabet
            .iter()
            .any(|&a| a == i8::MIN || !alphabet.contains(&-a))
        {
            return Err(Error::Domain(format!(
                "alphabet {alphabet:?} must be closed under negation"
            )));
        }
        Ok(alphabet)
    }
}

/// A class representative; `entries` equal its own canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassRep {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i8>,
    /// Rank-one classes factorize and never witness a dimension.
    pub rank_one: bool,
}

impl ClassRep {
    fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Self {
        let rank_one = is_rank_one(rows, cols, &entries);
        Self {
            rows,
            cols,
            entries,
            rank_one,
        }
    }

    pub fn to_expression(&self) -> Result<BellExpression> {
        BellExpression::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|&x| f64::from(x)).collect(),
        )
    }
}

/// All nonzero rows pairwise proportional (exact 2x2 minors).
pub fn is_rank_one(rows: usize, cols: usize, m: &[i8]) -> bool {
    let nonzero: Vec<&[i8]> = m
        .chunks_exact(cols)
        .filter(|r| r.iter().any(|&x| x != 0))
        .take(rows)
        .collect();
    let Some(first) = nonzero.first() else {
        return false;
    };
    nonzero.iter().all(|r| {
        (0..cols).all(|a| {
            (0..cols).all(|b| {
                i32::from(first[a]) * i32::from(r[b]) == i32::from(first[b]) * i32::from(r[a])
            })
        })
    })
}

pub fn has_zero_line(rows: usize, cols: usize, m: &[i8]) -> bool {
    m.chunks_exact(cols).any(|r| r.iter().all(|&x| x == 0))
        || (0..cols).any(|c| (0..rows).all(|r| m[r * cols + c] == 0))
}

/// Every class representative, sorted in key order.
pub fn enumerate_classes<E: Executor>(
    config: &EnumerationConfig,
    exec: &E,
) -> Result<Vec<ClassRep>> {
    let alphabet = config.validate()?;
    let mode = match config.mode {
        EnumerationMode::Auto if config.rows * config.cols <= 16 => EnumerationMode::Generate,
        EnumerationMode::Auto => EnumerationMode::RowAugmentation,
        m => m,
    };
    match mode {
        EnumerationMode::Generate => generate(config, &alphabet, exec),
        _ => Ok(row_augmentation(config, &alphabet, exec)),
    }
}

fn generate<E: Executor>(
    config: &EnumerationConfig,
    alphabet: &[i8],
    exec: &E,
) -> Result<Vec<ClassRep>> {
    let (rows, cols) = (config.rows, config.cols);
    let cells = (rows * cols) as u32;
    let base = alphabet.len() as u64;
    let total = base
        .checked_pow(cells)
        .filter(|&t| t <= config.budget)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "{}^{cells} matrices exceed the budget of {}; use row augmentation",
                base, config.budget
            ))
        })?;
    let per_first = total / base;

    // partitioned by the value of the first entry
    let parts = exec.map(alphabet.len(), |first| {
        let mut keys: BTreeSet<Vec<i8>> = BTreeSet::new();
        let mut m = vec![alphabet[first]; rows * cols];
        for mut code in 0..per_first {
            for cell in (1..rows * cols).rev() {
                m[cell] = alphabet[(code % base) as usize];
                code /= base;
            }
            if config.filter_trivial && has_zero_line(rows, cols, &m) {
                continue;
            }
            keys.insert(canonical_entries(rows, cols, &m));
        }
        keys
    });
    let mut all: BTreeSet<Vec<i8>> = BTreeSet::new();
    for p in parts {
        all.extend(p);
    }
    let mut reps: Vec<Vec<i8>> = all.into_iter().collect();
    reps.sort_by(|a, b| key_cmp(a, b));
    Ok(reps
        .into_iter()
        .map(|e| ClassRep::new(rows, cols, e))
        .collect())
}

/// Sign-normalized rows over the alphabet, in key order.
fn normalized_rows(cols: usize, alphabet: &[i8], skip_zero: bool) -> Vec<Vec<i8>> {
    let base = alphabet.len();
    let mut set: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut row = vec![0i8; cols];
    for mut code in 0..base.pow(cols as u32) {
        for c in (0..cols).rev() {
            row[c] = alphabet[code % base];
            code /= base;
        }
        if skip_zero && row.iter().all(|&x| x == 0) {
            continue;
        }
        set.insert(sign_normalized(&row));
    }
    let mut rows: Vec<Vec<i8>> = set.into_iter().collect();
    rows.sort_by(|a, b| key_cmp(a, b));
    rows
}

fn row_augmentation<E: Executor>(
    config: &EnumerationConfig,
    alphabet: &[i8],
    exec: &E,
) -> Vec<ClassRep> {
    let (rows, cols) = (config.rows, config.cols);
    let candidates = normalized_rows(cols, alphabet, config.filter_trivial);

    struct Walk<'a> {
        rows: usize,
        cols: usize,
        candidates: &'a [Vec<i8>],
        filter_trivial: bool,
        out: Vec<ClassRep>,
    }

    impl Walk<'_> {
        fn extend(&mut self, partial: &mut Vec<i8>, depth: usize, start: usize) {
            if depth == self.rows {
                if self.filter_trivial && has_zero_line(self.rows, self.cols, partial) {
                    return;
                }
                if canonical_entries(self.rows, self.cols, partial) == *partial {
                    self.out
                        .push(ClassRep::new(self.rows, self.cols, partial.clone()));
                }
                return;
            }
            for idx in start..self.candidates.len() {
                partial.extend_from_slice(&self.candidates[idx]);
                // a canonical matrix has canonical row prefixes
                let keep = depth + 1 == self.rows
                    || canonical_rect(depth + 1, self.cols, partial) == *partial;
                if keep {
                    self.extend(partial, depth + 1, idx);
                }
                partial.truncate(depth * self.cols);
            }
        }
    }

    let parts = exec.map(candidates.len(), |first| {
        let mut walk = Walk {
            rows,
            cols,
            candidates: &candidates,
            filter_trivial: config.filter_trivial,
            out: Vec::new(),
        };
        let mut partial = candidates[first].clone();
        if rows == 1 || canonical_rect(1, cols, &partial) == partial {
            walk.extend(&mut partial, 1, first);
        }
        walk.out
    });
    let mut reps: Vec<ClassRep> = parts.into_iter().flatten().collect();
    reps.sort_by(|a, b| match key_cmp(&a.entries, &b.entries) {
        Ordering::Equal => Ordering::Equal,
        o => o,
    });
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    fn config(rows: usize, cols: usize, alphabet: &[i8], filter: bool) -> EnumerationConfig {
        EnumerationConfig {
            filter_trivial: filter,
            ..EnumerationConfig::new(rows, cols, alphabet)
        }
    }

    #[test]
    fn one_by_one() {
        let all = enumerate_classes(&config(1, 1, &[-1, 0, 1], false), &Sequential).unwrap();
        assert_eq!(
            all.iter().map(|c| c.entries.clone()).collect::<Vec<_>>(),
            vec![vec![1], vec![0]]
        );
        let nontrivial = enumerate_classes(&config(1, 1, &[-1, 0, 1], true), &Sequential).unwrap();
        assert_eq!(nontrivial.len(), 1);
    }

    #[test]
    fn modes_agree() {
        for (r, c) in [(2, 2), (2, 3), (3, 2), (3, 3), (1, 4)] {
            for filter in [false, true] {
                let mut cfg = config(r, c, &[-1, 0, 1], filter);
                cfg.mode = EnumerationMode::Generate;
                let a = enumerate_classes(&cfg, &Sequential).unwrap();
                cfg.mode = EnumerationMode::RowAugmentation;
                let b = enumerate_classes(&cfg, &Sequential).unwrap();
                assert_eq!(a, b, "{r}x{c} filter={filter}");
            }
        }
    }

    #[test]
    fn representatives_are_canonical() {
        let reps = enumerate_classes(&config(3, 3, &[-1, 0, 1], true), &Sequential).unwrap();
        for rep in &reps {
            assert_eq!(canonical_entries(3, 3, &rep.entries), rep.entries);
            assert!(!has_zero_line(3, 3, &rep.entries));
        }
    }

    #[test]
    fn rank_one_tagging() {
        assert!(is_rank_one(2, 2, &[1, 1, 1, 1]));
        assert!(is_rank_one(2, 2, &[1, -1, -1, 1]));
        assert!(!is_rank_one(2, 2, &[1, 1, 1, -1]));
        assert!(is_rank_one(2, 2, &[1, 0, 0, 0]));
    }

    #[test]
    fn alphabet_must_be_symmetric() {
        assert!(enumerate_classes(&config(2, 2, &[0, 1], true), &Sequential).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = config(3, 3, &[-1, 0, 1], true);
        cfg.mode = EnumerationMode::Generate;
        cfg.budget = 100;
        assert!(matches!(
            enumerate_classes(&cfg, &Sequential),
            Err(Error::Capacity(_))
        ));
    }
}
