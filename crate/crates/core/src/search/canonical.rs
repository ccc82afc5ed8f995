//! Canonical representatives under setting relabelings and outcome flips.
//!
//! The group acting on a coefficient matrix is generated by row and column
//! permutations, row and column negations and, for square matrices,
//! transposition. The canonical form is the extreme entry sequence
//! (row-major) over the orbit, where sequences are compared element-wise
//! with *larger* numbers first. That way the all-ones and CHSH matrices are
//! their own representatives.
//!
//! For a fixed choice of rows (order and signs) the best column action is
//! obtained directly: flip each column so its first nonzero entry is
//! positive, then sort the columns. Only the rows are searched, by
//! backtracking; the first `k` rows of the result depend only on the first
//! `k` chosen rows, so any branch whose prefix is worse than the best prefix
//! at that depth is cut.

use alloc::vec::Vec;
use core::cmp::Ordering;

/// Coefficient types the canonicalizer works with.
pub trait Coefficient: Copy + Ord {
    fn negate(self) -> Self;
    fn is_zero(self) -> bool;
}

impl Coefficient for i8 {
    fn negate(self) -> Self {
        -self
    }
    fn is_zero(self) -> bool {
        self == 0
    }
}

/// Totally ordered finite `f64` with `-0.0` folded into `0.0`.
#[derive(Debug, Clone, Copy)]
pub struct Coef(pub f64);

impl Coef {
    pub fn new(x: f64) -> Self {
        Coef(x + 0.0)
    }
}

impl PartialEq for Coef {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Coef {}
impl PartialOrd for Coef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Coef {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0 + 0.0).total_cmp(&(other.0 + 0.0))
    }
}

impl Coefficient for Coef {
    fn negate(self) -> Self {
        Coef::new(-self.0)
    }
    fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

/// Key order: element-wise, larger values first.
pub fn key_cmp<T: Coefficient>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn negated<T: Coefficient>(v: &[T]) -> Vec<T> {
    v.iter().map(|x| x.negate()).collect()
}

/// The better of `v` and `-v` in key order.
pub fn sign_normalized<T: Coefficient>(v: &[T]) -> Vec<T> {
    let n = negated(v);
    if key_cmp(&n, v) == Ordering::Less {
        n
    } else {
        v.to_vec()
    }
}

/// Best column action on a fixed row arrangement: normalize the sign of
/// every column, then sort the columns in key order.
fn column_canonical<T: Coefficient>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    let mut columns: Vec<Vec<T>> = (0..cols)
        .map(|c| sign_normalized(&(0..rows).map(|r| data[r * cols + c]).collect::<Vec<_>>()))
        .collect();
    columns.sort_by(|a, b| key_cmp(a, b));
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for col in &columns {
            out.push(col[r]);
        }
    }
    out
}

struct RowSearch<'a, T> {
    rows: usize,
    cols: usize,
    data: &'a [T],
    best: Option<Vec<T>>,
}

impl<T: Coefficient> RowSearch<'_, T> {
    fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn descend(&mut self, depth: usize, used: &mut [bool], partial: &mut Vec<T>) {
        let cols = self.cols;
        if depth == self.rows {
            let full = column_canonical(self.rows, cols, partial);
            if self
                .best
                .as_ref()
                .is_none_or(|b| key_cmp(&full, b) == Ordering::Less)
            {
                self.best = Some(full);
            }
            return;
        }

        // (prefix after column action, signed row content, source row)
        let mut candidates: Vec<(Vec<T>, Vec<T>, usize)> = Vec::new();
        for r in 0..self.rows {
            if used[r] {
                continue;
            }
            let plain = self.row(r).to_vec();
            let zero = plain.iter().all(|x| x.is_zero());
            let signs: &[bool] = if zero { &[false] } else { &[false, true] };
            for &flip in signs {
                let content = if flip { negated(&plain) } else { plain.clone() };
                if candidates.iter().any(|(_, c, _)| *c == content) {
                    continue;
                }
                partial.extend_from_slice(&content);
                let prefix = column_canonical(depth + 1, cols, partial);
                partial.truncate(depth * cols);
                candidates.push((prefix, content, r));
            }
        }

        let Some(min) = candidates
            .iter()
            .map(|c| &c.0)
            .min_by(|a, b| key_cmp(a, b))
            .cloned()
        else {
            return;
        };
        if let Some(best) = &self.best {
            if key_cmp(&min, &best[..(depth + 1) * cols]) == Ordering::Greater {
                return;
            }
        }
        for (prefix, content, r) in candidates {
            if key_cmp(&prefix, &min) != Ordering::Equal {
                continue;
            }
            if let Some(best) = &self.best {
                if key_cmp(&prefix, &best[..(depth + 1) * cols]) == Ordering::Greater {
                    continue;
                }
            }
            used[r] = true;
            partial.extend_from_slice(&content);
            self.descend(depth + 1, used, partial);
            partial.truncate(depth * cols);
            used[r] = false;
        }
    }
}

/// Canonical entry sequence under row/column permutations and negations.
pub fn canonical_rect<T: Coefficient>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    assert_eq!(data.len(), rows * cols);
    let mut search = RowSearch {
        rows,
        cols,
        data,
        best: None,
    };
    let mut used = alloc::vec![false; rows];
    let mut partial = Vec::with_capacity(rows * cols);
    search.descend(0, &mut used, &mut partial);
    search.best.expect("search visits at least one leaf")
}

pub fn transpose<T: Copy>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(data.len());
    for c in 0..cols {
        for r in 0..rows {
            out.push(data[r * cols + c]);
        }
    }
    out
}

/// Canonical entry sequence under the full group; transposition is
/// included only when `rows == cols`.
pub fn canonical_entries<T: Coefficient>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    let direct = canonical_rect(rows, cols, data);
    if rows != cols {
        return direct;
    }
    let flipped = canonical_rect(cols, rows, &transpose(rows, cols, data));
    if key_cmp(&flipped, &direct) == Ordering::Less {
        flipped
    } else {
        direct
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sign_orbit_of_two_by_two() {
        let a = canonical_entries(2, 2, &[1i8, -1, -1, 1]);
        let b = canonical_entries(2, 2, &[1i8, 1, 1, 1]);
        assert_eq!(a, b);
        assert_eq!(b, vec![1, 1, 1, 1]);
    }

    #[test]
    fn chsh_is_its_own_representative() {
        let chsh = [1i8, 1, 1, -1];
        assert_eq!(canonical_entries(2, 2, &chsh), chsh.to_vec());
        assert_ne!(
            canonical_entries(2, 2, &chsh),
            canonical_entries(2, 2, &[1i8, 1, 1, 1])
        );
    }

    #[test]
    fn single_entries() {
        assert_eq!(canonical_entries(1, 1, &[-1i8]), vec![1]);
        assert_eq!(canonical_entries(1, 1, &[0i8]), vec![0]);
    }

    #[test]
    fn float_coefficients_fold_negative_zero() {
        let a = canonical_entries(1, 2, &[Coef::new(0.0), Coef::new(-2.5)]);
        let b = canonical_entries(1, 2, &[Coef::new(2.5), Coef::new(-0.0)]);
        assert_eq!(a, b);
        assert_eq!(a[0].0, 2.5);
    }
}
