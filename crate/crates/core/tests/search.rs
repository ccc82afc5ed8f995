use std::collections::BTreeSet;

use dimwit_core::search::{canonical_entries, enumerate_classes, EnumerationConfig};
use dimwit_core::Sequential;
use proptest::prelude::*;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// `(P_r S_r) M (S_c P_c)`, optionally transposed first.
fn act(
    rows: usize,
    cols: usize,
    m: &[i8],
    transpose: bool,
    rp: &[usize],
    rs: u32,
    cp: &[usize],
    cs: u32,
) -> Vec<i8> {
    let (r, c, src): (usize, usize, Vec<i8>) = if transpose {
        let t = (0..cols)
            .flat_map(|j| (0..rows).map(move |i| (i, j)))
            .map(|(i, j)| m[i * cols + j]);
        (cols, rows, t.collect())
    } else {
        (rows, cols, m.to_vec())
    };
    let mut out = vec![0; r * c];
    for i in 0..r {
        for j in 0..c {
            let sign = if (rs >> i & 1) ^ (cs >> j & 1) == 1 {
                -1
            } else {
                1
            };
            out[rp[i] * c + cp[j]] = sign * src[i * c + j];
        }
    }
    out
}

/// Number of orbits, by listing each orbit in full.
fn orbit_count(rows: usize, cols: usize, alphabet: &[i8], drop_zero_lines: bool) -> usize {
    let total = alphabet.len().pow((rows * cols) as u32);
    let rps = permutations(rows);
    let cps = permutations(cols);
    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut orbits = 0;
    for code in 0..total {
        let mut c = code;
        let m: Vec<i8> = (0..rows * cols)
            .map(|_| {
                let a = alphabet[c % alphabet.len()];
                c /= alphabet.len();
                a
            })
            .collect();
        let zero_line = m.chunks(cols).any(|r| r.iter().all(|&x| x == 0))
            || (0..cols).any(|j| (0..rows).all(|i| m[i * cols + j] == 0));
        if (drop_zero_lines && zero_line) || seen.contains(&m) {
            continue;
        }
        orbits += 1;
        let transposes: &[bool] = if rows == cols {
            &[false, true]
        } else {
            &[false]
        };
        for &t in transposes {
            for rp in &rps {
                for cp in &cps {
                    for rs in 0..1u32 << rows {
                        for cs in 0..1u32 << cols {
                            seen.insert(act(rows, cols, &m, t, rp, rs, cp, cs));
                        }
                    }
                }
            }
        }
    }
    orbits
}

#[test]
fn class_counts_match_orbit_oracle() {
    for (r, c) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
        for filter in [true, false] {
            let mut cfg = EnumerationConfig::new(r, c, &[-1, 0, 1]);
            cfg.filter_trivial = filter;
            let classes = enumerate_classes(&cfg, &Sequential).unwrap();
            assert_eq!(
                classes.len(),
                orbit_count(r, c, &[-1, 0, 1], filter),
                "({r},{c}) filter={filter}"
            );
            for k in &classes {
                assert_eq!(canonical_entries(r, c, &k.entries), k.entries);
            }
        }
    }
}

#[test]
fn wider_alphabet_counts() {
    let cfg = EnumerationConfig::new(2, 2, &[-2, -1, 0, 1, 2]);
    let classes = enumerate_classes(&cfg, &Sequential).unwrap();
    assert_eq!(classes.len(), orbit_count(2, 2, &[-2, -1, 0, 1, 2], true));
}

fn group_element() -> impl Strategy<
    Value = (
        usize,
        usize,
        Vec<i8>,
        bool,
        Vec<usize>,
        u32,
        Vec<usize>,
        u32,
    ),
> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        (
            Just(r),
            Just(c),
            prop::collection::vec(-2i8..=2, r * c),
            any::<bool>(),
            Just((0..r).collect::<Vec<_>>()).prop_shuffle(),
            0u32..1 << r,
            Just((0..c).collect::<Vec<_>>()).prop_shuffle(),
            0u32..1 << c,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_constant_on_orbits((r, c, m, t, rp, rs, cp, cs) in group_element()) {
        let t = t && r == c;
        let g = act(r, c, &m, t, &rp, rs, &cp, cs);
        let key = canonical_entries(r, c, &m);
        prop_assert_eq!(&canonical_entries(r, c, &g), &key);
        prop_assert_eq!(canonical_entries(r, c, &key), key);
    }
}
