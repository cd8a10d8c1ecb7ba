//! Oracles written without the library: exponent counting, the symplectic form, Bareiss
//! determinants and determinantal divisors.

#![allow(dead_code)]

use std::path::PathBuf;

use heegaard_core::surface_group::{Family, Letter, Word};
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn random_letter<R: Rng>(rng: &mut R, genus: usize) -> Letter {
    let index = rng.gen_range(1..=genus);
    let family = if rng.gen_bool(0.5) { Family::A } else { Family::B };
    Letter { family, index, inverted: rng.gen_bool(0.5) }
}

pub fn random_word<R: Rng>(rng: &mut R, genus: usize, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| random_letter(rng, genus)).collect()
}

/// `(m, n)` exponent sums, counted letter by letter.
pub fn exponents(w: &Word, genus: usize) -> (Vec<i64>, Vec<i64>) {
    let mut m = vec![0; genus];
    let mut n = vec![0; genus];
    for l in w.letters() {
        let e = if l.inverted { -1 } else { 1 };
        match l.family {
            Family::A => m[l.index - 1] += e,
            Family::B => n[l.index - 1] += e,
        }
    }
    (m, n)
}

/// `a_i . b_i = +1`.
pub fn form(u: &(Vec<i64>, Vec<i64>), v: &(Vec<i64>, Vec<i64>)) -> i64 {
    (0..u.0.len()).map(|i| u.0[i] * v.1[i] - u.1[i] * v.0[i]).sum()
}

pub fn oracle_pairing(l: &Word, g: &Word, genus: usize) -> i64 {
    form(&exponents(l, genus), &exponents(g, genus))
}

/// Fraction-free Gaussian elimination.
pub fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if n < r {
        return vec![];
    }
    let mut out = subsets(n - 1, r);
    for mut s in subsets(n - 1, r - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors of a square matrix from its determinantal divisors `d_r`: the `r`-th factor
/// is `d_r / d_{r-1}`, with `0` once `d_r` vanishes. Units are dropped.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut divisors = vec![1i128];
    for r in 1..=n {
        let mut g = 0i128;
        for rows in subsets(n, r) {
            for cols in subsets(n, r) {
                let minor = rows.iter().map(|&i| cols.iter().map(|&j| i128::from(m[i][j])).collect()).collect();
                g = gcd(g, bareiss(minor));
            }
        }
        divisors.push(g);
    }
    (1..=n)
        .map(|r| if divisors[r] == 0 { 0 } else { (divisors[r] / divisors[r - 1]) as i64 })
        .filter(|&d| d != 1)
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a.len()).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}
