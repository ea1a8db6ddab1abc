#![allow(dead_code)]

use matfree::{BooleanFunction, GfVec};
use rand::Rng;

pub fn random_function<R: Rng>(rng: &mut R, n: usize) -> BooleanFunction {
    let ones: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen()).collect();
    BooleanFunction::from_ones(n, &ones).unwrap()
}

pub fn biased_function<R: Rng>(rng: &mut R, n: usize, p: f64) -> BooleanFunction {
    let ones: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(p)).collect();
    BooleanFunction::from_ones(n, &ones).unwrap()
}

pub fn bits_of(vectors: &[GfVec]) -> Vec<u64> {
    vectors.iter().map(GfVec::bits).collect()
}

/// Rank by plain elimination on a copy, choosing the lowest set bit as pivot.
pub fn naive_rank(vectors: &[u64]) -> usize {
    let mut rows: Vec<u64> = vectors.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pos) = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pos);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && (*row >> bit) & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_in_span(target: u64, vectors: &[u64]) -> bool {
    let mut with = vectors.to_vec();
    with.push(target);
    naive_rank(&with) == naive_rank(vectors)
}

/// `Σ_x f(x) (−1)^{⟨α,x⟩}` straight from the definition.
pub fn naive_coefficient(f: &BooleanFunction, alpha: u64) -> i64 {
    (0..f.size())
        .filter(|&x| f.get(x))
        .map(|x| if (x & alpha).count_ones().is_multiple_of(2) { 1 } else { -1 })
        .sum()
}

/// Tuples `(x_1, …, x_k)` of ones of `f` with `x_1 ⊕ … ⊕ x_k = 0`, by
/// enumerating the first `k − 1` entries.
pub fn brute_cycle_count(f: &BooleanFunction, k: usize) -> u64 {
    let ones: Vec<u64> = f.ones().collect();
    fn go(f: &BooleanFunction, ones: &[u64], left: usize, acc: u64) -> u64 {
        if left == 0 {
            return f.get(acc) as u64;
        }
        ones.iter().map(|&x| go(f, ones, left - 1, acc ^ x)).sum()
    }
    go(f, &ones, k - 1, 0)
}

/// Number of linear maps `L: {0,1}^m -> {0,1}^n`, given as all images of the
/// ambient unit vectors, with `f(L v_i) = σ_i` for every `i`.
pub fn brute_full_map_count(f: &BooleanFunction, vectors: &[u64], m: usize, sigma: &[bool]) -> u64 {
    let n = f.n();
    let total = 1u64 << (n * m);
    (0..total)
        .filter(|&code| {
            let images: Vec<u64> = (0..m).map(|j| (code >> (j * n)) & ((1 << n) - 1)).collect();
            vectors.iter().zip(sigma).all(|(&v, &want)| {
                let p = (0..m)
                    .filter(|&j| (v >> j) & 1 == 1)
                    .fold(0, |acc, j| acc ^ images[j]);
                f.get(p) == want
            })
        })
        .count() as u64
}

/// Gaussian binomial coefficient over GF(2).
pub fn gaussian_binomial(n: u32, k: u32) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= (1u64 << (n - i)) - 1;
        den *= (1u64 << (i + 1)) - 1;
    }
    num / den
}
