//! Boolean functions `f: {0,1}^n -> {0,1}` as complete truth tables, and their
//! exact Fourier analysis.
//!
//! The point `x` is stored at table index `Σ_j x_j·2^j`, i.e. the point and
//! its index share the same bit pattern.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{check_dim, check_limit, Error, Result};
use crate::gf2::{coset_decompose, enumerate_subspaces, Coset, GfVec, Subspace};

/// Exact non-negative rational used at API boundaries.
pub type Rational = Ratio<u64>;

/// Largest supported number of variables for a truth table.
pub const MAX_VARS: usize = 26;

/// Largest number of variables accepted by [`wht`].
pub const WHT_MAX_VARS: usize = 24;

/// Largest number of variables accepted by [`regularity_decompose`].
pub const REGULARITY_MAX_VARS: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    pub fn zero(n: usize) -> Result<Self> {
        check_limit("boolean function variables", n as u64, MAX_VARS as u64)?;
        let words = if n >= 6 { 1usize << (n - 6) } else { 1 };
        Ok(BooleanFunction {
            n,
            words: vec![0; words],
        })
    }

    pub fn one(n: usize) -> Result<Self> {
        Ok(Self::zero(n)?.complement())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        if value {
            Self::one(n)
        } else {
            Self::zero(n)
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for x in 0..out.size() {
            if f(x) {
                out.set(x, true);
            }
        }
        Ok(out)
    }

    /// The indicator of a set of points given by index.
    pub fn from_ones(n: usize, ones: &[u64]) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for &x in ones {
            if x >= out.size() {
                return Err(Error::InvalidInput(format!(
                    "point {x} outside {{0,1}}^{n}"
                )));
            }
            out.set(x, true);
        }
        Ok(out)
    }

    /// Builds a function on at most 6 variables from its table read as an
    /// integer (bit `x` is `f(x)`).
    pub fn from_table_index(n: usize, table: u64) -> Result<Self> {
        check_limit("table-index variables", n as u64, 6)?;
        let mut out = Self::zero(n)?;
        out.words[0] = table & crate::gf2::mask(1 << n);
        Ok(out)
    }

    /// Inverse of [`BooleanFunction::from_table_index`].
    pub fn table_index(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, `2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    #[inline]
    pub fn get(&self, x: u64) -> bool {
        debug_assert!(x < self.size());
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u64, value: bool) {
        debug_assert!(x < self.size());
        let w = &mut self.words[(x >> 6) as usize];
        if value {
            *w |= 1 << (x & 63);
        } else {
            *w &= !(1 << (x & 63));
        }
    }

    pub fn flip(&mut self, x: u64) {
        self.words[(x >> 6) as usize] ^= 1 << (x & 63);
    }

    pub fn eval(&self, x: &GfVec) -> Result<bool> {
        check_dim(self.n, x.dim())?;
        Ok(self.get(x.bits()))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(((i as u64) << 6) | b)
            })
        })
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_padding();
        out
    }

    fn clear_padding(&mut self) {
        if self.n < 6 {
            self.words[0] &= crate::gf2::mask(1 << self.n);
        }
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.size()
    }

    /// Pointwise `self <= other`.
    pub fn is_below(&self, other: &Self) -> Result<bool> {
        check_dim(self.n, other.n)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    /// Packed table bytes: byte `i` holds points `8i..8i+7`, least significant
    /// bit first. Functions on fewer than 3 variables use one byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let len = std::cmp::max(1, (self.size() / 8) as usize);
        (0..len)
            .map(|i| (self.words[i / 8] >> ((i % 8) * 8)) as u8)
            .collect()
    }

    pub fn from_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        let mut out = Self::zero(n)?;
        let len = std::cmp::max(1, (out.size() / 8) as usize);
        if bytes.len() != len {
            return Err(Error::InvalidInput(format!(
                "truth table for n={n} needs {len} bytes, got {}",
                bytes.len()
            )));
        }
        for (i, &b) in bytes.iter().enumerate() {
            out.words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        if n < 3 && bytes[0] as u64 & !crate::gf2::mask(1 << n) != 0 {
            return Err(Error::InvalidInput(format!(
                "truth table for n={n} has bits set beyond point {}",
                (1u64 << n) - 1
            )));
        }
        Ok(out)
    }

    pub fn density(&self, sigma: bool) -> Rational {
        density(self, sigma)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, ones=[", self.n)?;
        for (i, x) in self.ones().enumerate().take(32) {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        if self.count_ones() > 32 {
            f.write_str(",..")?;
        }
        f.write_str("])")
    }
}

/// Fraction of points where `f` takes the value `sigma`.
pub fn density(f: &BooleanFunction, sigma: bool) -> Rational {
    let ones = f.count_ones();
    let hits = if sigma { ones } else { f.size() - ones };
    Rational::new(hits, f.size())
}

/// `f` restricted to a coset `g + H`, indexed by internal coordinates of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRestriction {
    pub coset: Coset,
    pub values: BooleanFunction,
}

impl CosetRestriction {
    pub fn density(&self, sigma: bool) -> Rational {
        density(&self.values, sigma)
    }

    pub fn is_uniform(&self, eps: Rational) -> bool {
        is_uniform(&self.values, eps)
    }
}

/// `values(h) = f(rep ⊕ embed(h))`, with `embed` following the canonical basis
/// of the coset's subspace.
pub fn restrict_to_coset(f: &BooleanFunction, coset: &Coset) -> Result<CosetRestriction> {
    check_dim(f.n(), coset.subspace().ambient_dim())?;
    let h = coset.subspace();
    let rep = coset.rep().bits();
    let values = BooleanFunction::from_fn(h.dim(), |i| f.get(rep ^ h.embed_bits(i)))?;
    Ok(CosetRestriction {
        coset: coset.clone(),
        values,
    })
}

/// Unnormalized Fourier coefficients: `coeffs[α] = Σ_x f(x)(−1)^{α·x}`, so the
/// normalized coefficient is `coeffs[α] / 2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<i64>,
}

impl FourierSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: u64) -> i64 {
        self.coeffs[alpha as usize]
    }

    /// Largest `|coeffs[α]|` over `α ≠ 0` (zero for `n = 0`).
    pub fn max_nonzero_abs(&self) -> u64 {
        self.coeffs[1..]
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Whether every normalized coefficient at `α ≠ 0` is at most `eps` in
    /// magnitude, compared exactly.
    pub fn is_uniform(&self, eps: Rational) -> bool {
        let lhs = self.max_nonzero_abs() as u128 * *eps.denom() as u128;
        let rhs = *eps.numer() as u128 * (1u128 << self.n);
        lhs <= rhs
    }

    /// `Σ_α coeffs[α]^2`; equals `2^n · |f^{-1}(1)|` by Parseval.
    pub fn sum_of_squares(&self) -> u128 {
        self.coeffs.iter().map(|&c| (c as i128 * c as i128) as u128).sum()
    }

    /// `Σ_α coeffs[α]^4`.
    pub fn sum_of_fourth_powers(&self) -> num_bigint::BigUint {
        self.coeffs
            .iter()
            .map(|&c| {
                let sq = (c as i128 * c as i128) as u128;
                num_bigint::BigUint::from(sq) * num_bigint::BigUint::from(sq)
            })
            .sum()
    }

    /// Recovers the truth table by Fourier inversion. Fails if the spectrum
    /// does not come from a 0/1-valued function.
    pub fn invert(&self) -> Result<BooleanFunction> {
        let mut table = self.coeffs.clone();
        wht_in_place(&mut table);
        let size = 1i64 << self.n;
        let mut out = BooleanFunction::zero(self.n)?;
        for (x, &v) in table.iter().enumerate() {
            match v {
                0 => {}
                v if v == size => out.set(x as u64, true),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "spectrum does not invert to a Boolean value at point {x}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly. The length must be a power
/// of two. Applying it twice multiplies the input by the length.
pub fn wht_in_place(data: &mut [i64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "WHT length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(half * 2) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

pub fn wht(f: &BooleanFunction) -> Result<FourierSpectrum> {
    check_limit("WHT variables", f.n() as u64, WHT_MAX_VARS as u64)?;
    let mut coeffs: Vec<i64> = (0..f.size()).map(|x| f.get(x) as i64).collect();
    wht_in_place(&mut coeffs);
    Ok(FourierSpectrum { n: f.n(), coeffs })
}

/// Whether all nonzero-frequency coefficients of `f` are at most `eps`.
/// Panics if `f` exceeds [`WHT_MAX_VARS`].
pub fn is_uniform(f: &BooleanFunction, eps: Rational) -> bool {
    wht(f)
        .expect("uniformity test beyond WHT size cap")
        .is_uniform(eps)
}

/// Number of differing points and the normalized distance.
pub fn hamming_distance(f: &BooleanFunction, g: &BooleanFunction) -> Result<(u64, Rational)> {
    check_dim(f.n(), g.n())?;
    let flips: u64 = f
        .words
        .iter()
        .zip(&g.words)
        .map(|(a, b)| (a ^ b).count_ones() as u64)
        .sum();
    Ok((flips, Rational::new(flips, f.size())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub subspace: Subspace,
    /// Fraction of cosets whose restriction is ε-uniform.
    pub uniform_fraction: Rational,
}

/// Fraction of cosets of `h` on which `f` is `eps`-uniform.
pub fn uniform_coset_fraction(f: &BooleanFunction, h: &Subspace, eps: Rational) -> Result<Rational> {
    let cosets = coset_decompose(h)?;
    let mut uniform = 0u64;
    for c in &cosets {
        if restrict_to_coset(f, c)?.is_uniform(eps) {
            uniform += 1;
        }
    }
    Ok(Rational::new(uniform, cosets.len() as u64))
}

/// Exhaustive toy-scale regularity search: the first subspace, by increasing
/// codimension and then enumeration order, on whose cosets `f` is `eps`-uniform
/// for at least a `1 − eps` fraction.
pub fn regularity_decompose(
    f: &BooleanFunction,
    eps: Rational,
    max_codim: usize,
) -> Result<Regularity> {
    let n = f.n();
    check_limit("regularity variables", n as u64, REGULARITY_MAX_VARS as u64)?;
    check_limit("regularity codimension", max_codim as u64, n as u64)?;
    let one = Rational::from_integer(1);
    let target = if eps >= one { Rational::from_integer(0) } else { one - eps };
    for codim in 0..=max_codim {
        for h in enumerate_subspaces(n, codim)? {
            let fraction = uniform_coset_fraction(f, &h, eps)?;
            if fraction >= target {
                return Ok(Regularity {
                    subspace: h,
                    uniform_fraction: fraction,
                });
            }
        }
    }
    Err(Error::ResourceLimit {
        what: "regularity codimension",
        requested: n as u64,
        limit: max_codim as u64,
    })
}

/// Convenience: the coset of `h` through `member`.
pub fn coset_of(h: &Subspace, member: u64) -> Result<Coset> {
    Coset::new(Arc::new(h.clone()), &GfVec::new(h.ambient_dim(), member)?)
}
