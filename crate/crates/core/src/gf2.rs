//! Linear algebra over GF(2) on word-packed vectors.
//!
//! Vectors live in `{0,1}^d` for `1 <= d <= 64`; coordinate `j` is bit `j`
//! of a `u64`. Textual forms are written most-significant coordinate first,
//! so `"110"` is the vector with bits 1 and 2 set.
//!
//! Subspaces are stored in reduced row echelon form: every basis vector has a
//! distinct pivot (its highest set bit), no other basis vector has that bit
//! set, and the basis is ordered by ascending pivot. This form is unique per
//! subspace, so subspace equality is basis equality.

use std::fmt;
use std::ops::BitXor;
use std::sync::Arc;

use crate::error::{check_dim, check_limit, Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

/// Default cap on the rank accepted by [`enumerate_span`].
pub const SPAN_RANK_CAP: usize = 25;

/// Largest ambient dimension accepted by [`enumerate_subspaces`].
pub const SUBSPACE_ENUM_MAX_DIM: usize = 8;

/// Largest codimension accepted by [`coset_decompose`].
pub const COSET_CODIM_CAP: usize = 20;

#[inline]
pub(crate) fn mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

#[inline]
fn pivot_of(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// A vector in `{0,1}^dim`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfVec {
    dim: u8,
    bits: u64,
}

impl GfVec {
    pub fn new(dim: usize, bits: u64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "vector dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if bits & !mask(dim) != 0 {
            return Err(Error::InvalidInput(format!(
                "bits {bits:#x} exceed dimension {dim}"
            )));
        }
        Ok(GfVec {
            dim: dim as u8,
            bits,
        })
    }

    /// Builds a vector, silently truncating bits beyond `dim`. Panics on an
    /// unsupported dimension.
    pub(crate) fn truncated(dim: usize, bits: u64) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        GfVec {
            dim: dim as u8,
            bits: bits & mask(dim),
        }
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    /// The standard basis vector `e_j`.
    pub fn unit(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::InvalidInput(format!(
                "unit index {j} out of range for dimension {dim}"
            )));
        }
        Self::new(dim, 1u64 << j)
    }

    /// Parses a binary string written most-significant coordinate first.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = 0u64;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "invalid binary digit {c:?} in {s:?}"
                    )))
                }
            };
            bits = bits.checked_shl(1).unwrap_or(0) | b;
        }
        Self::new(s.len(), bits)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        j < self.dim() && (self.bits >> j) & 1 == 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &GfVec) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok((self.bits & other.bits).count_ones() & 1 == 1)
    }

    pub fn checked_xor(&self, other: &GfVec) -> Result<GfVec> {
        check_dim(self.dim(), other.dim())?;
        Ok(GfVec {
            dim: self.dim,
            bits: self.bits ^ other.bits,
        })
    }
}

impl BitXor for GfVec {
    type Output = GfVec;

    /// Panics on mismatched dimensions; use [`GfVec::checked_xor`] otherwise.
    fn bitxor(self, rhs: GfVec) -> GfVec {
        assert_eq!(self.dim, rhs.dim, "xor of vectors with different dimensions");
        GfVec {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl fmt::Display for GfVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..self.dim()).rev() {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for GfVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfVec({self})")
    }
}

/// A linear subspace of `{0,1}^ambient_dim` in canonical echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<u64>,
}

impl Subspace {
    /// The zero subspace.
    pub fn trivial(ambient_dim: usize) -> Result<Self> {
        GfVec::zero(ambient_dim)?;
        Ok(Subspace {
            ambient_dim,
            basis: Vec::new(),
        })
    }

    /// The whole space `{0,1}^ambient_dim`.
    pub fn whole(ambient_dim: usize) -> Result<Self> {
        let mut s = Self::trivial(ambient_dim)?;
        s.basis = (0..ambient_dim).map(|j| 1u64 << j).collect();
        Ok(s)
    }

    pub fn span(ambient_dim: usize, vectors: &[GfVec]) -> Result<Self> {
        let mut s = Self::trivial(ambient_dim)?;
        for v in vectors {
            check_dim(ambient_dim, v.dim())?;
            s.insert_bits(v.bits);
        }
        Ok(s)
    }

    pub(crate) fn from_bits(ambient_dim: usize, vectors: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Subspace {
            ambient_dim,
            basis: Vec::new(),
        };
        for v in vectors {
            s.insert_bits(v & mask(ambient_dim));
        }
        s
    }

    /// Adds a vector to the spanning set. Returns `true` if the dimension grew.
    pub(crate) fn insert_bits(&mut self, x: u64) -> bool {
        let x = self.reduce_bits(x);
        if x == 0 {
            return false;
        }
        let p = pivot_of(x);
        for b in self.basis.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= x;
            }
        }
        let pos = self.basis.partition_point(|b| pivot_of(*b) < p);
        self.basis.insert(pos, x);
        true
    }

    pub fn insert(&mut self, v: &GfVec) -> Result<bool> {
        check_dim(self.ambient_dim, v.dim())?;
        Ok(self.insert_bits(v.bits))
    }

    /// Reduces `x` against the basis; the result has zeros at every pivot and
    /// is the smallest member (as an integer) of the coset `x + self`.
    #[inline]
    pub(crate) fn reduce_bits(&self, mut x: u64) -> u64 {
        for &b in &self.basis {
            if (x >> pivot_of(b)) & 1 == 1 {
                x ^= b;
            }
        }
        x
    }

    pub fn reduce(&self, v: &GfVec) -> Result<GfVec> {
        check_dim(self.ambient_dim, v.dim())?;
        Ok(GfVec::truncated(self.ambient_dim, self.reduce_bits(v.bits)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> Vec<GfVec> {
        self.basis
            .iter()
            .map(|&b| GfVec::truncated(self.ambient_dim, b))
            .collect()
    }

    /// Bitmask of pivot positions.
    pub(crate) fn pivot_mask(&self) -> u64 {
        self.basis.iter().fold(0, |acc, &b| acc | (1u64 << pivot_of(b)))
    }

    pub fn contains(&self, v: &GfVec) -> Result<bool> {
        check_dim(self.ambient_dim, v.dim())?;
        Ok(self.reduce_bits(v.bits) == 0)
    }

    #[inline]
    pub(crate) fn contains_bits(&self, x: u64) -> bool {
        self.reduce_bits(x) == 0
    }

    /// Maps internal coordinates to a member: bit `j` of `h` selects basis
    /// vector `j` (ascending pivot order).
    #[inline]
    pub(crate) fn embed_bits(&self, h: u64) -> u64 {
        let mut x = 0;
        let mut h = h;
        while h != 0 {
            let j = h.trailing_zeros() as usize;
            x ^= self.basis[j];
            h &= h - 1;
        }
        x
    }

    /// Inverse of [`Subspace::embed_bits`] on members of the subspace.
    pub(crate) fn coordinates_bits(&self, x: u64) -> Option<u64> {
        let mut h = 0;
        let mut rest = x;
        for (j, &b) in self.basis.iter().enumerate() {
            if (rest >> pivot_of(b)) & 1 == 1 {
                rest ^= b;
                h |= 1 << j;
            }
        }
        (rest == 0).then_some(h)
    }

    /// Internal coordinates of a member, or `None` for a non-member.
    pub fn coordinates(&self, x: &GfVec) -> Result<Option<GfVec>> {
        check_dim(self.ambient_dim, x.dim())?;
        Ok(self
            .coordinates_bits(x.bits)
            .map(|h| GfVec::truncated(self.dim().max(1), h)))
    }

    pub fn embed(&self, h: &GfVec) -> Result<GfVec> {
        check_dim(self.dim(), h.dim())?;
        Ok(GfVec::truncated(self.ambient_dim, self.embed_bits(h.bits)))
    }

    /// The annihilator `{y : <x,y> = 0 for all x in self}`.
    pub fn orthogonal_complement(&self) -> Subspace {
        let pivots = self.pivot_mask();
        let mut out = Vec::with_capacity(self.codim());
        for j in 0..self.ambient_dim {
            if (pivots >> j) & 1 == 1 {
                continue;
            }
            let mut w = 1u64 << j;
            for &b in &self.basis {
                if (b >> j) & 1 == 1 {
                    w |= 1u64 << pivot_of(b);
                }
            }
            out.push(w);
        }
        Subspace::from_bits(self.ambient_dim, out)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("basis", &self.basis())
            .finish()
    }
}

/// A coset `rep + subspace`, with `rep` the reduced (smallest) member.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coset {
    subspace: Arc<Subspace>,
    rep: GfVec,
}

impl Coset {
    /// The coset of `subspace` containing `member`.
    pub fn new(subspace: Arc<Subspace>, member: &GfVec) -> Result<Self> {
        let rep = subspace.reduce(member)?;
        Ok(Coset { subspace, rep })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn rep(&self) -> GfVec {
        self.rep
    }

    pub fn contains(&self, v: &GfVec) -> Result<bool> {
        Ok(self.subspace.reduce(v)? == self.rep)
    }

    /// Members in internal-coordinate order: the `h`-th member is
    /// `rep ⊕ embed(h)`.
    pub fn members(&self) -> impl Iterator<Item = GfVec> + '_ {
        let n = self.subspace.ambient_dim;
        (0..1u64 << self.subspace.dim())
            .map(move |h| GfVec::truncated(n, self.rep.bits ^ self.subspace.embed_bits(h)))
    }
}

/// A linear map `{0,1}^domain_dim -> {0,1}^codomain_dim`, given by the images
/// of the standard basis vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearMap {
    codomain_dim: usize,
    images: Vec<u64>,
}

impl LinearMap {
    pub fn new(codomain_dim: usize, images: &[GfVec]) -> Result<Self> {
        if images.is_empty() || images.len() > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "linear map domain dimension {} outside 1..={MAX_DIM}",
                images.len()
            )));
        }
        GfVec::zero(codomain_dim)?;
        for v in images {
            check_dim(codomain_dim, v.dim())?;
        }
        Ok(LinearMap {
            codomain_dim,
            images: images.iter().map(GfVec::bits).collect(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        GfVec::zero(n)?;
        Ok(LinearMap {
            codomain_dim: n,
            images: (0..n).map(|j| 1u64 << j).collect(),
        })
    }

    pub fn domain_dim(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn images(&self) -> Vec<GfVec> {
        self.images
            .iter()
            .map(|&b| GfVec::truncated(self.codomain_dim, b))
            .collect()
    }

    #[inline]
    pub(crate) fn apply_bits(&self, x: u64) -> u64 {
        let mut y = 0;
        let mut x = x;
        while x != 0 {
            y ^= self.images[x.trailing_zeros() as usize];
            x &= x - 1;
        }
        y
    }

    pub fn apply(&self, x: &GfVec) -> Result<GfVec> {
        check_dim(self.domain_dim(), x.dim())?;
        Ok(GfVec::truncated(self.codomain_dim, self.apply_bits(x.bits)))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        check_dim(self.domain_dim(), inner.codomain_dim)?;
        Ok(LinearMap {
            codomain_dim: self.codomain_dim,
            images: inner.images.iter().map(|&b| self.apply_bits(b)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        Subspace::from_bits(self.codomain_dim, self.images.iter().copied()).dim()
            == self.domain_dim()
    }
}

pub fn apply_map(map: &LinearMap, x: &GfVec) -> Result<GfVec> {
    map.apply(x)
}

/// Rank of a family of vectors in `{0,1}^dim` together with the canonical
/// basis of their span.
pub fn rank_and_basis(dim: usize, vectors: &[GfVec]) -> Result<(usize, Subspace)> {
    let s = Subspace::span(dim, vectors)?;
    Ok((s.dim(), s))
}

/// Whether `v` is a GF(2) combination of `vectors`. The zero vector is always
/// in the span.
pub fn in_span(v: &GfVec, vectors: &[GfVec]) -> Result<bool> {
    Subspace::span(v.dim(), vectors)?.contains(v)
}

/// All elements of the span, capped at rank [`SPAN_RANK_CAP`].
pub fn enumerate_span(dim: usize, vectors: &[GfVec]) -> Result<Vec<GfVec>> {
    enumerate_span_capped(dim, vectors, SPAN_RANK_CAP)
}

/// Lists the span in lexicographic order of combination bits over the
/// independent input vectors: the first independent vector is the most
/// significant combination bit. Dependent inputs are skipped in order.
pub fn enumerate_span_capped(dim: usize, vectors: &[GfVec], cap: usize) -> Result<Vec<GfVec>> {
    let mut seen = Subspace::trivial(dim)?;
    let mut gens = Vec::new();
    for v in vectors {
        if seen.insert(v)? {
            gens.push(v.bits);
        }
    }
    let r = gens.len();
    check_limit("span rank", r as u64, cap as u64)?;
    Ok((0..1u64 << r)
        .map(|idx| {
            let x = gens
                .iter()
                .enumerate()
                .filter(|(j, _)| (idx >> (r - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, g)| acc ^ g);
            GfVec::truncated(dim, x)
        })
        .collect())
}

/// Streams every subspace of `{0,1}^n` of the given codimension exactly once.
///
/// Subspaces are produced as kernels of constraint matrices in reduced echelon
/// form. Order: pivot sets in lexicographic order of ascending positions, then
/// the free entries as a counter.
pub fn enumerate_subspaces(n: usize, codim: usize) -> Result<SubspaceIter> {
    GfVec::zero(n)?;
    check_limit("subspace enumeration dimension", n as u64, SUBSPACE_ENUM_MAX_DIM as u64)?;
    check_limit("subspace codimension", codim as u64, n as u64)?;
    Ok(SubspaceIter {
        n,
        pivots: Some((0..codim).collect()),
        counter: 0,
    })
}

pub struct SubspaceIter {
    n: usize,
    pivots: Option<Vec<usize>>,
    counter: u64,
}

impl SubspaceIter {
    /// Free positions per constraint row: non-pivot positions below the pivot.
    fn free_layout(&self, pivots: &[usize]) -> Vec<Vec<usize>> {
        let pivot_mask: u64 = pivots.iter().fold(0, |m, &p| m | (1 << p));
        pivots
            .iter()
            .map(|&p| (0..p).filter(|q| (pivot_mask >> q) & 1 == 0).collect())
            .collect()
    }

    fn advance_pivots(&mut self) {
        let n = self.n;
        let Some(p) = self.pivots.as_mut() else {
            return;
        };
        let c = p.len();
        let mut i = c;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if p[i] < n - c + i {
                p[i] += 1;
                for j in i + 1..c {
                    p[j] = p[j - 1] + 1;
                }
                self.counter = 0;
                return;
            }
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let pivots = self.pivots.clone()?;
        let layout = self.free_layout(&pivots);
        let free_bits: usize = layout.iter().map(Vec::len).sum();
        let mut c = self.counter;
        let rows: Vec<u64> = pivots
            .iter()
            .zip(&layout)
            .map(|(&p, free)| {
                let mut row = 1u64 << p;
                for &q in free {
                    if c & 1 == 1 {
                        row |= 1 << q;
                    }
                    c >>= 1;
                }
                row
            })
            .collect();
        self.counter += 1;
        if self.counter >> free_bits != 0 {
            self.advance_pivots();
        }
        let constraints = Subspace::from_bits(self.n, rows);
        Some(constraints.orthogonal_complement())
    }
}

/// Splits `{0,1}^n` into the cosets of `subspace`, sorted by representative.
pub fn coset_decompose(subspace: &Subspace) -> Result<Vec<Coset>> {
    let codim = subspace.codim();
    check_limit("coset codimension", codim as u64, COSET_CODIM_CAP as u64)?;
    let shared = Arc::new(subspace.clone());
    let free: Vec<usize> = (0..subspace.ambient_dim())
        .filter(|j| (subspace.pivot_mask() >> j) & 1 == 0)
        .collect();
    // Representatives are exactly the vectors supported on non-pivot
    // positions; counting over those positions in order keeps them sorted.
    Ok((0..1u64 << codim)
        .map(|c| {
            let rep = free
                .iter()
                .enumerate()
                .filter(|(i, _)| (c >> i) & 1 == 1)
                .fold(0u64, |acc, (_, &q)| acc | (1 << q));
            Coset {
                subspace: Arc::clone(&shared),
                rep: GfVec::truncated(subspace.ambient_dim(), rep),
            }
        })
        .collect())
}
