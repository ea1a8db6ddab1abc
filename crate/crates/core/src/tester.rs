//! `(M, Σ)`-freeness: exhaustive search and counting, the sampled k-query
//! tester, exact repair distance at small scale, and the quantities used in
//! the soundness analysis.
//!
//! Whether `f` contains `(M, Σ)` at `L` only depends on `L` restricted to
//! `span{v_i}`. Searches therefore enumerate images of a fixed span basis
//! (chosen greedily among the `v_i` in index order): `2^{n·r}` assignments for
//! rank `r`, each standing for `2^{n(m−r)}` full maps `{0,1}^m -> {0,1}^n`.
//! Degenerate maps count, so `f(0) = 1` already violates `Σ = 1^k`.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boolfn::{restrict_to_coset, wht, BooleanFunction, Rational, WHT_MAX_VARS};
use crate::error::{check_dim, check_limit, Error, Result};
use crate::gf2::{coset_decompose, mask, GfVec, LinearMap, Subspace, MAX_DIM};
use crate::matroid::{complexity_at, BinaryMatroid};

/// Cap on `n · rank` for exhaustive pattern searches.
pub const SEARCH_BITS_CAP: u64 = 30;
/// Cap on `n · rank` for the von Neumann check.
pub const VON_NEUMANN_BITS_CAP: u64 = 26;
/// Cap on the number of ones for the monotone repair search.
pub const REPAIR_ONES_CAP: u64 = 24;
/// Cap on the domain size for the non-monotone repair search.
pub const REPAIR_POINTS_CAP: u64 = 16;
/// Cap on enumerated instances for the hitting-set computation.
pub const HITTING_INSTANCES_CAP: u64 = 10_000_000;
/// Samples per RNG shard in [`run_tester`].
pub const TESTER_SHARD: u64 = 4096;

/// The forbidden value string `Σ`; position `i` constrains element `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    bits: Vec<bool>,
}

impl PatternSpec {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() || bits.len() > 64 {
            return Err(Error::InvalidInput(format!(
                "pattern length {} outside 1..=64",
                bits.len()
            )));
        }
        Ok(PatternSpec { bits })
    }

    /// Parses a string such as `"0011"`, where character `i` is `σ_i`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInput(format!("invalid pattern symbol {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    pub fn all_ones(k: usize) -> Result<Self> {
        Self::new(vec![true; k])
    }

    pub fn all_zeros(k: usize) -> Result<Self> {
        Self::new(vec![false; k])
    }

    pub fn k(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `O(Σ)`.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `Z(Σ)`.
    pub fn zeros(&self) -> usize {
        self.k() - self.ones()
    }

    pub fn is_all_ones(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn is_all_zeros(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn complement(&self) -> Self {
        PatternSpec {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// `Σ ∘ suffix`.
    pub fn concat(&self, suffix: &[bool]) -> Result<Self> {
        Self::new(self.bits.iter().chain(suffix).copied().collect())
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternSpec({self})")
    }
}

/// How each matroid element is expressed over the span basis, and at which
/// search level its image becomes known.
#[derive(Clone, Debug)]
pub(crate) struct SpanPlan {
    rank: usize,
    basis_elements: Vec<usize>,
    coords: Vec<u64>,
    levels: Vec<Vec<usize>>,
    at_origin: Vec<usize>,
}

impl SpanPlan {
    pub(crate) fn new(m: &BinaryMatroid) -> Self {
        let mut pivots: [Option<(u64, u64)>; MAX_DIM] = [None; MAX_DIM];
        let mut basis_elements = Vec::new();
        let mut coords = Vec::with_capacity(m.k());
        for (i, v) in m.vectors().iter().enumerate() {
            let mut x = v.bits();
            let mut comb = 0u64;
            while x != 0 {
                let p = 63 - x.leading_zeros() as usize;
                match pivots[p] {
                    Some((px, pc)) => {
                        x ^= px;
                        comb ^= pc;
                    }
                    None => break,
                }
            }
            if x == 0 {
                coords.push(comb);
            } else {
                let slot = basis_elements.len();
                basis_elements.push(i);
                let p = 63 - x.leading_zeros() as usize;
                pivots[p] = Some((x, comb ^ (1 << slot)));
                coords.push(1 << slot);
            }
        }
        let rank = basis_elements.len();
        let mut levels = vec![Vec::new(); rank];
        let mut at_origin = Vec::new();
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                at_origin.push(i);
            } else {
                levels[63 - c.leading_zeros() as usize].push(i);
            }
        }
        SpanPlan {
            rank,
            basis_elements,
            coords,
            levels,
            at_origin,
        }
    }

    #[inline]
    fn point(&self, images: &[u64], elem: usize) -> u64 {
        let mut c = self.coords[elem];
        let mut x = 0;
        while c != 0 {
            x ^= images[c.trailing_zeros() as usize];
            c &= c - 1;
        }
        x
    }
}

/// One constraint per element: the table to read and the required value.
type Check<'a> = (&'a BooleanFunction, bool);

/// Depth-first enumeration of span-basis assignments whose evaluated tuple
/// satisfies every element check, in lexicographic order of
/// `(image_0, image_1, …)`.
struct Enumerator<'a> {
    plan: &'a SpanPlan,
    checks: Vec<Check<'a>>,
    n: usize,
}

impl<'a> Enumerator<'a> {
    fn new(plan: &'a SpanPlan, checks: Vec<Check<'a>>, n: usize) -> Result<Self> {
        check_limit(
            "pattern search bits (n·rank)",
            (n * plan.rank) as u64,
            SEARCH_BITS_CAP,
        )?;
        Ok(Enumerator { plan, checks, n })
    }

    fn origin_ok(&self) -> bool {
        self.plan.at_origin.iter().all(|&e| {
            let (t, want) = self.checks[e];
            t.get(0) == want
        })
    }

    /// Walks matching assignments with `image_0` restricted to `first`.
    fn walk(
        &self,
        first: std::ops::Range<u64>,
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if !self.origin_ok() {
            return ControlFlow::Continue(());
        }
        let mut images = vec![0u64; self.plan.rank];
        if self.plan.rank == 0 {
            return visit(&images);
        }
        self.level(0, first, &mut images, visit)
    }

    fn level(
        &self,
        j: usize,
        range: std::ops::Range<u64>,
        images: &mut [u64],
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let elems = &self.plan.levels[j];
        images[j] = 0;
        let lower: Vec<u64> = elems.iter().map(|&e| self.plan.point(images, e)).collect();
        for u in range {
            let ok = elems.iter().zip(&lower).all(|(&e, &lo)| {
                let (t, want) = self.checks[e];
                t.get(u ^ lo) == want
            });
            if !ok {
                continue;
            }
            images[j] = u;
            if j + 1 == images.len() {
                visit(images)?;
            } else {
                self.level(j + 1, 0..1u64 << self.n, images, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn count(&self) -> u64 {
        if self.plan.rank == 0 {
            let mut c = 0;
            let _ = self.walk(0..1, &mut |_| {
                c += 1;
                ControlFlow::Continue(())
            });
            return c;
        }
        (0..1u64 << self.n)
            .into_par_iter()
            .map(|u| {
                let mut c = 0u64;
                let _ = self.walk(u..u + 1, &mut |_| {
                    c += 1;
                    ControlFlow::Continue(())
                });
                c
            })
            .sum()
    }

    fn first(&self) -> Option<Vec<u64>> {
        let mut found = None;
        let _ = self.walk(0..1u64 << self.n.min(63), &mut |images| {
            found = Some(images.to_vec());
            ControlFlow::Break(())
        });
        found
    }
}

fn pattern_checks<'a>(
    f: &'a BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
) -> Result<Vec<Check<'a>>> {
    check_dim(m.k(), sigma.k())?;
    Ok(sigma.bits().iter().map(|&b| (f, b)).collect())
}

/// A linear map at which `f` shows the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternInstance {
    /// Matroid elements forming the span basis, in slot order.
    pub basis_elements: Vec<usize>,
    /// Image of each span-basis element.
    pub images: Vec<GfVec>,
    /// `L(v_i)` for every element.
    pub points: Vec<GfVec>,
}

impl PatternInstance {
    /// The assignment as a linear map `{0,1}^r -> {0,1}^n`.
    pub fn map(&self) -> Result<LinearMap> {
        let n = self.points.first().map(GfVec::dim).unwrap_or(1);
        LinearMap::new(n, &self.images)
    }
}

fn instance(plan: &SpanPlan, images: &[u64], n: usize, k: usize) -> PatternInstance {
    let dim = n.max(1);
    PatternInstance {
        basis_elements: plan.basis_elements.clone(),
        images: images.iter().map(|&u| GfVec::truncated(dim, u)).collect(),
        points: (0..k)
            .map(|e| GfVec::truncated(dim, plan.point(images, e)))
            .collect(),
    }
}

/// The first instance of `(M, Σ)` in `f`, or `None` if `f` is free.
pub fn find_pattern(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
) -> Result<Option<PatternInstance>> {
    let plan = SpanPlan::new(m);
    let e = Enumerator::new(&plan, pattern_checks(f, m, sigma)?, f.n())?;
    Ok(e.first().map(|images| instance(&plan, &images, f.n(), m.k())))
}

pub fn is_free(f: &BooleanFunction, m: &BinaryMatroid, sigma: &PatternSpec) -> Result<bool> {
    Ok(find_pattern(f, m, sigma)?.is_none())
}

/// Visits every instance of `(M, Σ)` in `f`.
pub fn for_each_instance(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
    mut visit: impl FnMut(&PatternInstance) -> ControlFlow<()>,
) -> Result<()> {
    let plan = SpanPlan::new(m);
    let e = Enumerator::new(&plan, pattern_checks(f, m, sigma)?, f.n())?;
    let _ = e.walk(0..1u64 << f.n(), &mut |images| {
        visit(&instance(&plan, images, f.n(), m.k()))
    });
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    /// Span-basis assignments showing the pattern.
    pub span_count: u64,
    pub n: usize,
    pub rank: usize,
    /// Ambient dimension `m` of the matroid presentation.
    pub ambient_dim: usize,
    /// `span_count · 2^{n(m−r)}`: number of full maps `{0,1}^m -> {0,1}^n`.
    pub full_map_count: BigUint,
}

impl CountReport {
    /// `span_count / 2^{n·r}`, the rejection probability of one tester draw.
    pub fn density(&self) -> Rational {
        Rational::new(self.span_count, 1u64 << (self.n * self.rank))
    }
}

/// Exact number of pattern-showing assignments.
pub fn count_patterns(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
) -> Result<CountReport> {
    let plan = SpanPlan::new(m);
    let e = Enumerator::new(&plan, pattern_checks(f, m, sigma)?, f.n())?;
    let span_count = e.count();
    let free_bits = f.n() * (m.m() - plan.rank);
    Ok(CountReport {
        span_count,
        n: f.n(),
        rank: plan.rank,
        ambient_dim: m.m(),
        full_map_count: BigUint::from(span_count) << free_bits,
    })
}

/// Number of tuples `(x_1..x_k)` with `Σ x_i = 0` and every `f(x_i) = 1`,
/// computed as `2^{−n} Σ_α coeffs[α]^k`.
pub fn cycle_count_fourier(f: &BooleanFunction, k: usize) -> Result<BigUint> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length {k} < 3")));
    }
    check_limit("cycle count variables", f.n() as u64, WHT_MAX_VARS as u64)?;
    let spectrum = wht(f)?;
    let total: BigInt = spectrum
        .coeffs()
        .par_iter()
        .map(|&c| BigInt::from(c).pow(k as u32))
        .sum();
    let (q, r) = (total.clone() >> f.n(), total.clone() - ((total >> f.n()) << f.n()));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::InvalidInput(
            "Fourier cycle sum is not a non-negative multiple of 2^n".into(),
        ));
    }
    Ok(q.to_biguint().expect("non-negative"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterOutcome {
    pub samples: u64,
    pub rejections: u64,
    pub rate: Rational,
}

/// Per-sample outcomes of the k-query tester. Sample `s` belongs to shard
/// `s / TESTER_SHARD`, whose generator is ChaCha8 seeded with `seed` on
/// stream `shard`; each draw takes `m` images in `{0,1}^n` (one per ambient
/// basis vector) from that stream.
pub fn tester_trace(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
    samples: u64,
    seed: u64,
) -> Result<Vec<bool>> {
    check_dim(m.k(), sigma.k())?;
    if samples == 0 {
        return Err(Error::InvalidInput("tester needs at least one sample".into()));
    }
    let n = f.n();
    let shards = samples.div_ceil(TESTER_SHARD);
    let vectors: Vec<u64> = m.vectors().iter().map(GfVec::bits).collect();
    let traces: Vec<Vec<bool>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let start = shard * TESTER_SHARD;
            let end = (start + TESTER_SHARD).min(samples);
            let mut images = vec![0u64; m.m()];
            (start..end)
                .map(|_| {
                    for img in images.iter_mut() {
                        *img = rng.gen::<u64>() & mask(n);
                    }
                    vectors.iter().zip(sigma.bits()).all(|(&v, &want)| {
                        let mut x = v;
                        let mut p = 0u64;
                        while x != 0 {
                            p ^= images[x.trailing_zeros() as usize];
                            x &= x - 1;
                        }
                        f.get(p) == want
                    })
                })
                .collect()
        })
        .collect();
    Ok(traces.concat())
}

/// The k-query tester: draws uniform linear maps and rejects a draw when the
/// queried tuple equals `Σ`.
pub fn run_tester(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
    samples: u64,
    seed: u64,
) -> Result<TesterOutcome> {
    let rejections = tester_trace(f, m, sigma, samples, seed)?
        .into_iter()
        .filter(|&r| r)
        .count() as u64;
    Ok(TesterOutcome {
        samples,
        rejections,
        rate: Rational::new(rejections, samples),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repair {
    pub flips: u64,
    pub distance: Rational,
    pub witness: BooleanFunction,
}

/// Calls `visit` on every `size`-subset of `0..len` in lexicographic order,
/// stopping when it returns `true`.
fn any_combination(len: usize, size: usize, mut visit: impl FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    if size > len {
        return Ok(false);
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if visit(&idx)? {
            return Ok(true);
        }
        let mut i = size;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if idx[i] < len - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact distance from `f` to the `(M, Σ)`-free functions, with a closest
/// free function. For `Σ = 1^k` only sets of ones are cleared; otherwise every
/// flip set is tried by increasing size.
pub fn min_repair_distance(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    sigma: &PatternSpec,
) -> Result<Repair> {
    check_dim(m.k(), sigma.k())?;
    let candidates: Vec<u64> = if sigma.is_all_ones() {
        check_limit("repair search ones", f.count_ones(), REPAIR_ONES_CAP)?;
        f.ones().collect()
    } else {
        check_limit("repair search points", f.size(), REPAIR_POINTS_CAP)?;
        (0..f.size()).collect()
    };
    for size in 0..=candidates.len() {
        let mut witness = None;
        any_combination(candidates.len(), size, |picked| {
            let mut g = f.clone();
            for &i in picked {
                g.flip(candidates[i]);
            }
            if is_free(&g, m, sigma)? {
                witness = Some(g);
                return Ok(true);
            }
            Ok(false)
        })?;
        if let Some(witness) = witness {
            return Ok(Repair {
                flips: size as u64,
                distance: Rational::new(size as u64, f.size()),
                witness,
            });
        }
    }
    unreachable!("flipping every candidate reaches a constant function, which is free or was skipped")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    pub size: usize,
    /// Points of a minimum hitting set.
    pub points: Vec<u64>,
    /// Distinct point sets of all-ones instances.
    pub distinct_instances: usize,
}

/// Minimum number of ones of `f` meeting every all-ones instance of `M`,
/// by branch and bound over the instance hypergraph.
pub fn pattern_hitting_number(
    f: &BooleanFunction,
    m: &BinaryMatroid,
    budget: u64,
) -> Result<HittingSet> {
    let ones: Vec<u64> = f.ones().collect();
    check_limit("hitting-set ones", ones.len() as u64, 128)?;
    let index_of = |x: u64| ones.binary_search(&x).expect("instance point is a one") as u32;
    let sigma = PatternSpec::all_ones(m.k())?;
    let mut edges: HashSet<u128> = HashSet::new();
    let mut visited = 0u64;
    let mut overflow = false;
    for_each_instance(f, m, &sigma, |inst| {
        visited += 1;
        if visited > HITTING_INSTANCES_CAP {
            overflow = true;
            return ControlFlow::Break(());
        }
        let edge = inst
            .points
            .iter()
            .fold(0u128, |acc, p| acc | (1u128 << index_of(p.bits())));
        edges.insert(edge);
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::ResourceLimit {
            what: "hitting-set instances",
            requested: visited,
            limit: HITTING_INSTANCES_CAP,
        });
    }
    let mut edges: Vec<u128> = edges.into_iter().collect();
    edges.sort_unstable_by_key(|e| (e.count_ones(), *e));
    let distinct_instances = edges.len();

    let greedy = greedy_hitting_set(&edges);
    let mut best = (greedy.count_ones() as usize, greedy);
    let mut nodes = 0u64;
    branch_hitting_set(&edges, 0, &mut best, &mut nodes, budget)?;
    let points = (0..128)
        .filter(|i| (best.1 >> i) & 1 == 1)
        .map(|i| ones[i])
        .collect();
    Ok(HittingSet {
        size: best.0,
        points,
        distinct_instances,
    })
}

fn greedy_hitting_set(edges: &[u128]) -> u128 {
    let mut chosen = 0u128;
    loop {
        let open: Vec<u128> = edges.iter().copied().filter(|e| e & chosen == 0).collect();
        if open.is_empty() {
            return chosen;
        }
        let best = (0..128)
            .max_by_key(|&i| open.iter().filter(|&&e| (e >> i) & 1 == 1).count())
            .expect("nonempty range");
        chosen |= 1u128 << best;
    }
}

/// Disjoint open edges each need their own vertex.
fn packing_bound(open: &[u128]) -> usize {
    let mut used = 0u128;
    let mut count = 0;
    for &e in open {
        if e & used == 0 {
            used |= e;
            count += 1;
        }
    }
    count
}

fn branch_hitting_set(
    edges: &[u128],
    chosen: u128,
    best: &mut (usize, u128),
    nodes: &mut u64,
    budget: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded {
            what: "hitting-set branch and bound",
            budget,
        });
    }
    let depth = chosen.count_ones() as usize;
    let open: Vec<u128> = edges.iter().copied().filter(|e| e & chosen == 0).collect();
    if open.is_empty() {
        if depth < best.0 {
            *best = (depth, chosen);
        }
        return Ok(());
    }
    if depth + packing_bound(&open) >= best.0 {
        return Ok(());
    }
    // Edges are sorted by size, so the first open edge is a smallest one.
    let edge = open[0];
    let mut rest = edge;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        branch_hitting_set(edges, chosen | (1u128 << v), best, nodes, budget)?;
    }
    Ok(())
}

/// Iterated exponential: `W(0) = 1`, `W(h) = 2^{W(h−1)}`. Exact for `h <= 4`.
pub fn tower(height: u32) -> Option<BigUint> {
    let mut w = BigUint::one();
    if height > 4 {
        return None;
    }
    for _ in 0..height {
        let e = w.to_u64().expect("tower exponent fits for height <= 4");
        w = BigUint::one() << e;
    }
    Some(w)
}

/// `2^{−multiplier · (W(height) + additive)} · prefactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerExpr {
    pub multiplier: u64,
    pub height: BigUint,
    pub additive: u64,
    pub prefactor: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerValue {
    Exact(BigRational),
    /// Too tall to evaluate; only the height of the tower is reported.
    HeightOnly { height: BigUint },
}

impl TowerExpr {
    pub fn evaluate(&self) -> TowerValue {
        let small = self.height.to_u32().filter(|&h| h <= 4);
        match small.and_then(tower) {
            Some(w) => {
                let exponent = (w + self.additive) * self.multiplier;
                let exponent = exponent.to_usize().expect("exponent fits in memory");
                let denom = BigInt::one() << exponent;
                TowerValue::Exact(self.prefactor.clone() / BigRational::from_integer(denom))
            }
            None => TowerValue::HeightOnly {
                height: self.height.clone(),
            },
        }
    }
}

impl fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "2^(-{}*(W({})+{})) * {}",
            self.multiplier, self.height, self.additive, self.prefactor
        )
    }
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn ceil_big(r: &BigRational) -> BigUint {
    r.ceil().to_integer().to_biguint().expect("positive height")
}

/// Lower bound on the rejection probability of the monotone tester for a
/// complexity-1 matroid with `k` elements and an `eps`-far input:
/// `2^{−k(W(⌈(4/ε)^{6k}⌉)+2)} · ε^k`.
pub fn soundness_bound(eps: Rational, k: usize) -> Result<TowerExpr> {
    let one = Rational::from_integer(1);
    if eps.numer() == &0 || eps > one {
        return Err(Error::InvalidInput("soundness bound needs 0 < ε <= 1".into()));
    }
    let e = big(eps);
    let base = BigRational::from_integer(BigInt::from(4)) / e.clone();
    Ok(TowerExpr {
        multiplier: k as u64,
        height: ceil_big(&base.pow(6 * k as i32)),
        additive: 2,
        prefactor: e.pow(k as i32),
    })
}

/// The two cases of the non-monotone cycle tester analysis, sharing
/// `a(ε) = ½(1−η)^k ε^k` and tower height `⌈a(ε)^{−3}⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMonotoneBound {
    /// Some queried coset is uniform: prefactor `(1−η)^k ε^k / 2`.
    pub uniform_case: TowerExpr,
    /// No queried coset is uniform: prefactor `(1−η)^{k−2}(2η−1)`.
    pub nonuniform_case: TowerExpr,
}

pub fn nonmonotone_soundness_bound(eps: Rational, k: usize, eta: Rational) -> Result<NonMonotoneBound> {
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    if eps.numer() == &0 || eps > one {
        return Err(Error::InvalidInput("soundness bound needs 0 < ε <= 1".into()));
    }
    if eta <= half || eta >= one {
        return Err(Error::InvalidInput("non-monotone bound needs 1/2 < η < 1".into()));
    }
    if k < 3 {
        return Err(Error::InvalidInput("cycle length must be at least 3".into()));
    }
    let e = big(eps);
    let slack = big(one - eta);
    let two = BigRational::from_integer(BigInt::from(2));
    let a = slack.pow(k as i32) * e.pow(k as i32) / two.clone();
    let height = ceil_big(&a.pow(-3));
    let expr = |prefactor| TowerExpr {
        multiplier: k as u64 - 1,
        height: height.clone(),
        additive: 0,
        prefactor,
    };
    Ok(NonMonotoneBound {
        uniform_case: expr(a.clone()),
        nonuniform_case: expr(slack.pow(k as i32 - 2) * (two * big(eta) - BigRational::one())),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VonNeumannGap {
    /// `E_L[Π f_i(L v_i)]`, exact.
    pub lhs: Rational,
    /// `min_i (Σ_α f̂_i(α)^4)^{1/4}`, rounded to 12 decimals.
    pub rhs: f64,
    /// Index attaining the minimum.
    pub argmin: usize,
    /// `lhs <= rhs`, decided on exact fourth powers.
    pub holds: bool,
}

/// Compares the expectation of `Π f_i(L v_i)` with the smallest `ℓ^4` norm of
/// the normalized spectra. The matroid must have complexity at most 1.
pub fn von_neumann_gap(fs: &[BooleanFunction], m: &BinaryMatroid) -> Result<VonNeumannGap> {
    check_dim(m.k(), fs.len())?;
    let n = fs[0].n();
    for f in fs {
        check_dim(n, f.n())?;
    }
    for i in 0..m.k() {
        if !complexity_at(m, i, 1)? {
            return Err(Error::InvalidInput(format!(
                "matroid does not have complexity 1 at element {i}"
            )));
        }
    }
    let plan = SpanPlan::new(m);
    check_limit(
        "von Neumann bits (n·rank)",
        (n * plan.rank) as u64,
        VON_NEUMANN_BITS_CAP,
    )?;
    let checks = fs.iter().map(|f| (f, true)).collect();
    let count = Enumerator::new(&plan, checks, n)?.count();
    let space_bits = n * plan.rank;

    let fourth: Vec<BigUint> = fs
        .iter()
        .map(|f| wht(f).map(|s| s.sum_of_fourth_powers()))
        .collect::<Result<_>>()?;
    let (argmin, smallest) = fourth
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .expect("at least one function");
    // (count / 2^{n r})^4 <= S / 2^{4n}  <=>  count^4 · 2^{4n} <= S · 2^{4 n r}
    let lhs4 = BigUint::from(count).pow(4) << (4 * n);
    let rhs4 = smallest.clone() << (4 * space_bits);
    let rhs = smallest.to_f64().unwrap_or(f64::INFINITY).powf(0.25) / (1u64 << n) as f64;
    Ok(VonNeumannGap {
        lhs: Rational::new(count, 1u64 << space_bits),
        rhs: (rhs * 1e12).round() / 1e12,
        argmin,
        holds: lhs4 <= rhs4,
    })
}

/// Rounding applied to each coset when building the reduced function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingMode {
    /// Uniform cosets of density `<= b` and all non-uniform cosets become 0.
    Monotone,
    /// Uniform cosets: density `< b` → 0, `> 1−b` → 1. Non-uniform cosets:
    /// 1 when the density of ones is at least `η`, else 0.
    NonMonotone,
    /// As [`RoundingMode::NonMonotone`] with the roles of 0 and 1 swapped on
    /// non-uniform cosets, for patterns with fewer than two ones.
    NonMonotoneFlipped,
}

/// Builds the reduced function `f^R` cosetwise over `h`, testing uniformity
/// with threshold `a`.
pub fn reduce_function(
    f: &BooleanFunction,
    h: &Subspace,
    a: Rational,
    b: Rational,
    eta: Rational,
    mode: RoundingMode,
) -> Result<BooleanFunction> {
    check_dim(f.n(), h.ambient_dim())?;
    let one = Rational::from_integer(1);
    if a > one || b > one {
        return Err(Error::InvalidInput("rounding thresholds must lie in [0, 1]".into()));
    }
    if mode != RoundingMode::Monotone && (eta <= Rational::new(1, 2) || eta >= one) {
        return Err(Error::InvalidInput("non-monotone rounding needs 1/2 < η < 1".into()));
    }
    let mut out = f.clone();
    for coset in coset_decompose(h)? {
        let res = restrict_to_coset(f, &coset)?;
        let mu = res.density(true);
        let fill = if res.is_uniform(a) {
            match mode {
                RoundingMode::Monotone if mu <= b => Some(false),
                RoundingMode::Monotone => None,
                _ if mu < b => Some(false),
                _ if mu > one - b => Some(true),
                _ => None,
            }
        } else {
            match mode {
                RoundingMode::Monotone => Some(false),
                RoundingMode::NonMonotone => Some(mu >= eta),
                RoundingMode::NonMonotoneFlipped => Some(res.density(false) < eta),
            }
        };
        if let Some(value) = fill {
            for x in coset.members() {
                out.set(x.bits(), value);
            }
        }
    }
    Ok(out)
}
