//! The nine structured families of Boolean functions that arise as
//! `(C_k, Σ)`-free sets, a classifier from `Σ` to its family, and exhaustive
//! verification of the classifier against brute-force freeness.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::boolfn::BooleanFunction;
use crate::error::{check_dim, check_limit, Error, Result};
use crate::matroid::{graphic_from_graph, BinaryMatroid, Graph};
use crate::tester::{is_free, PatternSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    Const,
    Lin,
    LinBar,
    Aff,
    AffBar,
    Flin,
    FlinBar,
    Faff,
    FaffBar,
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId::Const,
        FamilyId::Lin,
        FamilyId::LinBar,
        FamilyId::Aff,
        FamilyId::AffBar,
        FamilyId::Flin,
        FamilyId::FlinBar,
        FamilyId::Faff,
        FamilyId::FaffBar,
    ];

    /// The family of complements. Complements of affine functions are
    /// affine, so `Aff` and `AffBar` are each their own pair.
    pub fn bar(self) -> FamilyId {
        use FamilyId::*;
        match self {
            Const => Const,
            Lin => LinBar,
            LinBar => Lin,
            Aff => Aff,
            AffBar => AffBar,
            Flin => FlinBar,
            FlinBar => Flin,
            Faff => FaffBar,
            FaffBar => Faff,
        }
    }

    pub fn name(self) -> &'static str {
        use FamilyId::*;
        match self {
            Const => "Const",
            Lin => "Lin",
            LinBar => "LinBar",
            Aff => "Aff",
            AffBar => "AffBar",
            Flin => "Flin",
            FlinBar => "FlinBar",
            Faff => "Faff",
            FaffBar => "FaffBar",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|fam| fam.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown family {s:?}")))
    }
}

/// `f(x) = c ⊕ ⊕_j a_j x_j` with `c = f(0)` and `a_j = f(e_j) ⊕ c`.
fn is_affine_form(f: &BooleanFunction) -> bool {
    let c = f.get(0);
    let a: u64 = (0..f.n())
        .filter(|&j| f.get(1 << j) != c)
        .fold(0, |acc, j| acc | (1 << j));
    (0..f.size()).all(|x| f.get(x) == (c ^ ((x & a).count_ones() % 2 == 1)))
}

/// Whether `f^{-1}(1)` is closed under `⊕` and contains 0.
fn ones_form_subgroup(f: &BooleanFunction) -> bool {
    if !f.get(0) {
        return false;
    }
    let ones: Vec<u64> = f.ones().collect();
    ones.iter()
        .all(|&x| ones.iter().all(|&y| f.get(x ^ y)))
}

/// A nonempty set is closed under `x ⊕ y ⊕ z` iff its translate by any member
/// is a subgroup.
fn ones_form_affine_subspace(f: &BooleanFunction) -> bool {
    let Some(s0) = f.ones().next() else {
        return false;
    };
    let shifted = BooleanFunction::from_fn(f.n(), |x| f.get(x ^ s0)).expect("same arity");
    ones_form_subgroup(&shifted)
}

pub fn family_contains(f: &BooleanFunction, fam: FamilyId) -> bool {
    use FamilyId::*;
    match fam {
        Const => f.is_constant(),
        Lin => f.count_ones() == f.size() || (!f.get(0) && is_affine_form(f)),
        Aff => is_affine_form(f),
        Flin => f.count_ones() == 0 || ones_form_subgroup(f),
        Faff => f.count_ones() == 0 || ones_form_affine_subspace(f),
        AffBar => family_contains(&f.complement(), Aff),
        LinBar | FlinBar | FaffBar => family_contains(&f.complement(), fam.bar()),
    }
}

/// The family equal to the `(C_k, Σ)`-free functions, selected by the
/// parities of the number of ones `O` and zeros `Z` in `Σ`.
pub fn classify_sigma(k: usize, sigma: &PatternSpec) -> Result<FamilyId> {
    use FamilyId::*;
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length {k} < 3")));
    }
    check_dim(k, sigma.k())?;
    if sigma.is_all_ones() || sigma.is_all_zeros() {
        return Err(Error::InvalidInput(format!(
            "pattern {sigma} is monotone; the classifier covers mixed patterns"
        )));
    }
    let (o, z) = (sigma.ones(), sigma.zeros());
    let odd = |x: usize| x % 2 == 1;
    Ok(match (o, z) {
        (o, z) if !odd(o) && !odd(z) => Const,
        (1, z) if odd(z) => FaffBar,
        (o, 1) if odd(o) => Faff,
        (1, _) => FlinBar,
        (_, 1) => Flin,
        (o, z) if odd(o) && odd(z) => Aff,
        (o, _) if odd(o) => Lin,
        _ => LinBar,
    })
}

/// Largest `n` for which free sets are enumerated, by cycle length.
fn enumeration_cap(k: usize) -> u64 {
    if k <= 4 {
        4
    } else {
        3
    }
}

pub(crate) fn cycle_matroid(k: usize) -> Result<BinaryMatroid> {
    graphic_from_graph(&Graph::cycle(k)?)
}

fn tix(f: &BooleanFunction) -> u64 {
    f.table_index().expect("enumerated arities have table indices")
}

fn all_functions(n: usize) -> impl ParallelIterator<Item = BooleanFunction> {
    (0..1u64 << (1u64 << n)).into_par_iter().map(move |t| {
        BooleanFunction::from_table_index(n, t).expect("arity within table-index range")
    })
}

/// Every `(C_k, Σ)`-free function over `{0,1}^n`, in truth-table order.
pub fn enumerate_free_functions(n: usize, k: usize, sigma: &PatternSpec) -> Result<Vec<BooleanFunction>> {
    check_dim(k, sigma.k())?;
    check_limit("free-set enumeration arity", n as u64, enumeration_cap(k))?;
    free_set(n, &cycle_matroid(k)?, sigma)
}

fn free_set(n: usize, m: &BinaryMatroid, sigma: &PatternSpec) -> Result<Vec<BooleanFunction>> {
    let mut out: Vec<BooleanFunction> = all_functions(n)
        .map(|f| is_free(&f, m, sigma).map(|free| free.then_some(f)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_by_key(tix);
    Ok(out)
}

fn family_members(n: usize, fam: FamilyId) -> Vec<BooleanFunction> {
    let mut out: Vec<BooleanFunction> = all_functions(n)
        .filter(|f| family_contains(f, fam))
        .collect();
    out.sort_by_key(tix);
    out
}

/// Symmetric difference of two sorted function lists, tagged with the side
/// each function is on.
fn disagreements(free: &[BooleanFunction], family: &[BooleanFunction]) -> Vec<Mismatch> {
    let mut tags: BTreeMap<u64, (bool, bool)> = BTreeMap::new();
    for f in free {
        tags.entry(tix(f)).or_default().0 = true;
    }
    for f in family {
        tags.entry(tix(f)).or_default().1 = true;
    }
    let n = free.first().or(family.first()).map(BooleanFunction::n);
    tags.into_iter()
        .filter(|(_, (a, b))| a != b)
        .map(|(t, (is_free, _))| Mismatch {
            function: BooleanFunction::from_table_index(n.expect("nonempty"), t).expect("valid index"),
            free: is_free,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub function: BooleanFunction,
    /// `true` if the function is free but outside the predicted family.
    pub free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentCheck {
    pub suffix: &'static str,
    /// Functions free of the longer pattern but not of `(C_k, Σ)`.
    pub counterexamples: Vec<BooleanFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCheck {
    pub sigma: PatternSpec,
    pub predicted: FamilyId,
    pub free_count: usize,
    pub family_count: usize,
    pub mismatches: Vec<Mismatch>,
    pub containments: Vec<ContainmentCheck>,
}

impl SigmaCheck {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.containments.iter().all(|c| c.counterexamples.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterizationReport {
    pub n: usize,
    pub k: usize,
    pub checks: Vec<SigmaCheck>,
}

impl CharacterizationReport {
    pub fn mismatch_count(&self) -> usize {
        self.checks.iter().map(|c| c.mismatches.len()).sum()
    }

    pub fn containment_failures(&self) -> usize {
        self.checks
            .iter()
            .flat_map(|c| &c.containments)
            .map(|c| c.counterexamples.len())
            .sum()
    }

    pub fn all_match(&self) -> bool {
        self.checks.iter().all(SigmaCheck::ok)
    }
}

/// Every mixed `Σ` of length `k`, in increasing order of the positional
/// string read as a binary number.
pub fn mixed_patterns(k: usize) -> Result<Vec<PatternSpec>> {
    check_limit("pattern length for exhaustive sweeps", k as u64, 20)?;
    (1..(1u64 << k) - 1)
        .map(|bits| PatternSpec::new((0..k).map(|i| (bits >> (k - 1 - i)) & 1 == 1).collect()))
        .collect()
}

/// Compares brute-force free sets with the classifier for every mixed `Σ`,
/// and checks that `(C_{k+2}, Σ∘00)`- and `(C_{k+2}, Σ∘11)`-freeness imply
/// `(C_k, Σ)`-freeness.
pub fn verify_characterization(n: usize, k: usize) -> Result<CharacterizationReport> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length {k} < 3")));
    }
    check_limit("free-set enumeration arity", n as u64, enumeration_cap(k))?;
    let ck = cycle_matroid(k)?;
    let ck2 = cycle_matroid(k + 2)?;
    let mut family_cache: BTreeMap<FamilyId, Vec<BooleanFunction>> = BTreeMap::new();
    let mut checks = Vec::new();
    for sigma in mixed_patterns(k)? {
        let predicted = classify_sigma(k, &sigma)?;
        let free = free_set(n, &ck, &sigma)?;
        let family = family_cache
            .entry(predicted)
            .or_insert_with(|| family_members(n, predicted));
        let mismatches = disagreements(&free, family);
        let mut containments = Vec::new();
        for (suffix, pad) in [("00", [false, false]), ("11", [true, true])] {
            let longer = sigma.concat(&pad)?;
            let counterexamples: Vec<BooleanFunction> = all_functions(n)
                .map(|f| -> Result<Option<BooleanFunction>> {
                    if free.binary_search_by_key(&tix(&f), tix).is_ok() {
                        return Ok(None);
                    }
                    Ok(is_free(&f, &ck2, &longer)?.then_some(f))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            let mut counterexamples = counterexamples;
            counterexamples.sort_by_key(tix);
            containments.push(ContainmentCheck {
                suffix,
                counterexamples,
            });
        }
        checks.push(SigmaCheck {
            sigma,
            predicted,
            free_count: free.len(),
            family_count: family.len(),
            mismatches,
            containments,
        });
    }
    Ok(CharacterizationReport { n, k, checks })
}

/// A distinct free set and the `(k, Σ)` pairs producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSetClass {
    pub members: Vec<u64>,
    pub patterns: Vec<(usize, PatternSpec)>,
}

/// Groups the free sets of all mixed `(C_k, Σ)` with `k` in `ks` at arity `n`.
pub fn distinct_free_sets(n: usize, ks: impl IntoIterator<Item = usize>) -> Result<Vec<FreeSetClass>> {
    let mut classes: BTreeMap<Vec<u64>, Vec<(usize, PatternSpec)>> = BTreeMap::new();
    for k in ks {
        for sigma in mixed_patterns(k)? {
            let set: Vec<u64> = enumerate_free_functions(n, k, &sigma)?
                .iter()
                .map(tix)
                .collect();
            classes.entry(set).or_default().push((k, sigma));
        }
    }
    Ok(classes
        .into_iter()
        .map(|(members, patterns)| FreeSetClass { members, patterns })
        .collect())
}
