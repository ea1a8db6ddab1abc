//! Binary matroids given by explicit GF(2) vectors, and the graph
//! constructions that produce them.
//!
//! A matroid here is a multiset of vectors `v_0..v_{k-1}` in `{0,1}^m`; a set of
//! ground elements is dependent when some nonempty subset XORs to zero. All
//! structural queries (circuits, complexity, odd girth, homomorphisms) depend
//! only on which subsets XOR to zero, so they are unchanged by any injective
//! linear re-embedding of the vectors.

use std::collections::HashMap;
use std::fmt;

use crate::boolfn::BooleanFunction;
use crate::error::{check_dim, check_limit, Error, Result};
use crate::gf2::{mask, GfVec, LinearMap, Subspace, MAX_DIM};

/// Ground-set cap for circuit enumeration and odd girth.
pub const SUBSET_SCAN_MAX_ELEMENTS: usize = 20;
/// Ground-set cap for the complexity-1 check.
pub const COMPLEXITY_ONE_MAX_ELEMENTS: usize = 20;
/// Ground-set cap for general complexity checks (`c >= 2`).
pub const COMPLEXITY_GENERAL_MAX_ELEMENTS: usize = 12;
/// Default node budget for homomorphism search.
pub const HOMOMORPHISM_DEFAULT_BUDGET: u64 = 100_000_000;

/// A simple undirected graph on vertices `0..vertices`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(min, max)` and sorting.
    /// Self-loops, repeated pairs and out-of-range endpoints are rejected.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at vertex {a}")));
            }
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidInput(format!(
                    "edge ({a},{b}) outside vertex range 0..{vertices}"
                )));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "parallel edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Graph {
            vertices,
            edges: out,
        })
    }

    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidInput(format!("cycle length {k} < 3")));
        }
        Self::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    pub fn path(edges: usize) -> Result<Self> {
        Self::new(edges + 1, (0..edges).map(|i| (i, i + 1)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        Self::new(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))))
    }

    pub fn petersen() -> Result<Self> {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner))
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of the edge `{a, b}` in the sorted edge list.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn without_edge(&self, index: usize) -> Result<Self> {
        if index >= self.edges.len() {
            return Err(Error::InvalidInput(format!("no edge with index {index}")));
        }
        let mut g = self.clone();
        g.edges.remove(index);
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        self.vertices <= 1 || spans_connected(self.vertices, self.edges.iter().copied())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={}, E={:?})", self.vertices, self.edges)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether the edges connect all `vertices` vertices.
fn spans_connected(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..vertices).collect();
    let mut components = vertices;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components <= 1
}

/// A binary matroid: `k` labeled vectors in `{0,1}^m`, duplicates allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatroid {
    m: usize,
    vectors: Vec<GfVec>,
    label: Option<String>,
}

impl BinaryMatroid {
    pub fn new(m: usize, vectors: Vec<GfVec>, label: Option<String>) -> Result<Self> {
        GfVec::zero(m)?;
        if vectors.is_empty() {
            return Err(Error::InvalidInput("matroid needs at least one element".into()));
        }
        check_limit("matroid ground set", vectors.len() as u64, 64)?;
        for v in &vectors {
            check_dim(m, v.dim())?;
        }
        Ok(BinaryMatroid { m, vectors, label })
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vectors(&self) -> &[GfVec] {
        &self.vectors
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub(crate) fn bits(&self) -> impl Iterator<Item = u64> + '_ {
        self.vectors.iter().map(GfVec::bits)
    }

    pub fn rank(&self) -> usize {
        Subspace::from_bits(self.m, self.bits()).dim()
    }

    /// The same ground set pushed through a linear map `{0,1}^m -> {0,1}^m'`.
    /// Injective maps preserve every dependency.
    pub fn transformed(&self, map: &LinearMap) -> Result<Self> {
        check_dim(self.m, map.domain_dim())?;
        let vectors = self
            .vectors
            .iter()
            .map(|v| map.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(map.codomain_dim(), vectors, self.label.clone())
    }

    fn subset_rank(&self, subset: u64) -> usize {
        let mut s = subset;
        let mut sp = Subspace::from_bits(self.m, std::iter::empty());
        while s != 0 {
            sp.insert_bits(self.vectors[s.trailing_zeros() as usize].bits());
            s &= s - 1;
        }
        sp.dim()
    }

    /// Fundamental-circuit basis of the dependency code, as subset bitmasks.
    /// The `j`-th basis word has its largest element at the `j`-th element
    /// that depends on earlier ones.
    pub(crate) fn dependency_basis_masks(&self) -> Vec<u64> {
        let mut pivots: [Option<(u64, u64)>; MAX_DIM] = [None; MAX_DIM];
        let mut out = Vec::new();
        for (i, v) in self.vectors.iter().enumerate() {
            let mut x = v.bits();
            let mut comb = 1u64 << i;
            while x != 0 {
                let p = 63 - x.leading_zeros() as usize;
                match pivots[p] {
                    Some((pv, pc)) => {
                        x ^= pv;
                        comb ^= pc;
                    }
                    None => break,
                }
            }
            if x == 0 {
                out.push(comb);
            } else {
                let p = 63 - x.leading_zeros() as usize;
                pivots[p] = Some((x, comb));
            }
        }
        out
    }
}

impl fmt::Debug for BinaryMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryMatroid")
            .field("label", &self.label)
            .field("m", &self.m)
            .field("vectors", &self.vectors)
            .finish()
    }
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).collect()
}

/// Graphic matroid with vertex-incidence vectors: edge `{u,v}` becomes
/// `e_u ⊕ e_v` in `{0,1}^V`, in sorted edge order.
pub fn graphic_from_graph(g: &Graph) -> Result<BinaryMatroid> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidInput("graph has no edges".into()));
    }
    let vectors = g
        .edges()
        .iter()
        .map(|&(a, b)| GfVec::new(g.vertices(), (1 << a) | (1 << b)))
        .collect::<Result<Vec<_>>>()?;
    BinaryMatroid::new(g.vertices(), vectors, None)
}

/// Cographic matroid `M*(G)`: edge `e` maps to its column in a matrix whose
/// rows are the fundamental cycles of a BFS spanning tree. Dependent sets are
/// exactly the edge sets containing a bond. A graph with an empty cycle space
/// yields zero vectors in ambient dimension 1.
pub fn cographic_from_graph(g: &Graph) -> Result<BinaryMatroid> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidInput("graph has no edges".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidInput("cographic construction needs a connected graph".into()));
    }
    let v = g.vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v];
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    // BFS tree: parent edge and depth per vertex.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; v];
    let mut depth = vec![usize::MAX; v];
    let mut in_tree = vec![false; g.edge_count()];
    depth[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in &adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((x, e));
                in_tree[e] = true;
                queue.push_back(y);
            }
        }
    }
    let corank = g.edge_count() + 1 - v;
    check_limit("cycle space dimension", corank as u64, MAX_DIM as u64)?;
    let m = corank.max(1);
    let mut columns = vec![0u64; g.edge_count()];
    let mut row = 0;
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        columns[e] |= 1 << row;
        let (mut x, mut y) = (a, b);
        while x != y {
            if depth[x] < depth[y] {
                std::mem::swap(&mut x, &mut y);
            }
            let (px, pe) = parent[x].expect("non-root vertex has a parent");
            columns[pe] |= 1 << row;
            x = px;
        }
        row += 1;
    }
    let vectors = columns
        .into_iter()
        .map(|c| GfVec::new(m, c))
        .collect::<Result<Vec<_>>>()?;
    BinaryMatroid::new(m, vectors, None)
}

/// All minimal dependent subsets as sorted index lists, in lexicographic order.
pub fn circuits(m: &BinaryMatroid) -> Result<Vec<Vec<usize>>> {
    check_limit("circuit enumeration elements", m.k() as u64, SUBSET_SCAN_MAX_ELEMENTS as u64)?;
    let basis = m.dependency_basis_masks();
    let mut out = Vec::new();
    for_each_codeword(&basis, |word| {
        if word != 0 && m.subset_rank(word) + 1 == word.count_ones() as usize {
            out.push(mask_to_indices(word));
        }
    });
    out.sort();
    Ok(out)
}

/// Visits every word of the code spanned by `basis` (Gray-code order).
fn for_each_codeword(basis: &[u64], mut visit: impl FnMut(u64)) {
    let mut word = 0u64;
    visit(word);
    for i in 1u64..(1u64 << basis.len()) {
        word ^= basis[i.trailing_zeros() as usize];
        visit(word);
    }
}

/// A basis of `{T : Σ_{i∈T} v_i = 0}` of size `k − rank`, each word a
/// fundamental circuit.
pub fn cycle_space_basis(m: &BinaryMatroid) -> Vec<Vec<usize>> {
    m.dependency_basis_masks()
        .into_iter()
        .map(mask_to_indices)
        .collect()
}

/// Result of a complexity computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complexity {
    Exactly(usize),
    /// No `c <= cap` works.
    ExceedsCap(usize),
}

/// Whether `v_i` avoids the span of every class of some partition of the
/// other elements into `c + 1` (possibly empty) classes.
pub fn complexity_at(m: &BinaryMatroid, i: usize, c: usize) -> Result<bool> {
    if i >= m.k() {
        return Err(Error::InvalidInput(format!("element {i} out of range")));
    }
    let target = m.vectors[i].bits();
    if target == 0 {
        return Ok(false);
    }
    let others: Vec<u64> = m
        .bits()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, b)| b)
        .collect();
    match c {
        0 => Ok(!Subspace::from_bits(m.m, others).contains_bits(target)),
        1 => {
            check_limit("complexity-1 elements", m.k() as u64, COMPLEXITY_ONE_MAX_ELEMENTS as u64)?;
            Ok(two_class_split(m.m, target, &others))
        }
        _ => {
            check_limit(
                "general complexity elements",
                m.k() as u64,
                COMPLEXITY_GENERAL_MAX_ELEMENTS as u64,
            )?;
            Ok(multi_class_split(m.m, target, &others, c + 1))
        }
    }
}

/// Bitmask scan over 2-partitions; the first element is pinned to class A.
fn two_class_split(dim: usize, target: u64, others: &[u64]) -> bool {
    let Some((&first, rest)) = others.split_first() else {
        return true;
    };
    (0..1u64 << rest.len()).any(|sel| {
        let mut a = Subspace::from_bits(dim, [first]);
        let mut b = Subspace::from_bits(dim, std::iter::empty());
        for (j, &v) in rest.iter().enumerate() {
            if (sel >> j) & 1 == 1 {
                a.insert_bits(v);
            } else {
                b.insert_bits(v);
            }
        }
        !a.contains_bits(target) && !b.contains_bits(target)
    })
}

/// Restricted-growth-string search over partitions into at most `classes`
/// classes, pruning as soon as a class span captures the target.
pub(crate) fn multi_class_split(dim: usize, target: u64, others: &[u64], classes: usize) -> bool {
    fn go(target: u64, others: &[u64], blocks: &mut Vec<Subspace>, classes: usize, dim: usize) -> bool {
        let Some((&v, rest)) = others.split_first() else {
            return true;
        };
        for b in 0..blocks.len() {
            let saved = blocks[b].clone();
            blocks[b].insert_bits(v);
            if !blocks[b].contains_bits(target) && go(target, rest, blocks, classes, dim) {
                return true;
            }
            blocks[b] = saved;
        }
        if blocks.len() < classes {
            let fresh = Subspace::from_bits(dim, [v]);
            if !fresh.contains_bits(target) {
                blocks.push(fresh);
                if go(target, rest, blocks, classes, dim) {
                    return true;
                }
                blocks.pop();
            }
        }
        false
    }
    if classes == 0 {
        return false;
    }
    go(target, others, &mut Vec::new(), classes, dim)
}

/// Smallest `c <= cap` such that every element has complexity `c`.
pub fn complexity(m: &BinaryMatroid, cap: usize) -> Result<Complexity> {
    check_limit("complexity elements", m.k() as u64, COMPLEXITY_ONE_MAX_ELEMENTS as u64)?;
    for c in 0..=cap {
        let mut all = true;
        for i in 0..m.k() {
            if !complexity_at(m, i, c)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Complexity::Exactly(c));
        }
    }
    Ok(Complexity::ExceedsCap(cap))
}

/// Whether `E(G) \ {e}` splits into two edge sets that each connect every
/// vertex of `G`. Edge `e` is given by index into the sorted edge list.
pub fn cog_partition_criterion(g: &Graph, e: usize) -> Result<bool> {
    if e >= g.edge_count() {
        return Err(Error::InvalidInput(format!("no edge with index {e}")));
    }
    if !g.is_connected() {
        return Err(Error::InvalidInput("partition criterion needs a connected graph".into()));
    }
    let rest: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &p)| p)
        .collect();
    check_limit("partition criterion edges", rest.len() as u64, 30)?;
    let v = g.vertices();
    let need = v.saturating_sub(1) as u32;
    let Some((&first, tail)) = rest.split_first() else {
        return Ok(v <= 1);
    };
    if (rest.len() as u32) < 2 * need {
        return Ok(false);
    }
    let t = tail.len();
    for sel in 0..1u64 << t {
        let in_a = sel.count_ones() + 1;
        let in_b = t as u32 - sel.count_ones();
        if in_a < need || in_b < need {
            continue;
        }
        let a = std::iter::once(first).chain(
            tail.iter()
                .enumerate()
                .filter(|&(j, _)| (sel >> j) & 1 == 1)
                .map(|(_, &p)| p),
        );
        if !spans_connected(v, a) {
            continue;
        }
        let b = tail
            .iter()
            .enumerate()
            .filter(|&(j, _)| (sel >> j) & 1 == 0)
            .map(|(_, &p)| p);
        if spans_connected(v, b) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether the endpoints of edge `e` stay connected in `G - e - f` for every
/// other edge `f`, i.e. `G - e` has two edge-disjoint paths between them.
/// For a connected graph this holds for every `e` exactly when the cographic
/// matroid has complexity 1: `v_e` avoids the span of a class `A` iff the
/// complementary class joins the endpoints of `e`.
pub fn cog_endpoint_criterion(g: &Graph, e: usize) -> Result<bool> {
    if e >= g.edge_count() {
        return Err(Error::InvalidInput(format!("no edge with index {e}")));
    }
    let (u, w) = g.edges()[e];
    let joined = |skip: Option<usize>| {
        let mut parent: Vec<usize> = (0..g.vertices()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if i == e || Some(i) == skip {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        find(&mut parent, u) == find(&mut parent, w)
    };
    Ok(joined(None) && (0..g.edge_count()).filter(|&f| f != e).all(|f| joined(Some(f))))
}

/// Size of the smallest odd dependent set, or `None` when every dependency
/// has even size.
pub fn odd_girth(m: &BinaryMatroid) -> Result<Option<usize>> {
    check_limit("odd girth elements", m.k() as u64, SUBSET_SCAN_MAX_ELEMENTS as u64)?;
    let basis = m.dependency_basis_masks();
    let mut best: Option<usize> = None;
    for_each_codeword(&basis, |word| {
        let w = word.count_ones() as usize;
        if w % 2 == 1 && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
    });
    Ok(best)
}

/// A map from the ground set of a source matroid to the ground set of a
/// target matroid carrying every dependency to a dependency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub assignment: Vec<usize>,
}

impl Homomorphism {
    /// Checks the defining property against the source's cycle-space basis,
    /// which suffices because both sides are GF(2)-linear in the subset.
    pub fn verify(&self, source: &BinaryMatroid, target: &BinaryMatroid) -> bool {
        if self.assignment.len() != source.k() || self.assignment.iter().any(|&j| j >= target.k()) {
            return false;
        }
        source.dependency_basis_masks().into_iter().all(|word| {
            mask_to_indices(word)
                .into_iter()
                .fold(0u64, |acc, i| acc ^ target.vectors[self.assignment[i]].bits())
                == 0
        })
    }
}

/// Exhaustive depth-first search for a homomorphism `source -> target`.
///
/// Returns `Ok(None)` only after the whole space has been ruled out; running
/// out of `budget` nodes is an error.
pub fn find_homomorphism(
    source: &BinaryMatroid,
    target: &BinaryMatroid,
    budget: u64,
) -> Result<Option<Homomorphism>> {
    // Target elements with equal vectors are interchangeable.
    let mut seen = HashMap::new();
    let candidates: Vec<usize> = target
        .bits()
        .enumerate()
        .filter(|&(j, b)| *seen.entry(b).or_insert(j) == j)
        .map(|(j, _)| j)
        .collect();
    let mut closing: Vec<Vec<u64>> = vec![Vec::new(); source.k()];
    for word in source.dependency_basis_masks() {
        closing[63 - word.leading_zeros() as usize].push(word);
    }

    struct Search<'a> {
        target: &'a BinaryMatroid,
        candidates: Vec<usize>,
        closing: Vec<Vec<u64>>,
        assignment: Vec<usize>,
        image: Vec<u64>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize) -> Result<bool> {
            if i == self.assignment.len() {
                return Ok(true);
            }
            for ci in 0..self.candidates.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExceeded {
                        what: "homomorphism search",
                        budget: self.budget,
                    });
                }
                let j = self.candidates[ci];
                self.assignment[i] = j;
                self.image[i] = self.target.vectors[j].bits();
                let ok = self.closing[i].iter().all(|&word| {
                    mask_to_indices(word)
                        .into_iter()
                        .fold(0u64, |acc, t| acc ^ self.image[t])
                        == 0
                });
                if ok && self.go(i + 1)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    let mut search = Search {
        target,
        candidates,
        closing,
        assignment: vec![0; source.k()],
        image: vec![0; source.k()],
        nodes: 0,
        budget,
    };
    if search.go(0)? {
        Ok(Some(Homomorphism {
            assignment: search.assignment,
        }))
    } else {
        Ok(None)
    }
}

/// Indicator of `{(x, y) : x ∈ {v_i}}` where `x` is the low `m` coordinates.
pub fn canonical_function(m: &BinaryMatroid, n: usize) -> Result<BooleanFunction> {
    if n < m.m() {
        return Err(Error::InvalidInput(format!(
            "canonical function needs n >= m ({n} < {})",
            m.m()
        )));
    }
    if m.vectors.iter().any(GfVec::is_zero) {
        return Err(Error::InvalidInput(
            "canonical function needs every vector to be nonzero".into(),
        ));
    }
    let low = mask(m.m());
    let members: std::collections::HashSet<u64> = m.bits().collect();
    BooleanFunction::from_fn(n, |x| members.contains(&(x & low)))
}

/// All connected simple graphs on `vertices` vertices, one per isomorphism
/// class (the representative with the smallest edge mask over `K_V`).
pub fn connected_graphs(vertices: usize) -> Result<Vec<Graph>> {
    check_limit("graph enumeration vertices", vertices as u64, 6)?;
    if vertices == 0 {
        return Ok(Vec::new());
    }
    let slots: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
        .collect();
    let slot_index = |a: usize, b: usize| -> usize {
        slots.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap()
    };
    let perms = permutations(vertices);
    let perm_maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| slots.iter().map(|&(a, b)| slot_index(p[a], p[b])).collect())
        .collect();
    let mut out = Vec::new();
    for edge_mask in 0u64..1 << slots.len() {
        let edges = || {
            slots
                .iter()
                .enumerate()
                .filter(move |(i, _)| (edge_mask >> i) & 1 == 1)
                .map(|(_, &p)| p)
        };
        if vertices > 1 && !spans_connected(vertices, edges()) {
            continue;
        }
        let canonical = perm_maps.iter().all(|map| {
            let mut img = 0u64;
            let mut s = edge_mask;
            while s != 0 {
                img |= 1 << map[s.trailing_zeros() as usize];
                s &= s - 1;
            }
            img >= edge_mask
        });
        if canonical {
            out.push(Graph::new(vertices, edges())?);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graphic(g: Graph) -> BinaryMatroid {
        graphic_from_graph(&g).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
        let g = Graph::new(3, [(2, 1), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn graphic_examples() {
        let c3 = graphic(Graph::cycle(3).unwrap());
        let mut got: Vec<String> = c3.vectors().iter().map(|v| v.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["011", "101", "110"]);

        let p2 = graphic(Graph::path(2).unwrap());
        assert_eq!(p2.rank(), 2);
        assert!(circuits(&p2).unwrap().is_empty());

        let c5 = graphic(Graph::cycle(5).unwrap());
        assert_eq!(c5.rank(), 4);
        assert_eq!(circuits(&c5).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn cographic_examples() {
        let k5 = cographic_from_graph(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!((k5.k(), k5.rank()), (10, 6));
        let c3 = cographic_from_graph(&Graph::cycle(3).unwrap()).unwrap();
        assert_eq!(c3.rank(), 1);
        let tree = cographic_from_graph(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(tree.rank(), 0);
        assert!(tree.vectors().iter().all(GfVec::is_zero));
        let disconnected = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(cographic_from_graph(&disconnected).is_err());
    }

    #[test]
    fn cographic_dependencies_are_bonds() {
        // In M*(C_4) every pair of edges is a bond (a minimal cut).
        let m = cographic_from_graph(&Graph::cycle(4).unwrap()).unwrap();
        let cs = circuits(&m).unwrap();
        assert_eq!(cs.len(), 6);
        assert!(cs.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn circuit_examples() {
        assert_eq!(circuits(&graphic(Graph::cycle(3).unwrap())).unwrap(), vec![vec![0, 1, 2]]);
        let k4 = circuits(&graphic(Graph::complete(4).unwrap())).unwrap();
        assert_eq!(k4.len(), 7);
        assert_eq!(k4.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(k4.iter().filter(|c| c.len() == 4).count(), 3);
    }

    #[test]
    fn cycle_space_basis_examples() {
        assert_eq!(cycle_space_basis(&graphic(Graph::cycle(5).unwrap())).len(), 1);
        assert_eq!(cycle_space_basis(&graphic(Graph::cycle(5).unwrap()))[0].len(), 5);
        assert_eq!(cycle_space_basis(&graphic(Graph::complete(4).unwrap())).len(), 3);
        assert!(cycle_space_basis(&graphic(Graph::path(4).unwrap())).is_empty());
    }

    #[test]
    fn complexity_examples() {
        for k in 3..=8 {
            assert_eq!(
                complexity(&graphic(Graph::cycle(k).unwrap()), 3).unwrap(),
                Complexity::Exactly(1)
            );
        }
        assert_eq!(
            complexity(&graphic(Graph::complete(4).unwrap()), 3).unwrap(),
            Complexity::Exactly(1)
        );
        let k5 = cographic_from_graph(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!(complexity(&k5, 1).unwrap(), Complexity::Exactly(1));
        let k33 = cographic_from_graph(&Graph::complete_bipartite(3, 3).unwrap()).unwrap();
        // Every edge of K_{3,3} has two edge-disjoint detours, so each v_e
        // avoids both class spans of a suitable split.
        assert_eq!(complexity(&k33, 1).unwrap(), Complexity::Exactly(1));
    }

    #[test]
    fn forest_has_complexity_zero() {
        assert_eq!(
            complexity(&graphic(Graph::path(3).unwrap()), 2).unwrap(),
            Complexity::Exactly(0)
        );
    }

    #[test]
    fn repeated_vector_never_has_finite_complexity() {
        let v = GfVec::parse("01").unwrap();
        let m = BinaryMatroid::new(2, vec![v, v, GfVec::parse("10").unwrap()], None).unwrap();
        assert_eq!(complexity(&m, 1).unwrap(), Complexity::ExceedsCap(1));
    }

    #[test]
    fn two_class_scan_agrees_with_partition_search() {
        let graphs = [
            Graph::complete(4).unwrap(),
            Graph::petersen().unwrap(),
            Graph::complete_bipartite(3, 3).unwrap(),
        ];
        for g in &graphs {
            for m in [graphic_from_graph(g).unwrap(), cographic_from_graph(g).unwrap()] {
                for i in 0..m.k() {
                    let others: Vec<u64> =
                        m.bits().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b).collect();
                    let target = m.vectors()[i].bits();
                    assert_eq!(
                        complexity_at(&m, i, 1).unwrap(),
                        target != 0 && multi_class_split(m.m(), target, &others, 2)
                    );
                }
            }
        }
    }

    #[test]
    fn partition_criterion_examples() {
        let k5 = Graph::complete(5).unwrap();
        let outer = k5.edge_index(0, 1).unwrap();
        assert!(cog_partition_criterion(&k5, outer).unwrap());
        let k33 = Graph::complete_bipartite(3, 3).unwrap();
        for e in 0..k33.edge_count() {
            assert!(!cog_partition_criterion(&k33, e).unwrap());
        }
        let c3 = Graph::cycle(3).unwrap();
        for e in 0..3 {
            assert!(!cog_partition_criterion(&c3, e).unwrap());
            assert!(!cog_endpoint_criterion(&c3, e).unwrap());
        }
        for e in 0..k33.edge_count() {
            assert!(cog_endpoint_criterion(&k33, e).unwrap());
        }
        let k4 = Graph::complete(4).unwrap();
        assert!(!cog_partition_criterion(&k4, 0).unwrap());
        assert!(cog_endpoint_criterion(&k4, 0).unwrap());
    }

    #[test]
    fn odd_girth_examples() {
        assert_eq!(odd_girth(&graphic(Graph::cycle(5).unwrap())).unwrap(), Some(5));
        assert_eq!(odd_girth(&graphic(Graph::cycle(4).unwrap())).unwrap(), None);
        assert_eq!(odd_girth(&graphic(Graph::complete(4).unwrap())).unwrap(), Some(3));
    }

    #[test]
    fn homomorphism_examples() {
        let c3 = graphic(Graph::cycle(3).unwrap());
        let c5 = graphic(Graph::cycle(5).unwrap());
        let id = find_homomorphism(&c5, &c5, 1_000_000).unwrap().unwrap();
        assert!(id.verify(&c5, &c5));
        let h = find_homomorphism(&c5, &c3, 1_000_000).unwrap().unwrap();
        assert!(h.verify(&c5, &c3));
        assert!(find_homomorphism(&c3, &c5, 1_000_000).unwrap().is_none());
        let k5 = graphic(Graph::complete(5).unwrap());
        let k3 = graphic(Graph::complete(3).unwrap());
        assert!(find_homomorphism(&k5, &k3, HOMOMORPHISM_DEFAULT_BUDGET).unwrap().is_none());
        assert!(matches!(
            find_homomorphism(&k5, &k3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn c5_folds_onto_triangle_with_a_repeated_edge() {
        // Images (a,a,a,b,c) around the 5-cycle, with {a,b,c} the triangle.
        let c3 = graphic(Graph::cycle(3).unwrap());
        let c5 = graphic(Graph::cycle(5).unwrap());
        // C_5 sorted edges: (0,1),(0,4),(1,2),(2,3),(3,4); the circuit is all of them.
        let h = Homomorphism {
            assignment: vec![0, 0, 0, 1, 2],
        };
        assert!(h.verify(&c5, &c3));
        let bad = Homomorphism {
            assignment: vec![0, 0, 1, 1, 2],
        };
        assert!(!bad.verify(&c5, &c3));
    }

    #[test]
    fn canonical_function_examples() {
        let c3 = graphic(Graph::cycle(3).unwrap());
        let f = canonical_function(&c3, 3).unwrap();
        assert_eq!(f.ones().collect::<Vec<_>>(), vec![3, 5, 6]);
        assert_eq!(canonical_function(&c3, 4).unwrap().count_ones(), 6);
        // f contains the matroid at x -> (x, 0).
        assert!(c3.vectors().iter().all(|v| f.get(v.bits())));
        assert!(canonical_function(&c3, 2).is_err());
        let tree = cographic_from_graph(&Graph::path(2).unwrap()).unwrap();
        assert!(canonical_function(&tree, 3).is_err());
    }

    #[test]
    fn connected_graph_counts() {
        // OEIS A001349: 1, 1, 2, 6, 21, 112.
        let counts: Vec<usize> = (1..=6).map(|v| connected_graphs(v).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }
}
