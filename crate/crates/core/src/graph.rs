//! Immutable simple graphs over a dense bit-matrix, plus the generators that
//! produce them.
//!
//! Vertices are `0..n`. Row `v` of the adjacency matrix is a run of
//! `words_per_row` machine words; bit `u` of row `v` is set iff `uv` is an edge.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::numeric::{binomial2, ratio};
use crate::rng;

/// Vertex budget applied by [`tensor_power`].
pub const DEFAULT_TENSOR_VERTEX_BUDGET: usize = 1_000_000;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A simple undirected graph with bit-matrix adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    edge_count: usize,
    label: Option<String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("m", &self.edge_count).field("label", &self.label).finish()
    }
}

/// Mutable adjacency under construction. Only generators see this.
pub(crate) struct GraphBuilder {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl GraphBuilder {
    pub(crate) fn new(n: usize) -> Self {
        let words_per_row = words_for(n);
        Self { n, words_per_row, bits: vec![0; n * words_per_row] }
    }

    #[inline]
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let w = self.words_per_row;
        self.bits[u * w + v / 64] |= 1 << (v % 64);
        self.bits[v * w + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn finish(self, label: Option<String>) -> Graph {
        let ones: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
        Graph { n: self.n, words_per_row: self.words_per_row, bits: self.bits, edge_count: ones / 2, label }
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges, in either
    /// orientation, collapse to one.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::MalformedInput(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::MalformedInput(format!("self-loop at vertex {u}")));
            }
            b.add_edge(u, v);
        }
        Ok(b.finish(None))
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).finish(Some(Label::new("empty").arg("n", n).render()))
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v);
            }
        }
        b.finish(Some(Label::new("complete").arg("n", n).render()))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::Domain(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            b.add_edge(u, (u + 1) % n);
        }
        Ok(b.finish(Some(Label::new("cycle").arg("n", n).render())))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: Option<String>) -> Graph {
        self.label = label;
        self
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Neighbourhood of `v` as a bitset.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.bits[v * w..(v + 1) * w]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    /// Unordered edges `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `|N(u) ∩ N(v)|`.
    #[inline]
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.row(u).iter().zip(self.row(v)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::MalformedInput(format!("cannot add edge ({u}, {v})")));
        }
        let mut g = self.clone();
        let w = g.words_per_row;
        if !g.has_edge(u, v) {
            g.bits[u * w + v / 64] |= 1 << (v % 64);
            g.bits[v * w + u / 64] |= 1 << (u % 64);
            g.edge_count += 1;
        }
        g.label = None;
        Ok(g)
    }

    /// Checks the representation invariants. Used by tests and by file loading.
    pub fn validate(&self) -> Result<()> {
        let mut ones = 0usize;
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(Error::MalformedInput(format!("self-loop at vertex {u}")));
            }
            let row = self.row(u);
            if let Some(&last) = row.last() {
                let used = self.n % 64;
                if used != 0 && last >> used != 0 {
                    return Err(Error::MalformedInput(format!("row {u} has bits beyond n")));
                }
            }
            for v in self.neighbors(u) {
                if !self.has_edge(v, u) {
                    return Err(Error::MalformedInput(format!("asymmetric pair ({u}, {v})")));
                }
                ones += 1;
            }
        }
        if ones != 2 * self.edge_count {
            return Err(Error::MalformedInput("edge count disagrees with adjacency".into()));
        }
        Ok(())
    }

    /// `m / C(n, 2)`.
    pub fn edge_density(&self) -> Result<BigRational> {
        if self.n < 2 {
            return Err(Error::Domain("edge density needs at least two vertices".into()));
        }
        Ok(ratio(BigUint::from(self.edge_count), binomial2(self.n)))
    }

    /// `e(A, B) / (|A| |B|)` for nonempty disjoint `A`, `B`.
    pub fn pair_density(&self, a: &[usize], b: &[usize]) -> Result<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Domain("pair density needs nonempty vertex sets".into()));
        }
        let sa = self.bitset_of(a)?;
        let sb = self.bitset_of(b)?;
        if sa.iter().zip(&sb).any(|(x, y)| x & y != 0) {
            return Err(Error::Domain("pair density needs disjoint vertex sets".into()));
        }
        let count_a = sa.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let count_b = sb.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let mut cross = 0usize;
        for u in BitIter::new(&sa) {
            cross += self.row(u).iter().zip(&sb).map(|(x, y)| (x & y).count_ones() as usize).sum::<usize>();
        }
        Ok(ratio(BigUint::from(cross), BigUint::from(count_a * count_b)))
    }

    fn bitset_of(&self, vs: &[usize]) -> Result<Vec<u64>> {
        let mut s = vec![0u64; self.words_per_row];
        for &v in vs {
            if v >= self.n {
                return Err(Error::Domain(format!("vertex {v} outside 0..{}", self.n)));
            }
            s[v / 64] |= 1 << (v % 64);
        }
        Ok(s)
    }
}

/// Iterates the set bits of a word slice in ascending order.
pub struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Self { words, index: 0, current: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Disjoint vertex classes; used as the certificate of a blowup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    classes: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for class in &classes {
            for &v in class {
                if v >= n {
                    return Err(Error::Domain(format!("vertex {v} outside 0..{n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Domain(format!("vertex {v} lies in two classes")));
                }
            }
        }
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Multiplicities `(a_1, ..., a_h)` of a blowup of the complete graph `K_h`.
/// With three parts this is `K_{a,b,c}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupShape {
    parts: Vec<usize>,
}

impl BlowupShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("a blowup shape needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Domain("blowup parts must be at least 1".into()));
        }
        Ok(Self { parts })
    }

    pub fn triangle(a: usize, b: usize, c: usize) -> Result<Self> {
        Self::new(vec![a, b, c])
    }

    pub fn balanced(t: usize) -> Result<Self> {
        Self::new(vec![t, t, t])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Vertex count of the pattern.
    pub fn order(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The pattern itself as a graph.
    pub fn pattern(&self) -> Graph {
        complete_multipartite(&self.parts).expect("shape parts are validated")
    }
}

impl fmt::Display for BlowupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for BlowupShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad shape component {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// `G(n, p)`: each unordered pair, in row-major order, is an edge with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut r = rng::seeded(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng::bernoulli(&mut r, p) {
                b.add_edge(u, v);
            }
        }
    }
    let label = Label::new("gnp").arg("n", n).arg("p", p).arg("seed", seed).arg("rng", rng::RNG_ID).render();
    Ok(b.finish(Some(label)))
}

/// Random tripartite graph on parts `[0,m)`, `[m,2m)`, `[2m,3m)` with
/// independent cross edges at densities `(A-B, A-C, B-C)`.
pub fn random_tripartite(m: usize, alphas: [f64; 3], seed: u64) -> Result<(Graph, VertexPartition)> {
    if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(Error::Domain(format!("densities {alphas:?} outside [0, 1]")));
    }
    let mut r = rng::seeded(seed);
    let mut b = GraphBuilder::new(3 * m);
    let pairs = [(0usize, 1usize, alphas[0]), (0, 2, alphas[1]), (1, 2, alphas[2])];
    for &(x, y, p) in &pairs {
        for i in 0..m {
            for j in 0..m {
                if rng::bernoulli(&mut r, p) {
                    b.add_edge(x * m + i, y * m + j);
                }
            }
        }
    }
    let alpha = alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("/");
    let label =
        Label::new("tripartite").arg("m", m).arg("alpha", alpha).arg("seed", seed).arg("rng", rng::RNG_ID).render();
    let partition = VertexPartition::new(3 * m, (0..3).map(|x| (x * m..(x + 1) * m).collect()).collect())?;
    Ok((b.finish(Some(label)), partition))
}

/// Replaces vertex `i` by an independent set of `sizes[i]` vertices and each
/// edge by a complete bipartite graph. Classes are contiguous in vertex order.
pub fn blowup(g: &Graph, sizes: &[usize]) -> Result<(Graph, VertexPartition)> {
    if sizes.len() != g.n() {
        return Err(Error::Domain(format!("blowup needs {} class sizes, got {}", g.n(), sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(Error::Domain("blowup class sizes must be at least 1".into()));
    }
    let mut offsets = Vec::with_capacity(sizes.len() + 1);
    offsets.push(0usize);
    for &s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let total = *offsets.last().unwrap();
    let mut b = GraphBuilder::new(total);
    for (u, v) in g.edges() {
        for x in offsets[u]..offsets[u + 1] {
            for y in offsets[v]..offsets[v + 1] {
                b.add_edge(x, y);
            }
        }
    }
    let classes = (0..g.n()).map(|i| (offsets[i]..offsets[i + 1]).collect()).collect();
    let label = g.label().map(|inner| {
        let l = Label::new("blowup");
        let l = match sizes.first() {
            Some(&q) if sizes.iter().all(|&s| s == q) => l.arg("q", q),
            _ => l.arg("sizes", join_slash(sizes)),
        };
        l.inner(inner).render()
    });
    Ok((b.finish(label), VertexPartition::new(total, classes)?))
}

/// Blowup with every class of size `q`.
pub fn uniform_blowup(g: &Graph, q: usize) -> Result<(Graph, VertexPartition)> {
    blowup(g, &vec![q; g.n()])
}

/// Blowup of `K_h` with the given class sizes.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph> {
    if sizes.is_empty() {
        return Err(Error::Domain("complete multipartite graph needs at least one part".into()));
    }
    let base = Graph::complete(sizes.len());
    let (g, _) = blowup(&base, sizes)?;
    Ok(g.with_label(Some(Label::new("multipartite").arg("sizes", join_slash(sizes)).render())))
}

/// `G^{⊗k}` with the default vertex budget.
pub fn tensor_power(g: &Graph, k: usize) -> Result<Graph> {
    tensor_power_with_budget(g, k, DEFAULT_TENSOR_VERTEX_BUDGET)
}

/// Tensor power on `n^k` sequences in lexicographic order; two sequences are
/// adjacent iff they are adjacent in every coordinate.
pub fn tensor_power_with_budget(g: &Graph, k: usize, max_vertices: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::Domain("tensor power exponent must be at least 1".into()));
    }
    let n = g.n();
    let total = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n));
    let total = match total {
        Some(t) if t <= max_vertices => t,
        _ => {
            return Err(Error::resource(format!(
                "tensor power has {n}^{k} vertices, above the budget of {max_vertices}"
            )))
        }
    };
    let adjacency: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut b = GraphBuilder::new(total);
    let mut digits = vec![0usize; k];
    let mut choice = vec![0usize; k];
    for u in 0..total {
        // digits of u, most significant first
        let mut x = u;
        for d in digits.iter_mut().rev() {
            *d = x % n;
            x /= n;
        }
        if digits.iter().any(|&d| adjacency[d].is_empty()) {
            continue;
        }
        choice.iter_mut().for_each(|c| *c = 0);
        'odometer: loop {
            let v = digits.iter().zip(&choice).fold(0usize, |acc, (&d, &c)| acc * n + adjacency[d][c]);
            if v > u {
                b.add_edge(u, v);
            }
            for i in (0..k).rev() {
                choice[i] += 1;
                if choice[i] < adjacency[digits[i]].len() {
                    continue 'odometer;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    let label = g.label().map(|inner| Label::new("tensor").arg("k", k).inner(inner).render());
    Ok(b.finish(label))
}

pub(crate) fn join_slash<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn edge_list_examples() {
        assert_eq!(triangle().edge_count(), 3);
        assert_eq!(Graph::from_edge_list(4, &[]).unwrap().edge_count(), 0);
        assert_eq!(Graph::from_edge_list(3, &[(0, 1), (1, 0)]).unwrap().edge_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(Graph::from_edge_list(3, &[(0, 3)]), Err(Error::MalformedInput(_))));
        assert!(matches!(Graph::from_edge_list(3, &[(1, 1)]), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn random_graph_extremes() {
        assert_eq!(random_graph(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(random_graph(10, 1.0, 1).unwrap().edge_count(), 45);
        assert!(matches!(random_graph(10, 1.5, 1), Err(Error::Domain(_))));
        assert!(matches!(random_graph(10, -0.1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn random_graph_is_deterministic() {
        let a = random_graph(200, 0.3, 99).unwrap();
        let b = random_graph(200, 0.3, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_graph(200, 0.3, 100).unwrap());
    }

    #[test]
    fn blowup_of_edge_is_complete_bipartite() {
        let edge = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let (g, part) = blowup(&edge, &[2, 3]).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(part.classes(), &[vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(g.pair_density(&[0, 1], &[2, 3, 4]).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn blowup_examples() {
        let (g, _) = blowup(&triangle(), &[2, 2, 2]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 12));
        let (same, _) = blowup(&triangle(), &[1, 1, 1]).unwrap();
        assert_eq!(same.row(0), triangle().row(0));
        assert!(matches!(blowup(&triangle(), &[1, 1]), Err(Error::Domain(_))));
    }

    #[test]
    fn multipartite_examples() {
        let k3 = complete_multipartite(&[1, 1, 1]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(complete_multipartite(&[2, 2, 2]).unwrap().edge_count(), 12);
        let k112 = complete_multipartite(&[1, 1, 2]).unwrap();
        assert_eq!((k112.n(), k112.edge_count()), (4, 5));
        assert!(!k112.has_edge(2, 3));
    }

    #[test]
    fn tensor_examples() {
        let g = random_graph(7, 0.5, 4).unwrap();
        let t1 = tensor_power(&g, 1).unwrap();
        assert_eq!(t1.row(3), g.row(3));
        assert_eq!(t1.edge_count(), g.edge_count());
        let e = Graph::empty(3);
        assert_eq!(tensor_power(&e, 3).unwrap().edge_count(), 0);
        let k3sq = tensor_power(&triangle(), 2).unwrap();
        assert_eq!(k3sq.n(), 9);
        // (0,0) ~ (1,1): both coordinates adjacent. (0,0) !~ (0,1).
        assert!(k3sq.has_edge(0, 4));
        assert!(!k3sq.has_edge(0, 1));
    }

    #[test]
    fn tensor_budget() {
        let g = Graph::complete(11);
        match tensor_power_with_budget(&g, 3, 1000) {
            Err(Error::Resource { reason, .. }) => assert!(reason.contains("11^3")),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn tensor_degree_law_exhaustive_small() {
        for seed in 0..6 {
            let n = 2 + seed as usize;
            let g = random_graph(n, 0.5, seed).unwrap();
            for k in 1..=3 {
                let t = tensor_power(&g, k).unwrap();
                t.validate().unwrap();
                for u in 0..t.n() {
                    let mut x = u;
                    let mut expect = 1;
                    for _ in 0..k {
                        expect *= g.degree(x % n);
                        x /= n;
                    }
                    assert_eq!(t.degree(u), expect);
                }
            }
        }
    }

    #[test]
    fn densities() {
        assert_eq!(Graph::complete(4).edge_density().unwrap(), BigRational::from_integer(1.into()));
        let g = Graph::complete(4);
        assert!(matches!(g.pair_density(&[], &[1]), Err(Error::Domain(_))));
        assert!(matches!(g.pair_density(&[0, 1], &[1]), Err(Error::Domain(_))));
        assert!(matches!(Graph::empty(1).edge_density(), Err(Error::Domain(_))));
    }

    #[test]
    fn with_edge_adds_once() {
        let g = Graph::empty(3).with_edge(0, 2).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.with_edge(2, 0).unwrap().edge_count(), 1);
        assert!(g.with_edge(1, 1).is_err());
    }

    #[test]
    fn shape_parsing() {
        let s: BlowupShape = "1,2,2".parse().unwrap();
        assert_eq!(s.parts(), &[1, 2, 2]);
        assert_eq!(s.order(), 5);
        assert!("1,0,2".parse::<BlowupShape>().is_err());
        assert!("x".parse::<BlowupShape>().is_err());
        assert_eq!(s.to_string(), "1,2,2");
    }
}
