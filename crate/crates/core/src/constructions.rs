//! Behrend sets, Ruzsa–Szemerédi graphs and the `K_{1,1,2}`-sparse blowup.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{join_slash, uniform_blowup, Graph, GraphBuilder, VertexPartition};
use crate::label::Label;

/// Largest vertex count a construction may allocate.
pub const MAX_CONSTRUCTION_VERTICES: usize = 40_000;

/// Largest universe [`max_3ap_free_bruteforce`] accepts.
pub const BRUTEFORCE_AP_LIMIT: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApMethod {
    Behrend,
    BruteForce,
    Explicit,
}

impl fmt::Display for ApMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApMethod::Behrend => "behrend",
            ApMethod::BruteForce => "brute_force",
            ApMethod::Explicit => "explicit",
        })
    }
}

impl std::str::FromStr for ApMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "behrend" => Ok(ApMethod::Behrend),
            "brute_force" => Ok(ApMethod::BruteForce),
            "explicit" => Ok(ApMethod::Explicit),
            _ => Err(Error::MalformedInput(format!("unknown set method {s:?}"))),
        }
    }
}

/// A subset of `[1, universe_n]` with no three-term arithmetic progression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApFreeSet {
    universe_n: u64,
    elements: Vec<u64>,
    method: ApMethod,
}

impl ApFreeSet {
    /// Validates ordering, range and progression-freeness.
    pub fn new(universe_n: u64, elements: Vec<u64>, method: ApMethod) -> Result<Self> {
        if universe_n == 0 {
            return Err(Error::Domain("universe must be [1, n] with n >= 1".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedInput("set elements must be strictly ascending".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| x == 0 || x > universe_n) {
            return Err(Error::Domain(format!("element {x} outside [1, {universe_n}]")));
        }
        if let Some((x, y, z)) = find_3ap(&elements) {
            return Err(Error::Precondition(format!("set contains the progression {x}, {y}, {z}")));
        }
        Ok(Self { universe_n, elements, method })
    }

    pub fn universe_n(&self) -> u64 {
        self.universe_n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn method(&self) -> ApMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// First progression `x < y < z`, `x + z = 2y`, among the distinct values of `xs`.
pub fn find_3ap(xs: &[u64]) -> Option<(u64, u64, u64)> {
    let mut s: Vec<u64> = xs.to_vec();
    s.sort_unstable();
    s.dedup();
    for (i, &x) in s.iter().enumerate() {
        for &z in s.get(i + 2..).unwrap_or(&[]) {
            if (x + z) % 2 == 0 {
                let y = (x + z) / 2;
                if y != x && s.binary_search(&y).is_ok() {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub fn is_3ap_free(xs: &[u64]) -> bool {
    find_3ap(xs).is_none()
}

/// Behrend's sphere construction over `[1, n]`.
///
/// Integers whose base-`(2d-1)` digits (`k` of them) are all at most `d-1`
/// add without carries, so an arithmetic progression among them is one
/// digit-wise; on a sphere `sum x_i^2 = r` that forces the three points to
/// coincide. We scan `d = 2..=ceil(sqrt n)` and `k = 1..=ceil(log n / log(2d-1))`,
/// keep every `(d, k)` whose largest element fits in `[1, n]`, and return the
/// largest norm class (the smaller norm on ties, the earliest `(d, k)` on ties
/// between pairs). Elements are shifted by one into `[1, n]`.
pub fn behrend_set(n: u64) -> Result<ApFreeSet> {
    if n == 0 {
        return Err(Error::Domain("behrend_set needs n >= 1".into()));
    }
    let mut best: Vec<u64> = vec![1];
    let d_max = (n as f64).sqrt().ceil() as u64;
    for d in 2..=d_max {
        let base = 2 * d - 1;
        let k_max = ((n as f64).ln() / (base as f64).ln()).ceil().max(1.0) as u32;
        for k in 1..=k_max {
            let Some(span) = base.checked_pow(k) else { break };
            // largest representable value is (base^k - 1) / 2, shifted by one
            if (span - 1) / 2 + 1 > n {
                break;
            }
            if let Some(class) = largest_norm_class(d, base, k) {
                if class.len() > best.len() {
                    best = class;
                }
            }
        }
    }
    ApFreeSet::new(n, best, ApMethod::Behrend)
}

fn largest_norm_class(d: u64, base: u64, k: u32) -> Option<Vec<u64>> {
    let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut digits = vec![0u64; k as usize];
    loop {
        let value = digits.iter().rev().fold(0u64, |acc, &x| acc * base + x);
        let norm = digits.iter().map(|x| x * x).sum::<u64>();
        classes.entry(norm).or_default().push(value + 1);
        let mut i = 0;
        loop {
            if i == digits.len() {
                let mut best: Option<Vec<u64>> = None;
                for (_, mut members) in classes {
                    if best.as_ref().is_none_or(|b| members.len() > b.len()) {
                        members.sort_unstable();
                        best = Some(members);
                    }
                }
                return best;
            }
            digits[i] += 1;
            if digits[i] < d {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Size of the Behrend benchmark `n / 8^{sqrt(log2 n)}`, for comparison with
/// what [`behrend_set`] achieves at finite `n`.
pub fn behrend_benchmark(n: u64) -> f64 {
    let n = n as f64;
    n / 8f64.powf(n.log2().sqrt())
}

/// Exact maximum 3AP-free subset of `[1, n]` by branch and bound.
pub fn max_3ap_free_bruteforce(n: u64) -> Result<ApFreeSet> {
    if n == 0 {
        return Err(Error::Domain("universe must be [1, n] with n >= 1".into()));
    }
    if n > BRUTEFORCE_AP_LIMIT {
        return Err(Error::resource(format!("exhaustive 3AP search limited to n <= {BRUTEFORCE_AP_LIMIT}, got {n}")));
    }
    let mut best = Vec::new();
    let mut current = Vec::new();
    search_ap_free(1, n, &mut current, &mut best);
    ApFreeSet::new(n, best, ApMethod::BruteForce)
}

fn search_ap_free(next: u64, n: u64, current: &mut Vec<u64>, best: &mut Vec<u64>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    for z in next..=n {
        if current.len() as u64 + (n - z + 1) <= best.len() as u64 {
            return;
        }
        let extends = current.iter().all(|&y| 2 * y < z || current.binary_search(&(2 * y - z)).is_err());
        if extends {
            current.push(z);
            search_ap_free(z + 1, n, current, best);
            current.pop();
        }
    }
}

/// The triangle family of a Ruzsa–Szemerédi graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCertificate {
    pub m: usize,
    pub set: ApFreeSet,
    /// One `[a, b, c]` per `(i, s)`, in `i`-major order.
    pub triangles: Vec<[usize; 3]>,
    pub part_sizes: [usize; 3],
}

/// JSON form of [`RsCertificate`]; the set lives in its own file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsCertificateFile {
    pub m: usize,
    pub set_file: String,
    pub triangles: Vec<[usize; 3]>,
}

impl RsCertificate {
    pub fn to_file(&self, set_file: &str) -> RsCertificateFile {
        RsCertificateFile { m: self.m, set_file: set_file.to_string(), triangles: self.triangles.clone() }
    }

    /// Rebuilds a certificate from its JSON form and the loaded set, checking
    /// that the listed triangles are exactly the ones the set determines.
    pub fn from_file(file: &RsCertificateFile, set: ApFreeSet) -> Result<Self> {
        let (_, cert) = rs_graph(file.m, &set)?;
        if cert.triangles != file.triangles {
            return Err(Error::MalformedInput("certificate triangles do not match the set".into()));
        }
        Ok(cert)
    }

    /// Checks the certificate against `g`: the triangles are edge-disjoint,
    /// lie in `g`, and cover every edge exactly once.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        if n != 6 * self.m {
            return Err(Error::Precondition(format!("graph has {n} vertices, expected {}", 6 * self.m)));
        }
        let mut cover = vec![0u8; n * n];
        for t in &self.triangles {
            for (x, y) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                if !g.has_edge(x, y) {
                    return Err(Error::Precondition(format!("certificate edge ({x}, {y}) missing")));
                }
                let c = &mut cover[x.min(y) * n + x.max(y)];
                *c += 1;
                if *c > 1 {
                    return Err(Error::Precondition(format!("edge ({x}, {y}) in two triangles")));
                }
            }
        }
        for (u, v) in g.edges() {
            if cover[u * n + v] != 1 {
                return Err(Error::Precondition(format!("edge ({u}, {v}) in no triangle")));
            }
        }
        Ok(())
    }
}

/// Ruzsa–Szemerédi graph on parts `A = [0, m)`, `B = [m, 3m)`, `C = [3m, 6m)`.
/// Integer `j` of a part maps to its `(j-1)`-th vertex; for `i` in `[1, m]`
/// and `s` in `S` the triangle `{i in A, i+s in B, i+2s in C}` is added.
pub fn rs_graph(m: usize, set: &ApFreeSet) -> Result<(Graph, RsCertificate)> {
    rs_graph_from_elements(m, set.elements()).map(|(g, mut cert)| {
        cert.set = set.clone();
        (g, cert)
    })
}

/// As [`rs_graph`] for a raw element list, checked here.
pub fn rs_graph_from_elements(m: usize, elements: &[u64]) -> Result<(Graph, RsCertificate)> {
    if m == 0 {
        return Err(Error::Domain("rs_graph needs m >= 1".into()));
    }
    if 6 * m > MAX_CONSTRUCTION_VERTICES {
        return Err(Error::resource(format!("rs_graph would have {} vertices", 6 * m)));
    }
    if let Some(&x) = elements.iter().find(|&&x| x == 0 || x > m as u64) {
        return Err(Error::Domain(format!("set element {x} outside [1, {m}]")));
    }
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some((x, y, z)) = find_3ap(&sorted) {
        return Err(Error::Precondition(format!("set contains the progression {x}, {y}, {z}")));
    }
    let set = ApFreeSet::new(m as u64, sorted, ApMethod::Explicit)?;

    let mut b = GraphBuilder::new(6 * m);
    let mut triangles = Vec::with_capacity(m * set.len());
    for i in 1..=m {
        for &s in set.elements() {
            let s = s as usize;
            let a = i - 1;
            let bv = m + (i + s) - 1;
            let c = 3 * m + (i + 2 * s) - 1;
            b.add_edge(a, bv);
            b.add_edge(bv, c);
            b.add_edge(a, c);
            triangles.push([a, bv, c]);
        }
    }
    let label = Label::new("rs").arg("m", m).arg("set", join_slash(set.elements())).render();
    let cert = RsCertificate { m, set, triangles, part_sizes: [m, 2 * m, 3 * m] };
    Ok((b.finish(Some(label)), cert))
}

/// Uniform `q`-blowup of `rs_graph(m, behrend_set(m))`; `6mq` vertices.
pub fn k112_extremal_graph(m: usize, q: usize) -> Result<(Graph, VertexPartition, RsCertificate)> {
    if m == 0 || q == 0 {
        return Err(Error::Domain("k112_extremal_graph needs m >= 1 and q >= 1".into()));
    }
    let total = 6usize.checked_mul(m).and_then(|x| x.checked_mul(q));
    if total.is_none_or(|t| t > MAX_CONSTRUCTION_VERTICES) {
        return Err(Error::resource(format!(
            "k112 construction would have 6*{m}*{q} vertices, above {MAX_CONSTRUCTION_VERTICES}"
        )));
    }
    let set = behrend_set(m as u64)?;
    let (base, cert) = rs_graph(m, &set)?;
    let (g, partition) = uniform_blowup(&base, q)?;
    Ok((g, partition, cert))
}
