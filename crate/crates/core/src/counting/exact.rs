use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{HomCount, DEFAULT_BRUTEFORCE_BUDGET, DEFAULT_TUPLE_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{BitIter, BlowupShape, Graph};
use crate::numeric::{surjections, BigAccumulator};

/// Counts every map `V(H) -> V(G)` that sends edges to edges.
pub fn hom_count_bruteforce(h: &Graph, g: &Graph) -> Result<HomCount> {
    hom_count_bruteforce_with_budget(h, g, DEFAULT_BRUTEFORCE_BUDGET)
}

pub fn hom_count_bruteforce_with_budget(h: &Graph, g: &Graph, budget: u128) -> Result<HomCount> {
    let (hn, n) = (h.n(), g.n());
    let maps = (n as u128).checked_pow(hn as u32);
    if maps.is_none_or(|m| m > budget) {
        return Err(Error::resource_with_hint(
            format!("brute force needs {n}^{hn} map evaluations, above the budget of {budget}"),
            "use sample_hom_density",
        ));
    }
    // earlier[i]: pattern neighbours of i that are assigned before i
    let earlier: Vec<Vec<usize>> = (0..hn).map(|i| h.neighbors(i).filter(|&j| j < i).collect()).collect();
    let count: u128 = if hn == 0 {
        1
    } else {
        (0..n)
            .into_par_iter()
            .map(|first| {
                let mut image = vec![0usize; hn];
                image[0] = first;
                extend_maps(g, &earlier, &mut image, 1)
            })
            .sum()
    };
    Ok(HomCount::new(BigUint::from(count), None, hn, n))
}

fn extend_maps(g: &Graph, earlier: &[Vec<usize>], image: &mut [usize], next: usize) -> u128 {
    if next == image.len() {
        return 1;
    }
    let mut total = 0;
    for x in 0..g.n() {
        if earlier[next].iter().all(|&j| g.has_edge(image[j], x)) {
            image[next] = x;
            total += extend_maps(g, earlier, image, next + 1);
        }
    }
    total
}

/// `Hom_{K_3}(G)`: sum over ordered adjacent pairs of their codegree.
pub fn triangle_hom_count(g: &Graph) -> HomCount {
    let total: u128 =
        (0..g.n()).into_par_iter().map(|u| g.neighbors(u).map(|v| g.codegree(u, v) as u128).sum::<u128>()).sum();
    HomCount::new(BigUint::from(total), Some(shape(&[1, 1, 1])), 3, g.n())
}

/// `Hom_{K_{1,1,2}}(G)`: sum over ordered adjacent pairs of squared codegree.
pub fn k112_hom_count(g: &Graph) -> HomCount {
    let total: u128 = (0..g.n())
        .into_par_iter()
        .map(|u| {
            g.neighbors(u)
                .map(|v| {
                    let c = g.codegree(u, v) as u128;
                    c * c
                })
                .sum::<u128>()
        })
        .sum();
    HomCount::new(BigUint::from(total), Some(shape(&[1, 1, 2])), 4, g.n())
}

/// Number of triangles through each edge `(u, v)`, `u < v`.
pub fn edge_triangle_multiplicities(g: &Graph) -> BTreeMap<(usize, usize), usize> {
    g.edges().map(|(u, v)| ((u, v), g.codegree(u, v))).collect()
}

/// Cost estimate `n^{sum of all parts but the largest}` used against budgets.
pub fn exact_cost(shape: &BlowupShape, n: usize) -> Option<u128> {
    let mut parts = shape.parts().to_vec();
    parts.sort_unstable();
    parts.pop();
    let e: usize = parts.iter().sum();
    (n as u128).checked_pow(e as u32)
}

pub fn blowup_hom_count(shape: &BlowupShape, g: &Graph) -> Result<HomCount> {
    blowup_hom_count_with_budget(shape, g, DEFAULT_TUPLE_BUDGET)
}

/// `Hom_{K_{a_1..a_h}}(G)`. For three parts this is
/// `sum_{U in V^a} sum_{W in N(U)^b} |N(U) ∩ N(W)|^c` with `a <= b <= c`.
pub fn blowup_hom_count_with_budget(shape: &BlowupShape, g: &Graph, budget: u128) -> Result<HomCount> {
    let cost = exact_cost(shape, g.n());
    if cost.is_none_or(|c| c > budget) {
        return Err(Error::resource_with_hint(
            format!("exact K_{{{shape}}} count on {} vertices costs more than the budget of {budget}", g.n()),
            "use sample_hom_density",
        ));
    }
    Ok(blowup_hom_count_raw(shape, g))
}

/// Exact blowup count with no budget check.
pub fn blowup_hom_count_raw(shape: &BlowupShape, g: &Graph) -> HomCount {
    let full = full_mask(g.n());
    let masks = vec![full; shape.parts().len()];
    let count = layered_count(g, shape.parts(), &masks);
    HomCount::new(count, Some(shape.clone()), shape.order(), g.n())
}

/// Counts maps of `K_{a_1..a_h}` that send part `i` into `parts[i]`.
/// The density is taken over `prod |parts[i]|^{a_i}` such maps.
pub fn part_respecting_hom_count(shape: &BlowupShape, g: &Graph, parts: &[Vec<usize>]) -> Result<(BigUint, BigUint)> {
    if parts.len() != shape.parts().len() {
        return Err(Error::Domain(format!(
            "shape has {} parts but {} vertex classes were given",
            shape.parts().len(),
            parts.len()
        )));
    }
    let masks = parts
        .iter()
        .map(|p| {
            let mut m = vec![0u64; g.words_per_row()];
            for &v in p {
                if v >= g.n() {
                    return Err(Error::Domain(format!("vertex {v} outside 0..{}", g.n())));
                }
                m[v / 64] |= 1 << (v % 64);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = layered_count(g, shape.parts(), &masks);
    let total = parts.iter().zip(shape.parts()).map(|(p, &a)| num_traits::pow(BigUint::from(p.len()), a)).product();
    Ok((count, total))
}

fn full_mask(n: usize) -> Vec<u64> {
    let mut m = vec![u64::MAX; n.div_ceil(64)];
    if !n.is_multiple_of(64) {
        if let Some(last) = m.last_mut() {
            *last = (1u64 << (n % 64)) - 1;
        }
    }
    m
}

/// Layer `i` picks an ordered `a_i`-tuple from `mask_i ∩ common`, where
/// `common` is the common neighbourhood of everything chosen on earlier
/// layers. Ordered tuples are enumerated as their sets of distinct entries,
/// weighted by the number of surjections onto that set. The largest part is
/// placed last and counted as `|pool|^{a}`.
fn layered_count(g: &Graph, parts: &[usize], masks: &[Vec<u64>]) -> BigUint {
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by_key(|&i| parts[i]);
    let parts: Vec<usize> = order.iter().map(|&i| parts[i]).collect();
    let masks: Vec<&[u64]> = order.iter().map(|&i| masks[i].as_slice()).collect();
    let weights: Vec<Vec<u128>> =
        parts.iter().map(|&a| (0..=a).map(|j| surjections(a as u32, j as u32)).collect()).collect();
    let ctx = Layers { g, parts: &parts, masks: &masks, weights: &weights };
    let words = g.words_per_row();
    let common = full_mask(g.n());
    let last = parts.len() - 1;
    if last == 0 {
        let mut acc = BigAccumulator::new();
        acc.add_weighted_power(1, popcount(&and(&common, masks[0])) as u128, parts[0] as u32);
        return acc.finish();
    }
    let pool: Vec<usize> = BitIter::new(&and(&common, masks[0])).collect();
    let depth = parts.iter().sum::<usize>() + 1;
    (0..pool.len())
        .into_par_iter()
        .map(|j| {
            let mut acc = BigAccumulator::new();
            let mut scratch = vec![vec![0u64; words]; depth];
            let next = and(&common, g.row(pool[j]));
            ctx.extend_set(0, &pool, j, 1, 1, &next, &mut scratch, &mut acc);
            acc
        })
        .reduce(BigAccumulator::new, BigAccumulator::merge)
        .finish()
}

struct Layers<'a> {
    g: &'a Graph,
    parts: &'a [usize],
    masks: &'a [&'a [u64]],
    weights: &'a [Vec<u128>],
}

impl Layers<'_> {
    /// Extends the current layer's set, whose largest element is `pool[j]`
    /// and which has `size` elements. `common` already includes its
    /// neighbourhoods; `scratch` holds one free buffer per remaining level.
    #[allow(clippy::too_many_arguments)]
    fn extend_set(
        &self,
        layer: usize,
        pool: &[usize],
        j: usize,
        size: usize,
        weight: u128,
        common: &[u64],
        scratch: &mut [Vec<u64>],
        acc: &mut BigAccumulator,
    ) {
        if common.iter().all(|&w| w == 0) {
            // every later layer is empty, and so are all supersets on this one
            return;
        }
        let (next, rest) = scratch.split_first_mut().expect("scratch depth");
        self.enter_layer(layer + 1, weight * self.weights[layer][size], common, next, rest, acc);
        if size < self.parts[layer] {
            for k in j + 1..pool.len() {
                and_into(common, self.g.row(pool[k]), next);
                self.extend_set(layer, pool, k, size + 1, weight, next, rest, acc);
            }
        }
    }

    fn enter_layer(
        &self,
        layer: usize,
        weight: u128,
        common: &[u64],
        next: &mut [u64],
        scratch: &mut [Vec<u64>],
        acc: &mut BigAccumulator,
    ) {
        let mask = self.masks[layer];
        if layer == self.parts.len() - 1 {
            let free: usize = common.iter().zip(mask).map(|(x, y)| (x & y).count_ones() as usize).sum();
            acc.add_weighted_power(weight, free as u128, self.parts[layer] as u32);
            return;
        }
        let pool: Vec<usize> = BitIter::new(&and(common, mask)).collect();
        for j in 0..pool.len() {
            and_into(common, self.g.row(pool[j]), next);
            self.extend_set(layer, &pool, j, 1, weight, next, scratch, acc);
        }
    }
}

#[inline]
fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

#[inline]
fn and_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x & y;
    }
}

#[inline]
fn popcount(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn shape(parts: &[usize]) -> BlowupShape {
    BlowupShape::new(parts.to_vec()).expect("static shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_multipartite, random_graph};

    fn k3() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(hom_count_bruteforce(&k3(), &k3()).unwrap().count, BigUint::from(6u32));
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(hom_count_bruteforce(&k3(), &c5).unwrap().count, BigUint::from(0u32));
        let k112 = complete_multipartite(&[1, 1, 2]).unwrap();
        assert_eq!(hom_count_bruteforce(&k112, &Graph::complete(4)).unwrap().count, BigUint::from(48u32));
    }

    #[test]
    fn bruteforce_budget() {
        let g = Graph::complete(40);
        let h = complete_multipartite(&[2, 2, 2]).unwrap();
        match hom_count_bruteforce(&h, &g) {
            Err(Error::Resource { hint, .. }) => assert!(hint.unwrap().contains("sample")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn specialised_counters_on_k4() {
        let k4 = Graph::complete(4);
        assert_eq!(triangle_hom_count(&k4).count, BigUint::from(24u32));
        assert_eq!(k112_hom_count(&k4).count, BigUint::from(48u32));
        assert_eq!(triangle_hom_count(&Graph::empty(5)).count, BigUint::from(0u32));
    }

    #[test]
    fn k112_on_itself_matches_bruteforce() {
        let k112 = complete_multipartite(&[1, 1, 2]).unwrap();
        assert_eq!(k112_hom_count(&k112).count, hom_count_bruteforce(&k112, &k112).unwrap().count);
    }

    #[test]
    fn blowup_reductions() {
        let g = random_graph(20, 0.5, 3).unwrap();
        let s111 = shape(&[1, 1, 1]);
        assert_eq!(blowup_hom_count(&s111, &g).unwrap().count, triangle_hom_count(&g).count);
        let s112 = shape(&[1, 1, 2]);
        assert_eq!(blowup_hom_count(&s112, &Graph::complete(4)).unwrap().count, BigUint::from(48u32));
        assert_eq!(blowup_hom_count(&s112, &g).unwrap().count, k112_hom_count(&g).count);
    }

    #[test]
    fn blowup_single_and_two_parts() {
        let g = random_graph(9, 0.5, 8).unwrap();
        // one part: every map of an independent set
        assert_eq!(blowup_hom_count(&shape(&[3]), &g).unwrap().count, BigUint::from(729u32));
        // K_{1,1} is an edge: 2m ordered pairs
        let edge = blowup_hom_count(&shape(&[1, 1]), &g).unwrap();
        assert_eq!(edge.count, BigUint::from(2 * g.edge_count()));
        let k13 = complete_multipartite(&[1, 3]).unwrap();
        assert_eq!(blowup_hom_count(&shape(&[1, 3]), &g).unwrap().count, hom_count_bruteforce(&k13, &g).unwrap().count);
    }

    #[test]
    fn blowup_budget() {
        let g = Graph::complete(400);
        assert!(matches!(blowup_hom_count(&shape(&[2, 2, 2]), &g), Err(Error::Resource { .. })));
    }

    #[test]
    fn triangle_count_matches_bruteforce_on_random_graph() {
        let g = random_graph(50, 0.5, 3).unwrap();
        assert_eq!(triangle_hom_count(&g).count, hom_count_bruteforce(&k3(), &g).unwrap().count);
    }

    #[test]
    fn multiplicities() {
        let m = edge_triangle_multiplicities(&Graph::complete(4));
        assert_eq!(m.len(), 6);
        assert!(m.values().all(|&t| t == 2));
        assert!(edge_triangle_multiplicities(&Graph::empty(4)).is_empty());
    }

    #[test]
    fn part_respecting_on_complete_tripartite() {
        let g = complete_multipartite(&[3, 3, 3]).unwrap();
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        let (count, total) = part_respecting_hom_count(&shape(&[2, 2, 2]), &g, &parts).unwrap();
        assert_eq!(count, BigUint::from(3u32.pow(6)));
        assert_eq!(total, count);
    }

    #[test]
    fn density_and_log() {
        let c = triangle_hom_count(&Graph::complete(3));
        assert_eq!(c.density, num_rational::BigRational::new(6.into(), 27.into()));
        assert!((c.log2_density - (6.0f64 / 27.0).log2()).abs() < 1e-12);
        let z = triangle_hom_count(&Graph::empty(3));
        assert_eq!(z.log2_density, f64::NEG_INFINITY);
        assert_eq!(z.to_json().log2_density, None);
    }
}
