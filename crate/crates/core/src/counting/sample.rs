use rayon::prelude::*;

use super::DensityEstimate;
use crate::error::{Error, Result};
use crate::graph::{BlowupShape, Graph};
use crate::rng::{below, derive_seed, SplitMix64};

/// Two-sided 99% normal quantile.
pub const CONFIDENCE_Z: f64 = 2.575_829_303_548_9;

const CHUNK: u64 = 4096;

/// Fraction of `samples` uniform maps `V(K_{a,b,c}) -> V(G)` that are
/// homomorphisms. Sample `i` draws from a generator seeded by `(seed, i)`,
/// so the result does not depend on scheduling.
pub fn sample_hom_density(shape: &BlowupShape, g: &Graph, samples: u64, seed: u64) -> Result<DensityEstimate> {
    let everyone: Vec<usize> = (0..g.n()).collect();
    let parts = vec![everyone; shape.parts().len()];
    sample_inner(shape, g, &parts, samples, seed)
}

/// Like [`sample_hom_density`], but pattern part `i` is mapped uniformly into
/// `parts[i]` only.
pub fn sample_part_respecting_density(
    shape: &BlowupShape,
    g: &Graph,
    parts: &[Vec<usize>],
    samples: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    if parts.len() != shape.parts().len() {
        return Err(Error::Domain(format!(
            "shape has {} parts but {} vertex classes were given",
            shape.parts().len(),
            parts.len()
        )));
    }
    if parts.iter().flatten().any(|&v| v >= g.n()) {
        return Err(Error::Domain("vertex class mentions a vertex outside the graph".into()));
    }
    sample_inner(shape, g, parts, samples, seed)
}

fn sample_inner(
    shape: &BlowupShape,
    g: &Graph,
    parts: &[Vec<usize>],
    samples: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let estimate = |successes: u64| {
        let point = successes as f64 / samples as f64;
        DensityEstimate {
            pattern: shape.parts().to_vec(),
            n: g.n(),
            samples,
            successes,
            point,
            half_width: CONFIDENCE_Z * (point * (1.0 - point) / samples as f64).sqrt(),
            seed,
        }
    };
    if g.edge_count() == 0 && shape.parts().len() > 1 || parts.iter().any(|p| p.is_empty()) {
        return Ok(estimate(0));
    }
    // part index of each pattern vertex
    let owner: Vec<usize> = shape.parts().iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(i, a)).collect();
    let chunks = samples.div_ceil(CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut image = vec![0usize; owner.len()];
            let mut hits = 0u64;
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut r = SplitMix64::new(derive_seed(seed, i));
                if draw_is_hom(g, parts, &owner, &mut image, &mut r) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(estimate(successes))
}

fn draw_is_hom(g: &Graph, parts: &[Vec<usize>], owner: &[usize], image: &mut [usize], r: &mut SplitMix64) -> bool {
    for (x, &p) in image.iter_mut().zip(owner) {
        let class = &parts[p];
        *x = class[below(r, class.len() as u64) as usize];
    }
    for i in 0..owner.len() {
        for j in i + 1..owner.len() {
            if owner[i] != owner[j] && !g.has_edge(image[i], image[j]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::triangle_hom_count;
    use crate::graph::random_graph;

    fn shape(parts: &[usize]) -> BlowupShape {
        BlowupShape::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn triangle_in_k3() {
        let est = sample_hom_density(&shape(&[1, 1, 1]), &Graph::complete(3), 200_000, 5).unwrap();
        assert!(est.contains(6.0 / 27.0), "{est:?}");
        assert_eq!(est.point, est.successes as f64 / est.samples as f64);
    }

    #[test]
    fn empty_host_is_exactly_zero() {
        let est = sample_hom_density(&shape(&[2, 2, 2]), &Graph::empty(10), 1000, 1).unwrap();
        assert_eq!((est.point, est.successes, est.half_width), (0.0, 0, 0.0));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = random_graph(40, 0.5, 2).unwrap();
        let a = sample_hom_density(&shape(&[1, 2, 2]), &g, 50_000, 9).unwrap();
        let b = sample_hom_density(&shape(&[1, 2, 2]), &g, 50_000, 9).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sample_hom_density(&shape(&[1, 2, 2]), &g, 50_000, 9).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(sample_hom_density(&shape(&[1, 1, 1]), &Graph::complete(3), 0, 1).is_err());
    }

    #[test]
    fn agrees_with_exact_on_random_graph() {
        let g = random_graph(30, 0.6, 12).unwrap();
        let exact = triangle_hom_count(&g).log2_density.exp2();
        let est = sample_hom_density(&shape(&[1, 1, 1]), &g, 400_000, 3).unwrap();
        assert!(est.contains(exact), "{est:?} vs {exact}");
    }
}
