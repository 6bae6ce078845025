//! Unsupervised diversity scoring of generated code: normalization,
//! embedding, K-Means++ clustering, Shannon entropy over cluster occupancy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modsat_core::util::fnv1a64;

use crate::AutoError;

/// Strips comments, rewrites indentation to four spaces per brace depth,
/// removes trailing whitespace and drops blank lines. Idempotent; the token
/// stream is untouched.
pub fn normalize_code(source: &str) -> String {
    let uncommented = strip_comments(source);
    let mut out = String::new();
    let mut depth = 0i32;
    for line in uncommented.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let leading_closes = trimmed.chars().take_while(|&c| c == '}').count() as i32;
        let level = (depth - leading_closes).max(0);
        for _ in 0..level {
            out.push_str("    ");
        }
        out.push_str(trimmed);
        out.push('\n');
        let opens = trimmed.matches('{').count() as i32;
        let closes = trimmed.matches('}').count() as i32;
        depth = (depth + opens - closes).max(0);
    }
    out
}

fn strip_comments(source: &str) -> String {
    let chars: Vec<char> = source.chars().collect();
    let mut out = String::with_capacity(source.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if chars[i] == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i + 1 < chars.len() && !(chars[i] == '*' && chars[i + 1] == '/') {
                i += 1;
            }
            i = (i + 2).min(chars.len());
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

/// Produces a fixed-dimension embedding for a piece of source text.
pub trait EmbeddingProvider {
    fn dim(&self) -> usize;
    fn embed(&self, source: &str) -> Result<Vec<f64>, AutoError>;
}

/// Offline fallback: hashed token unigram+bigram frequencies over 256
/// buckets, L2-normalized. Deterministic, no credentials, no network.
pub struct HashedTokenEmbedder;

impl HashedTokenEmbedder {
    pub const DIM: usize = 256;

    fn tokens(source: &str) -> Vec<String> {
        let mut tokens = Vec::new();
        let mut current = String::new();
        for c in source.chars() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                current.push(c);
            } else {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                if !c.is_whitespace() {
                    tokens.push(c.to_string());
                }
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
        tokens
    }
}

impl EmbeddingProvider for HashedTokenEmbedder {
    fn dim(&self) -> usize {
        Self::DIM
    }

    fn embed(&self, source: &str) -> Result<Vec<f64>, AutoError> {
        let tokens = Self::tokens(source);
        let mut counts = vec![0.0f64; Self::DIM];
        for t in &tokens {
            counts[(fnv1a64(t.as_bytes()) % Self::DIM as u64) as usize] += 1.0;
        }
        for pair in tokens.windows(2) {
            let key = format!("{}\u{1}{}", pair[0], pair[1]);
            counts[(fnv1a64(key.as_bytes()) % Self::DIM as u64) as usize] += 1.0;
        }
        let norm = counts.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in counts.iter_mut() {
                *x /= norm;
            }
        }
        Ok(counts)
    }
}

/// Remote single-endpoint provider: posts `{"input": text}` and expects
/// `{"embedding": [..]}`. Endpoint and optional bearer key come from
/// `MODSAT_EMBED_ENDPOINT` / `MODSAT_EMBED_API_KEY`.
pub struct RemoteEmbedder {
    endpoint: String,
    api_key: Option<String>,
    dim: usize,
}

impl RemoteEmbedder {
    pub const ENDPOINT_ENV: &'static str = "MODSAT_EMBED_ENDPOINT";
    pub const API_KEY_ENV: &'static str = "MODSAT_EMBED_API_KEY";

    pub fn from_env(dim: usize) -> Result<RemoteEmbedder, AutoError> {
        let endpoint = std::env::var(Self::ENDPOINT_ENV)
            .map_err(|_| AutoError::Embedding(format!("{} not set", Self::ENDPOINT_ENV)))?;
        Ok(RemoteEmbedder {
            endpoint,
            api_key: std::env::var(Self::API_KEY_ENV).ok(),
            dim,
        })
    }
}

impl EmbeddingProvider for RemoteEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, source: &str) -> Result<Vec<f64>, AutoError> {
        let mut request = ureq::post(&self.endpoint);
        if let Some(key) = &self.api_key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request
            .send_json(serde_json::json!({ "input": source }))
            .map_err(|e| AutoError::Embedding(e.to_string()))?;
        let value: serde_json::Value = response
            .body_mut()
            .read_json()
            .map_err(|e| AutoError::Embedding(e.to_string()))?;
        let vec: Vec<f64> = value["embedding"]
            .as_array()
            .ok_or_else(|| AutoError::Embedding("no embedding array".into()))?
            .iter()
            .filter_map(|x| x.as_f64())
            .collect();
        if vec.len() != self.dim {
            return Err(AutoError::Embedding(format!(
                "expected {} components, got {}",
                self.dim,
                vec.len()
            )));
        }
        Ok(vec)
    }
}

/// K centroids plus the assignment of each point to its nearest centroid.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    /// Within-cluster SSE measured after each Lloyd assignment step.
    pub sse_trace: Vec<f64>,
}

impl ClusterModel {
    pub fn occupancy(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.centroids.len()];
        for &a in &self.assignment {
            counts[a] += 1;
        }
        counts
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Within-cluster sum of squared distances.
pub fn sse(points: &[Vec<f64>], model: &ClusterModel) -> f64 {
    points
        .iter()
        .zip(&model.assignment)
        .map(|(p, &a)| sq_dist(p, &model.centroids[a]))
        .sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

/// K-Means++ seeding followed by Lloyd iterations to a fixpoint (at most
/// 100). Empty clusters are reseeded at the point farthest from its own
/// centroid.
pub fn kmeans_pp(points: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterModel, AutoError> {
    let n = points.len();
    if n == 0 {
        return Err(AutoError::BadParams("kmeans: empty input".into()));
    }
    if k == 0 || k > n {
        return Err(AutoError::BadParams(format!(
            "kmeans: K={k} outside 1..={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Seeding: first centroid uniform, then proportional to squared distance
    // to the nearest chosen centroid.
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..n)].clone());
    let mut min_d: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = min_d.iter().sum();
        let next = if total == 0.0 {
            // All mass at chosen points (duplicates): take the first point
            // not already a centroid.
            (0..n)
                .find(|&i| !centroids.contains(&points[i]))
                .unwrap_or(0)
        } else {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &d) in min_d.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        };
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            let d = sq_dist(p, centroids.last().unwrap());
            if d < min_d[i] {
                min_d[i] = d;
            }
        }
    }

    // Lloyd iterations.
    let dim = points[0].len();
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    let mut sse_trace = Vec::new();
    let measure = |centroids: &[Vec<f64>], assignment: &[usize]| -> f64 {
        points
            .iter()
            .zip(assignment)
            .map(|(p, &a)| sq_dist(p, &centroids[a]))
            .sum()
    };
    sse_trace.push(measure(&centroids, &assignment));
    for _ in 0..100 {
        // Update step: means of assigned points.
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignment) {
            counts[a] += 1;
            for (s, x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                for s in sums[j].iter_mut() {
                    *s /= counts[j] as f64;
                }
                centroids[j] = std::mem::take(&mut sums[j]);
            } else {
                // Degenerate: reseed at the point farthest from its centroid.
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = sq_dist(&points[a], &centroids[assignment[a]]);
                        let db = sq_dist(&points[b], &centroids[assignment[b]]);
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                centroids[j] = points[far].clone();
            }
        }
        // Assign step.
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        let converged = next == assignment;
        assignment = next;
        sse_trace.push(measure(&centroids, &assignment));
        if converged {
            break;
        }
    }
    Ok(ClusterModel {
        centroids,
        assignment,
        sse_trace,
    })
}

/// Natural-log Shannon entropy over cluster occupancy; empty clusters
/// contribute nothing.
pub fn entropy(model: &ClusterModel) -> Result<f64, AutoError> {
    let n = model.assignment.len();
    if n == 0 {
        return Err(AutoError::BadParams(
            "entropy of an empty clustering".into(),
        ));
    }
    let mut h = 0.0;
    for &count in model.occupancy().iter().filter(|&&c| c > 0) {
        let p = count as f64 / n as f64;
        h -= p * p.ln();
    }
    Ok(h)
}

/// Default cluster count: `max(2, ceil(sqrt(N)))`, clamped to `N`.
pub fn default_k(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize).max(2).min(n.max(1))
}

/// The full pipeline: normalize, embed, cluster, score.
pub fn diversity_score(
    sources: &[String],
    provider: &dyn EmbeddingProvider,
    seed: u64,
) -> Result<f64, AutoError> {
    if sources.is_empty() {
        return Ok(0.0);
    }
    let mut points = Vec::with_capacity(sources.len());
    for s in sources {
        points.push(provider.embed(&normalize_code(s))?);
    }
    let k = default_k(points.len());
    let model = kmeans_pp(&points, k, seed)?;
    entropy(&model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_strips_comments_and_uniformizes_indent() {
        assert_eq!(normalize_code("x = 1; // c"), "x = 1;\n");
        let mixed = "if (a) {\n\t\tx = 1;\n   /* note */ y = 2;\n}\n\n\n";
        let normalized = normalize_code(mixed);
        assert_eq!(normalized, "if (a) {\n    x = 1;\n    y = 2;\n}\n");
    }

    #[test]
    fn normalize_is_idempotent_on_random_sources() {
        use modsat_core::hooks::snapshot::SplitMix64;
        let mut rng = SplitMix64::new(11);
        let fragments = [
            "if (conflicts > 0) {",
            "}",
            "x = x + 1; // bump",
            "/* block */ return true;",
            "for_each_var(u) {",
            "let t = fast_avg / 2.0;",
            "",
            "   \t  ",
        ];
        for _ in 0..100 {
            let n = 1 + rng.below(12) as usize;
            let src: String = (0..n)
                .map(|_| fragments[rng.below(fragments.len() as u64) as usize])
                .collect::<Vec<_>>()
                .join("\n");
            let once = normalize_code(&src);
            assert_eq!(normalize_code(&once), once);
        }
    }

    #[test]
    fn fallback_embedding_is_deterministic_and_normalized() {
        let e = HashedTokenEmbedder;
        let a = e.embed("return conflicts > 0;").unwrap();
        let b = e.embed("return conflicts > 0;").unwrap();
        assert_eq!(a, b);
        let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);

        // Single-token sources still embed to a unit vector.
        let c = e.embed("x").unwrap();
        let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unrelated_sources_are_dissimilar_under_fallback() {
        let e = HashedTokenEmbedder;
        let a = e
            .embed("if (conflicts > 1000 && lbd_queue_size > 50) { cla_inc = cla_inc * 0.98; }")
            .unwrap();
        let b = e
            .embed("for_each_var(u) { set_polarity(u, rand01() < 0.5); } cancel_until(0);")
            .unwrap();
        let cosine: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!(cosine < 0.9, "cosine similarity {cosine} too high");
    }

    #[test]
    fn kmeans_recovers_separated_1d_clusters() {
        let points: Vec<Vec<f64>> = [0.0, 0.1, 10.0, 10.1].iter().map(|&x| vec![x]).collect();
        let model = kmeans_pp(&points, 2, 7).unwrap();
        assert_eq!(model.assignment[0], model.assignment[1]);
        assert_eq!(model.assignment[2], model.assignment[3]);
        assert_ne!(model.assignment[0], model.assignment[2]);

        // Brute-force check: no 2-partition has lower SSE.
        let got = sse(&points, &model);
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << 4) - 1 {
            let (mut sum_a, mut n_a, mut sum_b, mut n_b) = (0.0, 0, 0.0, 0);
            for (i, p) in points.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sum_a += p[0];
                    n_a += 1;
                } else {
                    sum_b += p[0];
                    n_b += 1;
                }
            }
            let (ca, cb) = (sum_a / n_a as f64, sum_b / n_b as f64);
            let cost: f64 = points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let c = if mask >> i & 1 == 1 { ca } else { cb };
                    (p[0] - c) * (p[0] - c)
                })
                .sum();
            best = best.min(cost);
        }
        assert!((got - best).abs() < 1e-12);
    }

    #[test]
    fn kmeans_edge_cases() {
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        // K = N: every point its own cluster, SSE 0.
        let model = kmeans_pp(&points, 5, 3).unwrap();
        let mut seen = model.assignment.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 5);
        assert_eq!(sse(&points, &model), 0.0);

        // K = 1: single centroid at the mean.
        let model = kmeans_pp(&points, 1, 3).unwrap();
        assert!((model.centroids[0][0] - 2.0).abs() < 1e-12);

        assert!(kmeans_pp(&points, 6, 3).is_err());
        assert!(kmeans_pp(&[], 1, 3).is_err());

        // Duplicate points with K close to N still terminate.
        let dups: Vec<Vec<f64>> = vec![vec![1.0]; 4];
        let model = kmeans_pp(&dups, 2, 3).unwrap();
        assert_eq!(model.assignment.len(), 4);
    }

    #[test]
    fn entropy_examples() {
        let model = ClusterModel {
            centroids: vec![vec![0.0]],
            assignment: vec![0; 7],
            sse_trace: vec![],
        };
        assert_eq!(entropy(&model).unwrap(), 0.0);

        // Four equal clusters of five: ln 4.
        let model = ClusterModel {
            centroids: vec![vec![0.0]; 4],
            assignment: (0..20).map(|i| i % 4).collect(),
            sse_trace: vec![],
        };
        assert!((entropy(&model).unwrap() - 4.0f64.ln()).abs() < 1e-9);

        // Occupancies (10, 5, 5) of 20: hand-computed value.
        let mut assignment = vec![0usize; 10];
        assignment.extend(vec![1usize; 5]);
        assignment.extend(vec![2usize; 5]);
        let model = ClusterModel {
            centroids: vec![vec![0.0]; 3],
            assignment,
            sse_trace: vec![],
        };
        let expected = -(0.5f64 * 0.5f64.ln() + 2.0 * (0.25 * 0.25f64.ln()));
        assert!((entropy(&model).unwrap() - expected).abs() < 1e-12);
        assert!((entropy(&model).unwrap() - 1.0397).abs() < 1e-4);
    }

    #[test]
    fn entropy_is_bounded_by_ln_k() {
        use modsat_core::hooks::snapshot::SplitMix64;
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let k = 1 + rng.below(6) as usize;
            let n = k + rng.below(40) as usize;
            let assignment: Vec<usize> = (0..n).map(|_| rng.below(k as u64) as usize).collect();
            let model = ClusterModel {
                centroids: vec![vec![0.0]; k],
                assignment,
                sse_trace: vec![],
            };
            let h = entropy(&model).unwrap();
            assert!(h >= 0.0 && h <= (k as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn lloyd_never_increases_sse() {
        use modsat_core::hooks::snapshot::SplitMix64;
        let mut rng = SplitMix64::new(21);
        for round in 0..100 {
            let n = 4 + rng.below(30) as usize;
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.rand01() * 10.0, rng.rand01() * 10.0])
                .collect();
            let k = 1 + rng.below(4.min(n as u64)) as usize;
            let model = kmeans_pp(&points, k, round).unwrap();
            for pair in model.sse_trace.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-9, "SSE increased: {pair:?}");
            }
            // At convergence no point prefers a different centroid.
            for (i, p) in points.iter().enumerate() {
                let assigned = sq_dist(p, &model.centroids[model.assignment[i]]);
                for c in &model.centroids {
                    assert!(sq_dist(p, c) >= assigned - 1e-9);
                }
            }
        }
    }

    #[test]
    fn pipeline_is_deterministic() {
        let sources: Vec<String> = vec![
            "return a > 1.0;".into(),
            "return b < 2.0;".into(),
            "cancel_until(0);".into(),
            "x = x * 3.0;".into(),
        ];
        let a = diversity_score(&sources, &HashedTokenEmbedder, 42).unwrap();
        let b = diversity_score(&sources, &HashedTokenEmbedder, 42).unwrap();
        assert_eq!(a, b);
    }
}
