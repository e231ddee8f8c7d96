//! Shared generators for the integration tests.
#![allow(dead_code)]

use linkflux::flux_torus::FluxLoop;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random closed polygon on the 2-torus based at `base`, turning `turns`
/// times around each coordinate, with jittered steps shorter than 1/2.
pub fn random_loop_at(rng: &mut ChaCha8Rng, base: &[f64], turns: &[i64]) -> FluxLoop {
    let k = base.len();
    loop {
        let n = rng.gen_range(6..16);
        let mut steps: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..k)
                    .map(|c| turns[c] as f64 / n as f64 + rng.gen_range(-0.12..0.12))
                    .collect()
            })
            .collect();
        // remove the drift so the polygon closes with the prescribed turns
        for c in 0..k {
            let drift: f64 = steps.iter().map(|s| s[c]).sum::<f64>() - turns[c] as f64;
            for s in steps.iter_mut() {
                s[c] -= drift / n as f64;
            }
        }
        if steps.iter().flatten().any(|d| d.abs() >= 0.45) {
            continue;
        }
        let mut p = base.to_vec();
        let mut vertices = Vec::with_capacity(n);
        for s in &steps {
            vertices.push(p.clone());
            for c in 0..k {
                p[c] += s[c];
            }
        }
        if let Ok(l) = FluxLoop::new(vertices) {
            return l;
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.gen_range(0.0..1.0)).collect()
}

pub fn random_turns(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(-1..=1)).collect()
}
