//! Cached 2D complex transforms built from 1D rustfft plans.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static REGISTRY: OnceLock<Mutex<HashMap<usize, Arc<Plans>>>> = OnceLock::new();
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = registry.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

fn transpose(n: usize, data: &mut [Complex64]) {
    for r in 0..n {
        for c in (r + 1)..n {
            data.swap(r * n + c, c * n + r);
        }
    }
}

fn transform(n: usize, data: &mut [Complex64], fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    transpose(n, data);
    fft.process_with_scratch(data, &mut scratch);
    transpose(n, data);
}

/// Unnormalized forward transform, `sum_x f(x) e^{-ik.x}`.
pub(crate) fn forward(n: usize, data: &mut [Complex64]) {
    let p = plans(n);
    transform(n, data, p.forward.as_ref());
}

/// Unnormalized inverse transform, `sum_k c_k e^{ik.x}`.
pub(crate) fn inverse(n: usize, data: &mut [Complex64]) {
    let p = plans(n);
    transform(n, data, p.inverse.as_ref());
}
