//! Deterministic summation kernels shared by the per-column statistics.

/// Above this length sums switch to Neumaier compensated accumulation.
pub(crate) const COMPENSATED_MIN_LEN: usize = 10_000;

#[inline]
pub(crate) fn sum_map<F: FnMut(usize) -> f64>(len: usize, f: F) -> f64 {
    if len > COMPENSATED_MIN_LEN {
        neumaier(len, f)
    } else {
        plain(len, f)
    }
}

#[inline]
fn plain<F: FnMut(usize) -> f64>(len: usize, mut f: F) -> f64 {
    let mut acc = 0.0;
    for i in 0..len {
        acc += f(i);
    }
    acc
}

fn neumaier<F: FnMut(usize) -> f64>(len: usize, mut f: F) -> f64 {
    let mut acc = 0.0_f64;
    let mut comp = 0.0_f64;
    for i in 0..len {
        let v = f(i);
        let t = acc + v;
        if libm::fabs(acc) >= libm::fabs(v) {
            comp += (acc - t) + v;
        } else {
            comp += (v - t) + acc;
        }
        acc = t;
    }
    acc + comp
}

#[inline]
pub(crate) fn mean(values: &[f64]) -> f64 {
    sum_map(values.len(), |i| values[i]) / values.len() as f64
}
