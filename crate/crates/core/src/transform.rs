//! Axis-by-axis FFT and DST-I kernels, plus evaluation on oversampled grids.
//!
//! Everything here works on flat row-major arrays of `n^d` complex numbers.
//! Box (sine) data is carried in complex storage as well; the DST-I is
//! complex-linear so real and imaginary parts transform independently.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::{Domain, GridSpec};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let key = (len, direction == FftDirection::Forward);
    PLANS.with(|plans| {
        if let Some(p) = plans.borrow().get(&key) {
            return p.clone();
        }
        let p = PLANNER.with(|pl| pl.borrow_mut().plan_fft(len, direction));
        plans.borrow_mut().insert(key, p.clone());
        p
    })
}

/// Runs `f` on every 1-D line of `data` along `axis`.
fn for_each_line(data: &mut [Complex64], n: usize, dim: usize, axis: usize, mut f: impl FnMut(&mut [Complex64])) {
    let stride = n.pow((dim - 1 - axis) as u32);
    let outer = n.pow(axis as u32);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        for i in 0..stride {
            let base = o * n * stride + i;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[base + j * stride];
            }
            f(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}

/// Unnormalised multidimensional DFT in place.
pub(crate) fn fft_axes(data: &mut [Complex64], n: usize, dim: usize, direction: FftDirection) {
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        for_each_line(data, n, dim, axis, |line| fft.process_with_scratch(line, &mut scratch));
    }
}

/// Unnormalised DST-I along every axis: `S_k = Σ_{j=1}^{n} x_j sin(π k j / (n + 1))`.
///
/// Applying it twice multiplies by `((n + 1) / 2)^d`.
pub(crate) fn dst_axes(data: &mut [Complex64], n: usize, dim: usize) {
    let m = 2 * (n + 1);
    let fft = plan(m, FftDirection::Forward);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut ext = vec![Complex64::new(0.0, 0.0); m];
    let half_i = Complex64::new(0.0, 0.5);
    for axis in 0..dim {
        for_each_line(data, n, dim, axis, |line| {
            ext[0] = Complex64::new(0.0, 0.0);
            ext[n + 1] = Complex64::new(0.0, 0.0);
            for j in 0..n {
                ext[j + 1] = line[j];
                ext[m - 1 - j] = -line[j];
            }
            fft.process_with_scratch(&mut ext, &mut scratch);
            for k in 0..n {
                line[k] = half_i * ext[k + 1];
            }
        });
    }
}

/// Number of samples per axis of the grid oversampled by `factor`.
pub(crate) fn padded_len(grid: &GridSpec, factor: usize) -> usize {
    match grid.domain() {
        Domain::Torus => factor * grid.n(),
        Domain::Box => factor * (grid.n() + 1) - 1,
    }
}

/// Per-axis scatter targets (slot in the padded axis, weight) for each slot of
/// the base axis. The torus Nyquist coefficient is split evenly between `±N/2`.
fn scatter_map(grid: &GridSpec, p: usize) -> Vec<Vec<(usize, f64)>> {
    let n = grid.n();
    (0..n)
        .map(|j| match grid.domain() {
            Domain::Box => vec![(j, 1.0)],
            Domain::Torus => {
                if p == n {
                    vec![(j, 1.0)]
                } else if j == n / 2 {
                    vec![(n / 2, 0.5), (p - n / 2, 0.5)]
                } else {
                    let k = grid.axis_wavenumber(j);
                    let slot = if k >= 0 { k as usize } else { (p as i64 + k) as usize };
                    vec![(slot, 1.0)]
                }
            }
        })
        .collect()
}

/// Per-axis gather sources: padded slots summed into each base slot.
fn gather_map(grid: &GridSpec, p: usize) -> Vec<Vec<usize>> {
    let n = grid.n();
    (0..n)
        .map(|j| match grid.domain() {
            Domain::Box => vec![j],
            Domain::Torus => {
                if p == n {
                    vec![j]
                } else if j == n / 2 {
                    vec![n / 2, p - n / 2]
                } else {
                    let k = grid.axis_wavenumber(j);
                    vec![if k >= 0 { k as usize } else { (p as i64 + k) as usize }]
                }
            }
        })
        .collect()
}

fn for_each_combo<T: Copy>(lists: &[&Vec<T>], mut f: impl FnMut(&[T])) {
    let d = lists.len();
    let mut pick = [0usize; 3];
    let mut cur: Vec<T> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut a = d;
        loop {
            if a == 0 {
                return;
            }
            a -= 1;
            pick[a] += 1;
            if pick[a] < lists[a].len() {
                cur[a] = lists[a][pick[a]];
                break;
            }
            pick[a] = 0;
            cur[a] = lists[a][0];
        }
    }
}

/// Samples the truncated series on the grid oversampled by `factor`.
/// Returns the padded samples (row-major, `p^d`) and `p`.
pub(crate) fn synthesize(grid: &GridSpec, coeffs: &[Complex64], factor: usize) -> (Vec<Complex64>, usize) {
    let dim = grid.dim();
    let p = padded_len(grid, factor);
    let total = p.pow(dim as u32);
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    if factor == 1 {
        buf.copy_from_slice(coeffs);
    } else {
        let smap = scatter_map(grid, p);
        for (idx, &c) in coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let slots = grid.unravel(idx);
            let lists: Vec<&Vec<(usize, f64)>> = (0..dim).map(|a| &smap[slots[a]]).collect();
            for_each_combo(&lists, |combo| {
                let mut flat = 0usize;
                let mut w = 1.0;
                for &(s, wt) in combo {
                    flat = flat * p + s;
                    w *= wt;
                }
                buf[flat] += c * w;
            });
        }
    }
    match grid.domain() {
        Domain::Torus => fft_axes(&mut buf, p, dim, FftDirection::Inverse),
        Domain::Box => dst_axes(&mut buf, p, dim),
    }
    (buf, p)
}

/// Inverse of [`synthesize`] followed by truncation to the base grid's modes.
pub(crate) fn analyze(grid: &GridSpec, mut values: Vec<Complex64>, p: usize) -> Vec<Complex64> {
    let dim = grid.dim();
    let total = p.pow(dim as u32);
    assert_eq!(values.len(), total, "padded sample count mismatch");
    let scale = match grid.domain() {
        Domain::Torus => {
            fft_axes(&mut values, p, dim, FftDirection::Forward);
            1.0 / total as f64
        }
        Domain::Box => {
            dst_axes(&mut values, p, dim);
            (2.0 / (p + 1) as f64).powi(dim as i32)
        }
    };
    if p == grid.n() {
        values.iter_mut().for_each(|v| *v *= scale);
        return values;
    }
    let gmap = gather_map(grid, p);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let slots = grid.unravel(idx);
        let lists: Vec<&Vec<usize>> = (0..dim).map(|a| &gmap[slots[a]]).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_combo(&lists, |combo| {
            let flat = combo.iter().fold(0usize, |f, &s| f * p + s);
            acc += values[flat];
        });
        *slot = acc * scale;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dst_matches_direct_sum() {
        let n = 6;
        let x: Vec<f64> = (0..n).map(|j| (j as f64 * 0.7).sin() + 0.1 * j as f64).collect();
        let mut data: Vec<Complex64> = x.iter().map(|&v| c(v)).collect();
        dst_axes(&mut data, n, 1);
        for k in 1..=n {
            let direct: f64 = (1..=n)
                .map(|j| x[j - 1] * (std::f64::consts::PI * (k * j) as f64 / (n + 1) as f64).sin())
                .sum();
            assert!((data[k - 1].re - direct).abs() < 1e-12);
            assert!(data[k - 1].im.abs() < 1e-12);
        }
    }

    #[test]
    fn padded_roundtrip_is_identity_on_coefficients() {
        for grid in [
            GridSpec::torus(2, 8).unwrap(),
            GridSpec::dirichlet_box(2, 6).unwrap(),
            GridSpec::torus(1, 10).unwrap(),
        ] {
            let coeffs: Vec<Complex64> = (0..grid.len())
                .map(|i| {
                    let k = grid.wavevector(i);
                    if grid.is_torus() && grid.sup_wavenumber(i) == grid.n() as i64 / 2 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(0.3 * k[0] as f64 + 0.1, if grid.is_torus() { 0.2 * k[1] as f64 } else { 0.0 })
                    }
                })
                .collect();
            for factor in [1, 2, 3] {
                let (vals, p) = synthesize(&grid, &coeffs, factor);
                let back = analyze(&grid, vals, p);
                for (a, b) in coeffs.iter().zip(&back) {
                    assert!((a - b).norm() < 1e-12, "factor {factor}: {a} vs {b}");
                }
            }
        }
    }
}
