use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use std::cell::RefCell;

thread_local! {
    // Plans are cached per thread; no scratch is shared across threads.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalised in-place DFT: forward is `Σ_j x_j e^{-2πi jk/n}`.
pub(crate) fn fft_in_place(buf: &mut [Complex64], direction: FftDirection) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft(buf.len(), direction));
    plan.process(buf);
}

/// Unnormalised 2-D DFT of a row-major `rows × cols` array.
pub(crate) fn fft2_in_place(data: &mut [Complex64], rows: usize, cols: usize, direction: FftDirection) {
    assert_eq!(data.len(), rows * cols);
    let row_plan = PLANNER.with(|p| p.borrow_mut().plan_fft(cols, direction));
    for row in data.chunks_exact_mut(cols) {
        row_plan.process(row);
    }
    let col_plan = PLANNER.with(|p| p.borrow_mut().plan_fft(rows, direction));
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_plan.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}
