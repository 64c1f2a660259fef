use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::ArbDescriptor;

/// Magnitude of the 2-D DFT of a (ring x angle) histogram, normalized by
/// `1 / (rings * bins)`. Same shape as the input. Circular shifts along the
/// angular axis only change phases, so the magnitudes are shift invariant.
pub fn fourier_magnitude_descriptor(d: &ArbDescriptor) -> ArbDescriptor {
    let (rings, bins) = (d.rings(), d.bins());
    let mut grid: Vec<Complex64> = d.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();

    // Rows: one transform per ring along the angular axis.
    planner.plan_fft_forward(bins).process(&mut grid);

    // Columns: along the ring axis.
    if rings > 1 {
        let fft = planner.plan_fft_forward(rings);
        let mut column = vec![Complex64::new(0.0, 0.0); rings];
        for v in 0..bins {
            for (x, c) in column.iter_mut().enumerate() {
                *c = grid[x * bins + v];
            }
            fft.process(&mut column);
            for (x, c) in column.iter().enumerate() {
                grid[x * bins + v] = *c;
            }
        }
    }

    let norm = 1.0 / (rings * bins) as f64;
    let values = grid.iter().map(|c| c.norm() * norm).collect();
    ArbDescriptor::from_values(values, rings, bins, *d.config())
        .expect("transform preserves the grid shape")
}
