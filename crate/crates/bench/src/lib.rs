//! Shared fixtures for the kernel benchmarks.

use apmeas_core::{Atom, Complex64, DensityPart, Measure, Window};

/// Unit Dirac comb realized on `(-r, r)`.
pub fn integer_comb(r: f64) -> Measure {
    let atoms: Vec<Atom> = (-(r as i64)..=(r as i64))
        .map(|k| Atom::new(k as f64, Complex64::new(1.0, 0.0)))
        .filter(|a| a.pos.abs() < r)
        .collect();
    Measure::from_atoms(atoms).with_truncation(Window::new(-r, r).unwrap())
}

/// A mixed measure with atoms and an oscillating density on `(-r, r)`.
pub fn mixed_measure(r: f64) -> Measure {
    let comb = integer_comb(r);
    let cells = (8.0 * 2.0 * r) as usize;
    let samples: Vec<Complex64> = (0..cells)
        .map(|i| {
            let x = -r + (i as f64 + 0.5) / 8.0;
            Complex64::new((2.0 * std::f64::consts::PI * x * 0.37).sin(), 0.0)
        })
        .collect();
    let d = DensityPart::new(-r, 1.0 / 8.0, samples).unwrap();
    let mut m = comb;
    m.ac = Some(d);
    m
}
