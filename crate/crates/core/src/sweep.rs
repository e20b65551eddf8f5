//! Order-preserving data-parallel maps over index ranges.
//!
//! With the `parallel` feature (default) [`map_indexed`] runs on the rayon
//! pool; without it, it falls back to a plain loop. Results are always in
//! index order, so output is identical either way.

use std::f64::consts::TAU;

use crate::geometry::Angle;

pub fn map_sequential<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_parallel(len, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_sequential(len, f)
}

/// `θⱼ = 2πj/size + offset`, `j < size`.
pub fn uniform_grid(size: usize, offset: f64) -> Vec<Angle> {
    (0..size)
        .map(|j| Angle::new(TAU * j as f64 / size as f64 + offset))
        .collect()
}
