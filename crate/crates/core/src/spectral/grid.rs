use crate::{Error, Result};
use std::f64::consts::PI;

/// Uniform grid of `num_points` samples on `[0, 2π)`.
///
/// Coefficient vectors on this grid are stored in DFT order: wavenumbers
/// `0, 1, …, n/2-1, -n/2, …, -1`. The single unpaired mode `-n/2` is the
/// Nyquist mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    num_points: usize,
}

impl TorusGrid {
    pub fn new(num_points: usize) -> Result<Self> {
        if num_points < 4 || num_points % 2 != 0 {
            return Err(Error::Dimension(format!(
                "torus grid needs an even number of points >= 4, got {num_points}"
            )));
        }
        Ok(TorusGrid { num_points })
    }

    /// Smallest power-of-two grid whose wavenumber range contains `[-k_max, k_max]`.
    pub fn containing(k_max: usize) -> Self {
        let n = (2 * k_max + 2).next_power_of_two().max(4);
        TorusGrid { num_points: n }
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.num_points as f64
    }

    /// Largest `|k|` representable, i.e. the Nyquist wavenumber `n/2`.
    pub fn max_frequency(&self) -> i64 {
        (self.num_points / 2) as i64
    }

    pub fn nyquist_index(&self) -> usize {
        self.num_points / 2
    }

    /// Wavenumber stored at DFT index `idx`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.num_points;
        if idx < n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = self.max_frequency();
        if k >= half || k < -half {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.num_points as i64) as usize })
    }

    /// Wavenumbers in storage order.
    pub fn wavenumbers(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.num_points).map(move |i| self.wavenumber(i))
    }

    /// Wavenumbers in ascending order `-n/2 … n/2-1`.
    pub fn frequencies(&self) -> Vec<i64> {
        let half = self.max_frequency();
        (-half..half).collect()
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.num_points).map(|j| j as f64 * h).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_tiny_grids() {
        assert!(TorusGrid::new(2).is_err());
        assert!(TorusGrid::new(7).is_err());
        assert!(TorusGrid::new(8).is_ok());
    }

    #[test]
    fn frequency_list_is_symmetric_up_to_nyquist() {
        let g = TorusGrid::new(8).unwrap();
        assert_eq!(g.frequencies(), vec![-4, -3, -2, -1, 0, 1, 2, 3]);
        let mut stored: Vec<i64> = g.wavenumbers().collect();
        stored.sort();
        assert_eq!(stored, g.frequencies());
        assert_eq!(g.wavenumber(g.nyquist_index()), -4);
        for k in -3..=3 {
            assert!(g.index_of(k).is_some() && g.index_of(-k).is_some());
        }
        assert_eq!(g.index_of(4), None);
    }

    #[test]
    fn index_roundtrip() {
        let g = TorusGrid::new(16).unwrap();
        for i in 0..16 {
            assert_eq!(g.index_of(g.wavenumber(i)), Some(i));
        }
    }
}
