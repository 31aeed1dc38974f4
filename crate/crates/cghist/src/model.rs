//! Model parameters and the three-class decoherence matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Particle mass and the interval over which the history classes extend,
/// in units with hbar = 1. The derived parameter `lambda = mass / (2 T)`
/// grows as the interval shrinks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    mass: f64,
    interval: f64,
}

impl ModelParams {
    pub fn new(mass: f64, interval: f64) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "mass",
                value: mass,
            });
        }
        if !interval.is_finite() || interval <= 0.0 {
            return Err(Error::NonpositiveInput {
                name: "interval",
                value: interval,
            });
        }
        Ok(Self { mass, interval })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn interval(&self) -> f64 {
        self.interval
    }

    pub fn lambda(&self) -> f64 {
        self.mass / (2.0 * self.interval)
    }

    /// Same mass, different interval.
    pub fn with_interval(&self, interval: f64) -> Result<Self> {
        Self::new(self.mass, interval)
    }
}

/// The three non-empty classes of paths on `[0, T]`: staying right of the
/// origin the whole time, staying left the whole time, or crossing both
/// sides. The class of paths that visit neither side is empty and carries no
/// amplitude, so it is excluded by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HistoryClass {
    StayRight,
    StayLeft,
    CrossBoth,
}

impl HistoryClass {
    /// Fixed ordering used for matrix indexing and emitted tables.
    pub const ALL: [HistoryClass; 3] = [
        HistoryClass::StayRight,
        HistoryClass::StayLeft,
        HistoryClass::CrossBoth,
    ];

    pub fn index(self) -> usize {
        match self {
            HistoryClass::StayRight => 0,
            HistoryClass::StayLeft => 1,
            HistoryClass::CrossBoth => 2,
        }
    }

    /// Short code used in column names: bits record whether the path visits
    /// the left and right regions.
    pub fn code(self) -> &'static str {
        match self {
            HistoryClass::StayRight => "c01",
            HistoryClass::StayLeft => "c10",
            HistoryClass::CrossBoth => "c11",
        }
    }
}

/// 3x3 complex interference matrix indexed by [`HistoryClass`] in the order
/// (stay right, stay left, cross both). Hermitian by construction when built
/// from branch inner products.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoherenceMatrix {
    entries: [[Complex64; 3]; 3],
}

impl DecoherenceMatrix {
    pub fn zero() -> Self {
        Self {
            entries: [[Complex64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn from_fn(mut f: impl FnMut(HistoryClass, HistoryClass) -> Complex64) -> Self {
        let mut m = Self::zero();
        for a in HistoryClass::ALL {
            for b in HistoryClass::ALL {
                m.entries[a.index()][b.index()] = f(a, b);
            }
        }
        m
    }

    pub fn get(&self, row: HistoryClass, col: HistoryClass) -> Complex64 {
        self.entries[row.index()][col.index()]
    }

    pub fn set(&mut self, row: HistoryClass, col: HistoryClass, v: Complex64) {
        self.entries[row.index()][col.index()] = v;
    }

    /// Row-major raw entries.
    pub fn entries(&self) -> &[[Complex64; 3]; 3] {
        &self.entries
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [
            self.entries[0][0].re,
            self.entries[1][1].re,
            self.entries[2][2].re,
        ]
    }

    /// Sum of all nine entries; equals the state norm for a complete set of
    /// class amplitudes.
    pub fn total_sum(&self) -> Complex64 {
        self.entries
            .iter()
            .flat_map(|row| row.iter())
            .sum::<Complex64>()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                worst = worst.max((self.entries[a][b] - self.entries[b][a].conj()).norm());
            }
        }
        worst
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    worst = worst.max(self.entries[a][b].norm());
                }
            }
        }
        worst
    }
}
