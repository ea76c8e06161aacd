//! Anyonic quantisation of relative angular momentum (plane) and momentum
//! spacing (line).

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Number type for allowed quantum numbers: exact rationals or floats.
pub trait Quantum:
    Copy + PartialOrd + Debug + Display + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_int(x: i64) -> Self;
    fn half() -> Self;
    fn abs_value(self) -> Self;
    fn ceil_value(self) -> Self;
    /// Integer test; floats allow an absolute slack of `1e-9`.
    fn is_integral(self) -> bool;
    fn to_f64(self) -> f64;
}

impl Quantum for Ratio<i64> {
    fn from_int(x: i64) -> Self {
        Ratio::from_integer(x)
    }
    fn half() -> Self {
        Ratio::new(1, 2)
    }
    fn abs_value(self) -> Self {
        self.abs()
    }
    fn ceil_value(self) -> Self {
        self.ceil()
    }
    fn is_integral(self) -> bool {
        self.is_integer()
    }
    fn to_f64(self) -> f64 {
        super::ratio_to_f64(self)
    }
}

const FLOAT_SLACK: f64 = 1e-9;

impl Quantum for f64 {
    fn from_int(x: i64) -> Self {
        x as f64
    }
    fn half() -> Self {
        0.5
    }
    fn abs_value(self) -> Self {
        self.abs()
    }
    fn ceil_value(self) -> Self {
        let r = self.round();
        if (self - r).abs() <= FLOAT_SLACK {
            r
        } else {
            self.ceil()
        }
    }
    fn is_integral(self) -> bool {
        (self - self.round()).abs() <= FLOAT_SLACK
    }
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuantizationKind {
    /// `l_z/ħ = -θ/π + 2m`, `m ∈ ℤ`.
    RelativeAngularMomentum2D,
    /// `Δp·L/(2πħ) = |θ|/π + n`, `n ≥ 0`, on a line of length `length`.
    MomentumSpacing1D { length: f64 },
}

/// Allowed values for a statistical parameter `θ`, stored as `θ/π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantizationRule<V> {
    theta_over_pi: V,
    kind: QuantizationKind,
}

impl<V: Quantum> QuantizationRule<V> {
    /// `theta_over_pi` must lie in `(-1, 1]`.
    pub fn new(theta_over_pi: V, kind: QuantizationKind) -> Result<Self> {
        if !(theta_over_pi > -V::from_int(1) && theta_over_pi <= V::from_int(1)) {
            return Err(Error::invalid(format!(
                "theta/pi must lie in (-1, 1], got {theta_over_pi}"
            )));
        }
        if let QuantizationKind::MomentumSpacing1D { length } = kind {
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::invalid(format!("length must be positive, got {length}")));
            }
        }
        Ok(Self { theta_over_pi, kind })
    }

    pub fn theta_over_pi(&self) -> V {
        self.theta_over_pi
    }

    pub fn kind(&self) -> QuantizationKind {
        self.kind
    }

    /// Membership of a dimensionless value (`l_z/ħ` or `Δp·L/2πħ`).
    pub fn allows(&self, x: V) -> bool {
        let t = self.theta_over_pi;
        match self.kind {
            QuantizationKind::RelativeAngularMomentum2D => ((x + t) * V::half()).is_integral(),
            QuantizationKind::MomentumSpacing1D { .. } => {
                let n = x - t.abs_value();
                n.is_integral() && (n.ceil_value() >= V::from_int(0))
            }
        }
    }

    /// The `k` smallest non-negative allowed dimensionless values.
    pub fn first_allowed(&self, k: usize) -> Vec<V> {
        let t = self.theta_over_pi;
        match self.kind {
            QuantizationKind::RelativeAngularMomentum2D => {
                let m0 = (t * V::half()).ceil_value();
                (0..k as i64)
                    .map(|j| -t + V::from_int(2) * (m0 + V::from_int(j)))
                    .collect()
            }
            QuantizationKind::MomentumSpacing1D { .. } => {
                (0..k as i64).map(|j| t.abs_value() + V::from_int(j)).collect()
            }
        }
    }

    /// Physical value (`l_z` or `Δp`, `ħ = 1`) of a dimensionless one.
    pub fn physical(&self, x: V) -> f64 {
        match self.kind {
            QuantizationKind::RelativeAngularMomentum2D => x.to_f64(),
            QuantizationKind::MomentumSpacing1D { length } => std::f64::consts::TAU * x.to_f64() / length,
        }
    }
}

impl QuantizationRule<f64> {
    pub fn from_radians(theta: f64, kind: QuantizationKind) -> Result<Self> {
        Self::new(theta / std::f64::consts::PI, kind)
    }
}
