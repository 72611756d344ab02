//! Exact scalars of the form `q · π^{p/2}` with `q` rational.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;

/// An exact value `coeff · π^{pi_half_power / 2}`.
///
/// Addition is only defined between equal grades (zero is compatible with
/// every grade); multiplication adds grades.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiGradedRational {
    coeff: BigRational,
    pi_half_power: i32,
}

impl PiGradedRational {
    pub fn new(coeff: BigRational, pi_half_power: i32) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Self { coeff, pi_half_power }
    }

    pub fn from_ratio(num: i64, den: i64, pi_half_power: i32) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            pi_half_power,
        )
    }

    pub fn integer(v: i64) -> Self {
        Self::from_ratio(v, 1, 0)
    }

    pub fn zero() -> Self {
        Self { coeff: BigRational::zero(), pi_half_power: 0 }
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `π^{p/2}` with unit coefficient.
    pub fn pi_power(pi_half_power: i32) -> Self {
        Self { coeff: BigRational::one(), pi_half_power }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Exact sum; fails if both summands are nonzero with different grades.
    pub fn try_add(&self, other: &Self) -> Result<Self, CoreError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(CoreError::GradeMismatch(self.pi_half_power, other.pi_half_power));
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.pi_half_power))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.try_add(&-other.clone())
    }

    /// Exact reciprocal; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.coeff.recip(), -self.pi_half_power))
        }
    }

    pub fn scale(&self, num: i64, den: i64) -> Self {
        Self::new(
            &self.coeff * BigRational::new(BigInt::from(num), BigInt::from(den)),
            self.pi_half_power,
        )
    }

    /// Conversion to `f64`: one rounding of the rational part and one of `π^{p/2}`.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let q = ratio_to_f64(&self.coeff);
        q * std::f64::consts::PI.powf(self.pi_half_power as f64 / 2.0)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerators: shift both sides down before dividing.
    let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    let shift = bits.max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

impl Mul for &PiGradedRational {
    type Output = PiGradedRational;
    fn mul(self, rhs: &PiGradedRational) -> PiGradedRational {
        PiGradedRational::new(&self.coeff * &rhs.coeff, self.pi_half_power + rhs.pi_half_power)
    }
}

impl Mul for PiGradedRational {
    type Output = PiGradedRational;
    fn mul(self, rhs: PiGradedRational) -> PiGradedRational {
        &self * &rhs
    }
}

impl Neg for PiGradedRational {
    type Output = PiGradedRational;
    fn neg(self) -> PiGradedRational {
        PiGradedRational::new(-self.coeff, self.pi_half_power)
    }
}

impl fmt::Display for PiGradedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sign = if self.coeff.is_negative() { "-" } else { "" };
        let c = self.coeff.abs();
        let p = self.pi_half_power;
        let pi = match p {
            0 => String::new(),
            2 => "·π".to_string(),
            _ if p % 2 == 0 => format!("·π^{}", p / 2),
            _ => format!("·π^({}/2)", p),
        };
        write!(f, "{sign}{c}{pi}")
    }
}
