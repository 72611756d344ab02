//! Universal constants: ball volumes, the symbol-expansion coefficients and
//! the Γ-function identities that relate their two closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::pigraded::PiGradedRational;

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Γ(m/2)` for an integer `m` that is not a non-positive even number.
///
/// Integers give a rational value; half-integers a rational multiple of `√π`.
pub fn gamma_half(m: i64) -> Result<PiGradedRational, CoreError> {
    if m <= 0 && m % 2 == 0 {
        return Err(CoreError::GammaPole(m));
    }
    if m % 2 == 0 {
        let k = (m / 2 - 1) as u32;
        return Ok(PiGradedRational::new(rat(factorial(k), BigInt::one()), 0));
    }
    // Γ(1/2) = √π and Γ(x+1) = xΓ(x), walked up or down from 1/2.
    let mut value = BigRational::one();
    let mut x = 1i64; // current argument is x/2
    while x < m {
        value *= rat(BigInt::from(x), BigInt::from(2));
        x += 2;
    }
    while x > m {
        x -= 2;
        value /= rat(BigInt::from(x), BigInt::from(2));
    }
    Ok(PiGradedRational::new(value, 1))
}

/// Volume `π^{n/2}/Γ(n/2+1)` of the unit `n`-ball, for `n ≥ 0` or negative odd `n`.
pub fn omega(n: i64) -> Result<PiGradedRational, CoreError> {
    if n < 0 && n % 2 == 0 {
        return Err(CoreError::OmegaPole(n));
    }
    let g = gamma_half(n + 2)?;
    let num = PiGradedRational::pi_power(n as i32);
    Ok(&num * &g.recip().expect("Γ is nonzero"))
}

fn fact_pg(n: i64) -> PiGradedRational {
    PiGradedRational::new(rat(factorial(n as u32), BigInt::one()), 0)
}

fn pow2(e: i64) -> PiGradedRational {
    if e >= 0 {
        PiGradedRational::new(rat(BigInt::one() << e as usize, BigInt::one()), 0)
    } else {
        PiGradedRational::new(rat(BigInt::one(), BigInt::one() << (-e) as usize), 0)
    }
}

fn two_pi_pow_neg(e: i64) -> PiGradedRational {
    // (2π)^{-e}
    &pow2(-e) * &PiGradedRational::pi_power(-2 * e as i32)
}

/// The coefficient table for `𝔠_{k,n}` as printed with the full symbol.
pub fn frak_c(k: i64, n: i64) -> Result<PiGradedRational, CoreError> {
    if k < 1 || n < 1 {
        return Err(CoreError::Invalid(format!("frak_c needs k,n ≥ 1, got ({k},{n})")));
    }
    let d = 2 * k - n;
    if d < 0 {
        let v = &(&fact_pg(n - 2 * k) * &omega(n - 2 * k)?) * &omega(2 * k)?;
        Ok(v.scale(sign(k), 1))
    } else if d % 2 == 0 {
        let den = &fact_pg(d) * &omega(d)?;
        let v = &omega(2 * k)? * &den.recip().expect("nonzero");
        Ok(v.scale(sign(1 - n / 2), 1))
    } else {
        let v = &(&two_pi_pow_neg(d) * &omega(2 * k)?) * &omega(d - 1)?;
        Ok(v.scale(sign((n + 1) / 2), 1))
    }
}

/// How a rank-`k` term enters the symbol expansion in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolCoefficient {
    /// Multiplies `C^{(γ)}(x,-D_ξ)(R²+g(ξ,ξ))^{k-(n+1)/2}`.
    Power(PiGradedRational),
    /// Multiplies `C^{(γ)}(x,-D_ξ)[(R²+g(ξ,ξ))^{k-(n+1)/2} log(R²+g(ξ,ξ))]`.
    Log(PiGradedRational),
}

impl SymbolCoefficient {
    pub fn value(&self) -> &PiGradedRational {
        match self {
            SymbolCoefficient::Power(v) | SymbolCoefficient::Log(v) => v,
        }
    }
    pub fn is_log(&self) -> bool {
        matches!(self, SymbolCoefficient::Log(_))
    }
}

/// Coefficient of a rank-`k` term obtained directly from the Fourier
/// transform of `(η² + H(v,v))^{-k}` in `n+1` dimensions.
///
/// For `2k < n`, and for the logarithmic branch (up to the sign carried by
/// the bracket), this agrees with [`frak_c`]. For even `n` with `2k ≥ n` it
/// is `-frak_c(k,n)`.
pub fn symbol_coefficient(k: i64, n: i64) -> Result<SymbolCoefficient, CoreError> {
    if k < 1 || n < 1 {
        return Err(CoreError::Invalid(format!("symbol coefficient needs k,n ≥ 1, got ({k},{n})")));
    }
    if n % 2 == 1 && 2 * k >= n + 1 {
        let l = k - (n + 1) / 2;
        let den = &(&fact_pg(l) * &fact_pg(k)) * &pow2(2 * k - n);
        let v = &PiGradedRational::pi_power((n - 1) as i32) * &den.recip().expect("nonzero");
        return Ok(SymbolCoefficient::Log(v.scale(-sign((n + 1) / 2), 1)));
    }
    let g = gamma_half(n + 1 - 2 * k)?;
    let v = &(&(&PiGradedRational::pi_power((n - 1) as i32) * &pow2(n - 2 * k)) * &g)
        * &fact_pg(k).recip().expect("nonzero");
    Ok(SymbolCoefficient::Power(v.scale(sign(k), 1)))
}

/// Pochhammer k-symbol `x(x+k)(x+2k)⋯` with `n_terms` factors.
///
/// `(x)_{0,k} = 1`, and by convention `(0)_{n,k} = 1`.
pub fn pochhammer_k(x: &BigRational, n_terms: u32, step: i64) -> BigRational {
    if n_terms == 0 || x.is_zero() {
        return BigRational::one();
    }
    let step = BigRational::from_integer(BigInt::from(step));
    let mut acc = BigRational::one();
    let mut cur = x.clone();
    for _ in 0..n_terms {
        acc *= &cur;
        cur += &step;
    }
    acc
}

fn eq(a: &PiGradedRational, b: &PiGradedRational) -> bool {
    a.try_sub(b).map(|d| d.is_zero()).unwrap_or(false)
}

/// Checks, exactly, every Γ/ω identity relating the two closed forms of the
/// symbol coefficients that applies to `(n, k)`.
///
/// Returns `false` if no identity applies.
pub fn gamma_identity_check(n: i64, k: i64) -> bool {
    gamma_identity_check_inner(n, k).unwrap_or(false)
}

fn gamma_identity_check_inner(n: i64, k: i64) -> Result<bool, CoreError> {
    if n < 1 || k < 1 {
        return Ok(false);
    }
    let mut applied = false;
    if n > 2 * k + 1 {
        applied = true;
        let lhs = &gamma_half(n + 1 - 2 * k)? * &gamma_half(n - 2 * k + 2)?;
        let rhs = &PiGradedRational::pi_power(1)
            * &(&fact_pg(n - 2 * k) * &pow2(-(n - 2 * k)));
        if !eq(&lhs, &rhs) {
            return Ok(false);
        }
    }
    let log_branch = n % 2 == 1 && 2 * k > n;
    if !log_branch {
        // (-1)^{k+1}/k! π^{(n-1)/2} 2^{n-2k} Γ((n+1)/2 - k)
        let lhs = (&(&(&PiGradedRational::pi_power((n - 1) as i32) * &pow2(n - 2 * k))
            * &gamma_half(n + 1 - 2 * k)?)
            * &fact_pg(k).recip().expect("nonzero"))
            .scale(sign(k + 1), 1);
        if 2 * k < n {
            applied = true;
            let rhs = (&(&fact_pg(n - 2 * k) * &omega(n - 2 * k)?) * &omega(2 * k)?)
                .scale(sign(k + 1), 1);
            if !eq(&lhs, &rhs) {
                return Ok(false);
            }
        } else if n % 2 == 0 {
            applied = true;
            let d = 2 * k - n;
            let r1 = (&omega(2 * k)? * &(&fact_pg(d) * &omega(d)?).recip().expect("nonzero"))
                .scale(sign(n / 2 + 1), 1);
            let r2 = (&(&two_pi_pow_neg(d) * &omega(d + 1)?) * &omega(2 * k)?)
                .scale(sign(n / 2 + 1) * (d + 1), 2);
            if !eq(&lhs, &r1) || !eq(&r1, &r2) {
                return Ok(false);
            }
        }
    } else {
        applied = true;
        let d = 2 * k - n;
        let l = k - (n + 1) / 2;
        let lhs = (&PiGradedRational::pi_power((n - 1) as i32)
            * &(&(&pow2(d) * &fact_pg(l)) * &fact_pg(k)).recip().expect("nonzero"))
            .scale(sign((n + 1) / 2), 1);
        let rhs = (&(&two_pi_pow_neg(d) * &omega(2 * k)?) * &omega(d - 1)?)
            .scale(sign((n + 1) / 2), 1);
        if !eq(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(applied)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * (1.0 + b.abs())
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(2).unwrap(), PiGradedRational::pi_power(2));
        assert_eq!(omega(0).unwrap(), PiGradedRational::one());
        assert_eq!(omega(1).unwrap(), PiGradedRational::integer(2));
        assert!(approx(omega(3).unwrap().to_f64(), 4.0 * std::f64::consts::PI / 3.0));
        assert!(omega(-2).is_err());
        // ω_{-1} = π^{-1/2}/Γ(1/2) = 1/π
        assert!(approx(omega(-1).unwrap().to_f64(), 1.0 / std::f64::consts::PI));
    }

    #[test]
    fn frak_c_examples() {
        assert_eq!(frak_c(1, 1).unwrap(), PiGradedRational::from_ratio(-1, 2, 0));
        assert_eq!(frak_c(1, 3).unwrap(), PiGradedRational::from_ratio(-2, 1, 2));
        assert_eq!(frak_c(2, 4).unwrap(), PiGradedRational::from_ratio(-1, 2, 4));
    }

    #[test]
    fn symbol_coefficient_relation_to_table() {
        for n in 1..=9 {
            for k in 1..=6 {
                let table = frak_c(k, n).unwrap();
                match symbol_coefficient(k, n).unwrap() {
                    SymbolCoefficient::Log(v) => assert_eq!(v, -table),
                    SymbolCoefficient::Power(v) => {
                        if n % 2 == 0 && 2 * k >= n {
                            assert_eq!(v, -table, "n={n} k={k}");
                        } else {
                            assert_eq!(v, table, "n={n} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_identity_examples() {
        assert!(gamma_identity_check(5, 1));
        assert!(gamma_identity_check(4, 2));
        assert!(gamma_identity_check(3, 2));
    }

    #[test]
    fn pochhammer_examples() {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(pochhammer_k(&r(5), 0, -2), r(1));
        assert_eq!(pochhammer_k(&r(0), 3, -2), r(1));
        assert_eq!(pochhammer_k(&r(7), 3, -2), r(105));
    }
}
