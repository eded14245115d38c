//! Distribution functions used for p-values.

use std::f64::consts::SQRT_2;

use super::special::{erfc, reg_inc_beta, reg_inc_gamma_lower, reg_inc_gamma_upper};
use super::StatsError;

fn check_df(name: &'static str, df: f64) -> Result<(), StatsError> {
    if df.is_finite() && df > 0.0 {
        Ok(())
    } else {
        Err(StatsError::Domain(format!("{name} must be positive and finite, got {df}")))
    }
}

fn check_x(x: f64) -> Result<(), StatsError> {
    if x.is_nan() {
        Err(StatsError::Domain("argument is NaN".into()))
    } else {
        Ok(())
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail `P(Z > x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Student's t distribution function.
pub fn t_cdf(x: f64, df: f64) -> Result<f64, StatsError> {
    check_df("degrees of freedom", df)?;
    check_x(x)?;
    if x.is_infinite() {
        return Ok(if x > 0.0 { 1.0 } else { 0.0 });
    }
    let tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, df / (df + x * x));
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// Two-sided tail `P(|T| >= |x|)`.
pub fn t_two_sided(x: f64, df: f64) -> Result<f64, StatsError> {
    check_df("degrees of freedom", df)?;
    check_x(x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(reg_inc_beta(df / 2.0, 0.5, df / (df + x * x)).clamp(0.0, 1.0))
}

pub fn f_cdf(x: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_df("numerator degrees of freedom", d1)?;
    check_df("denominator degrees of freedom", d2)?;
    check_x(x)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(reg_inc_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))
}

/// Upper tail of the F distribution.
pub fn f_sf(x: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_df("numerator degrees of freedom", d1)?;
    check_df("denominator degrees of freedom", d2)?;
    check_x(x)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))
}

pub fn chisq_cdf(x: f64, df: f64) -> Result<f64, StatsError> {
    check_df("degrees of freedom", df)?;
    check_x(x)?;
    Ok(reg_inc_gamma_lower(df / 2.0, x.max(0.0) / 2.0))
}

/// Upper tail of the chi-square distribution.
pub fn chisq_sf(x: f64, df: f64) -> Result<f64, StatsError> {
    check_df("degrees of freedom", df)?;
    check_x(x)?;
    Ok(reg_inc_gamma_upper(df / 2.0, x.max(0.0) / 2.0))
}
