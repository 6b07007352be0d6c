//! Summary statistics and the two-sample significance test.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{BenchError, Result};

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Unbiased sample variance (divisor n - 1).
pub fn sample_variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some(ss / (values.len() - 1) as f64)
}

/// Two-sided Welch t-test p-value with Welch–Satterthwaite degrees of freedom.
///
/// When both samples have zero variance the test is undefined; equal means
/// give 1 and different means give 0.
pub fn welch_p_value(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(BenchError::Stats(format!(
            "Welch test needs at least two values per sample (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (ma, mb) = (mean(a).unwrap(), mean(b).unwrap());
    let (va, vb) = (sample_variance(a).unwrap(), sample_variance(b).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return Ok(if ma == mb { 1.0 } else { 0.0 });
    }
    let t = (ma - mb).abs() / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| BenchError::Stats(e.to_string()))?;
    Ok((2.0 * dist.sf(t)).min(1.0))
}
