//! Closed-form runtime bounds, population sizes and model curves.
//!
//! All values are in fitness evaluations unless noted otherwise.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::problems::{ceil_tolerant, floor_tolerant, p_star, region_start_for, Shape, TrapParams};

/// A named bound evaluated at concrete inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub formula: String,
    pub inputs: Vec<(String, f64)>,
    pub value: f64,
}

impl BoundReport {
    pub fn new(formula: impl Into<String>, inputs: &[(&str, f64)], value: f64) -> Self {
        Self {
            formula: formula.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
        }
    }

    /// Inputs as `name=value` pairs joined by `;`.
    pub fn params_field(&self) -> String {
        self.inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn at_least_one(name: &str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be at least 1")))
    }
}

/// `(mk)^k`, exact while it fits in a u128.
fn pow_mk_k(m: usize, k: usize) -> Result<f64> {
    let base = (m as u128)
        .checked_mul(k as u128)
        .ok_or(Error::Overflow("(mk)^k"))?;
    if let Some(v) = u32::try_from(k).ok().and_then(|k| base.checked_pow(k)) {
        return Ok(v as f64);
    }
    let v = (k as f64 * (base as f64).ln()).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("(mk)^k"))
    }
}

/// Multiplicative drift of the (1+1) EA with `s` non-optimal blocks when all
/// blocks sit at a local or global optimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EaDrift {
    /// `s (1/(mk))^k (1 - 1/(mk))^((m-s)k)`
    pub exact: f64,
    /// `(s/e) (mk)^-k`
    pub floor: f64,
}

pub fn ea_drift_lower_bound(s: usize, m: usize, k: usize) -> Result<EaDrift> {
    at_least_one("k", k)?;
    if s < 1 || s > m {
        return Err(Error::InvalidParams(format!(
            "need 1 <= s <= m, got s={s}, m={m}"
        )));
    }
    let n = (m * k) as f64;
    let ln_jump = -(k as f64) * n.ln();
    let keep_exp = ((m - s) * k) as f64;
    let ln_keep = if keep_exp == 0.0 {
        0.0
    } else {
        keep_exp * (-1.0 / n).ln_1p()
    };
    Ok(EaDrift {
        exact: s as f64 * (ln_jump + ln_keep).exp(),
        floor: s as f64 / E * ln_jump.exp(),
    })
}

/// `e (1 + ln m) (mk)^k`: expected (1+1) EA runtime bound at rate `1/(mk)`.
pub fn ea_upper_bound(m: usize, k: usize) -> Result<f64> {
    at_least_one("m", m)?;
    at_least_one("k", k)?;
    Ok(E * (1.0 + (m as f64).ln()) * pow_mk_k(m, k)?)
}

/// Natural log of [`ea_upper_bound`], finite for any `m, k`.
pub fn ea_upper_bound_ln(m: usize, k: usize) -> Result<f64> {
    at_least_one("m", m)?;
    at_least_one("k", k)?;
    Ok(1.0 + (1.0 + (m as f64).ln()).ln() + k as f64 * ((m * k) as f64).ln())
}

/// Population size `ceil(c m 2^k)`.
pub fn lemma1_population(m: usize, k: usize, c: f64) -> Result<usize> {
    at_least_one("m", m)?;
    positive("c", c)?;
    Ok(ceil_tolerant(c * m as f64 * 2f64.powi(k as i32)) as usize)
}

/// Probability bound `m e^(-cm)` (clamped to 1) that some block's optimum is
/// missing from a uniform population of size `c m 2^k`.
pub fn lemma1_failure(m: usize, c: f64) -> Result<f64> {
    at_least_one("m", m)?;
    positive("c", c)?;
    Ok((m as f64 * (-c * m as f64).exp()).min(1.0))
}

/// Logistic take-over curve `1/(1 + (mu+1) e^(-t/mu))` after `t` GOM steps.
/// With local mutation the rate is slowed by a factor `e`.
pub fn logistic_fraction(t: f64, mu: f64, with_mutation: bool) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParams(format!(
            "t must be nonnegative, got {t}"
        )));
    }
    if mu.is_nan() || mu < 1.0 {
        return Err(Error::InvalidParams(format!(
            "mu must be at least 1, got {mu}"
        )));
    }
    let scale = if with_mutation { E * mu } else { mu };
    Ok(1.0 / (1.0 + (mu + 1.0) * (-t / scale).exp()))
}

/// GOMEA bound `c m^3 2^k` for the standard trap with a truthful FOS.
pub fn gomea_bound(m: usize, k: usize, c: f64) -> Result<f64> {
    at_least_one("m", m)?;
    at_least_one("k", k)?;
    positive("c", c)?;
    Ok(c * (m as f64).powi(3) * 2f64.powi(k as i32))
}

/// Population size `ceil((c/p*) m)`.
pub fn lemma2_population(m: usize, p_star: f64, c: f64) -> Result<usize> {
    at_least_one("m", m)?;
    positive("c", c)?;
    if !(p_star > 0.0 && p_star <= 1.0) {
        return Err(Error::InvalidProbability(p_star));
    }
    Ok(ceil_tolerant(c / p_star * m as f64) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thm3Bound {
    /// Level climbing plus recombination.
    pub full: f64,
    /// Recombination term `(c/p*) m^3` alone.
    pub dominant: f64,
    /// `floor((b-a)(k-z)/b)`
    pub levels: usize,
    pub p_star: f64,
}

/// Runtime bound for GOMEA with local mutation (rate `1/k`) on a
/// generalized trap:
///
/// `L (m ln m) (e k (1 + c/p*) + (c e/p*) m ln m) + (c/p*) m^3`
///
/// with `L = floor((b-a)(k-z)/b)` levels.
pub fn thm3_bound(m: usize, params: &TrapParams, shape: Shape, c: f64) -> Result<Thm3Bound> {
    if m < 2 {
        return Err(Error::InvalidParams("m must be at least 2".into()));
    }
    positive("c", c)?;
    let ps = p_star(params, shape)?;
    let (a, b) = (params.a(), params.b());
    let (k, z) = (params.k() as f64, params.z() as f64);
    let levels = floor_tolerant((b - a) * (k - z) / b).max(0.0) as usize;
    let mf = m as f64;
    let m_ln_m = mf * mf.ln();
    let ratio = c / ps;
    let climb = levels as f64 * m_ln_m * (E * k * (1.0 + ratio) + ratio * E * m_ln_m);
    let dominant = ratio * mf.powi(3);
    Ok(Thm3Bound {
        full: climb + dominant,
        dominant,
        levels,
        p_star: ps,
    })
}

/// Progress of the best block along the slope inside the optimal region:
/// `max(0, best_u - region_start)`.
pub fn level(best_u: usize, params: &TrapParams, shape: Shape) -> Result<usize> {
    if best_u > params.k() {
        return Err(Error::UnitationOutOfRange {
            u: best_u,
            k: params.k(),
        });
    }
    Ok(best_u.saturating_sub(region_start_for(params, shape)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    fn gen6() -> TrapParams {
        TrapParams::new(6, 1.0, 6.0, 4).unwrap()
    }

    #[test]
    fn drift_examples() {
        let d = ea_drift_lower_bound(1, 2, 3).unwrap();
        // Oracle: plain products.
        let oracle = (1.0f64 / 6.0).powi(3) * (5.0f64 / 6.0).powi(3);
        assert!(close(d.exact, oracle, 1e-12));
        assert!(close(d.exact, 2.6791838134e-3, 1e-9));

        let d = ea_drift_lower_bound(4, 4, 3).unwrap();
        assert!(close(d.exact, 4.0 * 12f64.powi(-3), 1e-12));
        assert!(close(d.floor, 4.0 / E * 12f64.powi(-3), 1e-12));
        assert!(d.floor < d.exact);

        assert!(ea_drift_lower_bound(0, 2, 3).is_err());
        assert!(ea_drift_lower_bound(3, 2, 3).is_err());
        assert_eq!(ea_drift_lower_bound(1, 1, 1).unwrap().exact, 1.0);
    }

    #[test]
    fn drift_exact_dominates_floor() {
        for m in 1..=8 {
            for k in 1..=8 {
                for s in 1..=m {
                    let d = ea_drift_lower_bound(s, m, k).unwrap();
                    assert!(d.exact >= d.floor * (1.0 - 1e-12), "s={s} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn ea_bound_examples() {
        assert!(close(ea_upper_bound(1, 1).unwrap(), E, 1e-15));
        let v = ea_upper_bound(2, 3).unwrap();
        assert!(close(v, E * (1.0 + 2f64.ln()) * 216.0, 1e-14));
        assert!((v - 994.0).abs() < 0.5, "{v}");
        let v = ea_upper_bound(6, 4).unwrap();
        assert!(close(v, E * (1.0 + 6f64.ln()) * 331776.0, 1e-14));
        assert!(close(v, 2.514e6, 5e-3), "{v}");
        assert!(close(ea_upper_bound_ln(6, 4).unwrap().exp(), v, 1e-12));
        assert!(ea_upper_bound(0, 3).is_err());
        // (64*16)^16 = 2^160 still representable.
        assert!(close(
            ea_upper_bound(64, 16).unwrap(),
            E * (1.0 + 64f64.ln()) * 2f64.powi(160),
            1e-12
        ));
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_population(6, 4, 1.0).unwrap(), 96);
        assert!(close(
            lemma1_failure(6, 1.0).unwrap(),
            0.014872513059998,
            1e-12
        ));
        assert!(close(
            lemma1_failure(1, 1.0).unwrap(),
            0.36787944117144,
            1e-12
        ));
        assert!(lemma1_failure(6, 50.0).unwrap() < 1e-100);
        assert_eq!(lemma1_failure(10, 0.01).unwrap(), 1.0);
        assert!(lemma1_population(6, 4, 0.0).is_err());
    }

    #[test]
    fn logistic_examples() {
        assert!(close(
            logistic_fraction(0.0, 10.0, false).unwrap(),
            1.0 / 12.0,
            1e-15
        ));
        assert!(logistic_fraction(1e6, 10.0, false).unwrap() > 1.0 - 1e-12);
        // t = mu m with mu = c m 2^k
        let (c, m, k) = (1.0, 8.0, 4);
        let mu = c * m * 2f64.powi(k);
        let p = logistic_fraction(mu * m, mu, false).unwrap();
        assert!(close(p, 1.0 / (1.0 + (mu + 1.0) * (-m).exp()), 1e-12));
        let approx = 1.0 / (1.0 + mu * (-m).exp());
        assert!((p - approx).abs() < 1e-3);
        // t = e mu ln m with mu = (c/p*) m
        let (c, ps, m) = (1.0, 7.0 / 64.0, 8.0f64);
        let mu = c / ps * m;
        let p = logistic_fraction(E * mu * m.ln(), mu, true).unwrap();
        assert!(close(p, 1.0 / (1.0 + (mu + 1.0) / m), 1e-12));
        assert!((p - 1.0 / (1.0 + c / ps)).abs() < 0.02);
        assert!(logistic_fraction(-1.0, 10.0, false).is_err());
        assert!(logistic_fraction(1.0, 0.5, false).is_err());
    }

    #[test]
    fn logistic_strictly_increasing() {
        for &mu in &[1.0, 10.0, 250.0] {
            for &mutation in &[false, true] {
                let mut last = 0.0;
                for i in 0..2000 {
                    let p = logistic_fraction(i as f64 * 0.25, mu, mutation).unwrap();
                    assert!(p <= 1.0 && p >= last);
                    if p < 1.0 - 1e-9 {
                        assert!(p > last);
                    }
                    last = p;
                }
            }
        }
    }

    #[test]
    fn gomea_bound_examples() {
        assert_eq!(gomea_bound(6, 4, 1.0).unwrap(), 3456.0);
        assert_eq!(gomea_bound(8, 4, 1.0).unwrap(), 8192.0);
        assert!(gomea_bound(1, 0, 1.0).is_err());
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(lemma2_population(8, 7.0 / 64.0, 1.0).unwrap(), 74);
        assert_eq!(lemma2_population(8, 1.0, 3.0).unwrap(), 24);
        assert!(lemma2_population(8, 0.0, 1.0).is_err());
        for k in 1..=12 {
            for m in 1..=20 {
                for &c in &[0.5, 1.0, 1.5, 2.0, 3.0] {
                    let ps = p_star(&TrapParams::standard(k).unwrap(), Shape::Standard).unwrap();
                    assert_eq!(
                        lemma2_population(m, ps, c).unwrap(),
                        lemma1_population(m, k, c).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn thm3_example_against_direct_evaluation() {
        let b = thm3_bound(8, &gen6(), Shape::Generalized, 1.0).unwrap();
        // Independent evaluation of the closed form.
        let ps = 7.0 / 64.0;
        let m = 8.0f64;
        let mlnm = m * m.ln();
        let direct = 1.0 * mlnm * (E * 6.0 * (1.0 + 1.0 / ps) + (E / ps) * mlnm) + m.powi(3) / ps;
        assert_eq!(b.levels, 1);
        assert_eq!(b.p_star, ps);
        assert!(close(b.dominant, 4681.142857142857, 1e-12));
        assert!(close(b.full, direct, 1e-12));
        assert!(close(b.full, 14311.4, 1e-4), "{}", b.full);
    }

    #[test]
    fn thm3_no_levels_when_a_near_b() {
        let p = TrapParams::new(6, 5.9, 6.0, 4).unwrap();
        let b = thm3_bound(8, &p, Shape::Generalized, 1.0).unwrap();
        assert_eq!(b.levels, 0);
        assert_eq!(b.full, b.dominant);
        assert!(thm3_bound(1, &p, Shape::Generalized, 1.0).is_err());
    }

    #[test]
    fn level_examples() {
        let p = gen6();
        assert_eq!(level(5, &p, Shape::Generalized).unwrap(), 0);
        assert_eq!(level(6, &p, Shape::Generalized).unwrap(), 1);
        assert_eq!(level(2, &p, Shape::Generalized).unwrap(), 0);
        assert!(level(7, &p, Shape::Generalized).is_err());
    }

    #[test]
    fn bounds_monotone_in_m() {
        let p = gen6();
        let mut prev = (0.0, 0.0, 0.0, 0.0, 0usize, 0usize);
        for m in 2..=64 {
            let cur = (
                ea_upper_bound(m, 4).unwrap(),
                gomea_bound(m, 4, 1.0).unwrap(),
                thm3_bound(m, &p, Shape::Generalized, 1.0).unwrap().full,
                thm3_bound(m, &p, Shape::Generalized, 1.0).unwrap().dominant,
                lemma1_population(m, 4, 1.0).unwrap(),
                lemma2_population(m, 7.0 / 64.0, 1.0).unwrap(),
            );
            assert!(cur.0 > prev.0 && cur.1 > prev.1 && cur.2 > prev.2 && cur.3 > prev.3);
            assert!(cur.4 > prev.4 && cur.5 > prev.5);
            prev = cur;
        }
    }

    #[test]
    fn dominant_never_exceeds_full() {
        for k in 3..=8 {
            for z in 1..k {
                let p = TrapParams::new(k, 1.0, k as f64, z).unwrap();
                for m in 2..=16 {
                    let b = thm3_bound(m, &p, Shape::Generalized, 1.5).unwrap();
                    assert!(b.dominant <= b.full);
                }
            }
        }
    }

    #[test]
    fn k4_coincidence() {
        // k^2 = 2^k at k = 4
        assert_eq!(4f64.powi(2), 2f64.powi(4));
    }
}
