//! Degree distributions and their quantization to per-node degree lists.

use serde::{Deserialize, Serialize};

use super::ConstructionError;

/// Edge-perspective degree polynomial: the term `(c, e)` means a fraction `c`
/// of the edges attach to nodes of degree `e + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgePolynomial(pub Vec<(f64, u32)>);

impl EdgePolynomial {
    pub fn terms(&self) -> &[(f64, u32)] {
        &self.0
    }

    /// Σ c/d, the reciprocal of the average node degree.
    pub fn inverse_mean_degree(&self) -> f64 {
        self.0.iter().map(|&(c, e)| c / f64::from(e + 1)).sum()
    }

    /// (degree, node fraction) pairs.
    pub fn node_fractions(&self) -> Vec<(usize, f64)> {
        let total = self.inverse_mean_degree();
        self.0
            .iter()
            .map(|&(c, e)| ((e + 1) as usize, c / f64::from(e + 1) / total))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.0
            .iter()
            .map(|&(_, e)| e as usize + 1)
            .max()
            .unwrap_or(0)
    }

    fn validate(&self, side: &str) -> Result<(), ConstructionError> {
        if self.0.is_empty() {
            return Err(ConstructionError::InvalidDistribution(format!(
                "{side} polynomial is empty"
            )));
        }
        for &(c, e) in &self.0 {
            if !(c > 0.0 && c <= 1.0) {
                return Err(ConstructionError::InvalidDistribution(format!(
                    "{side} coefficient {c} outside (0, 1]"
                )));
            }
            if e == 0 {
                return Err(ConstructionError::InvalidDistribution(format!(
                    "{side} exponent must be positive"
                )));
            }
        }
        let mut exps: Vec<u32> = self.0.iter().map(|t| t.1).collect();
        exps.sort_unstable();
        if exps.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConstructionError::InvalidDistribution(format!(
                "{side} polynomial repeats an exponent"
            )));
        }
        let sum: f64 = self.0.iter().map(|t| t.0).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(ConstructionError::InvalidDistribution(format!(
                "{side} coefficients sum to {sum}, not 1"
            )));
        }
        Ok(())
    }

    /// Rescales the coefficients to sum to one.
    pub fn normalized(&self) -> Self {
        let sum: f64 = self.0.iter().map(|t| t.0).sum();
        Self(self.0.iter().map(|&(c, e)| (c / sum, e)).collect())
    }
}

/// Variable-side μ(x) and check-side ν(x), both edge perspective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    #[serde(rename = "mu")]
    pub variable: EdgePolynomial,
    #[serde(rename = "nu")]
    pub check: EdgePolynomial,
}

impl DegreeDistribution {
    pub fn new(variable: Vec<(f64, u32)>, check: Vec<(f64, u32)>) -> Self {
        Self {
            variable: EdgePolynomial(variable),
            check: EdgePolynomial(check),
        }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        self.variable.validate("variable")?;
        self.check.validate("check")
    }

    /// 1 − (Σν/d)/(Σμ/d).
    pub fn design_rate(&self) -> f64 {
        1.0 - self.check.inverse_mean_degree() / self.variable.inverse_mean_degree()
    }

    pub fn normalized(&self) -> Self {
        Self {
            variable: self.variable.normalized(),
            check: self.check.normalized(),
        }
    }

    /// Pairs `variable` with a check side concentrated on two consecutive
    /// degrees whose mean makes the design rate exactly (N − M)/N. With every
    /// variable degree at least 2 and N > M that mean always exceeds 2.
    pub fn with_concentrated_checks(
        variable: EdgePolynomial,
        n: usize,
        m: usize,
    ) -> Result<Self, ConstructionError> {
        variable.validate("variable")?;
        if !(n > m && m > 0) {
            return Err(ConstructionError::InvalidDimensions(format!(
                "need N > M > 0, got N = {n}, M = {m}"
            )));
        }
        let mean = n as f64 / (m as f64 * variable.inverse_mean_degree());
        let low = mean.floor();
        let high_fraction = mean - low;
        let mut check = vec![(low * (1.0 - high_fraction) / mean, low as u32 - 1)];
        if high_fraction > 0.0 {
            check.push(((low + 1.0) * high_fraction / mean, low as u32));
        }
        Ok(Self {
            variable,
            check: EdgePolynomial(check),
        })
    }
}

/// Per-node target degrees. Variable degrees are non-increasing with column
/// index, so the highest degrees sit in the leftmost (information) columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub variable: Vec<usize>,
    pub check: Vec<usize>,
}

impl DegreeProfile {
    pub fn edges(&self) -> usize {
        self.variable.iter().sum()
    }
}

fn round_counts(
    fractions: &[(usize, f64)],
    total: usize,
) -> Result<Vec<(usize, usize)>, ConstructionError> {
    let mut counts: Vec<(usize, i64)> = fractions
        .iter()
        .map(|&(d, f)| (d, (f * total as f64).round() as i64))
        .collect();
    let diff = total as i64 - counts.iter().map(|c| c.1).sum::<i64>();
    let lowest = counts
        .iter_mut()
        .min_by_key(|c| c.0)
        .expect("validated polynomial is nonempty");
    lowest.1 += diff;
    if lowest.1 < 0 {
        return Err(ConstructionError::Infeasible(format!(
            "cannot round degree classes to {total} nodes"
        )));
    }
    Ok(counts.into_iter().map(|(d, c)| (d, c as usize)).collect())
}

/// Turns a distribution into exact per-node degree lists for `n` variable and
/// `m` check nodes.
///
/// Node counts per class are rounded and the lowest-degree class absorbs the
/// rounding remainder. The variable side fixes the edge count E; the check
/// side is then moved onto E by changing individual check degrees by one
/// (raising the lowest first, or lowering the highest first).
pub fn quantize_degrees(
    dist: &DegreeDistribution,
    n: usize,
    m: usize,
) -> Result<DegreeProfile, ConstructionError> {
    dist.validate()?;
    if n == 0 || m == 0 {
        return Err(ConstructionError::InvalidDimensions(format!(
            "N = {n}, M = {m}"
        )));
    }
    let mut variable = Vec::with_capacity(n);
    for (d, count) in round_counts(&dist.variable.node_fractions(), n)? {
        variable.extend(std::iter::repeat_n(d, count));
    }
    variable.sort_unstable_by(|a, b| b.cmp(a));
    let edges: usize = variable.iter().sum();

    let mut check = Vec::with_capacity(m);
    for (d, count) in round_counts(&dist.check.node_fractions(), m)? {
        check.extend(std::iter::repeat_n(d, count));
    }
    check.sort_unstable();
    let check_edges: usize = check.iter().sum();
    let delta = edges as i64 - check_edges as i64;
    if delta.unsigned_abs() as usize > m {
        let dv_max = dist.variable.max_degree();
        return Err(ConstructionError::Infeasible(format!(
            "check side demands {check_edges} edges but the variable side supplies {edges} \
             (at most N·d_v_max = {}); the gap exceeds one edge per check",
            n * dv_max
        )));
    }
    if delta > 0 {
        for d in check.iter_mut().take(delta as usize) {
            *d += 1;
        }
    } else {
        for d in check.iter_mut().rev().take((-delta) as usize) {
            *d -= 1;
        }
    }
    check.sort_unstable_by(|a, b| b.cmp(a));

    if let Some(&d) = variable.first().filter(|&&d| d > m) {
        return Err(ConstructionError::Infeasible(format!(
            "variable degree {d} exceeds M = {m}"
        )));
    }
    if let Some(&d) = check.first().filter(|&&d| d > n) {
        return Err(ConstructionError::Infeasible(format!(
            "check degree {d} exceeds N = {n}"
        )));
    }
    if check.last() == Some(&0) {
        return Err(ConstructionError::Infeasible(
            "some check node would have degree 0".into(),
        ));
    }
    Ok(DegreeProfile { variable, check })
}
