//! Expected in-degree curves for both formation models.
//!
//! For the meritocracy model `P(m, i)` is the expected number of nodes that
//! link to `i` within their first `m` out-links; `P(M, i)` is the expected
//! in-degree of the node of quality rank `i`. The Matthew curve is a
//! mean-field approximation indexed by in-degree rank.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest node count the exhaustive oracle accepts.
pub const ORACLE_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("node count must be at least 2, got {0}")]
    NodeCount(usize),
    #[error("out-degree cap must be in 1..={max}, got {m_cap}")]
    OutDegreeCap { m_cap: usize, max: usize },
    #[error("exhaustive enumeration is limited to n <= {ORACLE_MAX_N}, got {0}")]
    TooLarge(usize),
    #[error("curves have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

fn validate(n: usize, m_cap: usize) -> Result<(), TheoryError> {
    if n < 2 {
        return Err(TheoryError::NodeCount(n));
    }
    if m_cap < 1 || m_cap > n - 1 {
        return Err(TheoryError::OutDegreeCap { m_cap, max: n - 1 });
    }
    Ok(())
}

/// Which formula produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    Recursion,
    Exact,
    MeritApprox,
    MatthewApprox,
    MatthewInitial,
    Oracle,
}

impl Formula {
    pub fn as_str(self) -> &'static str {
        match self {
            Formula::Recursion => "recursion",
            Formula::Exact => "exact",
            Formula::MeritApprox => "merit-approx",
            Formula::MatthewApprox => "matthew-approx",
            Formula::MatthewInitial => "matthew-initial",
            Formula::Oracle => "oracle",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Formula::Recursion => "P(m,i-1) = P(m,i) + P(m-1,i)/(i-1), P(1,i) = P(m,N) = 1",
            Formula::Exact => "sum_{k<M} e_k(1/i, ..., 1/(N-1))",
            Formula::MeritApprox => "sum_{m<M} log(N/i)^m / m!",
            Formula::MatthewApprox => "2(M+1)N^2 / ((N+i-1)(N+i)) - 1",
            Formula::MatthewInitial => "4N^2 / ((N+i-1)(N+i)) - 1",
            Formula::Oracle => "exhaustive enumeration of candidate orders",
        }
    }
}

/// Expected in-degree by rank; `values[0]` is rank 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub formula: Formula,
    pub n: usize,
    pub m_cap: usize,
    pub values: Vec<f64>,
}

impl CurveSpec {
    /// Value at 1-based rank `i`.
    pub fn at(&self, rank: usize) -> f64 {
        self.values[rank - 1]
    }

    /// CSV with a comment line naming the formula, then `rank,expected_indegree`.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# {} (n={}, m={}): {}\nrank,expected_indegree\n",
            self.formula.as_str(),
            self.n,
            self.m_cap,
            self.formula.describe()
        );
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", i + 1, v);
        }
        out
    }
}

/// The full `P(m, i)` table, `1 <= m <= M`, `1 <= i <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryTable {
    pub n: usize,
    pub m_cap: usize,
    p_table: Vec<Vec<f64>>,
}

impl TheoryTable {
    pub fn get(&self, m: usize, i: usize) -> f64 {
        self.p_table[m - 1][i - 1]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.p_table[m - 1]
    }

    /// Row `M`, the expected in-degree curve.
    pub fn expected_indegree(&self) -> CurveSpec {
        CurveSpec {
            formula: Formula::Recursion,
            n: self.n,
            m_cap: self.m_cap,
            values: self.row(self.m_cap).to_vec(),
        }
    }
}

pub fn recursion_table(n: usize, m_cap: usize) -> Result<TheoryTable, TheoryError> {
    validate(n, m_cap)?;
    let mut p_table = vec![vec![1.0; n]];
    for m in 2..=m_cap {
        let prev = &p_table[m - 2];
        let mut row = vec![0.0; n];
        row[n - 1] = 1.0;
        for i in (2..=n).rev() {
            row[i - 2] = row[i - 1] + prev[i - 1] / (i - 1) as f64;
        }
        p_table.push(row);
    }
    Ok(TheoryTable { n, m_cap, p_table })
}

/// Sum of the elementary symmetric polynomials `e_0..e_{M-1}` of
/// `1/i, ..., 1/(N-1)`, swept from `i = N-1` down to 1.
pub fn exact_expected_indegree(n: usize, m_cap: usize) -> Result<CurveSpec, TheoryError> {
    validate(n, m_cap)?;
    let mut esp = vec![0.0; m_cap];
    esp[0] = 1.0;
    let mut values = vec![0.0; n];
    values[n - 1] = 1.0;
    for i in (1..n).rev() {
        let x = 1.0 / i as f64;
        for k in (1..m_cap).rev() {
            esp[k] += esp[k - 1] * x;
        }
        values[i - 1] = esp.iter().sum();
    }
    Ok(CurveSpec { formula: Formula::Exact, n, m_cap, values })
}

pub fn merit_approx_curve(n: usize, m_cap: usize) -> Result<CurveSpec, TheoryError> {
    validate(n, m_cap)?;
    let values = (1..=n)
        .map(|i| {
            let x = (n as f64 / i as f64).ln();
            let mut term = 1.0;
            let mut sum = 1.0;
            for m in 1..m_cap {
                term *= x / m as f64;
                sum += term;
            }
            sum
        })
        .collect();
    Ok(CurveSpec { formula: Formula::MeritApprox, n, m_cap, values })
}

fn matthew_shape(n: usize, i: usize, coefficient: f64) -> f64 {
    let (nf, i) = (n as f64, i as f64);
    coefficient * nf * nf / ((nf + i - 1.0) * (nf + i)) - 1.0
}

pub fn matthew_approx_curve(n: usize, m_cap: usize) -> Result<CurveSpec, TheoryError> {
    validate(n, m_cap)?;
    let c = 2.0 * (m_cap as f64 + 1.0);
    let values = (1..=n).map(|i| matthew_shape(n, i, c)).collect();
    Ok(CurveSpec { formula: Formula::MatthewApprox, n, m_cap, values })
}

/// Expected in-degree of the rank-`i` node after the first `N` Matthew steps.
pub fn matthew_initial(n: usize, i: usize) -> f64 {
    matthew_shape(n, i, 4.0)
}

pub fn matthew_initial_curve(n: usize) -> CurveSpec {
    CurveSpec {
        formula: Formula::MatthewInitial,
        n,
        m_cap: 1,
        values: (1..=n).map(|i| matthew_initial(n, i)).collect(),
    }
}

/// Predicted in-degree density of the Matthew model, `((M+1)/2)(d+1)^{-3/2}`.
pub fn matthew_pdf_prediction(d: f64, m_cap: usize) -> f64 {
    (m_cap as f64 + 1.0) / 2.0 * (d + 1.0).powf(-1.5)
}

/// Lower bound on the probability that the meritocracy process has reached
/// equilibrium within `t` uniformly random steps.
pub fn convergence_lower_bound(n: usize, t: u64) -> f64 {
    assert!(n >= 2, "n must be at least 2");
    let ratio = (n as f64 - 2.0) / (n as f64 - 1.0);
    let miss = if t == 0 { 1.0 } else { ratio.powf(t as f64) };
    (1.0 - miss).clamp(0.0, 1.0).powf(n as f64)
}

/// Sign-change analysis between two curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub sign_changes: usize,
    /// Rank just after the last rank carrying the original sign, i.e. the
    /// first tied or reversed rank of the first crossing.
    pub crossing_rank: Option<usize>,
}

impl CrossingReport {
    pub fn is_single_crossing(&self) -> bool {
        self.sign_changes == 1
    }
}

pub fn single_crossing_index(a: &[f64], b: &[f64]) -> Result<CrossingReport, TheoryError> {
    if a.len() != b.len() {
        return Err(TheoryError::LengthMismatch(a.len(), b.len()));
    }
    let mut last_sign = 0i8;
    let mut last_signed_rank = 0;
    let mut sign_changes = 0;
    let mut crossing_rank = None;
    for (idx, (x, y)) in a.iter().zip(b).enumerate() {
        let sign = match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Greater) => 1,
            Some(std::cmp::Ordering::Less) => -1,
            _ => 0,
        };
        if sign == 0 {
            continue;
        }
        if last_sign != 0 && sign != last_sign {
            sign_changes += 1;
            crossing_rank.get_or_insert(last_signed_rank + 1);
        }
        last_sign = sign;
        last_signed_rank = idx + 1;
    }
    Ok(CrossingReport { sign_changes, crossing_rank })
}

/// Exact expected in-degrees of the meritocracy process by enumerating every
/// candidate order of every source node.
///
/// Sources are independent, so each one contributes its own link
/// frequencies. Counts are integers over `(n-1)!` orders, which keeps the
/// result exact up to the final division.
pub fn brute_force_oracle(n: usize, m_cap: usize) -> Result<CurveSpec, TheoryError> {
    validate(n, m_cap)?;
    if n > ORACLE_MAX_N {
        return Err(TheoryError::TooLarge(n));
    }
    let mut hits = vec![0u64; n];
    let mut orders = 0u64;
    for source in 0..n {
        let candidates: Vec<usize> = (0..n).filter(|&j| j != source).collect();
        let top = if source == 0 { 1 } else { 0 };
        orders = 0;
        for order in candidates.iter().copied().permutations(n - 1) {
            orders += 1;
            let mut best = usize::MAX;
            let mut links = 0;
            for j in order {
                if links == m_cap || best == top {
                    break;
                }
                if j < best {
                    hits[j] += 1;
                    best = j;
                    links += 1;
                }
            }
        }
    }
    let values = hits.iter().map(|&h| h as f64 / orders as f64).collect();
    Ok(CurveSpec { formula: Formula::Oracle, n, m_cap, values })
}
