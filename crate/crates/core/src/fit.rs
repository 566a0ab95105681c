//! Ordinary least-squares fits of sweep records (linear and quadratic in the
//! coupling, linear in its logarithm) and per-coupling method comparisons.

use crate::error::{Error, Result};
use crate::scalar::{cst, cst_usize, Real};
use crate::sweep::{EntropyRecord, Method};

/// Functional form of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    /// `a + b alpha`
    LinearAlpha,
    /// `a + b alpha + c alpha^2`
    QuadraticAlpha,
    /// `a + b ln alpha` (requires all alpha > 0)
    LinearLogAlpha,
}

impl FitKind {
    pub fn coefficient_count(self) -> usize {
        match self {
            FitKind::LinearAlpha | FitKind::LinearLogAlpha => 2,
            FitKind::QuadraticAlpha => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FitKind::LinearAlpha => "linear_alpha",
            FitKind::QuadraticAlpha => "quadratic_alpha",
            FitKind::LinearLogAlpha => "linear_logalpha",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "linear_alpha" | "linear" => Some(FitKind::LinearAlpha),
            "quadratic_alpha" | "quadratic" => Some(FitKind::QuadraticAlpha),
            "linear_logalpha" | "log" | "log-linear" => Some(FitKind::LinearLogAlpha),
            _ => None,
        }
    }

    fn design_row<T: Real>(self, alpha: T) -> Vec<T> {
        match self {
            FitKind::LinearAlpha => vec![T::one(), alpha],
            FitKind::QuadraticAlpha => vec![T::one(), alpha, alpha * alpha],
            FitKind::LinearLogAlpha => vec![T::one(), alpha.ln()],
        }
    }
}

/// Which record column a fit or comparison acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    SQ,
    SP,
    SSum,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::SQ => "S_q",
            Field::SP => "S_p",
            Field::SSum => "S_sum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "S_q" | "s_q" | "sq" => Some(Field::SQ),
            "S_p" | "s_p" | "sp" => Some(Field::SP),
            "S_sum" | "s_sum" | "sum" => Some(Field::SSum),
            _ => None,
        }
    }

    pub fn extract<T: Real>(self, r: &EntropyRecord<T>) -> T {
        match self {
            Field::SQ => r.s_q,
            Field::SP => r.s_p,
            Field::SSum => r.s_sum,
        }
    }
}

/// Coefficients and residual of one least-squares fit.
#[derive(Debug, Clone)]
pub struct FitModel<T> {
    pub kind: FitKind,
    pub field: Field,
    pub coefficients: Vec<T>,
    pub residual_rms: T,
    pub alpha_range: (T, T),
    pub n_points: usize,
}

impl<T: Real> FitModel<T> {
    pub fn intercept(&self) -> T {
        self.coefficients[0]
    }

    pub fn slope(&self) -> T {
        self.coefficients[1]
    }

    pub fn predict(&self, alpha: T) -> T {
        self.kind
            .design_row(alpha)
            .iter()
            .zip(&self.coefficients)
            .map(|(&x, &c)| x * c)
            .sum()
    }
}

/// Solves the small normal-equation system `A x = b` by Gaussian elimination
/// with partial pivoting. Reports `SingularFit` on rank deficiency.
fn solve_normal<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    let scale: T = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(T::zero(), |acc, &v| acc.max(v.abs()));
    let tiny = scale.max(T::one()) * cst(1e-13);
    for col in 0..n {
        let mut pivot = col;
        for row in (col + 1)..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() <= tiny {
            return Err(Error::SingularFit);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let delta = f * a[col][k];
                a[row][k] -= delta;
            }
            let delta = f * b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![T::zero(); n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Unweighted OLS of one record field against the chosen model. Records must
/// carry a single method tag.
pub fn fit<T: Real>(records: &[EntropyRecord<T>], field: Field, kind: FitKind) -> Result<FitModel<T>> {
    let mut methods: Vec<Method> = records.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();
    if methods.len() > 1 {
        return Err(Error::MixedMethods(methods.len()));
    }
    let needed = kind.coefficient_count() + 1;
    if records.len() < needed {
        return Err(Error::NotEnoughData {
            needed,
            got: records.len(),
        });
    }
    if kind == FitKind::LinearLogAlpha && records.iter().any(|r| !(r.alpha > T::zero())) {
        return Err(Error::InvalidParams(
            "log-linear fit requires all alpha > 0".into(),
        ));
    }

    let k = kind.coefficient_count();
    let mut ata = vec![vec![T::zero(); k]; k];
    let mut atb = vec![T::zero(); k];
    for r in records {
        let row = kind.design_row(r.alpha);
        let y = field.extract(r);
        for i in 0..k {
            for j in 0..k {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let coefficients = solve_normal(ata.clone(), atb.clone())?;

    // normal-equation residual must vanish to solver precision
    let mut ne_residual = T::zero();
    for i in 0..k {
        let mut acc = -atb[i];
        for j in 0..k {
            acc += ata[i][j] * coefficients[j];
        }
        ne_residual = ne_residual.max(acc.abs());
    }
    let scale = atb.iter().fold(T::one(), |m, &v| m.max(v.abs()));
    if ne_residual > cst::<T>(1e-10) * scale {
        return Err(Error::SingularFit);
    }

    let mut ss = T::zero();
    let mut lo = records[0].alpha;
    let mut hi = records[0].alpha;
    for r in records {
        lo = lo.min(r.alpha);
        hi = hi.max(r.alpha);
        let pred: T = kind
            .design_row(r.alpha)
            .iter()
            .zip(&coefficients)
            .map(|(&x, &c)| x * c)
            .sum();
        let d = field.extract(r) - pred;
        ss += d * d;
    }
    let rms = (ss / cst_usize(records.len())).sqrt();
    Ok(FitModel {
        kind,
        field,
        coefficients,
        residual_rms: rms,
        alpha_range: (lo, hi),
        n_points: records.len(),
    })
}

/// Signed per-coupling differences between two methods (`b - a`).
#[derive(Debug, Clone)]
pub struct ComparisonRow<T> {
    pub alpha: T,
    pub d_s_q: T,
    pub d_s_p: T,
    pub d_sum: T,
}

/// Comparison table between two method tags over their common couplings.
#[derive(Debug, Clone)]
pub struct MethodComparison<T> {
    pub method_a: Method,
    pub method_b: Method,
    pub rows: Vec<ComparisonRow<T>>,
    pub max_abs: (T, T, T),
    pub mean_abs: (T, T, T),
}

/// Compares two method tags at common couplings. When the records carry
/// exactly two distinct methods they are compared directly; with more, the
/// caller must filter first.
pub fn compare_methods<T: Real>(records: &[EntropyRecord<T>]) -> Result<MethodComparison<T>> {
    let mut methods: Vec<Method> = records.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();
    if methods.len() != 2 {
        return Err(Error::MixedMethods(methods.len()));
    }
    compare_methods_between(records, methods[0], methods[1])
}

/// Compares `method_a` against `method_b` (differences are `b - a`).
pub fn compare_methods_between<T: Real>(
    records: &[EntropyRecord<T>],
    method_a: Method,
    method_b: Method,
) -> Result<MethodComparison<T>> {
    let mut rows = Vec::new();
    for ra in records.iter().filter(|r| r.method == method_a) {
        if let Some(rb) = records
            .iter()
            .find(|r| r.method == method_b && r.alpha == ra.alpha)
        {
            rows.push(ComparisonRow {
                alpha: ra.alpha,
                d_s_q: rb.s_q - ra.s_q,
                d_s_p: rb.s_p - ra.s_p,
                d_sum: rb.s_sum - ra.s_sum,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::NoCommonAlphas);
    }
    let n = cst_usize::<T>(rows.len());
    let mut max = (T::zero(), T::zero(), T::zero());
    let mut mean = (T::zero(), T::zero(), T::zero());
    for r in &rows {
        max.0 = max.0.max(r.d_s_q.abs());
        max.1 = max.1.max(r.d_s_p.abs());
        max.2 = max.2.max(r.d_sum.abs());
        mean.0 += r.d_s_q.abs() / n;
        mean.1 += r.d_s_p.abs() / n;
        mean.2 += r.d_sum.abs() / n;
    }
    Ok(MethodComparison {
        method_a,
        method_b,
        rows,
        max_abs: max,
        mean_abs: mean,
    })
}
