//! Coupling sweeps across computation methods, producing entropy records and
//! the CSV/JSON tables consumed by the fit and compare operations.

use crate::adiabatic::{
    adiabatic_ground_energy, momentum_gs_large_alpha, position_gs_large_alpha,
    solve_variational_b,
};
use crate::basis::BasisSpec;
use crate::entropy::{
    analytic_entropies_small_alpha, analytic_entropy_large_alpha, entropy_from_coefficients,
    shannon_entropy, DensityGrid, GridSettings, Space,
};
use crate::error::{Error, Result};
use crate::scalar::{bbm_bound_2d, cst, cst_usize, Real};
use crate::spectral::{ground_state, track_state, HamiltonianParams, StateLabel};
use serde::Serialize;

/// Computation methods a sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Basis-set diagonalization plus quadrature entropies.
    Numeric,
    /// Small-coupling closed forms (linear in the coupling).
    AnalyticSmall,
    /// Large-coupling closed-form position entropy plus the numerically
    /// Fourier-transformed momentum entropy of the adiabatic state.
    AnalyticLarge,
    /// Both entropies by quadrature from the large-coupling adiabatic state
    /// (position directly, momentum through the numeric Fourier transform).
    AdiabaticNumericFt,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Numeric,
        Method::AnalyticSmall,
        Method::AnalyticLarge,
        Method::AdiabaticNumericFt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::AnalyticSmall => "analytic-small",
            Method::AnalyticLarge => "analytic-large",
            Method::AdiabaticNumericFt => "adiabatic-numeric-FT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "numeric" => Some(Method::Numeric),
            "analytic-small" => Some(Method::AnalyticSmall),
            "analytic-large" => Some(Method::AnalyticLarge),
            "adiabatic-numeric-FT" | "adiabatic-numeric-ft" => Some(Method::AdiabaticNumericFt),
            _ => None,
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which state a sweep follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSelector<T> {
    Ground,
    /// Overlap-continued excited state labelled `(n, 0)` from the first grid
    /// point. Only meaningful for the numeric method.
    Tracked { n: usize, alpha0: T },
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig<T> {
    pub alphas: Vec<T>,
    pub k1: T,
    pub k2: T,
    pub basis: BasisSpec<T>,
    pub methods: Vec<Method>,
    pub state: StateSelector<T>,
    pub overlap_threshold: T,
    /// Entropy quadrature grids (numeric and adiabatic densities).
    pub grid: GridSettings<T>,
    /// Order for closed-form expectation integrals.
    pub quad_order: usize,
    /// Trapezoid order of the 1D Fourier integral (large-coupling momentum).
    pub ft_order: usize,
    /// Momentum-grid points per axis for the Fourier-transformed state.
    pub ft_points: usize,
    /// Momentum-grid half width for the Fourier-transformed state.
    pub ft_pmax: T,
    /// Allowed drift of the Fourier-grid norm from unity.
    pub norm_tolerance: T,
}

impl<T: Real> SweepConfig<T> {
    /// Ground-state sweep with library defaults.
    pub fn ground(alphas: Vec<T>, k1: T, k2: T, n_max: usize) -> Result<Self> {
        let basis = BasisSpec::new(n_max, k1, k2)?;
        Ok(Self {
            alphas,
            k1,
            k2,
            basis,
            methods: vec![Method::Numeric],
            state: StateSelector::Ground,
            overlap_threshold: cst(0.5),
            grid: GridSettings::default(),
            quad_order: 64,
            ft_order: 512,
            ft_points: 385,
            ft_pmax: cst(12.0),
            norm_tolerance: cst(0.02),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::InvalidConfig("alpha grid is empty".into()));
        }
        for w in self.alphas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidConfig(
                    "alpha grid must be strictly increasing".into(),
                ));
            }
        }
        if !(self.alphas[0] >= T::zero()) {
            return Err(Error::InvalidConfig("alpha must be non-negative".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods selected".into()));
        }
        if let StateSelector::Tracked { .. } = self.state {
            if self.methods != vec![Method::Numeric] {
                return Err(Error::InvalidConfig(
                    "tracked sweeps support only the numeric method".into(),
                ));
            }
        }
        let unit = self.k1 == T::one() && self.k2 == T::one();
        if self.methods.contains(&Method::AnalyticLarge) {
            if !unit {
                return Err(Error::InvalidConfig(
                    "analytic-large requires k1 = k2 = 1".into(),
                ));
            }
            if self.alphas.iter().any(|&a| a < T::one()) {
                return Err(Error::InvalidConfig(
                    "analytic-large requires alpha >= 1".into(),
                ));
            }
        }
        if self.methods.contains(&Method::AdiabaticNumericFt) && !unit {
            return Err(Error::InvalidConfig(
                "adiabatic-numeric-FT requires k1 = k2 = 1".into(),
            ));
        }
        Ok(())
    }

    fn params(&self, alpha: T) -> Result<HamiltonianParams<T>> {
        HamiltonianParams::new(self.k1, self.k2, alpha)
    }
}

/// One row of sweep output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRecord<T> {
    pub alpha: T,
    pub method: Method,
    pub s_q: T,
    pub s_p: T,
    pub s_sum: T,
    pub e0: T,
    pub bbm_margin: T,
    /// Continuation overlap for tracked records; 1 otherwise.
    pub overlap: T,
    pub converged: bool,
}

impl<T: Real> EntropyRecord<T> {
    pub fn new(alpha: T, method: Method, s_q: T, s_p: T, e0: T, overlap: T, converged: bool) -> Self {
        let s_sum = s_q + s_p;
        Self {
            alpha,
            method,
            s_q,
            s_p,
            s_sum,
            e0,
            bbm_margin: s_sum - bbm_bound_2d::<T>(),
            overlap,
            converged,
        }
    }
}

#[cfg(test)]
pub(crate) fn record_for_test(
    alpha: f64,
    method: Method,
    s_q: f64,
    s_p: f64,
    e0: f64,
) -> EntropyRecord<f64> {
    EntropyRecord::new(alpha, method, s_q, s_p, e0, 1.0, true)
}

/// Position entropy of the large-coupling adiabatic state by direct 2D
/// quadrature of its density.
fn large_alpha_position_entropy<T: Real>(alpha: T, cfg: &SweepConfig<T>) -> Result<T> {
    let st = position_gs_large_alpha::<T>(alpha, cfg.quad_order.max(96))?;
    let b = st.solution.b;
    let lx = (cst::<T>(44.0) / b).sqrt() + cst(0.3);
    let ly = cst::<T>(6.5);
    let n = cfg.grid.points.max(65);
    let xs: Vec<T> = (0..n)
        .map(|i| -lx + cst::<T>(2.0) * lx * cst_usize::<T>(i) / cst_usize::<T>(n - 1))
        .collect();
    let ys: Vec<T> = (0..n)
        .map(|i| -ly + cst::<T>(2.0) * ly * cst_usize::<T>(i) / cst_usize::<T>(n - 1))
        .collect();
    let mut values = Vec::with_capacity(n * n);
    for &x in &xs {
        for &y in &ys {
            let a = st.amplitude(x, y);
            values.push(a * a);
        }
    }
    shannon_entropy(&DensityGrid::new(xs, ys, values))
}

/// Momentum entropy of the large-coupling adiabatic state through the 1D
/// Fourier integral on a symmetric tensor grid.
fn large_alpha_momentum_entropy<T: Real>(alpha: T, cfg: &SweepConfig<T>) -> Result<T> {
    let n = cfg.ft_points.max(65);
    let pmax = cfg.ft_pmax;
    let grid: Vec<T> = (0..n)
        .map(|i| -pmax + cst::<T>(2.0) * pmax * cst_usize::<T>(i) / cst_usize::<T>(n - 1))
        .collect();
    let mg = momentum_gs_large_alpha(alpha, &grid, &grid, cfg.ft_order, cfg.norm_tolerance)?;
    let values: Vec<T> = mg.amplitudes.data().iter().map(|&a| a * a).collect();
    shannon_entropy(&DensityGrid::new(mg.px, mg.py, values))
}

fn record_for<T: Real>(
    alpha: T,
    method: Method,
    cfg: &SweepConfig<T>,
) -> Result<EntropyRecord<T>> {
    let params = cfg.params(alpha)?;
    match method {
        Method::Numeric => {
            let gs = ground_state(&params, &cfg.basis).map_err(|e| annotate(e, alpha))?;
            let s_q = entropy_from_coefficients(&gs, &cfg.basis, Space::Position, Some(&cfg.grid))?;
            let s_p = entropy_from_coefficients(&gs, &cfg.basis, Space::Momentum, Some(&cfg.grid))?;
            Ok(EntropyRecord::new(
                alpha,
                method,
                s_q,
                s_p,
                gs.energy,
                T::one(),
                true,
            ))
        }
        Method::AnalyticSmall => {
            let r = analytic_entropies_small_alpha(&params);
            Ok(EntropyRecord::new(
                alpha,
                method,
                r.s_q,
                r.s_p,
                adiabatic_ground_energy(&params),
                T::one(),
                true,
            ))
        }
        Method::AnalyticLarge => {
            let ent = analytic_entropy_large_alpha(alpha, cfg.quad_order.max(96))?;
            let s_p = large_alpha_momentum_entropy(alpha, cfg).map_err(|e| annotate(e, alpha))?;
            let sol = solve_variational_b(&params, cfg.quad_order.max(96))?;
            Ok(EntropyRecord::new(
                alpha,
                method,
                ent.s_q_simplified,
                s_p,
                sol.energy,
                T::one(),
                true,
            ))
        }
        Method::AdiabaticNumericFt => {
            let s_q = large_alpha_position_entropy(alpha, cfg).map_err(|e| annotate(e, alpha))?;
            let s_p = large_alpha_momentum_entropy(alpha, cfg).map_err(|e| annotate(e, alpha))?;
            let sol = solve_variational_b(&params, cfg.quad_order.max(96))?;
            Ok(EntropyRecord::new(
                alpha,
                method,
                s_q,
                s_p,
                sol.energy,
                T::one(),
                true,
            ))
        }
    }
}

fn annotate(e: Error, alpha: impl core::fmt::Display) -> Error {
    match e {
        Error::InvalidParams(msg) => Error::InvalidParams(format!("alpha = {alpha}: {msg}")),
        Error::InvalidConfig(msg) => Error::InvalidConfig(format!("alpha = {alpha}: {msg}")),
        other => other,
    }
}

/// Runs the sweep. Output is ordered by coupling, then by method in the
/// canonical order, and is deterministic for a given config.
pub fn run_sweep<T: Real>(cfg: &SweepConfig<T>) -> Result<Vec<EntropyRecord<T>>> {
    cfg.validate()?;
    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();

    if let StateSelector::Tracked { n, alpha0 } = cfg.state {
        let params = cfg.params(cfg.alphas[0])?;
        let path = track_state(
            StateLabel { n, alpha0 },
            &cfg.alphas,
            &cfg.basis,
            &params,
            cfg.overlap_threshold,
        )?;
        let mut out = Vec::with_capacity(path.states.len());
        for (i, state) in path.states.iter().enumerate() {
            let s_q =
                entropy_from_coefficients(state, &cfg.basis, Space::Position, Some(&cfg.grid))?;
            let s_p =
                entropy_from_coefficients(state, &cfg.basis, Space::Momentum, Some(&cfg.grid))?;
            let overlap = if i == 0 {
                path.label_fidelity
            } else {
                path.step_overlaps[i - 1]
            };
            out.push(EntropyRecord::new(
                path.alphas[i],
                Method::Numeric,
                s_q,
                s_p,
                state.energy,
                overlap,
                true,
            ));
        }
        return Ok(out);
    }

    let mut out = Vec::with_capacity(cfg.alphas.len() * methods.len());
    for &alpha in &cfg.alphas {
        for &m in &methods {
            out.push(record_for(alpha, m, cfg)?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// CSV / JSON schemas
// ---------------------------------------------------------------------------

/// Exact CSV header of the sweep table.
pub const CSV_HEADER: &str = "alpha,method,S_q,S_p,S_sum,E0,bbm_margin,overlap,converged";

/// Formats a float with 12 significant digits, fixed-point where compact and
/// scientific otherwise; round-trips through `f64::from_str`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    const DIGITS: i32 = 12;
    let exp = x.abs().log10().floor() as i32;
    if !(-5..DIGITS).contains(&exp) {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
        trim_scientific(&s)
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_fixed(&s)
    }
}

fn trim_fixed(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

fn trim_scientific(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let m = trim_fixed(mantissa);
            format!("{m}e{exp}")
        }
        None => s.to_string(),
    }
}

/// Serializes records to the CSV schema (12 significant digits).
pub fn to_csv<T: Real>(records: &[EntropyRecord<T>]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let f = |v: T| format_sig12(v.to_f64().expect("record values are finite"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            f(r.alpha),
            r.method,
            f(r.s_q),
            f(r.s_p),
            f(r.s_sum),
            f(r.e0),
            f(r.bbm_margin),
            f(r.overlap),
            r.converged
        ));
    }
    out
}

/// Parses the CSV schema back into records.
pub fn from_csv(text: &str) -> Result<Vec<EntropyRecord<f64>>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Parse(format!(
            "unexpected CSV header {header:?}, want {CSV_HEADER:?}"
        )));
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 9 {
            return Err(Error::Parse(format!(
                "line {}: expected 9 fields, got {}",
                lineno + 2,
                parts.len()
            )));
        }
        let fnum = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad {what} {s:?}", lineno + 2)))
        };
        let method = Method::parse(parts[1])
            .ok_or_else(|| Error::Parse(format!("line {}: unknown method {:?}", lineno + 2, parts[1])))?;
        let converged = match parts[8] {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Parse(format!(
                    "line {}: bad converged flag {other:?}",
                    lineno + 2
                )))
            }
        };
        let mut rec = EntropyRecord::new(
            fnum(parts[0], "alpha")?,
            method,
            fnum(parts[2], "S_q")?,
            fnum(parts[3], "S_p")?,
            fnum(parts[5], "E0")?,
            fnum(parts[7], "overlap")?,
            converged,
        );
        // preserve the file's printed sum/margin rather than recomputing
        rec.s_sum = fnum(parts[4], "S_sum")?;
        rec.bbm_margin = fnum(parts[6], "bbm_margin")?;
        out.push(rec);
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonRecord {
    alpha: f64,
    method: String,
    #[serde(rename = "S_q")]
    s_q: f64,
    #[serde(rename = "S_p")]
    s_p: f64,
    #[serde(rename = "S_sum")]
    s_sum: f64,
    #[serde(rename = "E0")]
    e0: f64,
    bbm_margin: f64,
    overlap: f64,
    converged: bool,
}

/// JSON mirror of the CSV table (identical field names).
pub fn to_json<T: Real>(records: &[EntropyRecord<T>]) -> String {
    let v: Vec<JsonRecord> = records
        .iter()
        .map(|r| {
            let f = |v: T| v.to_f64().expect("record values are finite");
            JsonRecord {
                alpha: f(r.alpha),
                method: r.method.to_string(),
                s_q: f(r.s_q),
                s_p: f(r.s_p),
                s_sum: f(r.s_sum),
                e0: f(r.e0),
                bbm_margin: f(r.bbm_margin),
                overlap: f(r.overlap),
                converged: r.converged,
            }
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&v).expect("records serialize");
    s.push('\n');
    s
}
