//! Flag/config resolution: defaults, then a flat `key = value` config file,
//! then explicit command-line flags, strongest last.

use std::collections::BTreeMap;
use std::path::Path;

use eur_core::basis::{BasisSpec, Truncation};
use eur_core::entropy::GridSettings;
use eur_core::sweep::Method;

/// A usage-level error (reported on exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "alpha_min",
    "alpha_max",
    "alpha_step",
    "alphas",
    "k1",
    "k2",
    "basis",
    "scale_x",
    "scale_y",
    "truncation",
    "methods",
    "method",
    "state_n",
    "overlap_threshold",
    "grid_points",
    "half_width",
    "quad_order",
    "ft_order",
    "ft_points",
    "ft_pmax",
    "norm_tolerance",
    "out",
    "format",
];

/// Parses a flat `key = value` file (`#` comments, blank lines allowed).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            UsageError(format!(
                "config line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!(
                "config line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>, UsageError> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", p.display())))?;
            parse_config(&text)
        }
    }
}

fn get_parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, UsageError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| UsageError(format!("config key {key}: cannot parse {v:?}"))),
    }
}

/// Resolved physics/grid settings shared by the computing subcommands.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub k1: f64,
    pub k2: f64,
    pub n_max: usize,
    pub scale_x: f64,
    pub scale_y: f64,
    pub truncation: Truncation,
    pub grid_points: usize,
    pub half_width: Option<f64>,
    pub quad_order: usize,
    pub ft_order: usize,
    pub ft_points: usize,
    pub ft_pmax: f64,
    pub norm_tolerance: f64,
    pub overlap_threshold: f64,
}

/// Common flags every computing subcommand accepts. `None` means "not given
/// on the command line"; the config file and defaults fill the gaps.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// x-mode stiffness k1
    #[arg(long)]
    pub k1: Option<f64>,
    /// y-mode stiffness k2
    #[arg(long)]
    pub k2: Option<f64>,
    /// Basis truncation N_max (total quanta)
    #[arg(long)]
    pub basis: Option<usize>,
    /// Basis frequency along x (defaults to k1)
    #[arg(long)]
    pub scale_x: Option<f64>,
    /// Basis frequency along y (defaults to k2)
    #[arg(long)]
    pub scale_y: Option<f64>,
    /// Truncation rule: triangular | rectangular
    #[arg(long)]
    pub truncation: Option<String>,
    /// Entropy-grid points per axis
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Entropy-grid half width (auto-sized when absent)
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Quadrature order for closed-form integrals
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// Trapezoid order of the large-coupling Fourier integral
    #[arg(long)]
    pub ft_order: Option<usize>,
    /// Momentum-grid points per axis for Fourier-transformed states
    #[arg(long)]
    pub ft_points: Option<usize>,
    /// Momentum-grid half width for Fourier-transformed states
    #[arg(long)]
    pub ft_pmax: Option<f64>,
    /// Allowed Fourier-grid norm drift
    #[arg(long)]
    pub norm_tolerance: Option<f64>,
    /// Tracking overlap threshold
    #[arg(long)]
    pub overlap_threshold: Option<f64>,
    /// Flat key=value config file; flags override config
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<(Resolved, BTreeMap<String, String>), UsageError> {
        let cfg = load_config(self.config.as_deref())?;
        let k1 = self
            .k1
            .or(get_parsed(&cfg, "k1")?)
            .unwrap_or(1.0);
        let k2 = self
            .k2
            .or(get_parsed(&cfg, "k2")?)
            .unwrap_or(1.0);
        if !(k1 > 0.0) {
            return Err(UsageError(format!("--k1 must be positive, got {k1}")));
        }
        if !(k2 > 0.0) {
            return Err(UsageError(format!("--k2 must be positive, got {k2}")));
        }
        let truncation = match self
            .truncation
            .clone()
            .or(cfg.get("truncation").cloned())
            .as_deref()
        {
            None | Some("triangular") => Truncation::Triangular,
            Some("rectangular") => Truncation::Rectangular,
            Some(other) => {
                return Err(UsageError(format!(
                    "--truncation must be triangular or rectangular, got {other:?}"
                )))
            }
        };
        let r = Resolved {
            k1,
            k2,
            n_max: self.basis.or(get_parsed(&cfg, "basis")?).unwrap_or(40),
            scale_x: self.scale_x.or(get_parsed(&cfg, "scale_x")?).unwrap_or(k1),
            scale_y: self.scale_y.or(get_parsed(&cfg, "scale_y")?).unwrap_or(k2),
            truncation,
            grid_points: self
                .grid_points
                .or(get_parsed(&cfg, "grid_points")?)
                .unwrap_or(513),
            half_width: self.half_width.or(get_parsed(&cfg, "half_width")?),
            quad_order: self
                .quad_order
                .or(get_parsed(&cfg, "quad_order")?)
                .unwrap_or(64),
            ft_order: self.ft_order.or(get_parsed(&cfg, "ft_order")?).unwrap_or(512),
            ft_points: self
                .ft_points
                .or(get_parsed(&cfg, "ft_points")?)
                .unwrap_or(385),
            ft_pmax: self.ft_pmax.or(get_parsed(&cfg, "ft_pmax")?).unwrap_or(12.0),
            norm_tolerance: self
                .norm_tolerance
                .or(get_parsed(&cfg, "norm_tolerance")?)
                .unwrap_or(0.02),
            overlap_threshold: self
                .overlap_threshold
                .or(get_parsed(&cfg, "overlap_threshold")?)
                .unwrap_or(0.5),
        };
        if r.grid_points < 33 {
            return Err(UsageError("--grid-points must be at least 33".into()));
        }
        if !(r.scale_x > 0.0) || !(r.scale_y > 0.0) {
            return Err(UsageError("basis scales must be positive".into()));
        }
        Ok((r, cfg))
    }
}

impl Resolved {
    pub fn basis_spec(&self) -> Result<BasisSpec<f64>, UsageError> {
        BasisSpec::with_truncation(self.n_max, self.scale_x, self.scale_y, self.truncation)
            .map_err(|e| UsageError(e.to_string()))
    }

    pub fn grid_settings(&self) -> GridSettings<f64> {
        GridSettings {
            points: self.grid_points,
            half_width: self.half_width,
        }
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, UsageError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let m = Method::parse(part).ok_or_else(|| {
            UsageError(format!(
                "unknown method {part:?} (expected numeric, analytic-small, analytic-large, adiabatic-numeric-FT)"
            ))
        })?;
        out.push(m);
    }
    if out.is_empty() {
        return Err(UsageError("--methods selected no methods".into()));
    }
    Ok(out)
}

/// Builds the coupling grid from either an explicit list or min/max/step.
pub fn build_alpha_grid(
    alphas: Option<&str>,
    min: Option<f64>,
    max: Option<f64>,
    step: Option<f64>,
) -> Result<Vec<f64>, UsageError> {
    if let Some(list) = alphas {
        let mut out = Vec::new();
        for part in list.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            out.push(
                part.parse::<f64>()
                    .map_err(|_| UsageError(format!("bad alpha value {part:?}")))?,
            );
        }
        if out.is_empty() {
            return Err(UsageError("--alphas listed no values".into()));
        }
        return Ok(out);
    }
    let min = min.unwrap_or(0.0);
    let max = max.ok_or_else(|| UsageError("missing --alpha-max (or --alphas)".into()))?;
    let step = step.ok_or_else(|| UsageError("missing --alpha-step (or --alphas)".into()))?;
    if !(step > 0.0) {
        return Err(UsageError(format!("--alpha-step must be > 0, got {step}")));
    }
    if max < min {
        return Err(UsageError(format!(
            "--alpha-max {max} below --alpha-min {min}"
        )));
    }
    let n = ((max - min) / step).round() as usize;
    let mut out: Vec<f64> = (0..=n).map(|i| min + step * i as f64).collect();
    // clamp accumulated rounding at the top end
    if let Some(last) = out.last_mut() {
        if (*last - max).abs() < step * 1e-9 {
            *last = max;
        }
    }
    out.retain(|&a| a <= max + step * 1e-9);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parse_and_unknown_key() {
        let map = parse_config("k1 = 2.0\n# comment\nbasis = 30\n").unwrap();
        assert_eq!(map.get("k1").unwrap(), "2.0");
        assert!(parse_config("bogus = 1\n").is_err());
        assert!(parse_config("novalue\n").is_err());
    }

    #[test]
    fn alpha_grid_construction() {
        let g = build_alpha_grid(None, Some(0.0), Some(0.5), Some(0.05)).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 0.5).abs() < 1e-12);
        let g = build_alpha_grid(Some("30, 40,50"), None, None, None).unwrap();
        assert_eq!(g, vec![30.0, 40.0, 50.0]);
        assert!(build_alpha_grid(None, Some(0.0), Some(1.0), Some(0.0)).is_err());
        assert!(build_alpha_grid(None, Some(0.0), None, Some(0.1)).is_err());
    }

    #[test]
    fn method_list() {
        let ms = parse_methods("numeric,analytic-small").unwrap();
        assert_eq!(ms, vec![Method::Numeric, Method::AnalyticSmall]);
        assert!(parse_methods("nope").is_err());
    }
}
