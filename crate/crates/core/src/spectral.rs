//! Hamiltonian assembly in the product basis, parity-block diagonalization,
//! ground-state extraction and overlap-continued tracking of labelled excited
//! states along a coupling path.

use crate::basis::{enumerate_block, BasisIndex, BasisSpec, Parity};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Mat, SymmetricEigen};
use crate::scalar::{cst, cst_usize, Real};

/// Couplings of the quartic-oscillator Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams<T> {
    pub k1: T,
    pub k2: T,
    pub alpha: T,
}

impl<T: Real> HamiltonianParams<T> {
    pub fn new(k1: T, k2: T, alpha: T) -> Result<Self> {
        if !(k1 > T::zero()) || !(k2 > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "stiffnesses must be positive, got k1={k1}, k2={k2}"
            )));
        }
        if !(alpha >= T::zero()) {
            return Err(Error::InvalidParams(format!(
                "coupling must be non-negative, got alpha={alpha}"
            )));
        }
        Ok(Self { k1, k2, alpha })
    }

    /// Basis with frequencies matched to the stiffnesses, so the uncoupled
    /// Hamiltonian is exactly diagonal.
    pub fn matched_basis(&self, n_max: usize) -> BasisSpec<T> {
        BasisSpec::new(n_max, self.k1, self.k2).expect("validated stiffnesses")
    }
}

/// Parity sector of the Hamiltonian under `x -> -x`, `y -> -y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityBlock {
    EvenEven,
    EvenOdd,
    OddEven,
    OddOdd,
}

impl ParityBlock {
    pub const ALL: [ParityBlock; 4] = [
        ParityBlock::EvenEven,
        ParityBlock::EvenOdd,
        ParityBlock::OddEven,
        ParityBlock::OddOdd,
    ];

    pub fn parities(self) -> (Parity, Parity) {
        match self {
            ParityBlock::EvenEven => (Parity::Even, Parity::Even),
            ParityBlock::EvenOdd => (Parity::Even, Parity::Odd),
            ParityBlock::OddEven => (Parity::Odd, Parity::Even),
            ParityBlock::OddOdd => (Parity::Odd, Parity::Odd),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ParityBlock::EvenEven => "ee",
            ParityBlock::EvenOdd => "eo",
            ParityBlock::OddEven => "oe",
            ParityBlock::OddOdd => "oo",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "ee" => Some(ParityBlock::EvenEven),
            "eo" => Some(ParityBlock::EvenOdd),
            "oe" => Some(ParityBlock::OddEven),
            "oo" => Some(ParityBlock::OddOdd),
            _ => None,
        }
    }
}

impl core::fmt::Display for ParityBlock {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// One assembled parity block of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct SymmetricBlock<T> {
    pub block: ParityBlock,
    pub indices: Vec<BasisIndex>,
    pub matrix: Mat<T>,
}

impl<T: Real> SymmetricBlock<T> {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Plain-text triplet dump `row col value` (row-major upper triangle
    /// included both ways, matching the dense storage).
    pub fn to_triplets(&self) -> String {
        let n = self.dim();
        let mut out = String::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)];
                if v != T::zero() {
                    out.push_str(&format!("{} {} {:e}\n", i, j, v));
                }
            }
        }
        out
    }
}

/// 1D matrix element `<n|x^2|m>` in a frequency-`scale` oscillator basis.
pub fn x_squared_element<T: Real>(n: usize, m: usize, scale: T) -> T {
    let two_s = cst::<T>(2.0) * scale;
    if n == m {
        cst_usize::<T>(2 * n + 1) / two_s
    } else {
        let (a, b) = (n.min(m), n.max(m));
        if b == a + 2 {
            (cst_usize::<T>(a + 1) * cst_usize::<T>(a + 2)).sqrt() / two_s
        } else {
            T::zero()
        }
    }
}

/// 1D matrix element `<n|p^2|m>` in a frequency-`scale` oscillator basis.
pub fn p_squared_element<T: Real>(n: usize, m: usize, scale: T) -> T {
    let half_s = scale / cst::<T>(2.0);
    if n == m {
        cst_usize::<T>(2 * n + 1) * half_s
    } else {
        let (a, b) = (n.min(m), n.max(m));
        if b == a + 2 {
            -(cst_usize::<T>(a + 1) * cst_usize::<T>(a + 2)).sqrt() * half_s
        } else {
            T::zero()
        }
    }
}

fn element<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
    a: BasisIndex,
    b: BasisIndex,
) -> T {
    let (nx, ny, mx, my) = (a.n_x, a.n_y, b.n_x, b.n_y);
    let dx = nx.abs_diff(mx);
    let dy = ny.abs_diff(my);
    if dx > 2 || dy > 2 || dx % 2 == 1 || dy % 2 == 1 {
        return T::zero();
    }
    let half = cst::<T>(0.5);
    let mut v = T::zero();
    if ny == my {
        v += half * p_squared_element(nx, mx, spec.scale_x)
            + half * params.k1 * params.k1 * x_squared_element(nx, mx, spec.scale_x);
    }
    if nx == mx {
        v += half * p_squared_element(ny, my, spec.scale_y)
            + half * params.k2 * params.k2 * x_squared_element(ny, my, spec.scale_y);
    }
    v += params.alpha
        * x_squared_element(nx, mx, spec.scale_x)
        * x_squared_element(ny, my, spec.scale_y);
    v
}

fn assemble_over<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
    indices: &[BasisIndex],
) -> Mat<T> {
    let n = indices.len();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = element(params, spec, indices[i], indices[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Assembles the four parity blocks of the Hamiltonian. Matrix elements come
/// from closed-form 1D ladder-operator elements and the product rule
/// `<nx ny|x^2 y^2|mx my> = <nx|x^2|mx><ny|y^2|my>`.
pub fn assemble_hamiltonian<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
) -> [SymmetricBlock<T>; 4] {
    ParityBlock::ALL.map(|block| {
        let (px, py) = block.parities();
        let indices = enumerate_block(spec, px, py);
        let matrix = assemble_over(params, spec, &indices);
        SymmetricBlock {
            block,
            indices,
            matrix,
        }
    })
}

/// Assembles the Hamiltonian over the whole basis without the parity split
/// (cross-check path for small truncations).
pub fn assemble_full<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
) -> (Vec<BasisIndex>, Mat<T>) {
    let mut indices = Vec::new();
    for block in ParityBlock::ALL {
        let (px, py) = block.parities();
        indices.extend(enumerate_block(spec, px, py));
    }
    let m = assemble_over(params, spec, &indices);
    (indices, m)
}

/// Eigenstate of one parity block: energy plus real coefficients over the
/// block's canonical index list. Coefficients are unit-norm with the
/// largest-magnitude entry positive.
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub energy: T,
    pub coefficients: Vec<T>,
    pub block: ParityBlock,
}

impl<T: Real> EigenPair<T> {
    fn from_column(energy: T, mut coefficients: Vec<T>, block: ParityBlock) -> Self {
        let mut imax = 0;
        for (i, c) in coefficients.iter().enumerate() {
            if c.abs() > coefficients[imax].abs() {
                imax = i;
            }
        }
        if coefficients[imax] < T::zero() {
            for c in &mut coefficients {
                *c = -*c;
            }
        }
        Self {
            energy,
            coefficients,
            block,
        }
    }
}

/// Full spectrum of one parity block, keeping the assembled matrix for
/// residual checks.
#[derive(Debug, Clone)]
pub struct BlockSpectrum<T> {
    pub block: ParityBlock,
    pub indices: Vec<BasisIndex>,
    pub matrix: Mat<T>,
    pub eigen: SymmetricEigen<T>,
}

impl<T: Real> BlockSpectrum<T> {
    pub fn state(&self, j: usize) -> EigenPair<T> {
        EigenPair::from_column(self.eigen.values[j], self.eigen.eigenvector(j), self.block)
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// `||H v - E v||_2 / ||H||_F` for the given state.
    pub fn relative_residual(&self, state: &EigenPair<T>) -> T {
        let hv = self.matrix.mul_vec(&state.coefficients);
        let r = hv
            .iter()
            .zip(&state.coefficients)
            .map(|(&a, &b)| {
                let d = a - state.energy * b;
                d * d
            })
            .sum::<T>()
            .sqrt();
        r / self.matrix.norm().max(T::min_positive_value())
    }
}

/// Diagonalizes one parity block.
pub fn block_spectrum<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
    block: ParityBlock,
) -> Result<BlockSpectrum<T>> {
    let (px, py) = block.parities();
    let indices = enumerate_block(spec, px, py);
    let matrix = assemble_over(params, spec, &indices);
    let eigen = symmetric_eigen(&matrix).map_err(|e| match e {
        Error::EigenNonConvergence { row, .. } => Error::EigenNonConvergence {
            block: block.label().into(),
            row,
        },
        other => other,
    })?;
    Ok(BlockSpectrum {
        block,
        indices,
        matrix,
        eigen,
    })
}

/// Ground state across all four parity blocks (it lies in the even-even
/// sector for this potential; all four are solved and compared).
pub fn ground_state<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
) -> Result<EigenPair<T>> {
    let mut best: Option<EigenPair<T>> = None;
    for block in ParityBlock::ALL {
        let sp = block_spectrum(params, spec, block)?;
        if sp.dim() == 0 {
            continue;
        }
        let cand = sp.state(0);
        let better = match &best {
            None => true,
            Some(b) => cand.energy < b.energy,
        };
        if better {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::InvalidParams("empty basis".into()))
}

/// Label of a tracked excited state: `n_x = n` quanta along x, zero along y,
/// starting at coupling `alpha0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel<T> {
    pub n: usize,
    pub alpha0: T,
}

/// An eigenstate followed along an increasing coupling grid by overlap
/// continuation within its parity block.
#[derive(Debug, Clone)]
pub struct TrackedPath<T> {
    pub label: StateLabel<T>,
    pub block: ParityBlock,
    pub indices: Vec<BasisIndex>,
    pub alphas: Vec<T>,
    pub states: Vec<EigenPair<T>>,
    /// `step_overlaps[i] = |<state_i | state_{i+1}>|`.
    pub step_overlaps: Vec<T>,
    /// Overlap of the initial state with the pure basis function `(n, 0)`.
    /// Less than one when the starting coupling leaves the label inside a
    /// degenerate multiplet.
    pub label_fidelity: T,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Resolves the initial eigenstate for the label. When the labelled basis
/// state sits in an exactly degenerate multiplet (as every `(n, 0)` state
/// does at `alpha = 0`), the eigensolver's basis of that subspace is
/// arbitrary; the adiabatically continued representative is obtained by
/// diagonalizing the coupling operator `x^2 y^2` within the multiplet
/// (first-order degenerate perturbation theory) and picking the eigenvector
/// with maximal weight on the labelled function.
fn initial_state<T: Real>(
    sp: &BlockSpectrum<T>,
    spec: &BasisSpec<T>,
    label_pos: usize,
) -> (EigenPair<T>, T) {
    let n = sp.dim();
    let mut target = vec![T::zero(); n];
    target[label_pos] = T::one();

    // state with the largest weight on the labelled basis function
    let mut best_j = 0;
    let mut best_ov = T::zero();
    for j in 0..n {
        let ov = dot(&sp.eigen.eigenvector(j), &target).abs();
        if ov > best_ov {
            best_ov = ov;
            best_j = j;
        }
    }

    let e0 = sp.eigen.values[best_j];
    let scale = T::one().max(e0.abs());
    let degeneracy_tol = cst::<T>(1e-9) * scale;
    let multiplet: Vec<usize> = (0..n)
        .filter(|&j| (sp.eigen.values[j] - e0).abs() <= degeneracy_tol)
        .collect();
    if multiplet.len() <= 1 {
        return (sp.state(best_j), best_ov);
    }

    // coupling operator restricted to the degenerate subspace, expressed in
    // the eigenvector basis of the multiplet
    let m = multiplet.len();
    let vecs: Vec<Vec<T>> = multiplet.iter().map(|&j| sp.eigen.eigenvector(j)).collect();
    let mut w = Mat::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let mut acc = T::zero();
            for (i, &ia) in sp.indices.iter().enumerate() {
                for (j, &jb) in sp.indices.iter().enumerate() {
                    let el = x_squared_element(ia.n_x, jb.n_x, spec.scale_x)
                        * x_squared_element(ia.n_y, jb.n_y, spec.scale_y);
                    if el != T::zero() {
                        acc += vecs[a][i] * el * vecs[b][j];
                    }
                }
            }
            w[(a, b)] = acc;
            w[(b, a)] = acc;
        }
    }
    let weig = symmetric_eigen(&w).expect("small multiplet matrix");

    let mut best_k = 0;
    let mut best_fid = T::zero();
    let mut best_state = vec![T::zero(); n];
    for k in 0..m {
        let rot = weig.eigenvector(k);
        let mut state = vec![T::zero(); n];
        for (a, v) in vecs.iter().enumerate() {
            for i in 0..n {
                state[i] += rot[a] * v[i];
            }
        }
        let fid = dot(&state, &target).abs();
        if fid > best_fid {
            best_fid = fid;
            best_k = k;
            best_state = state;
        }
    }
    let _ = best_k;
    (
        EigenPair::from_column(e0, best_state, sp.block),
        best_fid,
    )
}

/// Follows the eigenstate labelled `(n, 0; alpha0)` along the coupling grid,
/// selecting at each step the same-block eigenpair with maximal overlap
/// against the previous one. Fails fast with `LostTrack` when the best
/// overlap drops to the threshold.
pub fn track_state<T: Real>(
    label: StateLabel<T>,
    grid: &[T],
    spec: &BasisSpec<T>,
    params_template: &HamiltonianParams<T>,
    overlap_threshold: T,
) -> Result<TrackedPath<T>> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("empty tracking grid".into()));
    }
    if (grid[0] - label.alpha0).abs() > cst(1e-12) {
        return Err(Error::InvalidParams(format!(
            "grid must start at alpha0 = {}, got {}",
            label.alpha0, grid[0]
        )));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParams(
                "tracking grid must be strictly increasing".into(),
            ));
        }
    }
    let target = BasisIndex::new(label.n, 0);
    let block = ParityBlock::ALL
        .into_iter()
        .find(|b| {
            let (px, py) = b.parities();
            px.matches(target.n_x) && py.matches(target.n_y)
        })
        .expect("some block matches any parity pair");
    let (px, py) = block.parities();
    let indices = enumerate_block(spec, px, py);
    let label_pos = indices
        .iter()
        .position(|&i| i == target)
        .ok_or_else(|| Error::InvalidParams(format!("label ({}, 0) outside basis", label.n)))?;

    let mut params = *params_template;
    params.alpha = grid[0];
    let sp0 = block_spectrum(&params, spec, block)?;
    let (state0, fidelity) = initial_state(&sp0, spec, label_pos);
    if !(fidelity > overlap_threshold) {
        return Err(Error::LostTrack {
            step: 0,
            best_overlap: fidelity.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut states = vec![state0];
    let mut overlaps = Vec::new();
    for (step, &alpha) in grid.iter().enumerate().skip(1) {
        params.alpha = alpha;
        let sp = block_spectrum(&params, spec, block)?;
        let prev = &states[step - 1].coefficients;
        let mut best_j = 0;
        let mut best_ov = T::zero();
        for j in 0..sp.dim() {
            let ov = dot(&sp.eigen.eigenvector(j), prev).abs();
            if ov > best_ov {
                best_ov = ov;
                best_j = j;
            }
        }
        if !(best_ov > overlap_threshold) {
            return Err(Error::LostTrack {
                step,
                best_overlap: best_ov.to_f64().unwrap_or(f64::NAN),
            });
        }
        overlaps.push(best_ov);
        states.push(sp.state(best_j));
    }

    Ok(TrackedPath {
        label,
        block,
        indices,
        alphas: grid.to_vec(),
        states,
        step_overlaps: overlaps,
        label_fidelity: fidelity,
    })
}

/// Energy and position-entropy shifts between two truncations, for
/// convergence reporting.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceReport<T> {
    pub delta_e0: T,
    pub delta_s_q: T,
    pub e0_small: T,
    pub e0_large: T,
}

/// Compares ground-state energy and position entropy between two truncations
/// (`spec_larger.n_max` must exceed `spec.n_max`).
pub fn convergence_check<T: Real>(
    params: &HamiltonianParams<T>,
    spec: &BasisSpec<T>,
    spec_larger: &BasisSpec<T>,
) -> Result<ConvergenceReport<T>> {
    if spec_larger.n_max <= spec.n_max {
        return Err(Error::InvalidParams(
            "spec_larger must have a larger n_max".into(),
        ));
    }
    let small = ground_state(params, spec)?;
    let large = ground_state(params, spec_larger)?;
    let sq_small = crate::entropy::entropy_from_coefficients(
        &small,
        spec,
        crate::entropy::Space::Position,
        None,
    )?;
    let sq_large = crate::entropy::entropy_from_coefficients(
        &large,
        spec_larger,
        crate::entropy::Space::Position,
        None,
    )?;
    Ok(ConvergenceReport {
        delta_e0: (large.energy - small.energy).abs(),
        delta_s_q: (sq_large - sq_small).abs(),
        e0_small: small.energy,
        e0_large: large.energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(alpha: f64) -> HamiltonianParams<f64> {
        HamiltonianParams::new(1.0, 1.0, alpha).unwrap()
    }

    #[test]
    fn uncoupled_blocks_are_diagonal() {
        let p = params(0.0);
        let spec = p.matched_basis(8);
        for b in assemble_hamiltonian(&p, &spec) {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    let expect = if i == j {
                        b.indices[i].total() as f64 + 1.0
                    } else {
                        0.0
                    };
                    assert_abs_diff_eq!(b.matrix[(i, j)], expect, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn coupling_element_ground() {
        // <00|x^2 y^2|00> = 1/(4 k1 k2)
        let p = HamiltonianParams::new(2.0, 0.5, 1.0).unwrap();
        let spec = p.matched_basis(4);
        let blocks = assemble_hamiltonian(&p, &spec);
        let ee = &blocks[0];
        let h00 = ee.matrix[(0, 0)];
        // diagonal = k1/2 + k2/2 + alpha/(4 k1 k2)
        let expect = 1.0 + 0.25 + 1.0 / (4.0 * 2.0 * 0.5);
        assert_abs_diff_eq!(h00, expect, epsilon = 1e-14);
    }

    #[test]
    fn blocks_symmetric_bitwise() {
        let p = params(0.37);
        let spec = p.matched_basis(12);
        for b in assemble_hamiltonian(&p, &spec) {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    assert_eq!(b.matrix[(i, j)], b.matrix[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn uncoupled_ground_energy() {
        let p = params(0.0);
        let gs = ground_state(&p, &p.matched_basis(10)).unwrap();
        assert_abs_diff_eq!(gs.energy, 1.0, epsilon = 1e-10);
        assert_eq!(gs.block, ParityBlock::EvenEven);
        assert_abs_diff_eq!(gs.coefficients[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn small_alpha_energy_matches_adiabatic() {
        // E_ad = sqrt(1.05)/2 + 1/2 = 1.012348 within 1e-3
        let p = params(0.05);
        let gs = ground_state(&p, &p.matched_basis(30)).unwrap();
        assert!((gs.energy - 1.012_347_538_3).abs() < 1e-3);
        // cross-implementation oracle (independent dense solver)
        assert_abs_diff_eq!(gs.energy, 1.012_069_160_708, epsilon = 1e-8);
    }

    #[test]
    fn residual_small() {
        let p = params(0.2);
        let spec = p.matched_basis(40);
        let sp = block_spectrum(&p, &spec, ParityBlock::EvenEven).unwrap();
        let gs = sp.state(0);
        let res = sp.relative_residual(&gs);
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn parity_split_matches_full_assembly() {
        let p = params(0.3);
        let spec = p.matched_basis(10);
        let (_, full) = assemble_full(&p, &spec);
        let full_eig = symmetric_eigen(&full).unwrap();
        let gs = ground_state(&p, &spec).unwrap();
        assert_abs_diff_eq!(gs.energy, full_eig.values[0], epsilon = 1e-10);
    }

    #[test]
    fn variational_monotonicity_in_truncation() {
        let p = params(0.4);
        let mut last = f64::INFINITY;
        for n_max in [10usize, 16, 22, 28] {
            let e = ground_state(&p, &p.matched_basis(n_max)).unwrap().energy;
            assert!(e <= last + 1e-12, "E0 rose from {last} to {e} at {n_max}");
            last = e;
        }
    }

    #[test]
    fn hellmann_feynman_energy_increases_with_alpha() {
        for alpha in [0.05, 0.2] {
            let spec = params(alpha).matched_basis(30);
            let h = 5e-3;
            let ep = ground_state(&params(alpha + h), &spec).unwrap().energy;
            let em = ground_state(&params(alpha - h), &spec).unwrap().energy;
            assert!(ep > em, "dE0/dalpha <= 0 at {alpha}");
        }
    }

    #[test]
    fn eigenvector_gram_identity() {
        let p = params(0.2);
        let sp = block_spectrum(&p, &p.matched_basis(14), ParityBlock::EvenEven).unwrap();
        for a in 0..sp.dim() {
            let va = sp.eigen.eigenvector(a);
            for b in a..sp.dim() {
                let vb = sp.eigen.eigenvector(b);
                let g = dot(&va, &vb);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn convergence_uncoupled_exact() {
        let p = params(0.0);
        let rep = convergence_check(&p, &p.matched_basis(10), &p.matched_basis(16)).unwrap();
        assert_abs_diff_eq!(rep.delta_e0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn convergence_small_alpha() {
        let p = params(0.1);
        let rep = convergence_check(&p, &p.matched_basis(30), &p.matched_basis(40)).unwrap();
        assert!(rep.delta_e0 < 1e-8, "delta E0 = {}", rep.delta_e0);
        // cross-implementation oracle
        assert_abs_diff_eq!(rep.e0_large, 1.023_397_859_416, epsilon = 1e-8);
    }

    #[test]
    fn track_single_point_grid() {
        let p = params(0.0);
        let spec = p.matched_basis(20);
        let path = track_state(
            StateLabel { n: 4, alpha0: 0.0 },
            &[0.0],
            &spec,
            &p,
            0.5,
        )
        .unwrap();
        assert_eq!(path.states.len(), 1);
        assert_abs_diff_eq!(path.states[0].energy, 5.0, epsilon = 1e-10);
        assert!(path.step_overlaps.is_empty());
    }

    #[test]
    fn track_impossible_threshold_fails() {
        let p = params(0.0);
        let spec = p.matched_basis(20);
        let err = track_state(
            StateLabel { n: 4, alpha0: 0.0 },
            &[0.0, 0.01],
            &spec,
            &p,
            1.1,
        )
        .unwrap_err();
        match err {
            Error::LostTrack { step, .. } => assert!(step <= 1),
            other => panic!("expected LostTrack, got {other}"),
        }
    }

    #[test]
    fn track_low_excited_state_near_integrable() {
        let p = params(0.0);
        let spec = p.matched_basis(30);
        let grid: Vec<f64> = (0..=5).map(|i| 0.01 * i as f64).collect();
        let path = track_state(StateLabel { n: 6, alpha0: 0.0 }, &grid, &spec, &p, 0.5).unwrap();
        assert_eq!(path.states.len(), 6);
        for (i, ov) in path.step_overlaps.iter().enumerate() {
            assert!(*ov > 0.9, "overlap {ov} at step {}", i + 1);
        }
        // the (6,0) label sits in a 4-fold degenerate multiplet at alpha = 0;
        // the continued representative keeps only part of the pure weight
        assert!(path.label_fidelity > 0.5 && path.label_fidelity < 0.9);
        // energies stay near the unperturbed level
        for s in &path.states {
            assert!((s.energy - 7.0).abs() < 0.2);
        }
    }
}
