//! n-mode Gaussian states in the real quadrature convention and their
//! evolution under phase shifts, two-mode squeezers, beam splitters, and
//! loss channels.
//!
//! The real form orders quadratures as (x1, p1, ..., xn, pn) with hbar = 1,
//! so the vacuum has d = 0 and sigma = I/2. The complex form orders ladder
//! operators as (a1, ..., an, a1^dag, ..., an^dag); the vacuum covariance is
//! the identity there.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Structural tolerance: symmetry / Hermiticity / conjugate-pair checks.
pub const STRUCT_TOL: f64 = 1e-12;
/// Symplectic-identity tolerance for constructed operations.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Spectral tolerance: uncertainty relation and symplectic-eigenvalue floor.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Real-form Gaussian state: displacement vector and covariance matrix in
/// (x1, p1, ..., xn, pn) ordering.
#[derive(Debug, Clone)]
pub struct GaussianState {
    n_modes: usize,
    d: Array1<f64>,
    sigma: Array2<f64>,
}

impl GaussianState {
    /// Builds a state from raw moments, enforcing symmetry of `sigma`.
    pub fn new(d: Array1<f64>, sigma: Array2<f64>) -> Result<Self> {
        if d.len() == 0 || d.len() % 2 != 0 {
            return Err(Error::EmptyState);
        }
        let n2 = d.len();
        assert_eq!(sigma.shape(), [n2, n2], "covariance shape mismatch");
        let mut asym: f64 = 0.0;
        for i in 0..n2 {
            for j in 0..i {
                asym = asym.max((sigma[[i, j]] - sigma[[j, i]]).abs());
            }
        }
        if asym > STRUCT_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self {
            n_modes: n2 / 2,
            d,
            sigma: symmetrize(&sigma),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn displacement(&self) -> &Array1<f64> {
        &self.d
    }

    pub fn covariance(&self) -> &Array2<f64> {
        &self.sigma
    }

    /// Smallest eigenvalue of sigma + (i/2) Omega; non-negative (within
    /// `SPECTRAL_TOL`) for every physical state.
    pub fn uncertainty_defect(&self) -> Result<f64> {
        let n2 = 2 * self.n_modes;
        let mut m = Array2::<Complex64>::zeros((n2, n2));
        let om = omega(self.n_modes);
        for i in 0..n2 {
            for j in 0..n2 {
                m[[i, j]] = Complex64::new(self.sigma[[i, j]], 0.5 * om[[i, j]]);
            }
        }
        // m is Hermitian; a general eigensolve keeps the dependency surface small
        let (vals, _) = m.eig().map_err(|e| Error::EigenSolver(e.to_string()))?;
        Ok(vals
            .iter()
            .map(|v| v.re)
            .fold(f64::INFINITY, f64::min))
    }
}

/// Vacuum in every mode: d = 0, sigma = I/2.
pub fn vacuum_state(n: usize) -> Result<GaussianState> {
    if n == 0 {
        return Err(Error::EmptyState);
    }
    let d = Array1::zeros(2 * n);
    let sigma = Array2::eye(2 * n) * 0.5;
    GaussianState::new(d, sigma)
}

/// Coherent displacement of one mode: (x, p) += sqrt(2) (Re a, Im a).
pub fn displace(state: &GaussianState, mode: usize, amplitude: Complex64) -> Result<GaussianState> {
    if mode >= state.n_modes {
        return Err(Error::ModeOutOfRange {
            mode,
            n_modes: state.n_modes,
        });
    }
    let mut d = state.d.clone();
    d[2 * mode] += std::f64::consts::SQRT_2 * amplitude.re;
    d[2 * mode + 1] += std::f64::consts::SQRT_2 * amplitude.im;
    GaussianState::new(d, state.sigma.clone())
}

/// The standard symplectic form in (x, p)-interleaved ordering:
/// block-diagonal copies of [[0, 1], [-1, 0]].
pub fn omega(n: usize) -> Array2<f64> {
    let mut om = Array2::zeros((2 * n, 2 * n));
    for m in 0..n {
        om[[2 * m, 2 * m + 1]] = 1.0;
        om[[2 * m + 1, 2 * m]] = -1.0;
    }
    om
}

/// Gate identity of a symplectic operation, kept alongside the matrix so
/// that non-Gaussian simulations can re-enact the same circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    PhaseShift { phi: f64 },
    TwoModeSqueezer { r: f64, theta: f64 },
    BeamSplitter { eta: f64 },
    Custom,
}

/// A 2m x 2m real symplectic matrix together with the (distinct, ordered)
/// mode indices it acts on.
#[derive(Debug, Clone)]
pub struct SymplecticOp {
    matrix: Array2<f64>,
    modes: Vec<usize>,
    kind: OpKind,
}

impl SymplecticOp {
    /// Wraps a raw matrix, verifying F Omega F^T = Omega.
    pub fn new(matrix: Array2<f64>, modes: Vec<usize>) -> Result<Self> {
        Self::with_kind(matrix, modes, OpKind::Custom)
    }

    fn with_kind(matrix: Array2<f64>, modes: Vec<usize>, kind: OpKind) -> Result<Self> {
        let m = modes.len();
        assert_eq!(matrix.shape(), [2 * m, 2 * m], "symplectic shape mismatch");
        for (k, &mode) in modes.iter().enumerate() {
            if modes[..k].contains(&mode) {
                return Err(Error::RepeatedMode(mode));
            }
        }
        let om = omega(m);
        let res = matrix.dot(&om).dot(&matrix.t()) - &om;
        let defect = res.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if defect > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic(defect));
        }
        Ok(Self { matrix, modes, kind })
    }

    /// Phase shift by `phi` on one mode.
    pub fn phase_shift(phi: f64, mode: usize) -> Self {
        Self::with_kind(phase_shift_matrix(phi), vec![mode], OpKind::PhaseShift { phi })
            .expect("rotation is symplectic")
    }

    /// Two-mode squeezer with squeeze parameter zeta = r e^{i theta}.
    pub fn two_mode_squeezer(r: f64, theta: f64, modes: (usize, usize)) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::ParameterRange {
                name: "r",
                value: r,
                range: "[0, inf)",
            });
        }
        let (c, s) = (r.cosh(), r.sinh());
        let (ct, st) = (theta.cos(), theta.sin());
        // S_theta = [[cos t, sin t], [sin t, -cos t]]
        let mut f = Array2::zeros((4, 4));
        for i in 0..2 {
            f[[i, i]] = c;
            f[[2 + i, 2 + i]] = c;
        }
        let s_theta = [[ct, st], [st, -ct]];
        for i in 0..2 {
            for j in 0..2 {
                f[[i, 2 + j]] = -s * s_theta[i][j];
                f[[2 + i, j]] = -s * s_theta[i][j];
            }
        }
        Self::with_kind(f, vec![modes.0, modes.1], OpKind::TwoModeSqueezer { r, theta })
    }

    /// Beam splitter with transmission `eta`.
    pub fn beam_splitter(eta: f64, modes: (usize, usize)) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::ParameterRange {
                name: "eta",
                value: eta,
                range: "[0, 1]",
            });
        }
        let (t, r) = (eta.sqrt(), (1.0 - eta).sqrt());
        let mut f = Array2::zeros((4, 4));
        for i in 0..2 {
            f[[i, i]] = t;
            f[[2 + i, 2 + i]] = t;
            f[[i, 2 + i]] = r;
            f[[2 + i, i]] = -r;
        }
        Self::with_kind(f, vec![modes.0, modes.1], OpKind::BeamSplitter { eta })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// Embeds the op into an n-mode system via F = P^{-1} diag(f, I) P,
    /// where P permutes the target modes to the front.
    pub fn embed(&self, n_modes: usize) -> Result<Array2<f64>> {
        for &mode in &self.modes {
            if mode >= n_modes {
                return Err(Error::ModeOutOfRange {
                    mode,
                    n_modes,
                });
            }
        }
        Ok(embed_block(&self.matrix, &self.modes, n_modes, true))
    }
}

/// P^{-1} diag(block, fill) P with fill = I (op embedding) or 0 (derivative
/// embedding, where untouched modes contribute nothing).
pub fn embed_block(
    block: &Array2<f64>,
    modes: &[usize],
    n_modes: usize,
    identity_fill: bool,
) -> Array2<f64> {
    let p = mode_permutation(modes, n_modes);
    let m = modes.len();
    let mut big = if identity_fill {
        Array2::eye(2 * n_modes)
    } else {
        Array2::zeros((2 * n_modes, 2 * n_modes))
    };
    for i in 0..2 * m {
        for j in 0..2 * m {
            big[[i, j]] = block[[i, j]];
        }
    }
    p.t().dot(&big).dot(&p)
}

/// 2x2 phase-shift matrix of f_PS(phi).
pub fn phase_shift_matrix(phi: f64) -> Array2<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    ndarray::arr2(&[[c, s], [-s, c]])
}

/// Exact derivative d f_PS / d phi.
pub fn phase_shift_derivative(phi: f64) -> Array2<f64> {
    let (c, s) = (phi.cos(), phi.sin());
    ndarray::arr2(&[[-s, c], [-c, -s]])
}

/// Permutation matrix sending the interleaved coordinates of `front_modes`
/// to the first positions, remaining modes after them in ascending order.
pub fn mode_permutation(front_modes: &[usize], n_modes: usize) -> Array2<f64> {
    let mut order: Vec<usize> = front_modes.to_vec();
    for m in 0..n_modes {
        if !front_modes.contains(&m) {
            order.push(m);
        }
    }
    let mut p = Array2::zeros((2 * n_modes, 2 * n_modes));
    for (new, &old) in order.iter().enumerate() {
        p[[2 * new, 2 * old]] = 1.0;
        p[[2 * new + 1, 2 * old + 1]] = 1.0;
    }
    p
}

/// Applies a symplectic op: sigma -> F sigma F^T, d -> F d.
pub fn apply(state: &GaussianState, op: &SymplecticOp) -> Result<GaussianState> {
    let f = op.embed(state.n_modes())?;
    let sigma = f.dot(state.covariance()).dot(&f.t());
    let d = f.dot(state.displacement());
    GaussianState::new(d, symmetrize(&sigma))
}

/// Loss channel with transmission `t` on one mode, implemented by appending
/// a vacuum ancilla, splitting on a fictitious beam splitter, and tracing
/// the ancilla back out.
pub fn apply_loss(state: &GaussianState, mode: usize, t: f64) -> Result<GaussianState> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterRange {
            name: "T",
            value: t,
            range: "[0, 1]",
        });
    }
    if mode >= state.n_modes() {
        return Err(Error::ModeOutOfRange {
            mode,
            n_modes: state.n_modes(),
        });
    }
    let n = state.n_modes();
    let extended = append_vacuum(state)?;
    let bs = SymplecticOp::beam_splitter(t, (mode, n))?;
    let mixed = apply(&extended, &bs)?;
    trace_out(&mixed, &[n])
}

/// Direct CPTP form of the same channel; kept as a fast path and tested
/// equal to the ancilla route to 1e-12.
pub fn apply_loss_direct(state: &GaussianState, mode: usize, t: f64) -> Result<GaussianState> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterRange {
            name: "T",
            value: t,
            range: "[0, 1]",
        });
    }
    if mode >= state.n_modes() {
        return Err(Error::ModeOutOfRange {
            mode,
            n_modes: state.n_modes(),
        });
    }
    let rt = t.sqrt();
    let mut sigma = state.covariance().clone();
    let mut d = state.displacement().clone();
    let n2 = 2 * state.n_modes();
    for k in [2 * mode, 2 * mode + 1] {
        d[k] *= rt;
        for j in 0..n2 {
            sigma[[k, j]] *= rt;
            sigma[[j, k]] *= rt;
        }
    }
    // the row/column scaling above multiplied the diagonal block by T once
    for k in [2 * mode, 2 * mode + 1] {
        sigma[[k, k]] += (1.0 - t) * 0.5;
    }
    GaussianState::new(d, sigma)
}

/// Appends one vacuum mode at the end of the mode list.
pub fn append_vacuum(state: &GaussianState) -> Result<GaussianState> {
    let n2 = 2 * state.n_modes();
    let mut sigma = Array2::zeros((n2 + 2, n2 + 2));
    for i in 0..n2 {
        for j in 0..n2 {
            sigma[[i, j]] = state.covariance()[[i, j]];
        }
    }
    sigma[[n2, n2]] = 0.5;
    sigma[[n2 + 1, n2 + 1]] = 0.5;
    let mut d = Array1::zeros(n2 + 2);
    for i in 0..n2 {
        d[i] = state.displacement()[i];
    }
    GaussianState::new(d, sigma)
}

/// Deletes the given modes (rows/columns of sigma, entries of d).
pub fn trace_out(state: &GaussianState, modes: &[usize]) -> Result<GaussianState> {
    for &m in modes {
        if m >= state.n_modes() {
            return Err(Error::ModeOutOfRange {
                mode: m,
                n_modes: state.n_modes(),
            });
        }
    }
    let keep: Vec<usize> = (0..state.n_modes()).filter(|m| !modes.contains(m)).collect();
    if keep.is_empty() {
        return Err(Error::TraceOutAll);
    }
    if keep.len() == state.n_modes() {
        return Ok(state.clone());
    }
    let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let k = idx.len();
    let mut sigma = Array2::zeros((k, k));
    let mut d = Array1::zeros(k);
    for (i, &a) in idx.iter().enumerate() {
        d[i] = state.displacement()[a];
        for (j, &b) in idx.iter().enumerate() {
            sigma[[i, j]] = state.covariance()[[a, b]];
        }
    }
    GaussianState::new(d, sigma)
}

/// Mean photon number <a^dag a> of one mode from sigma and d.
pub fn mean_photon_number(state: &GaussianState, mode: usize) -> Result<f64> {
    if mode >= state.n_modes() {
        return Err(Error::ModeOutOfRange {
            mode,
            n_modes: state.n_modes(),
        });
    }
    let (x, p) = (2 * mode, 2 * mode + 1);
    let sig = state.covariance();
    let d = state.displacement();
    Ok(0.5 * (sig[[x, x]] + sig[[p, p]] - 1.0) + 0.5 * (d[x] * d[x] + d[p] * d[p]))
}

/// Complex-form Gaussian state in (a1..an, a1^dag..an^dag) ordering.
#[derive(Debug, Clone)]
pub struct ComplexGaussianState {
    n_modes: usize,
    d: Array1<Complex64>,
    sigma: Array2<Complex64>,
}

impl ComplexGaussianState {
    pub fn new(d: Array1<Complex64>, sigma: Array2<Complex64>) -> Result<Self> {
        let n2 = d.len();
        assert!(n2 > 0 && n2 % 2 == 0);
        assert_eq!(sigma.shape(), [n2, n2]);
        let mut herm_defect: f64 = 0.0;
        for i in 0..n2 {
            for j in 0..n2 {
                herm_defect = herm_defect.max((sigma[[i, j]] - sigma[[j, i]].conj()).norm());
            }
        }
        if herm_defect > STRUCT_TOL {
            return Err(Error::NotSymmetric(herm_defect));
        }
        let n = n2 / 2;
        let mut pair_defect: f64 = 0.0;
        for i in 0..n {
            pair_defect = pair_defect.max((d[n + i] - d[i].conj()).norm());
        }
        if pair_defect > STRUCT_TOL {
            return Err(Error::NotSymmetric(pair_defect));
        }
        Ok(Self { n_modes: n, d, sigma })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn displacement(&self) -> &Array1<Complex64> {
        &self.d
    }

    pub fn covariance(&self) -> &Array2<Complex64> {
        &self.sigma
    }
}

/// Unitary U = (1/sqrt 2) [[I, iI], [I, -iI]] of the real-to-complex map.
pub fn conversion_unitary(n: usize) -> Array2<Complex64> {
    let mut u = Array2::zeros((2 * n, 2 * n));
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let is = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    for k in 0..n {
        u[[k, k]] = s;
        u[[k, n + k]] = is;
        u[[n + k, k]] = s;
        u[[n + k, n + k]] = -is;
    }
    u
}

/// Permutation (x1, p1, ..., xn, pn) -> (x1, ..., xn, p1, ..., pn).
pub fn xp_grouping_permutation(n: usize) -> Array2<f64> {
    let mut p = Array2::zeros((2 * n, 2 * n));
    for k in 0..n {
        p[[k, 2 * k]] = 1.0;
        p[[n + k, 2 * k + 1]] = 1.0;
    }
    p
}

/// Converts the real convention to the complex one:
/// sigma = 2 U P sigma_R P^T U^dag, d = U P d_R.
pub fn to_complex(state: &GaussianState) -> Result<ComplexGaussianState> {
    let n = state.n_modes();
    let u = conversion_unitary(n);
    let p = xp_grouping_permutation(n);
    let sigma_c = complex_sandwich(&u, &p, state.covariance());
    let d_c = complex_rotate(&u, &p, state.displacement());
    ComplexGaussianState::new(d_c, sigma_c)
}

/// 2 U P m P^T U^dag for a real matrix m; shared with derivative conversion.
pub(crate) fn complex_sandwich(
    u: &Array2<Complex64>,
    p: &Array2<f64>,
    m: &Array2<f64>,
) -> Array2<Complex64> {
    let pm = p.dot(m).dot(&p.t());
    let pmc = pm.mapv(|v| Complex64::new(v, 0.0));
    let udag = u.t().mapv(|v| v.conj());
    (u.dot(&pmc).dot(&udag)).mapv(|v| 2.0 * v)
}

/// U P v for a real vector v.
pub(crate) fn complex_rotate(
    u: &Array2<Complex64>,
    p: &Array2<f64>,
    v: &Array1<f64>,
) -> Array1<Complex64> {
    let pv = p.dot(v).mapv(|x| Complex64::new(x, 0.0));
    u.dot(&pv)
}

/// K = diag(I_n, -I_n) of the complex convention.
pub fn k_matrix(n: usize) -> Array2<Complex64> {
    let mut k = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        k[[i, i]] = Complex64::new(1.0, 0.0);
        k[[n + i, n + i]] = Complex64::new(-1.0, 0.0);
    }
    k
}

/// Symplectic eigenvalues: |eigenvalues of sigma K|, one per conjugate pair,
/// sorted ascending. Each is >= 1 - SPECTRAL_TOL for a physical state.
pub fn symplectic_eigenvalues(cstate: &ComplexGaussianState) -> Result<Vec<f64>> {
    let n = cstate.n_modes();
    let sk = cstate.covariance().dot(&k_matrix(n));
    let (vals, _) = sk.eig().map_err(|e| Error::EigenSolver(e.to_string()))?;
    let mut mags: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // eigenvalues come in +/- pairs; average each adjacent pair
    let out: Vec<f64> = (0..n).map(|i| 0.5 * (mags[2 * i] + mags[2 * i + 1])).collect();
    Ok(out)
}

pub(crate) fn symmetrize(m: &Array2<f64>) -> Array2<f64> {
    (m + &m.t()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C;

    #[test]
    fn vacuum_moments() {
        let v = vacuum_state(1).unwrap();
        assert_eq!(v.displacement().len(), 2);
        assert!(v.displacement().iter().all(|&x| x == 0.0));
        assert_abs_diff_eq!(v.covariance()[[0, 0]], 0.5);
        assert_abs_diff_eq!(v.covariance()[[1, 1]], 0.5);
        assert_abs_diff_eq!(v.covariance()[[0, 1]], 0.0);

        let v3 = vacuum_state(3).unwrap();
        assert_eq!(v3.displacement().len(), 6);
        for i in 0..6 {
            assert_abs_diff_eq!(v3.covariance()[[i, i]], 0.5);
        }
        assert!(vacuum_state(0).is_err());
        assert_abs_diff_eq!(mean_photon_number(&vacuum_state(2).unwrap(), 0).unwrap(), 0.0);
    }

    #[test]
    fn displace_coherent() {
        let v = vacuum_state(1).unwrap();
        let s = displace(&v, 0, C::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(s.displacement()[0], std::f64::consts::SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.displacement()[1], 0.0);
        assert_abs_diff_eq!(s.covariance()[[0, 0]], 0.5);

        let same = displace(&v, 0, C::new(0.0, 0.0)).unwrap();
        assert_eq!(same.displacement(), v.displacement());

        let s2 = displace(&v, 0, C::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(mean_photon_number(&s2, 0).unwrap(), 4.0, epsilon = 1e-14);

        assert!(displace(&v, 1, C::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn op_matrices() {
        let ps = SymplecticOp::phase_shift(0.0, 0);
        assert_abs_diff_eq!(ps.matrix()[[0, 0]], 1.0);
        assert_abs_diff_eq!(ps.matrix()[[0, 1]], 0.0);

        let tms = SymplecticOp::two_mode_squeezer(0.0, 0.3, (0, 1)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(tms.matrix()[[i, j]], if i == j { 1.0 } else { 0.0 });
            }
        }

        let bs1 = SymplecticOp::beam_splitter(1.0, (0, 1)).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(bs1.matrix()[[i, i]], 1.0);
        }
        let bs = SymplecticOp::beam_splitter(0.5, (0, 1)).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(bs.matrix()[[0, 0]], inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(bs.matrix()[[0, 2]], inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(bs.matrix()[[2, 0]], -inv_sqrt2, epsilon = 1e-15);

        assert!(SymplecticOp::beam_splitter(1.2, (0, 1)).is_err());
        assert!(SymplecticOp::two_mode_squeezer(-0.1, 0.0, (0, 1)).is_err());
        // symplectic identity is enforced by the constructor
        SymplecticOp::two_mode_squeezer(1.3, 0.7, (0, 1)).unwrap();
    }

    #[test]
    fn apply_tms_to_vacuum() {
        let v = vacuum_state(2).unwrap();
        let r = 0.8;
        let tms = SymplecticOp::two_mode_squeezer(r, 0.0, (0, 1)).unwrap();
        let s = apply(&v, &tms).unwrap();
        let c2 = (2.0 * r).cosh() / 2.0;
        let s2 = (2.0 * r).sinh() / 2.0;
        for i in 0..4 {
            assert_abs_diff_eq!(s.covariance()[[i, i]], c2, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.covariance()[[0, 2]], -s2, epsilon = 1e-12);
        assert_abs_diff_eq!(s.covariance()[[1, 3]], s2, epsilon = 1e-12);
        assert_abs_diff_eq!(mean_photon_number(&s, 0).unwrap(), r.sinh().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn identity_ops_leave_vacuum() {
        let v = vacuum_state(2).unwrap();
        for op in [
            SymplecticOp::phase_shift(0.0, 0),
            SymplecticOp::two_mode_squeezer(0.0, 1.0, (0, 1)).unwrap(),
            SymplecticOp::beam_splitter(1.0, (0, 1)).unwrap(),
        ] {
            let s = apply(&v, &op).unwrap();
            for i in 0..4 {
                assert_abs_diff_eq!(s.covariance()[[i, i]], 0.5, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn phase_rotates_coherent() {
        let alpha = C::new(0.7, -0.3);
        let phi = 1.1;
        let s = displace(&vacuum_state(1).unwrap(), 0, alpha).unwrap();
        let rotated = apply(&s, &SymplecticOp::phase_shift(phi, 0)).unwrap();
        // f_PS corresponds to a -> e^{-i phi} a
        let expect = alpha * C::from_polar(1.0, -phi);
        assert_abs_diff_eq!(
            rotated.displacement()[0],
            std::f64::consts::SQRT_2 * expect.re,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            rotated.displacement()[1],
            std::f64::consts::SQRT_2 * expect.im,
            epsilon = 1e-12
        );
    }

    #[test]
    fn loss_channel_on_coherent() {
        let alpha = C::new(1.4, 0.5);
        let s = displace(&vacuum_state(1).unwrap(), 0, alpha).unwrap();

        let full = apply_loss(&s, 0, 1.0).unwrap();
        assert_abs_diff_eq!(full.displacement()[0], s.displacement()[0], epsilon = 1e-12);

        let dark = apply_loss(&s, 0, 0.0).unwrap();
        assert_abs_diff_eq!(dark.displacement()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dark.covariance()[[0, 0]], 0.5, epsilon = 1e-12);

        let half = apply_loss(&s, 0, 0.5).unwrap();
        assert_abs_diff_eq!(
            half.displacement()[0],
            s.displacement()[0] * 0.5f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(half.covariance()[[0, 0]], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(half.covariance()[[1, 1]], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn direct_loss_matches_ancilla_route() {
        let v = vacuum_state(2).unwrap();
        let s = apply(&v, &SymplecticOp::two_mode_squeezer(1.1, 0.4, (0, 1)).unwrap()).unwrap();
        let s = displace(&s, 1, C::new(0.3, 0.9)).unwrap();
        for t in [0.0, 0.25, 0.7, 1.0] {
            let a = apply_loss(&s, 1, t).unwrap();
            let b = apply_loss_direct(&s, 1, t).unwrap();
            for i in 0..4 {
                assert_abs_diff_eq!(a.displacement()[i], b.displacement()[i], epsilon = 1e-12);
                for j in 0..4 {
                    assert_abs_diff_eq!(a.covariance()[[i, j]], b.covariance()[[i, j]], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn trace_out_marginals() {
        let v = vacuum_state(2).unwrap();
        let one = trace_out(&v, &[1]).unwrap();
        assert_eq!(one.n_modes(), 1);
        assert_abs_diff_eq!(one.covariance()[[0, 0]], 0.5);

        let r = 0.9;
        let tms = apply(&v, &SymplecticOp::two_mode_squeezer(r, 0.0, (0, 1)).unwrap()).unwrap();
        let thermal = trace_out(&tms, &[1]).unwrap();
        assert_abs_diff_eq!(thermal.covariance()[[0, 0]], (2.0 * r).cosh() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(thermal.covariance()[[0, 1]], 0.0, epsilon = 1e-12);

        let same = trace_out(&v, &[]).unwrap();
        assert_eq!(same.n_modes(), 2);
        assert!(trace_out(&v, &[0, 1]).is_err());
    }

    #[test]
    fn complex_conversion() {
        let v = to_complex(&vacuum_state(1).unwrap()).unwrap();
        assert_abs_diff_eq!(v.covariance()[[0, 0]].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.covariance()[[0, 1]].norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.displacement()[0].norm(), 0.0);

        let alpha = C::new(0.4, -1.2);
        let s = to_complex(&displace(&vacuum_state(1).unwrap(), 0, alpha).unwrap()).unwrap();
        assert_abs_diff_eq!((s.displacement()[0] - alpha).norm(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!((s.displacement()[1] - alpha.conj()).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn symplectic_eigenvalue_checks() {
        let v = to_complex(&vacuum_state(3).unwrap()).unwrap();
        for nu in symplectic_eigenvalues(&v).unwrap() {
            assert_abs_diff_eq!(nu, 1.0, epsilon = 1e-9);
        }

        // TMS + 50% loss in both arms: mixed, both eigenvalues > 1
        let s = apply(
            &vacuum_state(2).unwrap(),
            &SymplecticOp::two_mode_squeezer(1.0, 0.0, (0, 1)).unwrap(),
        )
        .unwrap();
        let s = apply_loss(&apply_loss(&s, 0, 0.5).unwrap(), 1, 0.5).unwrap();
        for nu in symplectic_eigenvalues(&to_complex(&s).unwrap()).unwrap() {
            assert!(nu > 1.0 + 1e-6, "expected mixedness, got {nu}");
        }
    }
}
