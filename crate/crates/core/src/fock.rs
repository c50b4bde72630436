//! Photon-number statistics of Gaussian states and the classical Fisher
//! information of photon-number-resolving detection.
//!
//! The main path computes joint Fock probabilities directly from the
//! complex-form moments through the Husimi generating function
//! G(zeta) = c exp(zeta^T A zeta / 2 + b^T zeta), whose Taylor tensor obeys
//! the two-term recursion implemented in `fock_probabilities`. A dense
//! density-matrix simulation of the same circuits acts as an independent
//! oracle for small cutoffs.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Determinant, Inverse};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{to_complex, GaussianState, OpKind};
use crate::interferometer::{Circuit, Element};
use crate::qfi::qfi_of_circuit;

/// Probabilities below this are dropped from Fisher-information sums.
pub const PROB_FLOOR: f64 = 1e-12;
/// Largest Taylor-tensor size the generating-function recursion accepts.
const AMPLITUDE_LIMIT: usize = 1 << 25;
/// Mode/cutoff ceiling of the dense density-matrix oracle.
pub const DENSE_CUTOFF_LIMIT: usize = 8;

/// Joint photon-number distribution over `n_modes` detectors, each
/// truncated at `cutoff` photons. Probabilities are stored row-major with
/// the last mode fastest; their sum is the captured mass of the truncation
/// and is deliberately never renormalized.
#[derive(Debug, Clone)]
pub struct FockDistribution {
    pub n_modes: usize,
    pub cutoff: usize,
    pub probabilities: Vec<f64>,
    pub captured_mass: f64,
}

impl FockDistribution {
    pub fn probability(&self, counts: &[usize]) -> f64 {
        assert_eq!(counts.len(), self.n_modes);
        let mut idx = 0;
        for &n in counts {
            assert!(n <= self.cutoff);
            idx = idx * (self.cutoff + 1) + n;
        }
        self.probabilities[idx]
    }
}

/// Joint Fock probabilities of a Gaussian state up to `cutoff` photons per
/// mode, by the generating-function recursion
/// T_{m+e_i} = b_i T_m + sum_j A_{ij} m_j T_{m-e_j}, T_0 = c, with
/// P(n) = Re T_{(n,n)} / prod_i n_i!.
pub fn fock_probabilities(state: &GaussianState, cutoff: usize) -> Result<FockDistribution> {
    let k = state.n_modes();
    let cstate = to_complex(state)?;
    let n2 = 2 * k;

    // Husimi covariance and the recursion coefficients
    let mut sigma_q: Array2<Complex64> = cstate.covariance().clone();
    for i in 0..n2 {
        sigma_q[[i, i]] += 1.0;
    }
    sigma_q.mapv_inplace(|v| 0.5 * v);
    let sq_inv = sigma_q.inv().map_err(|e| Error::EigenSolver(e.to_string()))?;
    let det = sigma_q.det().map_err(|e| Error::EigenSolver(e.to_string()))?;

    let mut x = Array2::<Complex64>::zeros((n2, n2));
    for i in 0..k {
        x[[i, k + i]] = Complex64::new(1.0, 0.0);
        x[[k + i, i]] = Complex64::new(1.0, 0.0);
    }
    let a = &x - &x.dot(&sq_inv);
    let b: Array1<Complex64> = x.dot(&sq_inv).dot(cstate.displacement());
    let d = cstate.displacement();
    let quad: Complex64 = d
        .iter()
        .zip(x.dot(&sq_inv.dot(d)).iter())
        .map(|(u, v)| u * v)
        .sum();
    let c = (-0.5 * quad).exp() / det.sqrt();

    // Taylor tensor over 2k axes, each 0..=cutoff, row-major
    let side = cutoff + 1;
    let len = side.checked_pow(n2 as u32).ok_or(Error::DimensionOverflow(usize::MAX))?;
    if len > AMPLITUDE_LIMIT {
        return Err(Error::DimensionOverflow(len));
    }
    let mut strides = vec![0usize; n2];
    strides[n2 - 1] = 1;
    for ax in (0..n2 - 1).rev() {
        strides[ax] = strides[ax + 1] * side;
    }
    let mut t = vec![Complex64::new(0.0, 0.0); len];
    t[0] = c;
    let mut m = vec![0usize; n2];
    for flat in 1..len {
        // increment the multi-index (row-major order)
        for ax in (0..n2).rev() {
            if m[ax] + 1 < side {
                m[ax] += 1;
                break;
            }
            m[ax] = 0;
        }
        let i = m.iter().position(|&v| v > 0).unwrap();
        let base = flat - strides[i]; // m - e_i
        let mut val = b[i] * t[base];
        for j in 0..n2 {
            let mj = m[j] - usize::from(j == i);
            if mj > 0 {
                val += a[[i, j]] * mj as f64 * t[base - strides[j]];
            }
        }
        t[flat] = val;
    }

    // diagonal extraction: P(n) = Re T_{(n,n)} / prod n_i!
    let out_len = side.pow(k as u32);
    let mut probabilities = vec![0.0; out_len];
    let mut counts = vec![0usize; k];
    let mut factorial = 1.0f64;
    for (slot, p) in probabilities.iter_mut().enumerate() {
        if slot > 0 {
            for ax in (0..k).rev() {
                if counts[ax] + 1 < side {
                    counts[ax] += 1;
                    factorial *= counts[ax] as f64;
                    break;
                }
                for _ in 0..counts[ax] {
                    factorial /= counts[ax] as f64;
                    counts[ax] -= 1;
                }
            }
        }
        let mut flat = 0usize;
        for &n in counts.iter().chain(counts.iter()) {
            flat = flat * side + n;
        }
        *p = t[flat].re / factorial;
    }
    let captured_mass = probabilities.iter().sum();
    Ok(FockDistribution { n_modes: k, cutoff, probabilities, captured_mass })
}

// ---------------------------------------------------------------------------
// dense density-matrix oracle

fn kron_c(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            if a[[i, j]] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for p in 0..br {
                for q in 0..bc {
                    out[[i * br + p, j * bc + q]] = a[[i, j]] * b[[p, q]];
                }
            }
        }
    }
    out
}

/// Matrix exponential by scaling-and-squaring with a Taylor series; fine
/// for the modest dimensions of the oracle.
fn expm(m: &Array2<Complex64>) -> Array2<Complex64> {
    let n = m.nrows();
    let norm = (0..n)
        .map(|j| (0..n).map(|i| m[[i, j]].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.mapv(|v| v / 2f64.powi(s as i32));
    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..100 {
        term = term.dot(&scaled).mapv(|v| v / k as f64);
        let tnorm: f64 = term.iter().map(|v| v.norm()).sum();
        result = result + &term;
        if tnorm < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

struct DenseSim {
    n_modes: usize,
    side: usize,
    rho: Array2<Complex64>,
    /// modes still present in the bookkeeping sense; dropped ones are
    /// summed over when probabilities are read out
    kept: Vec<usize>,
}

impl DenseSim {
    fn new(n_modes: usize, cutoff: usize) -> Self {
        let side = cutoff + 1;
        let dim = side.pow(n_modes as u32);
        let mut rho = Array2::zeros((dim, dim));
        rho[[0, 0]] = Complex64::new(1.0, 0.0);
        Self { n_modes, side, rho, kept: (0..n_modes).collect() }
    }

    /// Single-mode annihilation operator.
    fn a_local(&self) -> Array2<Complex64> {
        let mut a = Array2::zeros((self.side, self.side));
        for n in 1..self.side {
            a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    /// Embeds a single-mode operator on the given mode.
    fn embed(&self, op: &Array2<Complex64>, mode: usize) -> Array2<Complex64> {
        let eye = Array2::<Complex64>::eye(self.side);
        let mut out = if mode == 0 { op.clone() } else { eye.clone() };
        for m in 1..self.n_modes {
            out = kron_c(&out, if m == mode { op } else { &eye });
        }
        out
    }

    fn unitary(&mut self, u: &Array2<Complex64>) {
        let udag = u.t().mapv(|v| v.conj());
        self.rho = u.dot(&self.rho).dot(&udag);
    }

    fn displace(&mut self, mode: usize, alpha: Complex64) {
        if alpha == Complex64::new(0.0, 0.0) {
            return;
        }
        let a = self.embed(&self.a_local(), mode);
        let adag = a.t().mapv(|v| v.conj());
        let gen = adag.mapv(|v| v * alpha) - a.mapv(|v| v * alpha.conj());
        let u = expm(&gen);
        self.unitary(&u);
    }

    fn phase(&mut self, mode: usize, phi: f64) {
        let a = self.embed(&self.a_local(), mode);
        let n_op = a.t().mapv(|v| v.conj()).dot(&a);
        let u = expm(&n_op.mapv(|v| v * Complex64::new(0.0, -phi)));
        self.unitary(&u);
    }

    fn two_mode_squeeze(&mut self, modes: (usize, usize), r: f64, theta: f64) {
        if r == 0.0 {
            return;
        }
        let zeta = Complex64::from_polar(r, theta);
        let ai = self.embed(&self.a_local(), modes.0);
        let aj = self.embed(&self.a_local(), modes.1);
        let aidag = ai.t().mapv(|v| v.conj());
        let ajdag = aj.t().mapv(|v| v.conj());
        let gen = ai.dot(&aj).mapv(|v| v * zeta.conj()) - aidag.dot(&ajdag).mapv(|v| v * zeta);
        let u = expm(&gen);
        self.unitary(&u);
    }

    fn beam_split(&mut self, modes: (usize, usize), eta: f64) {
        let theta = eta.sqrt().clamp(0.0, 1.0).acos();
        if theta == 0.0 {
            return;
        }
        let ai = self.embed(&self.a_local(), modes.0);
        let aj = self.embed(&self.a_local(), modes.1);
        let aidag = ai.t().mapv(|v| v.conj());
        let ajdag = aj.t().mapv(|v| v.conj());
        let gen = (aidag.dot(&aj) - ai.dot(&ajdag)).mapv(|v| v * theta);
        let u = expm(&gen);
        self.unitary(&u);
    }

    fn loss(&mut self, mode: usize, t: f64) {
        if t == 1.0 {
            return;
        }
        let a_loc = self.a_local();
        // T^{n/2} as a diagonal on the local space
        let mut t_half = Array2::<Complex64>::zeros((self.side, self.side));
        for n in 0..self.side {
            t_half[[n, n]] = Complex64::new(t.powf(n as f64 / 2.0), 0.0);
        }
        let mut new_rho = Array2::<Complex64>::zeros(self.rho.dim());
        let mut a_pow = Array2::<Complex64>::eye(self.side);
        let mut lfact = 1.0f64;
        for l in 0..self.side {
            if l > 0 {
                a_pow = a_pow.dot(&a_loc);
                lfact *= l as f64;
            }
            let coeff = ((1.0 - t).powi(l as i32) / lfact).sqrt();
            if coeff == 0.0 {
                continue;
            }
            let k_local = t_half.dot(&a_pow).mapv(|v| v * coeff);
            let k = self.embed(&k_local, mode);
            let kdag = k.t().mapv(|v| v.conj());
            new_rho = new_rho + k.dot(&self.rho).dot(&kdag);
        }
        self.rho = new_rho;
    }

    /// Diagonal probabilities, marginalized over dropped modes, truncated
    /// to the kept ones in their surviving order.
    fn probabilities(&self) -> FockDistribution {
        let k = self.kept.len();
        let out_len = self.side.pow(k as u32);
        let mut probabilities = vec![0.0; out_len];
        let dim = self.rho.nrows();
        for i in 0..dim {
            // decode full multi-index
            let mut rem = i;
            let mut full = vec![0usize; self.n_modes];
            for ax in (0..self.n_modes).rev() {
                full[ax] = rem % self.side;
                rem /= self.side;
            }
            let mut slot = 0usize;
            for &m in &self.kept {
                slot = slot * self.side + full[m];
            }
            probabilities[slot] += self.rho[[i, i]].re;
        }
        let captured_mass = probabilities.iter().sum();
        FockDistribution { n_modes: k, cutoff: self.side - 1, probabilities, captured_mass }
    }
}

/// Independent joint-probability oracle: evolves the circuit's density
/// matrix in a truncated Fock space. Limited to three modes and small
/// cutoffs; accurate only as far as the truncation holds the state.
pub fn dense_fock_probabilities(
    circuit: &Circuit,
    phi: f64,
    cutoff: usize,
) -> Result<FockDistribution> {
    if cutoff > DENSE_CUTOFF_LIMIT {
        return Err(Error::CutoffExceeded { cutoff, limit: DENSE_CUTOFF_LIMIT });
    }
    if circuit.n_modes() > 3 {
        return Err(Error::WrongModeCount { expected: 3, got: circuit.n_modes() });
    }
    let mut sim = DenseSim::new(circuit.n_modes(), cutoff);
    for (mode, &seed) in circuit.seeds().iter().enumerate() {
        sim.displace(mode, seed);
    }
    // trace-outs only relabel bookkeeping here, so later per-mode elements
    // must be mapped back to original indices
    let mut kept: Vec<usize> = (0..circuit.n_modes()).collect();
    for e in circuit.elements() {
        match e {
            Element::Op(op) => {
                let modes = op.modes();
                match op.kind() {
                    OpKind::PhaseShift { phi } => sim.phase(kept[modes[0]], phi),
                    OpKind::TwoModeSqueezer { r, theta } => {
                        sim.two_mode_squeeze((kept[modes[0]], kept[modes[1]]), r, theta)
                    }
                    OpKind::BeamSplitter { eta } => {
                        sim.beam_split((kept[modes[0]], kept[modes[1]]), eta)
                    }
                    OpKind::Custom => {
                        return Err(Error::Config(
                            "dense oracle cannot re-enact a custom symplectic op".into(),
                        ))
                    }
                }
            }
            Element::PhasePoint { mode } => sim.phase(kept[*mode], phi),
            Element::Loss { mode, transmission } => sim.loss(kept[*mode], *transmission),
            Element::TraceOut { modes } => {
                let dropped: Vec<usize> = modes.iter().map(|&m| kept[m]).collect();
                kept.retain(|m| !dropped.contains(m));
            }
        }
    }
    sim.kept = kept;
    Ok(sim.probabilities())
}

// ---------------------------------------------------------------------------
// classical Fisher information

/// Classical Fisher information of photon-number-resolving detection.
#[derive(Debug, Clone, Copy)]
pub struct CfiResult {
    pub value: f64,
    pub phi: f64,
    pub cutoff: usize,
    /// central-difference step used for the probability derivatives
    pub step: f64,
    /// total probability captured by the truncation at the center phase
    pub captured_mass: f64,
    /// outcomes excluded because their probability sat below the floor
    pub dropped_outcomes: usize,
}

/// Fisher information of the circuit's photon-number statistics at `phi`,
/// with probability derivatives from central differences of step `h`.
/// Outcomes below `PROB_FLOOR` are excluded (and counted), and the
/// truncated distribution is never renormalized.
pub fn cfi(circuit: &Circuit, phi: f64, cutoff: usize, h: f64) -> Result<CfiResult> {
    if h < 1e-9 {
        return Err(Error::StepTooSmall(h));
    }
    let center = fock_probabilities(&circuit.output_state(phi)?, cutoff)?;
    let plus = fock_probabilities(&circuit.output_state(phi + h)?, cutoff)?;
    let minus = fock_probabilities(&circuit.output_state(phi - h)?, cutoff)?;
    let mut value = 0.0;
    let mut dropped = 0usize;
    for ((&p0, &pp), &pm) in center
        .probabilities
        .iter()
        .zip(&plus.probabilities)
        .zip(&minus.probabilities)
    {
        if p0 < PROB_FLOOR {
            dropped += 1;
            continue;
        }
        let dp = (pp - pm) / (2.0 * h);
        value += dp * dp / p0;
    }
    Ok(CfiResult {
        value,
        phi,
        cutoff,
        step: h,
        captured_mass: center.captured_mass,
        dropped_outcomes: dropped,
    })
}

/// Convenience pairing of the classical information with the quantum bound
/// of the same circuit and phase.
pub fn cfi_with_bound(circuit: &Circuit, phi: f64, cutoff: usize, h: f64) -> Result<(CfiResult, f64)> {
    let c = cfi(circuit, phi, cutoff, h)?;
    let q = qfi_of_circuit(circuit, phi)?.value;
    Ok((c, q))
}
