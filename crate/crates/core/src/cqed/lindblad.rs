//! Steady state of the driven, damped Tavis–Cummings model for one or two
//! two-level atoms and a truncated Fock space.
//!
//! In the frame rotating at the probe frequency,
//!
//! `H = (Δ_c − Δ)a†a + Σ_j (δ_j − Δ)σ_j†σ_j + Σ_j g_j(a†σ_j + σ_j†a) + iε(a† − a)`
//!
//! with collapse operators `√(2κ)a`, `√(2(γ − γ_φ))σ_j` and `√(γ_φ/2)σ_z,j`,
//! so that field and atomic coherences decay at `κ` and `γ`. The density
//! matrix is column-stacked and the trace condition replaces the first row
//! of the Liouvillian.

use crate::cavity::CavityRates;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use faer::linalg::solvers::Solve;
use num_complex::Complex64;

/// Largest relative change allowed between truncation `n` and `n + 2`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;

const MAX_ATOMS: usize = 2;
const MIN_CUTOFF: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSystem {
    /// `(g_j, δ_j)` pairs in Hz.
    pub atoms: Vec<(f64, f64)>,
    pub rates: CavityRates,
    /// Total atomic coherence decay (Hz).
    pub gamma: f64,
    /// Part of `gamma` due to pure dephasing (Hz).
    pub dephasing: f64,
    /// Coherent drive `ε = √(2κ_ext)·a_in` (Hz).
    pub drive: f64,
    /// Highest Fock state kept.
    pub photon_cutoff: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladResult {
    pub photon_number: f64,
    /// `⟨a⟩`.
    pub field: Complex64,
    /// `|1 − 2κ_ext⟨a⟩/ε|²`.
    pub transmission: f64,
    pub photon_cutoff: usize,
}

impl LindbladSystem {
    pub fn validate(&self) -> Result<()> {
        if self.atoms.len() > MAX_ATOMS {
            return Err(Error::domain(format!(
                "the master-equation solver handles at most {MAX_ATOMS} atoms, got {}",
                self.atoms.len()
            )));
        }
        if self.photon_cutoff < MIN_CUTOFF {
            return Err(Error::domain(format!(
                "photon truncation must be at least {MIN_CUTOFF}, got {}",
                self.photon_cutoff
            )));
        }
        let r = &self.rates;
        if !(r.kappa > 0.0 && r.kappa_ext >= 0.0 && r.kappa_ext <= r.kappa) {
            return Err(Error::domain(format!("bad cavity rates κ={} κ_ext={}", r.kappa, r.kappa_ext)));
        }
        if !(self.gamma > 0.0 && (0.0..=self.gamma).contains(&self.dephasing)) {
            return Err(Error::domain(format!(
                "need γ > 0 and 0 ≤ γ_φ ≤ γ, got γ={} γ_φ={}",
                self.gamma, self.dephasing
            )));
        }
        if !(self.drive >= 0.0 && self.drive.is_finite()) {
            return Err(Error::domain(format!("drive must be ≥ 0, got {}", self.drive)));
        }
        if self.atoms.iter().any(|&(g, d)| !(g >= 0.0) || !d.is_finite()) {
            return Err(Error::domain("atom couplings must be ≥ 0 and detunings finite"));
        }
        Ok(())
    }
}

/// Steady state at probe detuning `detuning`, checked against a run with
/// two more Fock states.
pub fn lindblad_steady_state(system: &LindbladSystem, detuning: f64) -> Result<LindbladResult> {
    system.validate()?;
    let coarse = solve(system, detuning, system.photon_cutoff)?;
    let fine = solve(system, detuning, system.photon_cutoff + 2)?;
    let differs = |a: f64, b: f64, floor: f64| (a - b).abs() > CONVERGENCE_TOLERANCE * b.abs().max(floor);
    if differs(coarse.photon_number, fine.photon_number, 1e-9)
        || differs(coarse.transmission, fine.transmission, 1e-6)
    {
        return Err(Error::Accuracy(format!(
            "photon truncation {} not converged: n = {:.6e} vs {:.6e}, T = {:.6e} vs {:.6e} at {}",
            system.photon_cutoff,
            coarse.photon_number,
            fine.photon_number,
            coarse.transmission,
            fine.transmission,
            system.photon_cutoff + 2
        )));
    }
    Ok(coarse)
}

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn embed(op: &CMat, slot: usize, dims: &[usize]) -> CMat {
    dims.iter().enumerate().fold(CMat::identity(1, 1), |acc, (k, &d)| {
        if k == slot {
            acc.kronecker(op)
        } else {
            acc.kronecker(&CMat::identity(d, d))
        }
    })
}

fn solve(system: &LindbladSystem, detuning: f64, cutoff: usize) -> Result<LindbladResult> {
    // Work in units of κ to keep the Liouvillian well scaled.
    let unit = system.rates.kappa;
    let nf = cutoff + 1;
    let mut dims = vec![nf];
    dims.extend(std::iter::repeat_n(2, system.atoms.len()));
    let dim: usize = dims.iter().product();

    let mut a1 = CMat::zeros(nf, nf);
    for n in 1..nf {
        a1[(n - 1, n)] = c((n as f64).sqrt());
    }
    let mut s1 = CMat::zeros(2, 2);
    s1[(0, 1)] = c(1.0);
    let sz1 = CMat::from_diagonal(&DVector::from_vec(vec![c(-1.0), c(1.0)]));

    let a = embed(&a1, 0, &dims);
    let ad = a.adjoint();
    let num = &ad * &a;

    let kappa = system.rates.kappa / unit;
    let gamma = system.gamma / unit;
    let gphi = system.dephasing / unit;
    let eps = system.drive / unit;
    let i = Complex64::i();

    let mut h = &num * c((system.rates.detuning - detuning) / unit);
    h += (&ad - &a) * (i * eps);
    let mut jumps = vec![&a * c((2.0 * kappa).sqrt())];
    for (j, &(g, delta)) in system.atoms.iter().enumerate() {
        let s = embed(&s1, j + 1, &dims);
        let sd = s.adjoint();
        h += (&sd * &s) * c((delta - detuning) / unit);
        h += (&ad * &s + &sd * &a) * c(g / unit);
        jumps.push(&s * c((2.0 * (gamma - gphi)).sqrt()));
        if gphi > 0.0 {
            jumps.push(embed(&sz1, j + 1, &dims) * c((gphi / 2.0).sqrt()));
        }
    }

    let id = CMat::identity(dim, dim);
    let mut liou = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);
    for l in &jumps {
        let ldl = l.adjoint() * l;
        liou += l.conjugate().kronecker(l);
        liou -= id.kronecker(&ldl) * c(0.5);
        liou -= ldl.transpose().kronecker(&id) * c(0.5);
    }
    for k in 0..dim * dim {
        liou[(0, k)] = c(0.0);
    }
    for d in 0..dim {
        liou[(0, d * dim + d)] = c(1.0);
    }
    let size = dim * dim;
    let lhs = faer::Mat::<Complex64>::from_fn(size, size, |r, k| liou[(r, k)]);
    let mut rhs = faer::Mat::<Complex64>::zeros(size, 1);
    rhs[(0, 0)] = c(1.0);
    let sol = lhs.partial_piv_lu().solve(&rhs);
    let vec_rho: Vec<Complex64> = (0..size).map(|k| sol[(k, 0)]).collect();
    if vec_rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular(0.0));
    }
    let rho = CMat::from_column_slice(dim, dim, &vec_rho);

    let photon_number = (&num * &rho).trace().re;
    let field = (&a * &rho).trace();
    let transmission = if system.drive > 0.0 {
        (1.0 - 2.0 * system.rates.kappa_ext * field / system.drive).norm_sqr()
    } else {
        let se: Complex64 = system
            .atoms
            .iter()
            .map(|&(g, d)| g * g / Complex64::new(system.gamma, detuning - d))
            .sum();
        system.rates.field_transmission(detuning, se).norm_sqr()
    };
    Ok(LindbladResult { photon_number, field, transmission, photon_cutoff: cutoff })
}
