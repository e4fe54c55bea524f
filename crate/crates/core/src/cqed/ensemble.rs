use crate::cavity::{coupling_at_position, ModeField, RingParams, SurfacePosition};
use crate::error::{Error, Result};
use crate::vapor::{sample_doppler_detuning, RbD2Line, VaporState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

/// Shell depth in units of the field decay length used when none is given.
pub const DEFAULT_DEPTH_FACTOR: f64 = 3.0;

/// How many atoms go into one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomCount {
    Fixed(usize),
    /// `round(density × region volume)`.
    FromDensity,
    /// Poisson draw with mean `density × region volume`.
    Poisson,
}

/// Slab of vapor above the exposed waveguide surface, in the
/// surface-unrolled frame of [`SurfacePosition`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellRegion {
    /// Extent along the ring (m), normally its circumference.
    pub length: f64,
    /// Extent across the exposed perimeter (m).
    pub width: f64,
    /// Extent along the surface normal (m).
    pub depth: f64,
}

impl ShellRegion {
    /// Shell `depth_factor` decay lengths deep around the whole ring, with a
    /// width chosen so that its volume equals the mode's interaction volume.
    pub fn around(ring: &RingParams, mode: &ModeField, depth_factor: f64) -> Result<Self> {
        if !(depth_factor > 0.0) {
            return Err(Error::domain(format!("shell depth factor must be positive, got {depth_factor}")));
        }
        let length = ring.round_trip_length();
        let depth = depth_factor * mode.decay_length;
        let region = ShellRegion { length, width: mode.interaction_volume / (length * depth), depth };
        region.validate()?;
        Ok(region)
    }

    pub fn volume(&self) -> f64 {
        self.length * self.width * self.depth
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(self.length) && ok(self.width) && ok(self.depth)) {
            return Err(Error::domain(format!(
                "empty interaction region ({} × {} × {} m)",
                self.length, self.width, self.depth
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: &SurfacePosition) -> bool {
        (0.0..self.length).contains(&p.along)
            && (0.0..self.width).contains(&p.across)
            && (0.0..=self.depth).contains(&p.normal)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SurfacePosition {
        SurfacePosition {
            along: rng.random::<f64>() * self.length,
            across: rng.random::<f64>() * self.width,
            normal: rng.random::<f64>() * self.depth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: SurfacePosition,
    /// Doppler-shifted transition frequency minus the line centre, Hz.
    pub detuning: f64,
    /// Hz.
    pub coupling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomEnsemble {
    pub atoms: Vec<Atom>,
    pub seed: u64,
    pub temperature: f64,
}

impl AtomEnsemble {
    /// Ensemble from explicit `(coupling, detuning)` pairs, all at the surface.
    pub fn from_couplings(pairs: &[(f64, f64)], temperature: f64) -> Result<Self> {
        let atoms = pairs
            .iter()
            .map(|&(coupling, detuning)| {
                if !(coupling >= 0.0) {
                    return Err(Error::domain(format!("atom coupling must be ≥ 0, got {coupling}")));
                }
                Ok(Atom {
                    position: SurfacePosition { along: 0.0, across: 0.0, normal: 0.0 },
                    detuning,
                    coupling,
                })
            })
            .collect::<Result<_>>()?;
        Ok(AtomEnsemble { atoms, seed: 0, temperature })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ g_j²`, the squared collective coupling.
    pub fn collective_coupling_sq(&self) -> f64 {
        self.atoms.iter().map(|a| a.coupling * a.coupling).sum()
    }

    /// Copy with every coupling multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for a in &mut out.atoms {
            a.coupling *= s;
        }
        out
    }
}

/// Inputs needed to draw configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub count: AtomCount,
    pub region: ShellRegion,
    pub vapor: VaporState,
    pub line: RbD2Line,
    pub mode: ModeField,
}

/// Random positions, Doppler detunings and couplings for one configuration.
///
/// Positions are uniform in `region`; deterministic in `seed`.
pub fn place_atoms(spec: &EnsembleSpec, seed: u64) -> Result<AtomEnsemble> {
    spec.region.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected = spec.vapor.density * spec.region.volume();
    let count = match spec.count {
        AtomCount::Fixed(n) => n,
        AtomCount::FromDensity => expected.round() as usize,
        AtomCount::Poisson => {
            if expected > 0.0 {
                let dist = Poisson::new(expected).map_err(|e| Error::domain(e.to_string()))?;
                dist.sample(&mut rng) as usize
            } else {
                0
            }
        }
    };
    let mut atoms = Vec::with_capacity(count);
    for _ in 0..count {
        let position = spec.region.sample(&mut rng);
        let detuning = sample_doppler_detuning(spec.vapor.temperature, &spec.line, &mut rng)?;
        let coupling = coupling_at_position(&position, &spec.mode)?;
        atoms.push(Atom { position, detuning, coupling });
    }
    Ok(AtomEnsemble { atoms, seed, temperature: spec.vapor.temperature })
}

/// Seed of configuration `index` under base seed `base` (SplitMix64 finaliser).
pub fn configuration_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{DEFAULT_INTERACTION_VOLUME, DEFAULT_RADIUS};

    fn spec(count: AtomCount, depth_factor: f64) -> EnsembleSpec {
        let line = RbD2Line::rb87();
        let ring = RingParams::new(DEFAULT_RADIUS, 1.6, 0.99, 0.98, line.wavelength()).unwrap();
        let mode = ModeField::new(330e6, 50e-9, DEFAULT_INTERACTION_VOLUME).unwrap();
        let vapor = VaporState::at_temperature(373.15, &line).unwrap();
        EnsembleSpec {
            count,
            region: ShellRegion::around(&ring, &mode, depth_factor).unwrap(),
            vapor,
            line,
            mode,
        }
    }

    #[test]
    fn zero_atoms() {
        let e = place_atoms(&spec(AtomCount::Fixed(0), 3.0), 1).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn same_seed_same_ensemble() {
        let s = spec(AtomCount::Fixed(53), 3.0);
        let a = place_atoms(&s, 42).unwrap();
        let b = place_atoms(&s, 42).unwrap();
        let bits = |e: &AtomEnsemble| {
            e.atoms
                .iter()
                .flat_map(|a| {
                    [a.position.along, a.position.across, a.position.normal, a.detuning, a.coupling]
                })
                .map(f64::to_bits)
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&place_atoms(&s, 43).unwrap()));
    }

    #[test]
    fn mean_coupling_over_four_decay_lengths() {
        // ⟨g₀·e^{−d/L}⟩ for d uniform on [0, 4L] is g₀(1 − e⁻⁴)/4
        let s = spec(AtomCount::Fixed(10_000), 4.0);
        let e = place_atoms(&s, 5).unwrap();
        let mean = e.atoms.iter().map(|a| a.coupling).sum::<f64>() / e.len() as f64;
        let expect = 330e6 * (1.0 - (-4.0f64).exp()) / 4.0;
        assert!((mean / expect - 1.0).abs() < 0.02, "{mean:e} vs {expect:e}");
    }

    #[test]
    fn atoms_stay_inside_region() {
        let s = spec(AtomCount::Fixed(500), 3.0);
        let e = place_atoms(&s, 9).unwrap();
        assert!(e.atoms.iter().all(|a| s.region.contains(&a.position) && a.coupling >= 0.0));
    }

    #[test]
    fn density_count_matches_interaction_volume() {
        let s = spec(AtomCount::FromDensity, 3.0);
        let e = place_atoms(&s, 1).unwrap();
        let expect = (s.vapor.density * DEFAULT_INTERACTION_VOLUME).round() as usize;
        assert_eq!(e.len(), expect);
    }

    #[test]
    fn poisson_count_mean() {
        let s = spec(AtomCount::Poisson, 3.0);
        let n = 400;
        let total: usize = (0..n).map(|i| place_atoms(&s, configuration_seed(3, i)).unwrap().len()).sum();
        let mean = total as f64 / n as f64;
        let expect = s.vapor.density * s.region.volume();
        assert!((mean - expect).abs() < 4.0 * (expect / n as f64).sqrt(), "{mean} vs {expect}");
    }

    #[test]
    fn empty_region_rejected() {
        let mut s = spec(AtomCount::Fixed(3), 3.0);
        s.region.width = 0.0;
        assert!(place_atoms(&s, 1).is_err());
        let line = RbD2Line::rb87();
        let ring = RingParams::new(DEFAULT_RADIUS, 1.6, 0.99, 0.98, line.wavelength()).unwrap();
        assert!(ShellRegion::around(&ring, &s.mode, 0.0).is_err());
    }

    #[test]
    fn configuration_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| configuration_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
