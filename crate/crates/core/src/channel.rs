//! Node geometry, system parameters, and deterministic fading-channel sampling.
//!
//! Reproducibility contract: every trial derives its own seed from
//! `(master_seed, trial_index)` via [`derive_seed`], so results do not depend
//! on scheduling order. The Gaussian sampler is a fixed Box-Muller transform
//! of explicitly constructed 53-bit uniforms on top of ChaCha8, which keeps
//! golden values stable across platforms and dependency bumps.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, Cplx};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// 2-D node positions in km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology {
    pub pos_s: (f64, f64),
    pub pos_r: (f64, f64),
    pub pos_d: (f64, f64),
    pub pos_e: (f64, f64),
}

impl Topology {
    /// Positions used throughout the experiments: S, R, D on a line with the
    /// monitor off-axis.
    pub fn baseline() -> Self {
        Topology {
            pos_s: (0.0, 0.0),
            pos_r: (2.0, 0.0),
            pos_d: (4.0, 0.0),
            pos_e: (2.0, 3.0),
        }
    }
}

/// Physical constants of one experiment: transmit powers, noise power,
/// path-loss exponent and antenna counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Source transmit power in watts.
    pub ps_w: f64,
    /// Relay transmit power in watts.
    pub pr_w: f64,
    /// Monitor power budget in watts (jamming or helping).
    pub p_max_w: f64,
    /// Noise power in watts at every receiver.
    pub n0_w: f64,
    /// Path-loss exponent.
    pub tau: f64,
    /// Relay antenna count N.
    pub n_relay: usize,
    /// Monitor antenna count M.
    pub m_monitor: usize,
}

impl SystemParams {
    pub fn validate(&self) -> std::result::Result<(), String> {
        fn positive(name: &str, v: f64) -> std::result::Result<(), String> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be > 0 (got {v})"))
            }
        }
        positive("ps_w", self.ps_w)?;
        positive("pr_w", self.pr_w)?;
        positive("n0_w", self.n0_w)?;
        if self.p_max_w < 0.0 || !self.p_max_w.is_finite() {
            return Err(format!("p_max_w must be >= 0 (got {})", self.p_max_w));
        }
        if self.tau < 2.0 || !self.tau.is_finite() {
            return Err(format!("tau must be >= 2 (got {})", self.tau));
        }
        if self.n_relay < 1 {
            return Err("n must be >= 1".into());
        }
        if self.m_monitor < 1 {
            return Err("m must be >= 1".into());
        }
        Ok(())
    }
}

/// Link distances in km, in the fixed order source-relay, source-destination,
/// source-monitor, relay-monitor, relay-destination, monitor-destination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkDistances {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
}

fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Euclidean distances of the six links. Co-located endpoints are rejected
/// because a zero distance makes the path-loss model singular.
pub fn distances(topology: &Topology) -> Result<LinkDistances> {
    let pairs = [
        ("S", topology.pos_s, "R", topology.pos_r),
        ("S", topology.pos_s, "D", topology.pos_d),
        ("S", topology.pos_s, "E", topology.pos_e),
        ("R", topology.pos_r, "E", topology.pos_e),
        ("R", topology.pos_r, "D", topology.pos_d),
        ("E", topology.pos_e, "D", topology.pos_d),
    ];
    let mut d = [0.0; 6];
    for (i, (na, pa, nb, pb)) in pairs.iter().enumerate() {
        d[i] = euclid(*pa, *pb);
        if d[i] <= 0.0 {
            return Err(Error::CoLocatedNodes { a: na, b: nb });
        }
    }
    Ok(LinkDistances {
        d1: d[0],
        d2: d[1],
        d3: d[2],
        d4: d[3],
        d5: d[4],
        d6: d[5],
    })
}

/// Large-scale path-loss denominator `d^tau` for a link of length `d_km`.
pub fn path_gain_denominator(d_km: f64, tau: f64) -> f64 {
    d_km.powf(tau)
}

/// One quasi-static draw of the six fading links together with the link
/// distances that generated it.
///
/// `h5` and `h6` are stored as column vectors; wherever the model multiplies
/// the corresponding row vector by a column (`h5 w`, `h6 w`), the code takes
/// the Hermitian inner product of the stored column against that vector.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Source to relay, length N.
    pub h1: CVec,
    /// Source to destination.
    pub h2: Cplx,
    /// Source to monitor, length M.
    pub h3: CVec,
    /// Relay to monitor, M-by-N.
    pub h4: CMat,
    /// Relay to destination, length N.
    pub h5: CVec,
    /// Monitor to destination, length M.
    pub h6: CVec,
    pub dist: LinkDistances,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Per-trial seed: the `trial_index`-th output of a SplitMix64 stream seeded
/// with `master_seed`. O(1), so trials can run in any order.
pub fn derive_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-trial random stream.
#[derive(Debug, Clone)]
pub struct TrialRng {
    inner: ChaCha8Rng,
}

impl TrialRng {
    pub fn from_master(master_seed: u64, trial_index: u64) -> Self {
        TrialRng {
            inner: ChaCha8Rng::seed_from_u64(derive_seed(master_seed, trial_index)),
        }
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in (0, 1], safe as a logarithm argument.
    fn uniform_open_zero(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// One circularly symmetric complex Gaussian sample with zero mean and
    /// unit variance (`E|z|^2 = 1`), via the Box-Muller transform: with
    /// `u1 in (0,1]`, `u2 in [0,1)`,
    /// `z = sqrt(-ln u1) * (cos(2 pi u2) + i sin(2 pi u2))`.
    /// Real and imaginary parts are independent `N(0, 1/2)`.
    pub fn sample_cn01(&mut self) -> Cplx {
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        Cplx::new(r * theta.cos(), r * theta.sin())
    }

    fn sample_cvec(&mut self, n: usize) -> CVec {
        CVec::new((0..n).map(|_| self.sample_cn01()).collect())
    }
}

/// Draw one channel realization. Entries are sampled in the fixed order
/// h1, h2, h3, H4 (row-major), h5, h6 so that seeded runs are reproducible.
pub fn sample_channels(
    params: &SystemParams,
    topology: &Topology,
    rng: &mut TrialRng,
) -> Result<ChannelRealization> {
    let dist = distances(topology)?;
    let n = params.n_relay;
    let m = params.m_monitor;
    let h1 = rng.sample_cvec(n);
    let h2 = rng.sample_cn01();
    let h3 = rng.sample_cvec(m);
    let h4 = CMat::new(m, n, (0..m * n).map(|_| rng.sample_cn01()).collect());
    let h5 = rng.sample_cvec(n);
    let h6 = rng.sample_cvec(m);
    Ok(ChannelRealization {
        h1,
        h2,
        h3,
        h4,
        h5,
        h6,
        dist,
    })
}
