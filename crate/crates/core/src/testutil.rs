//! Shared helpers for unit tests.

use crate::channel::{ChannelRealization, LinkDistances, SystemParams};
use crate::linalg::{CMat, CVec, Cplx};

pub fn unit_distances() -> LinkDistances {
    LinkDistances {
        d1: 1.0,
        d2: 1.0,
        d3: 1.0,
        d4: 1.0,
        d5: 1.0,
        d6: 1.0,
    }
}

pub fn scalar_params() -> SystemParams {
    SystemParams {
        ps_w: 1.0,
        pr_w: 1.0,
        p_max_w: 1.0,
        n0_w: 1.0,
        tau: 3.0,
        n_relay: 1,
        m_monitor: 1,
    }
}

/// N = M = 1 realization with plain real gains and unit distances.
pub fn scalar_channel(h1: f64, h2: f64, h3: f64, h4: f64, h5: f64, h6: f64) -> ChannelRealization {
    ChannelRealization {
        h1: CVec::from_reals(&[h1]),
        h2: Cplx::new(h2, 0.0),
        h3: CVec::from_reals(&[h3]),
        h4: CMat::new(1, 1, vec![Cplx::new(h4, 0.0)]),
        h5: CVec::from_reals(&[h5]),
        h6: CVec::from_reals(&[h6]),
        dist: unit_distances(),
    }
}
