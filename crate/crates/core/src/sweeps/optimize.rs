//! Interrogation-time optimisation: dense grid, then golden-section
//! refinement around the best cell.

use crate::error::{Error, Result};
use crate::metrology::{sensitivity, Derivative, Scheme, SensitivityResult, TimingBudget};
use crate::protocol::ProtocolParams;

/// Settings for [`optimize_tau`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSearch {
    /// Exclusive lower end of the range (us).
    pub lo: f64,
    /// Upper end (us); at most 5 T2*.
    pub hi: f64,
    /// Minimum number of grid points.
    pub min_points: usize,
    /// Largest grid spacing (us); the grid is refined to honour it.
    pub max_spacing: f64,
    /// Golden-section passes.
    pub refinements: usize,
    /// Grid points with a lower success probability are skipped.
    pub ps_floor: f64,
}

impl Default for TauSearch {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: 5.0,
            min_points: 400,
            max_spacing: 0.01,
            refinements: 2,
            ps_floor: 1e-3,
        }
    }
}

impl TauSearch {
    /// (0, 5 T2*] for finite T2*, (0, 5] us otherwise.
    pub fn for_t2_star(t2_star: f64) -> Self {
        let hi = if t2_star.is_finite() {
            5.0 * t2_star
        } else {
            5.0
        };
        Self {
            hi,
            ..Self::default()
        }
    }

    pub fn validate(&self, t2_star: f64) -> Result<()> {
        if !(self.lo >= 0.0 && self.hi > self.lo && self.hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "empty tau range ({}, {}]",
                self.lo, self.hi
            )));
        }
        if self.hi > 5.0 * t2_star * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "tau range max {} exceeds 5 T2* = {}",
                self.hi,
                5.0 * t2_star
            )));
        }
        if self.min_points < 2 || !(self.max_spacing > 0.0) {
            return Err(Error::InvalidParameter(
                "tau grid needs >= 2 points and spacing > 0".into(),
            ));
        }
        Ok(())
    }

    /// Grid points, all strictly inside (lo, hi] .
    pub fn grid(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let n = self
            .min_points
            .max((span / self.max_spacing).ceil() as usize);
        (1..=n)
            .map(|k| self.lo + span * k as f64 / n as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauOptimum {
    pub tau: f64,
    pub eta: f64,
    pub result: SensitivityResult,
}

/// eta at one tau, or None where the point is inadmissible.
fn eta_at(
    params: &ProtocolParams,
    timing: &TimingBudget,
    scheme: Scheme,
    ps_floor: f64,
    tau: f64,
) -> Option<SensitivityResult> {
    let q = params.with_tau(tau);
    let r = sensitivity(&q, timing, scheme, Derivative::Analytic).ok()?;
    if scheme == Scheme::PostSelection && r.success_probability < ps_floor {
        return None;
    }
    r.eta.is_finite().then_some(r)
}

/// tau minimising eta over the search range.
pub fn optimize_tau(
    params: &ProtocolParams,
    timing: &TimingBudget,
    scheme: Scheme,
    search: &TauSearch,
) -> Result<TauOptimum> {
    params.validate()?;
    timing.validate()?;
    search.validate(params.t2_star)?;
    let grid = search.grid();
    let eval = |tau: f64| eta_at(params, timing, scheme, search.ps_floor, tau);

    let mut best: Option<(usize, SensitivityResult)> = None;
    for (k, &tau) in grid.iter().enumerate() {
        if let Some(r) = eval(tau) {
            if best.is_none_or(|(_, b)| r.eta < b.eta) {
                best = Some((k, r));
            }
        }
    }
    let Some((k, mut best_r)) = best else {
        return Err(Error::NoAdmissibleTau(search.lo, search.hi));
    };

    let spacing = grid.get(1).map_or(search.hi - search.lo, |g1| g1 - grid[0]);
    let mut half_width = spacing;
    let mut centre = grid[k];
    for _ in 0..search.refinements {
        let a = (centre - half_width).max(search.lo);
        let b = (centre + half_width).min(search.hi);
        if let Some(r) = golden_section(&eval, a, b) {
            if r.eta < best_r.eta {
                best_r = r;
            }
        }
        centre = best_r.tau;
        half_width /= 10.0;
    }
    Ok(TauOptimum {
        tau: best_r.tau,
        eta: best_r.eta,
        result: best_r,
    })
}

/// Golden-section minimisation of eta on [a, b]; inadmissible points count
/// as +infinity.
fn golden_section<F>(eval: &F, mut a: f64, mut b: f64) -> Option<SensitivityResult>
where
    F: Fn(f64) -> Option<SensitivityResult>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let score = |r: &Option<SensitivityResult>| r.map_or(f64::INFINITY, |r| r.eta);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..80 {
        if (b - a) < 1e-12 * b.abs().max(1.0) {
            break;
        }
        if score(&fc) < score(&fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    if score(&fc) < score(&fd) {
        fc
    } else {
        fd
    }
}
