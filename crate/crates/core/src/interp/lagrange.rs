use super::weight::gamma_normalized;
use super::InterpConfig;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `2P+1` nonuniform samples at `τ_p = pT + η_p`, `|η_p| < T/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet<R> {
    semi_period: R,
    tau: Vec<R>,
    values: Vec<R>,
}

impl<R: Real> NodeSet<R> {
    pub fn new(semi_period: R, tau: Vec<R>, values: Vec<R>) -> Result<Self> {
        if !(semi_period > R::zero()) {
            return Err(Error::invalid("semi-period must be positive"));
        }
        if tau.len() != values.len() {
            return Err(Error::invalid("node and value counts differ"));
        }
        if tau.len() % 2 == 0 {
            return Err(Error::invalid("node count must be odd (2P+1)"));
        }
        let half_window = (tau.len() / 2) as i64;
        let half = semi_period / R::lit(2.0);
        for (i, &t) in tau.iter().enumerate() {
            let p = i as i64 - half_window;
            let eta = t - R::from_int(p) * semi_period;
            if !(eta.abs() < half) {
                return Err(Error::invalid(format!(
                    "node {p} deviates by {eta}, not strictly inside ±T/2"
                )));
            }
        }
        if let Some(i) = tau.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(format!(
                "nodes {} and {} are duplicated or out of order",
                i as i64 - half_window,
                i as i64 + 1 - half_window
            )));
        }
        Ok(NodeSet {
            semi_period,
            tau,
            values,
        })
    }

    /// Nodes `pT + η_p` from the deviations `η_p`.
    pub fn from_shifts(semi_period: R, shifts: &[R], values: Vec<R>) -> Result<Self> {
        let half_window = (shifts.len() / 2) as i64;
        let tau = shifts
            .iter()
            .enumerate()
            .map(|(i, &eta)| R::from_int(i as i64 - half_window) * semi_period + eta)
            .collect();
        Self::new(semi_period, tau, values)
    }

    pub fn half_window(&self) -> usize {
        self.tau.len() / 2
    }

    pub fn semi_period(&self) -> R {
        self.semi_period
    }

    pub fn tau(&self) -> &[R] {
        &self.tau
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }
}

/// Lagrange interpolation of `z·weight`, divided by `weight(t)`.
///
/// Cardinal functions are evaluated in product form
/// `ℓ_p(t) = ∏_{q≠p} (t - τ_q)/(τ_p - τ_q)`, so every intermediate factor
/// stays of order one. With `weight ≡ 1` this is classical Lagrange
/// interpolation.
pub fn lagrange_weighted<R: Real>(
    nodes: &NodeSet<R>,
    t: R,
    weight: impl Fn(R) -> Result<R>,
) -> Result<R> {
    let tau = nodes.tau();
    if let Some(p) = tau.iter().position(|&x| x == t) {
        return Ok(nodes.values()[p]);
    }
    let mut acc = R::zero();
    for (p, (&tp, &zp)) in tau.iter().zip(nodes.values()).enumerate() {
        let cardinal = tau
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != p)
            .fold(R::one(), |acc, (_, &tq)| acc * (t - tq) / (tp - tq));
        acc = acc + zp * weight(tp)? * cardinal;
    }
    Ok(acc / weight(t)?)
}

/// Weighted nonuniform Lagrange interpolator using the weight function
/// [`gamma`](super::gamma) of `config`. The node set must have
/// `2·config.half_window() + 1` nodes.
pub fn lagrange_nonuniform<R: Real>(nodes: &NodeSet<R>, config: &InterpConfig<R>, t: R) -> Result<R> {
    if nodes.half_window() != config.half_window() {
        return Err(Error::invalid(format!(
            "node set has P = {} but config has P = {}",
            nodes.half_window(),
            config.half_window()
        )));
    }
    if (nodes.semi_period() - config.semi_period()).abs() > config.semi_period() * R::tol(1e-12) {
        return Err(Error::invalid("node set and config disagree on T"));
    }
    let t_s = config.semi_period();
    // γ's absolute scale cancels in the ratio γ(τ_p)/γ(t)
    lagrange_weighted(nodes, t, |x| gamma_normalized(x / t_s, config))
}
