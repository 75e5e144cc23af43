//! The two groupoid models over the tight spectrum and the isomorphism
//! between them.
//!
//! `GElement` is the transformation groupoid of the partial action;
//! `GammaElement` records shift-equivalence with an integer lag.

use crate::error::{Error, Result};
use crate::lspace::LabelledSpace;
use crate::paction::{apply, elements_acting_on, in_domain, multiply, GroupElement};
use crate::tight::{lcm, shift, FilterBody, TightFilter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElement {
    pub xi: TightFilter,
    pub t: GroupElement,
    pub eta: TightFilter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElement {
    pub xi: TightFilter,
    pub cocycle: i64,
    pub eta: TightFilter,
}

impl GElement {
    pub fn unit(xi: &TightFilter) -> Self {
        Self { xi: xi.clone(), t: GroupElement::Identity, eta: xi.clone() }
    }

    /// `η ∈ V_{t⁻¹}` and `ξ = φ_t(η)`.
    pub fn is_element(&self, space: &LabelledSpace) -> bool {
        in_domain(space, &self.eta, &self.t) && apply(space, &self.t, &self.eta).is_ok_and(|x| x == self.xi)
    }

    pub fn compose(&self, space: &LabelledSpace, other: &GElement) -> Result<GElement> {
        if self.eta != other.xi {
            return Err(Error::Domain("elements are not composable".into()));
        }
        let g = GElement { xi: self.xi.clone(), t: multiply(space, &self.t, &other.t)?, eta: other.eta.clone() };
        if !g.is_element(space) {
            return Err(Error::Domain("product fails the defining condition".into()));
        }
        Ok(g)
    }

    pub fn invert(&self) -> GElement {
        GElement { xi: self.eta.clone(), t: self.t.inverse(), eta: self.xi.clone() }
    }
}

impl GammaElement {
    pub fn unit(xi: &TightFilter) -> Self {
        Self { xi: xi.clone(), cocycle: 0, eta: xi.clone() }
    }

    /// Shift lags `(k, l)` with `k − l = cocycle` and `σᵏ(ξ) = σˡ(η)`.
    pub fn decomposition(&self) -> Option<(usize, usize)> {
        let bound = shift_search_bound(&self.xi, &self.eta) + self.cocycle.unsigned_abs() as usize;
        for k in 0..=bound {
            let l = k as i64 - self.cocycle;
            if l < 0 {
                continue;
            }
            let (Ok(a), Ok(b)) = (shift(&self.xi, k), shift(&self.eta, l as usize)) else { continue };
            if a == b {
                return Some((k, l as usize));
            }
        }
        None
    }

    pub fn is_element(&self) -> bool {
        self.decomposition().is_some()
    }

    pub fn compose(&self, other: &GammaElement) -> Result<GammaElement> {
        if self.eta != other.xi {
            return Err(Error::Domain("elements are not composable".into()));
        }
        Ok(GammaElement { xi: self.xi.clone(), cocycle: self.cocycle + other.cocycle, eta: other.eta.clone() })
    }

    pub fn invert(&self) -> GammaElement {
        GammaElement { xi: self.eta.clone(), cocycle: -self.cocycle, eta: self.xi.clone() }
    }
}

/// A smallest lag pair, if any, lies below this bound: past both prefixes
/// both lags can drop by a common period.
fn shift_search_bound(xi: &TightFilter, eta: &TightFilter) -> usize {
    let size = |f: &TightFilter| match f.body() {
        FilterBody::Finite(p) => (p.len(), 1),
        FilterBody::Infinite { prefix, period } => (prefix.len(), period.len()),
    };
    let ((p1, q1), (p2, q2)) = (size(xi), size(eta));
    p1 + p2 + lcm(q1, q2) + 1
}

/// `Θ(ξ, αβ⁻¹, η) = (ξ, |α| − |β|, η)`.
pub fn theta(g: &GElement) -> Result<GammaElement> {
    let cocycle = g.t.degree().ok_or_else(|| Error::Domain("empty-domain group element".into()))?;
    Ok(GammaElement { xi: g.xi.clone(), cocycle, eta: g.eta.clone() })
}

/// All `(φ_t(η), t, η)` with `η` in `filters` and `|t| ≤ max_len`.
pub fn enumerate_elements(space: &LabelledSpace, filters: &[TightFilter], max_len: usize) -> Vec<GElement> {
    let mut out = Vec::new();
    for eta in filters {
        for t in elements_acting_on(space, eta, max_len) {
            if let Ok(xi) = apply(space, &t, eta) {
                out.push(GElement { xi, t, eta: eta.clone() });
            }
        }
    }
    out
}
