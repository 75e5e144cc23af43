//! Simplicity of a subshift: hyper cofinality together with condition (L),
//! reported next to the weaker past-equivalence criterion.

use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::simp::condition_lb;

use super::bridge::Truncation;
use super::dynamics::{
    cofinal_in_past_equivalence_bounded, no_isolated_cyclic_point_bounded, oracle_cost,
    oracle_hyper_cofinal, sft_condition_l, sft_hyper_cofinal, sft_isolated_cyclic_point, BoundedReport,
    ConditionL, Cost, HyperCofinal,
};
use super::{counterexample_shift, fmt_letters, Decision, OracleShift, Subshift};

/// Depth of the bounded past-equivalence checks.
pub const NAIVE_DEPTH: usize = 4;

#[derive(Debug, Clone)]
pub struct ShiftVerdict {
    pub mode: &'static str,
    pub hyper_cofinal: HyperCofinal,
    pub condition_l: ConditionL,
    /// Condition (L_B) of the block-length truncation, when it fits.
    pub condition_lb_truncation: Option<bool>,
    pub cofinal_in_past_equivalence: BoundedReport,
    pub no_isolated_cyclic_point: bool,
    /// Cofinal in past equivalence and no cyclic point isolated in past
    /// equivalence, both at bounded depth.
    pub naive_criterion: bool,
    pub simple: Decision,
}

pub fn shift_simplicity(shift: &Subshift, depth: usize) -> Result<ShiftVerdict> {
    let system = shift.system();
    let cofinal = cofinal_in_past_equivalence_bounded(system, depth);
    let (mode, hyper, cond_l, lb, no_isolated) = match shift {
        Subshift::Sft(sft) => {
            let lb = Truncation::new(sft, sft.block_len()).ok().map(|t| condition_lb(t.space()));
            ("sft", sft_hyper_cofinal(sft), sft_condition_l(sft), lb, sft_isolated_cyclic_point(sft).is_none())
        }
        Subshift::Oracle(oracle) => {
            let unknown = ConditionL { decision: Decision::Unknown, witness: None };
            let no_isolated = no_isolated_cyclic_point_bounded(system, depth).holds;
            ("oracle", oracle_hyper_cofinal(oracle), unknown, None, no_isolated)
        }
    };
    let simple = hyper.decision.and(cond_l.decision);
    Ok(ShiftVerdict {
        mode,
        naive_criterion: cofinal.holds && no_isolated,
        hyper_cofinal: hyper,
        condition_l: cond_l,
        condition_lb_truncation: lb,
        cofinal_in_past_equivalence: cofinal,
        no_isolated_cyclic_point: no_isolated,
        simple,
    })
}

impl ShiftVerdict {
    pub fn to_json(&self, alphabet: &[char]) -> Value {
        let word = |w: &[u8]| fmt_letters(alphabet, w);
        json!({
            "mode": self.mode,
            "hyper_cofinal": self.hyper_cofinal.decision.to_json(),
            "hyper_cofinal_sup_cost": self.hyper_cofinal.sup_cost,
            "hyper_cofinal_witness": self.hyper_cofinal.witness.as_ref().map(|w| w.to_json(alphabet)),
            "condition_L": self.condition_l.decision.to_json(),
            "condition_L_witness": self.condition_l.witness.as_ref().map(|w| json!({
                "gamma": word(&w.circuit),
                "P": w.past.iter().map(|p| word(p)).collect::<Vec<_>>(),
            })),
            "condition_LB_truncation": self.condition_lb_truncation,
            "cofinal_in_past_equivalence_bounded": self.cofinal_in_past_equivalence.holds,
            "no_isolated_cyclic_point": self.no_isolated_cyclic_point,
            "naive_criterion": self.naive_criterion,
            "simple": self.simple.to_json(),
        })
    }
}

/// `P = {c}` costs of the doubling family `a^{3·2ⁿ} b^∞` next to the
/// verdicts of the built-in counterexample shift.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub costs: Vec<(usize, Cost)>,
    pub simple: Decision,
    pub naive_criterion: bool,
}

pub fn counterexample_costs(shift: &OracleShift, max_n: usize) -> Result<Vec<(usize, Cost)>> {
    let (a, b, c) = (0, 1, 2);
    (0..=max_n)
        .map(|n| {
            let x = super::Point::new(vec![a; 3 << n], vec![b])?;
            Ok((n, oracle_cost(shift, &[vec![c]], &x, shift.horizon())?))
        })
        .collect()
}

pub fn counterexample_report(max_n: usize, horizon: usize) -> Result<CounterexampleReport> {
    let shift = counterexample_shift(horizon);
    let costs = counterexample_costs(&shift, max_n)?;
    let verdict = shift_simplicity(&Subshift::Oracle(shift), NAIVE_DEPTH)?;
    Ok(CounterexampleReport { costs, simple: verdict.simple, naive_criterion: verdict.naive_criterion })
}

impl CounterexampleReport {
    pub fn to_json(&self) -> Value {
        let costs: Map<String, Value> = self.costs.iter().map(|(n, c)| (n.to_string(), c.to_json())).collect();
        json!({
            "costs": costs,
            "simple": self.simple.to_json(),
            "naive_criterion": self.naive_criterion,
        })
    }

    /// Every cost is a finite number.
    pub fn resolved(&self) -> bool {
        self.costs.iter().all(|(_, c)| c.finite().is_some())
    }
}
