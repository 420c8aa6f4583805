//! The decision procedure and the construction of the polynomial representative.

use super::search::search_from;
use super::{coefficient_system, solve_forced, CriterionError, Forced, InfeasibilityCert, SearchConfig, SearchOutcome};
use super::{WitnessPair, WitnessSource};
use crate::autgroup::{hyperplane_to_infinity, IndefUnitary};
use crate::hermitian::{check_proper, Properness};
use crate::poly::{Monomial, Poly};
use crate::projective::{cayley_hyperplane, Direction, Hyperplane, Model};
use crate::ratmap::{conjugate_by_autos, ProjMap, RationalMap};

#[derive(Clone, Debug)]
pub enum Decision {
    Equivalent {
        witness: WitnessPair,
        source: WitnessSource,
        residual: f64,
        representative: Option<Box<Representative>>,
    },
    NotEquivalent {
        certificate: InfeasibilityCert,
    },
    /// The search did not settle the question; `residual_system` lists the coefficient
    /// equations left after the forced deductions.
    Unknown {
        reason: String,
        feasible: bool,
        starts: usize,
        residual_system: Vec<String>,
    },
}

impl Decision {
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Equivalent { .. } => "equivalent",
            Decision::NotEquivalent { .. } => "not_equivalent",
            Decision::Unknown { .. } => "unknown",
        }
    }
}

/// A polynomial map `G = tau o F o sigma^{-1}` in the ball model.
#[derive(Clone, Debug)]
pub struct Representative {
    /// Sends the ball-model `H` to `t = 0`.
    pub sigma: IndefUnitary,
    /// Sends the ball-model `H'` to `t' = 0`.
    pub tau: IndefUnitary,
    pub h_ball: Hyperplane,
    pub h_prime_ball: Hyperplane,
    /// The input map in the ball model, projectivized.
    pub ball_map: ProjMap,
    pub g_hat: ProjMap,
    /// Dehomogenized `G`, with constant denominator.
    pub g: RationalMap,
    pub exact: bool,
}

/// Builds `G` from a witness and verifies that its last component is `c t^k` and that
/// `tau^{-1} o G o sigma` gives back the input.
pub fn polynomial_representative(f: &RationalMap, w: &WitnessPair, tol: f64) -> Result<Representative, CriterionError> {
    if f.model() != w.model() {
        return Err(CriterionError::WrongModel(f.model()));
    }
    let (fb, h, hp) = match f.model() {
        Model::Ball => (f.clone(), w.h().clone(), w.h_prime().clone()),
        Model::Siegel => (
            f.cayley_transport()?,
            cayley_hyperplane(w.h(), Direction::SiegelToBall),
            cayley_hyperplane(w.h_prime(), Direction::SiegelToBall),
        ),
    };
    let ball_map = fb.projectivize();
    let sigma = hyperplane_to_infinity(&h)?;
    let tau = hyperplane_to_infinity(&hp)?;
    let g_hat = conjugate_by_autos(&tau, &ball_map, &sigma.invert())?;
    let exact = g_hat.is_exact() && sigma.is_exact() && tau.is_exact();
    let n = f.n();
    let k = g_hat.degree();
    let mut tk = vec![0; n + 1];
    tk[n] = k;
    let tk = Monomial(tk);
    let last = g_hat.last();
    let lead = last.coeff(&tk);
    let rest = last.sub(&Poly::term(tk.clone(), lead.clone()));
    let polynomial =
        if exact { rest.is_zero() && !lead.is_zero() } else { rest.max_abs_coeff() <= tol * lead.to_c64().norm() };
    if !polynomial {
        return Err(CriterionError::Verification("last component of the conjugated map is not c t^k".into()));
    }
    let back = conjugate_by_autos(&tau.invert(), &g_hat, &sigma)?;
    let same = if exact { back.proj_equal(&ball_map) } else { back.proj_distance(&ball_map) <= tol.sqrt() };
    if !same {
        return Err(CriterionError::Verification("conjugating back does not recover the input map".into()));
    }
    let numerators = g_hat.comps()[..g_hat.big_n()].iter().map(Poly::dehomogenize).collect();
    let g = RationalMap::new(numerators, Poly::constant(n, lead), Model::Ball)?.normalized();
    Ok(Representative { sigma, tau, h_ball: h, h_prime_ball: hp, ball_map, g_hat, g, exact })
}

/// Decides whether a proper rational map is equivalent to a polynomial map.
pub fn decide_polynomial_equivalence(f: &RationalMap, cfg: &SearchConfig) -> Result<Decision, CriterionError> {
    let report = check_proper(f, 64, cfg.seed);
    if report.verdict != Properness::Proper {
        return Err(CriterionError::Improper(format!("{:?}", report.verdict)));
    }
    let fh = f.projectivize();
    let sys = coefficient_system(&fh, f.model());
    let forced = solve_forced(&sys);
    if let Forced::Contradiction(certificate) = forced {
        return Ok(Decision::NotEquivalent { certificate });
    }
    match search_from(&sys, &fh, &forced, cfg) {
        SearchOutcome::Found { witness, source, residual } => {
            let representative = match polynomial_representative(f, &witness, cfg.tolerance) {
                Ok(r) => Some(Box::new(r)),
                Err(e) => {
                    log::warn!("witness found but the polynomial representative failed: {e}");
                    None
                }
            };
            Ok(Decision::Equivalent { witness, source, residual, representative })
        }
        SearchOutcome::NotFound { feasible, reason, starts } => {
            let residual_system = match &forced {
                Forced::Stuck(p) | Forced::Solved(p) => p
                    .residual
                    .iter()
                    .map(|(m, q)| format!("[{}] {}", sys.format_monomial(m), sys.format_equation(q)))
                    .collect(),
                Forced::Contradiction(_) => unreachable!(),
            };
            Ok(Decision::Unknown { reason, feasible, starts, residual_system })
        }
    }
}
