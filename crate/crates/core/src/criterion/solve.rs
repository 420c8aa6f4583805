//! Exact forced deductions on the coefficient system, with replayable certificates.

use serde::Serialize;

use super::{CoefficientSystem, Unknowns};
use crate::poly::upoly::quadratic_roots;
use crate::poly::{Monomial, Poly, UPoly};
use crate::scalar::Scalar;

/// A deduction step, as written to reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Step {
    /// Monomial(s) whose coefficient equations the step uses.
    pub monomial: String,
    /// The equation(s) after substituting all earlier conclusions.
    pub equation: String,
    pub conclusion: String,
    #[serde(skip)]
    pub(crate) kind: StepKind,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum StepKind {
    /// A linear equation solved for one unknown (the value may involve other unknowns).
    Assign { monomial: Monomial, var: usize, value: Poly },
    /// `a u^m = 0` forces `u = 0`.
    Vanish { monomial: Monomial, var: usize },
    /// The equation reduced to a nonzero constant.
    Inconsistent { monomial: Monomial, value: Scalar },
    /// A linear equation forces `u = forced`, while another univariate equation in `u`
    /// does not vanish there.
    Incompatible { linear: Monomial, other: Monomial, var: usize, forced: Scalar, roots: Vec<Scalar>, residual: Scalar },
}

/// Ordered deduction steps ending in a contradiction.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InfeasibilityCert {
    pub steps: Vec<Step>,
}

impl InfeasibilityCert {
    pub fn final_step(&self) -> &Step {
        self.steps.last().expect("certificate has a contradiction step")
    }

    /// The two incompatible values of the final step, when it is a root-set clash.
    pub fn incompatible_values(&self) -> Option<(Scalar, Vec<Scalar>)> {
        match &self.final_step().kind {
            StepKind::Incompatible { forced, roots, .. } => Some((forced.clone(), roots.clone())),
            _ => None,
        }
    }

    /// Monomials used by the final step.
    pub fn final_monomials(&self) -> Vec<Monomial> {
        match &self.final_step().kind {
            StepKind::Incompatible { linear, other, .. } => vec![linear.clone(), other.clone()],
            StepKind::Inconsistent { monomial, .. } => vec![monomial.clone()],
            StepKind::Assign { monomial, .. } | StepKind::Vanish { monomial, .. } => vec![monomial.clone()],
        }
    }
}

/// Assignments after deduction: `subs[u]` expresses unknown `u` in the free unknowns.
#[derive(Clone, Debug)]
pub struct Partial {
    pub subs: Vec<Poly>,
    pub free: Vec<usize>,
    pub residual: Vec<(Monomial, Poly)>,
    pub steps: Vec<Step>,
}

impl Partial {
    /// Full values from values of the free unknowns (`None` entries count as zero).
    pub fn evaluate(&self, free_values: &[(usize, Scalar)]) -> Vec<Scalar> {
        let nu = self.subs.len();
        let mut x = vec![Scalar::zero(); nu];
        for (u, v) in free_values {
            x[*u] = v.clone();
        }
        self.subs.iter().map(|p| p.eval(&x)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Forced {
    /// Every equation is satisfied; unknowns not listed as free are determined.
    Solved(Partial),
    Contradiction(InfeasibilityCert),
    /// Nonlinear equations remain.
    Stuck(Partial),
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum ReplayError {
    #[error("step {0}: monomial not in the system")]
    UnknownMonomial(usize),
    #[error("step {0}: equation does not have the recorded shape")]
    Shape(usize),
    #[error("step {0}: conclusion differs from the recorded one")]
    Conclusion(usize),
    #[error("certificate does not end in a contradiction")]
    NoContradiction,
}

struct State<'a> {
    sys: &'a CoefficientSystem,
    subs: Vec<Poly>,
    steps: Vec<Step>,
}

impl<'a> State<'a> {
    fn new(sys: &'a CoefficientSystem) -> Self {
        let nu = sys.unknowns.count();
        State { sys, subs: (0..nu).map(|u| Poly::var(nu, u)).collect(), steps: Vec::new() }
    }

    fn reduce(&self, p: &Poly) -> Poly {
        p.compose(&self.subs)
    }

    fn current(&self, m: &Monomial) -> Option<Poly> {
        self.sys.equation(m).map(|e| self.reduce(&e.poly))
    }

    fn assign(&mut self, var: usize, value: &Poly) {
        let nu = self.subs.len();
        let mut single: Vec<Poly> = (0..nu).map(|u| Poly::var(nu, u)).collect();
        single[var] = value.clone();
        for s in &mut self.subs {
            *s = s.compose(&single);
        }
    }

    fn names(&self) -> Vec<String> {
        self.sys.unknown_names()
    }

    fn eq_text(&self, p: &Poly) -> String {
        self.sys.format_equation(p)
    }
}

fn univariate_var(p: &Poly) -> Option<usize> {
    match p.support_vars().as_slice() {
        [u] => Some(*u),
        _ => None,
    }
}

/// Solves a linear equation `a u + b = 0` (`a` constant) for `u`.
fn linear_solution(p: &Poly, u: usize) -> Option<Poly> {
    if p.degree_in(u) != 1 {
        return None;
    }
    let cs = p.coefficients_in(u);
    if !cs[1].is_constant() {
        return None;
    }
    let inv = cs[1].constant_term().inv()?;
    Some(cs[0].scale(&-inv))
}

/// Roots of a univariate polynomial (multiplicity dropped), exact up to degree two after
/// removing powers of the variable.
pub(crate) fn univariate_roots(p: &UPoly) -> Vec<Scalar> {
    let c = p.coeffs();
    let m = c.iter().take_while(|x| x.is_zero()).count();
    let rest = UPoly::new(c[m..].to_vec());
    let mut out = Vec::new();
    if m > 0 {
        out.push(Scalar::zero());
    }
    match rest.degree() {
        0 => {}
        1 => out.push(&-rest.coeff(0) / &rest.coeff(1)),
        2 => {
            let [a, b] = quadratic_roots(&rest.coeff(2), &rest.coeff(1), &rest.coeff(0));
            out.push(a.clone());
            if b != a {
                out.push(b);
            }
        }
        _ => out.extend(rest.roots_c64().into_iter().map(Scalar::from_c64)),
    }
    out
}

fn set_text(v: &[Scalar]) -> String {
    let s: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", s.join(", "))
}

/// Runs the exact deduction rules to a fixed point.
pub fn solve_forced(sys: &CoefficientSystem) -> Forced {
    solve_forced_with(sys, &[])
}

/// As [`solve_forced`], after pinning some unknowns to values (used for branching).
pub fn solve_forced_with(sys: &CoefficientSystem, pins: &[(usize, Scalar)]) -> Forced {
    let mut st = State::new(sys);
    let nu = sys.unknowns.count();
    for (u, v) in pins {
        st.assign(*u, &Poly::constant(nu, v.clone()));
    }
    let u = sys.unknowns;
    loop {
        let eqs: Vec<(Monomial, Poly)> = sys
            .equations
            .iter()
            .map(|e| (e.monomial.clone(), st.reduce(&e.poly)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if let Some((m, p)) = eqs.iter().find(|(_, p)| p.is_constant()) {
            let step = inconsistent_step(&st, m, p);
            st.steps.push(step);
            return Forced::Contradiction(InfeasibilityCert { steps: st.steps });
        }
        if let Some(step) = rule_univariate(&st, &eqs, u) {
            apply(&mut st, step);
            continue;
        }
        if let Some(step) = rule_eliminate(&st, &eqs, u) {
            apply(&mut st, step);
            continue;
        }
        match rule_mu(&st, &eqs, u) {
            Some(MuRule::Assign(step)) => {
                apply(&mut st, step);
                continue;
            }
            Some(MuRule::Clash(step)) => {
                st.steps.push(step);
                return Forced::Contradiction(InfeasibilityCert { steps: st.steps });
            }
            None => {}
        }
        let free = (0..nu).filter(|&x| st.subs[x] == Poly::var(nu, x)).collect();
        let partial = Partial { subs: st.subs, free, residual: eqs, steps: st.steps };
        return if partial.residual.is_empty() { Forced::Solved(partial) } else { Forced::Stuck(partial) };
    }
}

fn apply(st: &mut State, step: Step) {
    match &step.kind {
        StepKind::Assign { var, value, .. } => st.assign(*var, &value.clone()),
        StepKind::Vanish { var, .. } => {
            let nu = st.subs.len();
            st.assign(*var, &Poly::zero(nu));
        }
        _ => unreachable!("only assignments are applied"),
    }
    st.steps.push(step);
}

fn assign_step(st: &State, m: &Monomial, p: &Poly, var: usize, value: Poly) -> Step {
    let names = st.names();
    Step {
        monomial: st.sys.format_monomial(m),
        equation: st.eq_text(p),
        conclusion: format!("{} = {}", names[var], value.format(&names)),
        kind: StepKind::Assign { monomial: m.clone(), var, value },
    }
}

fn vanish_step(st: &State, m: &Monomial, p: &Poly, var: usize) -> Step {
    Step {
        monomial: st.sys.format_monomial(m),
        equation: st.eq_text(p),
        conclusion: format!("{} = 0", st.names()[var]),
        kind: StepKind::Vanish { monomial: m.clone(), var },
    }
}

fn inconsistent_step(st: &State, m: &Monomial, p: &Poly) -> Step {
    let value = p.constant_term();
    Step {
        monomial: st.sys.format_monomial(m),
        equation: st.eq_text(p),
        conclusion: format!("contradiction: {value} = 0"),
        kind: StepKind::Inconsistent { monomial: m.clone(), value },
    }
}

fn clash_step(
    st: &State,
    linear: (&Monomial, &Poly),
    other: (&Monomial, &Poly),
    var: usize,
    forced: Scalar,
    residual: Scalar,
) -> Step {
    let names = st.names();
    let roots = univariate_roots(&other.1.to_upoly(var).expect("univariate"));
    Step {
        monomial: format!("{}; {}", st.sys.format_monomial(linear.0), st.sys.format_monomial(other.0)),
        equation: format!("{}; {}", st.eq_text(linear.1), st.eq_text(other.1)),
        conclusion: format!(
            "contradiction: {v} = {forced} from the first, but {v} in {} from the second ({} there)",
            set_text(&roots),
            residual,
            v = names[var]
        ),
        kind: StepKind::Incompatible { linear: linear.0.clone(), other: other.0.clone(), var, forced, roots, residual },
    }
}

/// Univariate equations: monomial ones force zero; linear ones in `lambda` or `c` are solved.
fn rule_univariate(st: &State, eqs: &[(Monomial, Poly)], u: Unknowns) -> Option<Step> {
    for (m, p) in eqs {
        let Some(var) = univariate_var(p) else { continue };
        if p.len() == 1 {
            return Some(vanish_step(st, m, p, var));
        }
        if !u.is_mu(var) {
            if let Some(v) = linear_solution(p, var) {
                return Some(assign_step(st, m, p, var, v));
            }
        }
    }
    None
}

/// Eliminates a `lambda` or `c` occurring linearly with a constant coefficient.
fn rule_eliminate(st: &State, eqs: &[(Monomial, Poly)], u: Unknowns) -> Option<Step> {
    for (m, p) in eqs {
        for var in p.support_vars() {
            if u.is_mu(var) {
                continue;
            }
            if let Some(v) = linear_solution(p, var) {
                return Some(assign_step(st, m, p, var, v));
            }
        }
    }
    None
}

enum MuRule {
    Assign(Step),
    Clash(Step),
}

/// Univariate equations in one `mu`: a linear one forces the value after every other
/// univariate equation in the same unknown is checked to vanish there.
fn rule_mu(st: &State, eqs: &[(Monomial, Poly)], u: Unknowns) -> Option<MuRule> {
    for var in (0..u.n).map(|j| u.mu(j)) {
        let group: Vec<&(Monomial, Poly)> = eqs.iter().filter(|(_, p)| univariate_var(p) == Some(var)).collect();
        let Some((lm, lp, value)) =
            group.iter().find_map(|(m, p)| linear_solution(p, var).map(|v| (m, p, v.constant_term())))
        else {
            continue;
        };
        for (om, op) in &group {
            if om == lm {
                continue;
            }
            let residual = op.substitute(var, &value).constant_term();
            if !residual.is_zero() {
                let step = clash_step(st, (lm, lp), (om, op), var, value, residual);
                return Some(MuRule::Clash(step));
            }
        }
        let nu = st.subs.len();
        return Some(MuRule::Assign(assign_step(st, lm, lp, var, Poly::constant(nu, value))));
    }
    None
}

/// Re-derives every step of a certificate from the coefficient system; the recorded text of
/// each step must match the regenerated one.
pub fn replay(sys: &CoefficientSystem, cert: &InfeasibilityCert) -> Result<(), ReplayError> {
    let mut st = State::new(sys);
    let nu = sys.unknowns.count();
    for (i, step) in cert.steps.iter().enumerate() {
        let last = i + 1 == cert.steps.len();
        let expected = match &step.kind {
            StepKind::Assign { monomial, var, value } => {
                let p = st.current(monomial).ok_or(ReplayError::UnknownMonomial(i))?;
                let v = linear_solution(&p, *var).ok_or(ReplayError::Shape(i))?;
                if &v != value {
                    return Err(ReplayError::Conclusion(i));
                }
                assign_step(&st, monomial, &p, *var, v)
            }
            StepKind::Vanish { monomial, var } => {
                let p = st.current(monomial).ok_or(ReplayError::UnknownMonomial(i))?;
                if p.len() != 1 || univariate_var(&p) != Some(*var) {
                    return Err(ReplayError::Shape(i));
                }
                vanish_step(&st, monomial, &p, *var)
            }
            StepKind::Inconsistent { monomial, .. } => {
                let p = st.current(monomial).ok_or(ReplayError::UnknownMonomial(i))?;
                if !p.is_constant() || p.is_zero() {
                    return Err(ReplayError::Shape(i));
                }
                inconsistent_step(&st, monomial, &p)
            }
            StepKind::Incompatible { linear, other, var, .. } => {
                let a = st.current(linear).ok_or(ReplayError::UnknownMonomial(i))?;
                let b = st.current(other).ok_or(ReplayError::UnknownMonomial(i))?;
                if univariate_var(&a) != Some(*var) || univariate_var(&b) != Some(*var) {
                    return Err(ReplayError::Shape(i));
                }
                let v = linear_solution(&a, *var).ok_or(ReplayError::Shape(i))?.constant_term();
                let r = b.substitute(*var, &v).constant_term();
                if r.is_zero() {
                    return Err(ReplayError::Conclusion(i));
                }
                clash_step(&st, (linear, &a), (other, &b), *var, v, r)
            }
        };
        let same = expected.kind == step.kind
            && expected.monomial == step.monomial
            && expected.equation == step.equation
            && expected.conclusion == step.conclusion;
        if !same {
            return Err(ReplayError::Conclusion(i));
        }
        match &expected.kind {
            StepKind::Assign { var, value, .. } => st.assign(*var, value),
            StepKind::Vanish { var, .. } => st.assign(*var, &Poly::zero(nu)),
            _ => return if last { Ok(()) } else { Err(ReplayError::NoContradiction) },
        }
    }
    Err(ReplayError::NoContradiction)
}
