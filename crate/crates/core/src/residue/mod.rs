//! The iterated residue Res^tau on the meromorphic function class, with an
//! exact symbolic path (series towers) and an independent numeric
//! nested-contour oracle.
//!
//! Convention: for an ordered basis tau = (alpha_{i_1}, ..., alpha_{i_r})
//! with variables Z_j = alpha_{i_j}(X), the composition
//! Res_{Z_1=0} ... Res_{Z_r=0} is applied innermost-last-variable-first:
//! Z_r first, then Z_{r-1}, ..., Z_1 last, in the regime
//! |Z_r| << ... << |Z_1|. The diagonality certificate of the arrangement
//! module pins this convention operationally.

mod mero;

pub use mero::{MeroFunction, MeroTerm, Poly};

use crate::laurent::SeriesTower;
use crate::numkernel::{ExactScalar, LinearForm, MatQ};
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::Zero;

/// Truncation policy for the exact path: start the caps at
/// (total pole order) + 2, raise by `cap_step` until two successive values
/// agree, give up at `cap_max`.
#[derive(Clone, Debug)]
pub struct ResOptions {
    pub cap_step: i64,
    pub cap_max: i64,
}

impl Default for ResOptions {
    fn default() -> Self {
        ResOptions {
            cap_step: 4,
            cap_max: 64,
        }
    }
}

/// Parameters of the numeric contour oracle: circles |Z_k| =
/// radii_base * ratio^{k-1} (innermost smallest), trapezoid nodes doubling
/// from `nodes0` until the estimate moves less than `tol`.
#[derive(Clone, Debug)]
pub struct NumericParams {
    pub radii_base: f64,
    pub ratio: f64,
    pub nodes0: usize,
    pub node_cap: usize,
    pub tol: f64,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            radii_base: 1e-1,
            ratio: 1e-2,
            nodes0: 32,
            node_cap: 1 << 13,
            tol: 1e-10,
        }
    }
}

/// The exact change of variables X -> Z with Z_j = tau_j(X): returns the
/// matrix M with Y = M Z (rows of M express each Y_i in the Z variables).
fn change_of_variables(tau: &[LinearForm], rank: usize) -> Result<MatQ> {
    if tau.len() != rank {
        return Err(Error::precondition(format!(
            "ordered basis has {} forms for rank {}",
            tau.len(),
            rank
        )));
    }
    let t = MatQ::from_rows(tau.iter().map(|f| f.coeffs().to_vec()).collect());
    t.inverse()
        .ok_or_else(|| Error::computation("singular change of variables: tau is not a basis"))
}

/// Transport a term into Z-coordinates (Y = m_inv * Z).
fn term_in_z(term: &MeroTerm, m_inv: &MatQ) -> MeroTerm {
    term.transport(m_inv)
}

/// Expand one Z-coordinate term as a series tower with per-variable caps.
/// The polynomial numerator is exact and stays untruncated; only the
/// expansion factors carry the caps.
fn term_tower(term: &MeroTerm, caps: &[i64]) -> Result<SeriesTower> {
    let mut acc = term.numerator.to_tower();
    if !term.exp_form.is_zero() {
        acc = acc.mul(&SeriesTower::exp_linear(&term.exp_form, caps)?)?;
    }
    for (f, k) in &term.linear_denoms {
        let inv = SeriesTower::inv_linear_form(f, caps)?;
        acc = acc.mul(&inv.pow(*k)?)?;
    }
    for f in &term.expden_factors {
        acc = acc.mul(&SeriesTower::inv_one_minus_exp(f, caps)?)?;
    }
    Ok(acc)
}

/// Expand at the given caps, adaptively widening any variable whose product
/// window fails to cover its Z^{-1} coefficient (geometric tails deepen the
/// floors of the outer variables, which shrinks the product window there).
fn term_residue_at_caps(
    term: &MeroTerm,
    caps: &mut [i64],
    cap_limit: i64,
) -> Result<ExactScalar> {
    loop {
        let tower = term_tower(term, caps)?;
        let mut bumped = false;
        for k in 0..term.rank() {
            let w = tower.caps()[k];
            if w < -1 {
                caps[k] += -1 - w;
                if caps[k] > cap_limit {
                    return Err(Error::computation(format!(
                        "required truncation cap for Z{} exceeds the configured maximum {}",
                        k + 1,
                        cap_limit
                    )));
                }
                bumped = true;
            }
        }
        if !bumped {
            return tower.residue_coeff();
        }
    }
}

/// Iterated residue of one Z-coordinate term with cap stabilization: the
/// result must be unchanged when every cap is raised by `cap_step`.
fn term_residue(term: &MeroTerm, opts: &ResOptions) -> Result<ExactScalar> {
    let base = term.pole_order() + 2;
    let cap_limit = base + opts.cap_max;
    let mut caps = vec![base; term.rank()];
    let mut prev: Option<ExactScalar> = None;
    loop {
        let v = term_residue_at_caps(term, &mut caps, cap_limit)?;
        if prev.as_ref() == Some(&v) {
            return Ok(v);
        }
        prev = Some(v);
        if caps.iter().any(|&c| c + opts.cap_step > cap_limit) {
            return Err(Error::computation(format!(
                "residue did not stabilize below cap {cap_limit} (pole order {})",
                term.pole_order()
            )));
        }
        for c in caps.iter_mut() {
            *c += opts.cap_step;
        }
    }
}

/// Exact iterated residue Res^tau(f) under the innermost-first convention.
pub fn res_tau(tau: &[LinearForm], f: &MeroFunction, opts: &ResOptions) -> Result<ExactScalar> {
    let m_inv = change_of_variables(tau, f.rank())?;
    let mut acc = ExactScalar::zero();
    for term in &f.terms {
        acc += term_residue(&term_in_z(term, &m_inv), opts)?;
    }
    Ok(acc)
}

/// Single-variable residue: the coefficient of Z_{k+1}^{-1} of `f` (already
/// expressed in its own coordinates), expanded in the tower regime, as a
/// truncated tower in the remaining variables.
///
/// `k` must be separated from the deeper (inner) variables: no denominator
/// form may couple Z_{k+1} with a variable of larger index, otherwise
/// "holding the other variables constant" does not match the expansion
/// regime.
pub fn res_one(f: &MeroFunction, k: usize, opts: &ResOptions) -> Result<SeriesTower> {
    let rank = f.rank();
    if k >= rank {
        return Err(Error::precondition("variable index out of range"));
    }
    for term in &f.terms {
        let couples = term
            .linear_denoms
            .iter()
            .map(|(form, _)| form)
            .chain(term.expden_factors.iter())
            .any(|form| {
                !form.coeff(k).is_zero()
                    && form.coeffs()[k + 1..].iter().any(|c| !c.is_zero())
            });
        if couples {
            return Err(Error::precondition(
                "res_one: a denominator couples the residue variable with an inner variable",
            ));
        }
    }
    let mut acc = SeriesTower::zero(rank - 1);
    for term in &f.terms {
        let base = term.pole_order() + 2;
        let mut cap = base;
        let mut stable: Option<SeriesTower> = None;
        let mut contribution = None;
        while cap <= base + opts.cap_max {
            match term_tower(term, &vec![cap; rank]).and_then(|t| t.extract(k, -1)) {
                Ok(v) => {
                    if let Some(prev) = &stable {
                        if prev.terms() == v.terms() {
                            contribution = Some(v);
                            break;
                        }
                    }
                    stable = Some(v);
                }
                Err(_) => stable = None,
            }
            cap += opts.cap_step;
        }
        let c = contribution.ok_or_else(|| {
            Error::computation("res_one did not stabilize within the cap budget")
        })?;
        acc = acc.add(&c)?;
    }
    Ok(acc)
}

/// Numeric iterated residue: nested trapezoidal contour integrals over
/// circles |Z_k| = radii_base * ratio^{k-1}, innermost smallest. Nodes per
/// circle double from `nodes0` until the estimate moves less than `tol`.
pub fn res_tau_numeric(
    tau: &[LinearForm],
    f: &MeroFunction,
    params: &NumericParams,
) -> Result<Complex64> {
    let rank = f.rank();
    let m_inv = change_of_variables(tau, rank)?;
    let m_inv_f: Vec<Vec<f64>> = m_inv.to_f64_rows();
    let radii: Vec<f64> = (0..rank)
        .map(|k| params.radii_base * params.ratio.powi(k as i32))
        .collect();

    let estimate = |nodes: usize| -> Complex64 {
        // iterate over the product of circles
        let mut idx = vec![0usize; rank];
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            // z point and the product z_1*...*z_r
            let mut zprod = Complex64::new(1.0, 0.0);
            let z: Vec<Complex64> = (0..rank)
                .map(|kv| {
                    let theta = 2.0 * std::f64::consts::PI * (idx[kv] as f64) / (nodes as f64);
                    let zk = Complex64::from_polar(radii[kv], theta);
                    zprod *= zk;
                    zk
                })
                .collect();
            // X = M_inv * Z
            let x: Vec<Complex64> = (0..rank)
                .map(|i| {
                    let mut v = Complex64::new(0.0, 0.0);
                    for (j, zj) in z.iter().enumerate() {
                        v += zj * m_inv_f[i][j];
                    }
                    v
                })
                .collect();
            acc += f.eval_complex(&x) * zprod;
            // advance the multi-index
            let mut k = 0;
            while k < rank {
                idx[k] += 1;
                if idx[k] < nodes {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
        }
        acc / (nodes as f64).powi(rank as i32)
    };

    let mut nodes = params.nodes0;
    let mut prev = estimate(nodes);
    while nodes * 2 <= params.node_cap {
        nodes *= 2;
        let next = estimate(nodes);
        if (next - prev).norm() < params.tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::computation(format!(
        "numeric residue did not converge within {} nodes per circle",
        params.node_cap
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{rat, rat_int};

    fn lf(coeffs: &[i64]) -> LinearForm {
        LinearForm::from_i64(coeffs)
    }

    fn opts() -> ResOptions {
        ResOptions::default()
    }

    #[test]
    fn rank_one_simple_pole() {
        // tau = (alpha), f = 1/Y1 -> 1
        let f = MeroFunction::simple_fraction(1, vec![lf(&[1])]).unwrap();
        assert_eq!(res_tau(&[lf(&[1])], &f, &opts()).unwrap(), rat_int(1));
    }

    #[test]
    fn su3_phi_against_other_basis() {
        // tau = (gamma12, gamma13), f = 1/(Y2 (Y1+Y2)) -> -1
        // (hand value: Y2 = Z2 - Z1, so f = 1/((Z2-Z1) Z2); Res_{Z2=0} gives
        // -1/Z1, then -1)
        let f =
            MeroFunction::simple_fraction(2, vec![lf(&[0, 1]), lf(&[1, 1])]).unwrap();
        let tau = [lf(&[1, 0]), lf(&[1, 1])];
        assert_eq!(res_tau(&tau, &f, &opts()).unwrap(), rat_int(-1));
        // and the pinned convention gives 0 for f = 1/(Y1 Y2) on that basis
        let g = MeroFunction::simple_fraction(2, vec![lf(&[1, 0]), lf(&[0, 1])]).unwrap();
        assert_eq!(res_tau(&tau, &g, &opts()).unwrap(), rat_int(0));
    }

    #[test]
    fn exponential_kernel_any_shift() {
        // tau = (alpha), f = e^{t Y1}/(1 - e^{Y1}) -> -1 for rational t
        for t in [rat_int(0), rat(2, 7), rat(-3, 5), rat_int(1)] {
            let term = MeroTerm::new(
                Poly::one(1),
                LinearForm::new(vec![t]),
                vec![],
                vec![lf(&[1])],
            )
            .unwrap();
            let f = MeroFunction::from_term(term);
            assert_eq!(res_tau(&[lf(&[1])], &f, &opts()).unwrap(), rat_int(-1));
        }
    }

    #[test]
    fn res_one_examples() {
        // Res_{Z=0} 1/Z^2 = 0
        let f = MeroFunction::from_term(
            MeroTerm::new(Poly::one(1), LinearForm::zero(1), vec![(lf(&[1]), 2)], vec![])
                .unwrap(),
        );
        let r = res_one(&f, 0, &opts()).unwrap();
        assert!(r.is_empty());

        // Res_{Z2=0} 1/((Z2 - Z1) Z2) = -1/Z1
        let f = MeroFunction::simple_fraction(2, vec![lf(&[-1, 1]), lf(&[0, 1])]).unwrap();
        let r = res_one(&f, 1, &opts()).unwrap();
        assert_eq!(r.coeff(&[-1]), rat_int(-1));
        assert!(r
            .terms()
            .iter()
            .all(|(e, _)| *e == vec![-1]), "unexpected terms {r:?}");

        // Res_{Z=0} e^{-Z/2}/(Z^2 (e^{-Z} - 1)) = 1/24
        // (e^{-Z} - 1) = -(1 - e^{-Z})
        let term = MeroTerm::new(
            Poly::constant(1, rat_int(-1)),
            LinearForm::new(vec![rat(-1, 2)]),
            vec![(lf(&[1]), 2)],
            vec![lf(&[-1])],
        )
        .unwrap();
        let f = MeroFunction::from_term(term);
        let r = res_one(&f, 0, &opts()).unwrap();
        assert_eq!(r.coeff(&[]), rat(1, 24));
    }

    #[test]
    fn res_one_rejects_coupled_inner_variable() {
        // denominator Z1 + Z2 couples variable 0 with the inner variable 1
        let f = MeroFunction::simple_fraction(2, vec![lf(&[1, 1])]).unwrap();
        assert!(res_one(&f, 0, &opts()).is_err());
    }

    #[test]
    fn linearity_exact() {
        let tau = [lf(&[1, 0]), lf(&[1, 1])];
        let f = MeroFunction::simple_fraction(2, vec![lf(&[0, 1]), lf(&[1, 1])]).unwrap();
        let g = MeroFunction::simple_fraction(2, vec![lf(&[1, 0]), lf(&[0, 1])]).unwrap();
        let a = rat(3, 7);
        let b = rat(-5, 2);
        let lhs = res_tau(
            &tau,
            &f.scale(&a).add(&g.scale(&b)),
            &opts(),
        )
        .unwrap();
        let rhs = a * res_tau(&tau, &f, &opts()).unwrap() + b * res_tau(&tau, &g, &opts()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_oracle_simple() {
        let params = NumericParams::default();
        // 1/Y1 -> 1
        let f = MeroFunction::simple_fraction(1, vec![lf(&[1])]).unwrap();
        let v = res_tau_numeric(&[lf(&[1])], &f, &params).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-10);

        // 1/(Y2 (Y1+Y2)) against tau = (gamma12, gamma23) -> 1
        let f = MeroFunction::simple_fraction(2, vec![lf(&[0, 1]), lf(&[1, 1])]).unwrap();
        let tau = [lf(&[1, 0]), lf(&[0, 1])];
        let v = res_tau_numeric(&tau, &f, &params).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9, "got {v}");

        // 1/(Y1^2 (e^{-Y1} - 1)) -> -1/12
        let term = MeroTerm::new(
            Poly::constant(1, rat_int(-1)),
            LinearForm::zero(1),
            vec![(lf(&[1]), 2)],
            vec![lf(&[-1])],
        )
        .unwrap();
        let f = MeroFunction::from_term(term);
        let v = res_tau_numeric(&[lf(&[1])], &f, &params).unwrap();
        assert!(
            (v - Complex64::new(-1.0 / 12.0, 0.0)).norm() < 1e-9,
            "got {v}"
        );
    }
}
