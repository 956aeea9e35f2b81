//! Lattices with explicit Gram matrices: duals, quotients, and the half-open
//! parallelepiped representatives used by the summation kernels.

use super::snf::MatI;
use super::{denominator_lcm, snf, ExactScalar, MatQ};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A full-rank lattice in the ambient coordinate system: `vectors` holds the
/// generators as columns, `gram` the ambient inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    vectors: MatQ,
    gram: MatQ,
}

impl LatticeBasis {
    pub fn new(vectors: MatQ, gram: MatQ) -> Result<Self> {
        if vectors.nrows() != vectors.ncols() {
            return Err(Error::precondition("lattice basis matrix must be square"));
        }
        if gram.nrows() != vectors.nrows() || gram.ncols() != vectors.nrows() {
            return Err(Error::precondition("gram matrix dimension mismatch"));
        }
        if vectors.det().is_zero() {
            return Err(Error::precondition("lattice basis matrix is singular"));
        }
        if !gram.is_positive_definite() {
            return Err(Error::precondition(
                "gram matrix must be symmetric positive definite",
            ));
        }
        Ok(LatticeBasis { vectors, gram })
    }

    pub fn rank(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &MatQ {
        &self.vectors
    }

    pub fn gram(&self) -> &MatQ {
        &self.gram
    }

    pub fn generator(&self, j: usize) -> Vec<ExactScalar> {
        self.vectors.col(j)
    }

    /// Inner product of two ambient points under the stored Gram matrix.
    pub fn inner(&self, a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
        let gb = self.gram.mul_vec(b);
        a.iter()
            .zip(&gb)
            .fold(ExactScalar::zero(), |acc, (x, y)| acc + x * y)
    }

    /// Coordinates of an ambient point in this basis, if it is a lattice
    /// member (all coordinates integral).
    pub fn member_coords(&self, point: &[ExactScalar]) -> Option<Vec<BigInt>> {
        let inv = self.vectors.inverse().expect("basis invertible");
        let c = inv.mul_vec(point);
        let mut out = Vec::with_capacity(c.len());
        for x in &c {
            if !x.denom().is_one() {
                return None;
            }
            out.push(x.numer().clone());
        }
        Some(out)
    }

    pub fn contains(&self, point: &[ExactScalar]) -> bool {
        self.member_coords(point).is_some()
    }

    /// The dual lattice with respect to the stored Gram matrix: the basis
    /// dual to `vectors`, transported by the inverse Gram.
    pub fn dual_lattice(&self) -> LatticeBasis {
        // Columns d_j with <d_i, v_j> = delta_ij, i.e. D^T G V = I.
        let gv = self.gram.mul(&self.vectors);
        let d = gv
            .inverse()
            .expect("gram and basis invertible")
            .transpose();
        LatticeBasis {
            vectors: d,
            gram: self.gram.clone(),
        }
    }

    /// Squared covolume det(V^T G V); its square root is the covolume.
    pub fn covolume_sq(&self) -> ExactScalar {
        self.vectors
            .transpose()
            .mul(&self.gram.mul(&self.vectors))
            .det()
    }
}

/// A finite quotient of lattices: the index together with a deterministic
/// (lexicographically sorted) list of representatives in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSystem {
    pub index: BigInt,
    pub representatives: Vec<Vec<ExactScalar>>,
}

/// Exact integer matrix from a rational one; errors if any entry is not an
/// integer after the implied scaling check.
fn integral_matrix(m: &MatQ, what: &str) -> Result<MatI> {
    let mut out = MatI::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let x = &m[(i, j)];
            if !x.denom().is_one() {
                return Err(Error::precondition(format!(
                    "{what}: entry ({i},{j}) = {} is not an integer",
                    super::format_exact(x)
                )));
            }
            out[(i, j)] = x.numer().clone();
        }
    }
    Ok(out)
}

fn sort_points(mut pts: Vec<Vec<ExactScalar>>) -> Vec<Vec<ExactScalar>> {
    pts.sort();
    pts
}

/// Quotient of `m` by the sublattice spanned by the columns of `sub_gens`
/// (ambient coordinates). The generators must lie in `m` and span a
/// finite-index sublattice.
pub fn lattice_quotient(m: &LatticeBasis, sub_gens: &MatQ) -> Result<CosetSystem> {
    if sub_gens.nrows() != m.rank() || sub_gens.ncols() != m.rank() {
        return Err(Error::precondition(
            "sublattice generator matrix must be square of the lattice rank",
        ));
    }
    // Express the generators in the M-basis; entries must be integers.
    let inv = m.vectors().inverse().expect("basis invertible");
    let c_rat = inv.mul(sub_gens);
    // Clear any denominators by scaling check (exactness): entries must
    // already be integral for a genuine sublattice.
    let scale = denominator_lcm(
        &(0..c_rat.nrows())
            .flat_map(|i| c_rat.row(i).to_vec())
            .collect::<Vec<_>>(),
    );
    if !scale.is_one() {
        return Err(Error::precondition(
            "sublattice generators do not lie in the lattice",
        ));
    }
    let c = integral_matrix(&c_rat, "sublattice in lattice basis")?;
    let det = c.det();
    if det.is_zero() {
        return Err(Error::precondition(
            "sublattice has infinite index (singular generator matrix)",
        ));
    }
    let index = det.abs();

    // Cosets of C*Z^r in Z^r: with U C V = D, the residues are U^{-1} x for
    // x in the box prod [0, d_i).
    let r = m.rank();
    let s = snf(&c);
    let u_mat = MatQ::from_rows(
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| ExactScalar::from_integer(s.u[(i, j)].clone()))
                    .collect()
            })
            .collect(),
    );
    let u_inv = u_mat.inverse().expect("unimodular");
    let mut reps = Vec::new();
    let mut counter = vec![BigInt::zero(); r];
    loop {
        let x: Vec<ExactScalar> = counter
            .iter()
            .map(|c| ExactScalar::from_integer(c.clone()))
            .collect();
        let y = u_inv.mul_vec(&x);
        reps.push(m.vectors().mul_vec(&y));
        // increment mixed-radix counter over the diagonal box
        let mut k = 0;
        loop {
            if k == r {
                break;
            }
            counter[k] += 1;
            if counter[k] < s.diag[k] {
                break;
            }
            counter[k] = BigInt::zero();
            k += 1;
        }
        if k == r {
            break;
        }
    }
    debug_assert_eq!(BigInt::from(reps.len()), index);
    Ok(CosetSystem {
        index,
        representatives: sort_points(reps),
    })
}

/// The representatives `u` of `m` for which `t - u = sum n_j sigma_j` with
/// `0 <= n_j < 1` (half-open parallelepiped of the column vectors of
/// `sigma_vecs`). Exactly one representative per coset of the sublattice.
pub fn coset_reps_in_box(
    m: &LatticeBasis,
    sigma_vecs: &MatQ,
    t: &[ExactScalar],
) -> Result<CosetSystem> {
    if sigma_vecs.det().is_zero() {
        return Err(Error::precondition(
            "sigma is not a basis of the ambient space",
        ));
    }
    let quot = lattice_quotient(m, sigma_vecs)?;
    let v_inv = sigma_vecs.inverse().expect("checked nonsingular");
    let mut reps = Vec::new();
    for u0 in &quot.representatives {
        // unique translate u = u0 + V*floor(V^{-1}(t-u0)) with n in [0,1)
        let diff: Vec<ExactScalar> = t.iter().zip(u0).map(|(a, b)| a - b).collect();
        let x = v_inv.mul_vec(&diff);
        let k: Vec<ExactScalar> = x
            .iter()
            .map(|xi| ExactScalar::from_integer(super::floor_bigint(xi)))
            .collect();
        let shift = sigma_vecs.mul_vec(&k);
        reps.push(
            u0.iter()
                .zip(&shift)
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>(),
        );
    }
    Ok(CosetSystem {
        index: quot.index,
        representatives: sort_points(reps),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    fn su2_weight_lattice() -> LatticeBasis {
        LatticeBasis::new(
            MatQ::from_i64_rows(&[&[1]]),
            MatQ::from_rows(vec![vec![rat(1, 2)]]),
        )
        .unwrap()
    }

    fn su2_integer_lattice() -> LatticeBasis {
        LatticeBasis::new(
            MatQ::from_i64_rows(&[&[2]]),
            MatQ::from_rows(vec![vec![rat(1, 2)]]),
        )
        .unwrap()
    }

    #[test]
    fn su2_quotient_by_root() {
        // M = Z*omega, sublattice Z*alpha with alpha = 2*omega -> index 2
        let m = su2_weight_lattice();
        let q = lattice_quotient(&m, &MatQ::from_i64_rows(&[&[2]])).unwrap();
        assert_eq!(q.index, BigInt::from(2));
        assert_eq!(
            q.representatives,
            vec![vec![rat_int(0)], vec![rat_int(1)]]
        );
    }

    #[test]
    fn quotient_by_self_is_trivial() {
        let m = su2_weight_lattice();
        let q = lattice_quotient(&m, &MatQ::from_i64_rows(&[&[1]])).unwrap();
        assert_eq!(q.index, BigInt::one());
        assert_eq!(q.representatives, vec![vec![rat_int(0)]]);
    }

    #[test]
    fn su3_weight_quotient_by_gamma12_gamma13() {
        // weight lattice = Z^2 in Y-coordinates, gram = inverse Cartan
        let gram = MatQ::from_rows(vec![
            vec![rat(2, 3), rat(1, 3)],
            vec![rat(1, 3), rat(2, 3)],
        ]);
        let m = LatticeBasis::new(MatQ::identity(2), gram).unwrap();
        // vectors of gamma12, gamma13: Cartan column (2,-1) and (1,1)
        let sub = MatQ::from_i64_rows(&[&[2, 1], &[-1, 1]]);
        let q = lattice_quotient(&m, &sub).unwrap();
        assert_eq!(q.index, BigInt::from(3));
    }

    #[test]
    fn infinite_index_rejected() {
        let gram = MatQ::identity(2);
        let m = LatticeBasis::new(MatQ::identity(2), gram).unwrap();
        let sub = MatQ::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(lattice_quotient(&m, &sub).is_err());
    }

    #[test]
    fn non_sublattice_rejected() {
        let m = su2_integer_lattice();
        // omega = 1 is not in Z*alpha = Z*2
        assert!(lattice_quotient(&m, &MatQ::from_i64_rows(&[&[1]])).is_err());
    }

    #[test]
    fn su2_box_reps_at_zero() {
        // sigma = {alpha}, t = 0 -> {0, -omega}
        let m = su2_weight_lattice();
        let reps =
            coset_reps_in_box(&m, &MatQ::from_i64_rows(&[&[2]]), &[rat_int(0)]).unwrap();
        assert_eq!(
            reps.representatives,
            vec![vec![rat_int(-1)], vec![rat_int(0)]]
        );
    }

    #[test]
    fn box_reps_index_one_shifted() {
        // t in M and sigma generating M itself -> {t}
        let m = su2_weight_lattice();
        let reps =
            coset_reps_in_box(&m, &MatQ::from_i64_rows(&[&[1]]), &[rat_int(3)]).unwrap();
        assert_eq!(reps.index, BigInt::one());
        assert_eq!(reps.representatives, vec![vec![rat_int(3)]]);
    }

    #[test]
    fn su2_box_reps_at_half_omega() {
        let m = su2_weight_lattice();
        let reps =
            coset_reps_in_box(&m, &MatQ::from_i64_rows(&[&[2]]), &[rat(1, 2)]).unwrap();
        assert_eq!(
            reps.representatives,
            vec![vec![rat_int(-1)], vec![rat_int(0)]]
        );
    }

    #[test]
    fn dual_of_su2_integer_lattice() {
        let n = su2_integer_lattice();
        let m = n.dual_lattice();
        assert_eq!(m.vectors()[(0, 0)], rat_int(1)); // Z*(alpha/2) = Z*omega
        // duality pairing is integral on generators
        assert_eq!(m.inner(&m.generator(0), &n.generator(0)), rat_int(1));
        // involution
        assert_eq!(m.dual_lattice(), n);
    }

    #[test]
    fn self_dual_square_lattice() {
        let n = LatticeBasis::new(MatQ::identity(2), MatQ::identity(2)).unwrap();
        let m = n.dual_lattice();
        assert_eq!(m, n);
    }

    #[test]
    fn su3_dual_is_weight_lattice() {
        // Lambda^I generated by Cartan columns, gram = inverse Cartan
        let gram = MatQ::from_rows(vec![
            vec![rat(2, 3), rat(1, 3)],
            vec![rat(1, 3), rat(2, 3)],
        ]);
        let cartan = MatQ::from_i64_rows(&[&[2, -1], &[-1, 2]]);
        let n = LatticeBasis::new(cartan, gram).unwrap();
        let m = n.dual_lattice();
        // dual basis should generate Z^2: <omega_i, e_j> = delta_ij
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { rat_int(1) } else { rat_int(0) };
                assert_eq!(m.inner(&m.generator(i), &n.generator(j)), expect);
            }
        }
        assert!(m.contains(&[rat_int(1), rat_int(0)]));
        assert!(m.contains(&[rat_int(0), rat_int(1)]));
        assert!(!m.contains(&[rat(1, 2), rat_int(0)]));
    }
}
