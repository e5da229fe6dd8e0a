use nalgebra::DMatrix;

/// Rank and null space of a dense matrix from its singular value decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdNullspace {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_{rank+1}` when both exist and the latter is nonzero.
    pub gap: Option<f64>,
    /// Orthonormal, in the canonical order produced by [`canonical_basis`].
    pub basis: Vec<Vec<f64>>,
}

/// `rank = #{σᵢ > tol·σ_max}`; the null space is spanned by the right
/// singular vectors of the remaining singular values.
pub fn svd_nullspace(a: &DMatrix<f64>, tol: f64) -> SvdNullspace {
    svd_nullspace_with_floor(a, tol, 0.0)
}

/// As [`svd_nullspace`] with the threshold `tol·max(σ_max, floor)`, for
/// matrices whose rows may vanish up to rounding.
pub fn svd_nullspace_with_floor(a: &DMatrix<f64>, tol: f64, floor: f64) -> SvdNullspace {
    let n = a.ncols();
    // pad short matrices so the decomposition returns all n right vectors
    let a = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sv.first().copied().unwrap_or(0.0).max(floor);
    let rank = if smax > 0.0 {
        sv.iter().filter(|&&s| s > tol * smax).count()
    } else {
        0
    };
    let gap = if rank > 0 && rank < sv.len() && sv[rank] > 0.0 {
        Some(sv[rank - 1] / sv[rank])
    } else {
        None
    };
    let null: Vec<Vec<f64>> = order[rank..]
        .iter()
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect();
    SvdNullspace {
        rank,
        singular_values: sv,
        gap,
        basis: canonical_basis(&null),
    }
}

/// Reduced row echelon form of the spanning set followed by Gram–Schmidt in
/// order, then unit norm with the first nonzero coordinate positive. Two
/// spanning sets of the same subspace give the same output up to rounding.
pub fn canonical_basis(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let mut m: Vec<Vec<f64>> = vectors.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    let piv_tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        let (p, best) = (r..m.len())
            .map(|i| (i, m[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= piv_tol {
            continue;
        }
        m.swap(r, p);
        let pv = m[r][c];
        m[r].iter_mut().for_each(|v| *v /= pv);
        for i in 0..m.len() {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    let pivot_row = m[r].clone();
                    m[i].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(r);
    for mut v in m {
        for u in &out {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
        }
        out.push(sign_normalized(v));
    }
    out
}

pub(crate) fn sign_normalized(mut v: Vec<f64>) -> Vec<f64> {
    if let Some(first) = v.iter().find(|c| c.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
    }
    v
}

/// `‖A v‖₂ / ‖A‖_F`, zero for a zero matrix.
pub fn relative_residual(a: &DMatrix<f64>, v: &[f64]) -> f64 {
    let fro = a.norm();
    if fro == 0.0 {
        return 0.0;
    }
    let x = nalgebra::DVector::from_column_slice(v);
    (a * x).norm() / fro
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_known_matrix() {
        // columns 3 = 1 + 2, column 4 zero
        let a = DMatrix::from_row_slice(
            5,
            4,
            &[
                1.0, 2.0, 3.0, 0.0, //
                0.0, 1.0, 1.0, 0.0, //
                2.0, -1.0, 1.0, 0.0, //
                4.0, 0.5, 4.5, 0.0, //
                -1.0, 3.0, 2.0, 0.0,
            ],
        );
        let r = svd_nullspace(&a, 1e-10);
        assert_eq!(r.rank, 2);
        assert_eq!(r.basis.len(), 2);
        for v in &r.basis {
            assert!(relative_residual(&a, v) < 1e-14);
        }
        // canonical order: (1,1,-1,0)/√3 first, then e4
        let s = 1.0 / 3f64.sqrt();
        assert!((r.basis[0][0] - s).abs() < 1e-12 && (r.basis[0][2] + s).abs() < 1e-12);
        assert!((r.basis[1][3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_basis_is_spanning_set_independent() {
        let a = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let b = vec![vec![1.0, 2.0, 1.0], vec![-1.0, 0.0, 1.0]];
        let (ca, cb) = (canonical_basis(&a), canonical_basis(&b));
        for (u, v) in ca.iter().zip(&cb) {
            for (x, y) in u.iter().zip(v) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let r = svd_nullspace(&DMatrix::zeros(12, 6), 1e-8);
        assert_eq!(r.rank, 0);
        assert_eq!(r.basis.len(), 6);
        assert_eq!(r.gap, None);
    }
}
