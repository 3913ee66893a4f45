use cfmm_core::plan::{build_p_matrix, pivot_sets};
use cfmm_core::{count, Complex64, CompressionPlan, GradedOrdering, MultiIndex, PdeOperator, Slice};

fn mi(v: &[usize]) -> MultiIndex {
    MultiIndex::new(v).unwrap()
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn mixed_xy() -> PdeOperator {
    PdeOperator::new(2, &[(mi(&[1, 1]), c(1.0))]).unwrap()
}

fn stored(plan: &CompressionPlan) -> Vec<MultiIndex> {
    plan.stored_indices().collect()
}

#[test]
fn p_matrix_rows_by_hand() {
    let o = GradedOrdering::new(2, 1).unwrap();
    let col = |m: &[usize]| o.rank(&mi(m)).unwrap() - 1;
    let rows = build_p_matrix(&PdeOperator::helmholtz(2, 1.0), 2, o).unwrap();
    assert_eq!(rows.n_rows(), 1);
    let (cols, vals) = rows.row(0);
    assert_eq!(cols, &[col(&[0, 0]), col(&[2, 0]), col(&[0, 2])]);
    assert_eq!(vals, &[c(1.0), c(1.0), c(1.0)]);
    for pde in [PdeOperator::laplace(3), PdeOperator::biharmonic(2), mixed_xy()] {
        let o = GradedOrdering::new(pde.dim(), pde.dim() - 1).unwrap();
        let rows = build_p_matrix(&pde, pde.order(), o).unwrap();
        assert_eq!(rows.n_rows(), 1);
        let rows = build_p_matrix(&pde, pde.order() + 3, o).unwrap();
        for i in 0..rows.n_rows() {
            assert_eq!(rows.row(i).0.len(), pde.terms().len());
        }
    }
}

#[test]
fn footprints_of_the_three_model_operators() {
    let lap = CompressionPlan::new(&PdeOperator::laplace(2), 16).unwrap();
    assert!(stored(&lap).iter().all(|m| m.get(1) <= 1));
    assert_eq!(lap.stored_len(), 33);
    assert_eq!(lap.slices(), &[Slice { axis: 1, level: 0 }, Slice { axis: 1, level: 1 }]);

    let bih = CompressionPlan::new(&PdeOperator::biharmonic(2), 16).unwrap();
    assert!(stored(&bih).iter().all(|m| m.get(1) <= 3));
    assert_eq!(bih.stored_len(), count(16, 2) - count(12, 2));
    assert_eq!(bih.slices().len(), 4);
    assert!(bih.slices().iter().enumerate().all(|(k, s)| s.axis == 1 && s.level == k));

    let xy = CompressionPlan::new(&mixed_xy(), 16).unwrap();
    assert!(stored(&xy).iter().all(|m| m.get(0) == 0 || m.get(1) == 0));
    assert_eq!(xy.stored_len(), 33);
    assert!(!xy.has_property1());
    assert_eq!(xy.fft_extent(), vec![16, 16]);
}

#[test]
fn two_slice_decomposition_of_a_mixed_operator() {
    let pde = PdeOperator::new(2, &[(mi(&[1, 1]), c(1.0)), (mi(&[1, 0]), c(1.0)), (mi(&[0, 1]), c(1.0))]).unwrap();
    let plan = CompressionPlan::new(&pde, 9).unwrap();
    assert_eq!(plan.slices(), &[Slice { axis: 1, level: 0 }, Slice { axis: 0, level: 0 }]);
}

#[test]
fn sizes_and_fft_extents() {
    let lap2 = CompressionPlan::new(&PdeOperator::laplace(2), 4).unwrap();
    assert_eq!(lap2.stored_len(), 9);
    let lap3 = CompressionPlan::new(&PdeOperator::laplace(3), 10).unwrap();
    assert_eq!(lap3.fft_extent(), vec![10, 10, 1]);
    assert_eq!(lap3.fft_shape(), vec![21, 21, 3]);
    assert!(lap3.has_property1());
    for (pde, c) in [(PdeOperator::laplace(3), 2), (PdeOperator::biharmonic(2), 4), (PdeOperator::helmholtz(2, 2.0), 2)] {
        for p in c..c + 10 {
            let plan = CompressionPlan::new(&pde, p).unwrap();
            assert_eq!(plan.stored_len(), count(p, pde.dim()) - count(p - c, pde.dim()));
            assert_eq!(plan.jbar().len(), count(p - c, pde.dim()));
        }
    }
}

#[test]
fn pivots_are_shifted_copies_of_the_first_and_triangular() {
    for pde in [PdeOperator::laplace(2), PdeOperator::laplace(3), PdeOperator::biharmonic(2), mixed_xy()] {
        let p = pde.order() + 6;
        let plan = CompressionPlan::new(&pde, p).unwrap();
        let table = plan.table();
        let lead = table.index(plan.h()[0]);
        assert_eq!(plan.t_lead(), lead);
        let small = plan.ordering().enumerate(p - pde.order());
        for (i, &h) in plan.h().iter().enumerate() {
            assert_eq!(table.index(h), lead + small[i]);
            // P[:, jbar] lower triangular with nonzero diagonal
            let (cols, vals) = plan.rows().row(i);
            assert_eq!(*cols.last().unwrap(), h);
            assert!(vals.last().unwrap().norm() > 0.0);
            for &col in cols {
                if let Some(k) = plan.h().iter().position(|&x| x == col) {
                    assert!(k <= i);
                }
            }
        }
        // every stored index lies below t_lead on some axis
        for m in plan.stored_indices() {
            assert!((0..pde.dim()).any(|a| m.get(a) < lead.get(a)));
        }
        let (h, jbar, j) = pivot_sets(plan.rows());
        assert_eq!((h.as_slice(), jbar.as_slice(), j.as_slice()), (plan.h(), plan.jbar(), plan.j()));
    }
}

#[test]
fn decompression_by_hand() {
    let plan = CompressionPlan::new(&PdeOperator::laplace(2), 2).unwrap();
    let s: Vec<Complex64> = [1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|&x| c(x)).collect();
    let full = plan.decompress(&s).unwrap();
    assert_eq!(plan.table().index(5), mi(&[0, 2]));
    assert_eq!(full[5], c(-4.0));
    assert_eq!(plan.restrict(&full).unwrap(), s);
    let helm = CompressionPlan::new(&PdeOperator::helmholtz(2, 1.0), 2).unwrap();
    assert_eq!(helm.decompress(&s).unwrap()[5], c(-1.0 - 4.0));
    assert!(plan.decompress(&[c(0.0); 5]).unwrap().iter().all(|v| v.norm() == 0.0));
    assert!(plan.decompress(&s[..4]).is_err());
}

#[test]
fn transpose_of_explicit_matrix() {
    // M formed column by column from unit stored vectors
    let plan = CompressionPlan::new(&PdeOperator::laplace(2), 3).unwrap();
    let n = plan.full_len();
    let k = plan.stored_len();
    let mut m = vec![vec![c(0.0); k]; n];
    for col in 0..k {
        let mut e = vec![c(0.0); k];
        e[col] = c(1.0);
        for (row, v) in plan.decompress(&e).unwrap().into_iter().enumerate() {
            m[row][col] = v;
        }
    }
    for row in 0..n {
        let mut e = vec![c(0.0); n];
        e[row] = c(1.0);
        let got = plan.decompress_transpose(&e).unwrap();
        assert_eq!(got, m[row]);
    }
    assert!(plan.decompress_transpose(&vec![c(0.0); n]).unwrap().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn adjoint_identity_at_order_five() {
    let plan = CompressionPlan::new(&PdeOperator::laplace(2), 5).unwrap();
    let s: Vec<Complex64> = (0..plan.stored_len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
    let f: Vec<Complex64> = (0..plan.full_len()).map(|i| Complex64::new((i as f64 * 1.7).cos(), (i as f64).sin())).collect();
    let lhs: Complex64 = plan.decompress(&s).unwrap().iter().zip(&f).map(|(a, b)| a * b).sum();
    let rhs: Complex64 = s.iter().zip(&plan.decompress_transpose(&f).unwrap()).map(|(a, b)| a * b).sum();
    assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm());
}

#[test]
fn pde_validation() {
    assert!(CompressionPlan::new(&PdeOperator::laplace(2), 1).is_err());
    assert!(PdeOperator::new(2, &[]).is_err());
    let merged = PdeOperator::new(2, &[(mi(&[2, 0]), c(1.0)), (mi(&[2, 0]), c(2.0)), (mi(&[0, 1]), c(0.0))]).unwrap();
    assert_eq!(merged.terms(), &[(mi(&[2, 0]), c(3.0))]);
    assert_eq!(merged.order(), 2);
}
