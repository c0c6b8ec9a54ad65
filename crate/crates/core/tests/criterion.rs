//! End-to-end checks of the criterion on small groups and on the order-64 group.

use cohom_core::cohomology::{cohomology, pi2_image, sq1};
use cohom_core::criterion::{criterion, CriterionConfig, CriterionContext, CriterionReport};
use cohom_core::group::builtin;
use cohom_core::linalg::{BitVec, Subspace};
use cohom_core::subgroup::Subgroup;

/// Rank over 𝔽₂ by plain elimination on bool rows.
fn rank(rows: &[Vec<bool>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        let piv = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] {
                row.iter_mut().zip(&piv).for_each(|(a, &b)| *a ^= b);
            }
        }
        r += 1;
    }
    r
}

fn bools(v: &BitVec, d: usize) -> Vec<bool> {
    (0..d).map(|i| v.get(i)).collect()
}

fn outside(s: &Subspace, x: &BitVec) -> bool {
    let d = s.ambient_dim();
    let mut rows: Vec<Vec<bool>> = s.basis().iter().map(|b| bools(b, d)).collect();
    let before = rank(&rows);
    rows.push(bools(x, d));
    rank(&rows) > before
}

fn check_report(r: &CriterionReport) {
    if r.criterion_b == Some(true) {
        assert_eq!(r.criterion_a, Some(true));
    }
    for (flag, wit, img) in [
        (r.criterion_a, &r.witness_a, &r.im_pi2),
        (r.criterion_b, &r.witness_b, &r.im_sq1),
    ] {
        match (flag, wit, img) {
            (Some(true), Some(w), Some(img)) => {
                assert!(img.contains(w));
                assert!(outside(&r.v, w));
            }
            (Some(false), None, Some(img)) => {
                for b in img.basis() {
                    assert!(!outside(&r.v, b));
                }
            }
            (None, None, None) => {}
            other => panic!("inconsistent report: {other:?}"),
        }
    }
}

#[test]
fn small_groups_are_negative_with_consistent_reports() {
    for name in ["C2", "C4", "V4", "C4xC2", "C2^3", "D4", "Q8"] {
        let g = builtin(name).unwrap();
        let r = criterion(&g, CriterionConfig::default()).unwrap();
        check_report(&r);
        assert_eq!(r.criterion_a, Some(false), "{name}");
        assert_eq!(r.criterion_b, Some(false), "{name}");
    }
}

#[test]
fn order_64_group_satisfies_criterion_b() {
    let g = builtin("sz8-sylow").unwrap();
    let r = criterion(&g, CriterionConfig::default()).unwrap();
    check_report(&r);
    assert_eq!(r.h_dims, [1, 3, 5, 9]);
    assert_eq!(r.criterion_b, Some(true));
    assert_eq!(r.w.dim(), 0);
    assert!(r.v.is_subspace_of(&r.w));

    // the witness is Sq¹ of a degree-2 class, recomputed from a fresh resolution
    let res = cohom_core::resolution::minimal_resolution(&g, 2, 4).unwrap();
    let red = res.reduce(1).unwrap();
    let h2 = cohomology(&red, 1, 2).unwrap();
    let h3 = cohomology(&red, 1, 3).unwrap();
    let images: Vec<Vec<bool>> = h2
        .basis()
        .unwrap()
        .iter()
        .map(|a| bools(&h3.coordinates(&sq1(&res, a, &h3).unwrap()).unwrap(), 9))
        .collect();
    let w = r.witness_b.as_ref().unwrap();
    let mut with_w = images.clone();
    with_w.push(bools(w, 9));
    assert_eq!(rank(&images), rank(&with_w));
}

#[test]
fn tau_of_the_whole_group_lies_in_w_when_pi2_is_squares() {
    let mut checked = 0;
    for name in ["C2", "C4", "V4", "C4xC2", "C2^3", "D4", "Q8"] {
        let g = builtin(name).unwrap();
        let ctx = CriterionContext::new(&g, CriterionConfig::default()).unwrap();
        let h1 = ctx.h(1).basis().unwrap();
        let squares = Subspace::spanned_by(
            ctx.h(2).dim().unwrap(),
            h1.iter().map(|x| ctx.h(2).coordinates(&ctx.cup(x, x).unwrap()).unwrap()),
        );
        let pi2 = pi2_image(ctx.resolution(), 2).unwrap();
        if !pi2.is_subspace_of(&squares) {
            continue;
        }
        checked += 1;
        let tau = ctx.tau_image(&Subgroup::whole(&g)).unwrap();
        assert!(tau.image.is_subspace_of(&ctx.w_span().unwrap()), "{name}");
    }
    assert!(checked > 0);
}
