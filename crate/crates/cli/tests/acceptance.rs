//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::Instant;

use serde_json::Value;

use cohom_core::cohomology::{cohomology, cup, reduction_image, sq1, CohClass, CohomologyGroup, Transfer};
use cohom_core::criterion::{criterion, CriterionConfig, CriterionContext, Which};
use cohom_core::diagonal::{diagonal_approximation, DiagonalApproximation};
use cohom_core::group::{builtin, NEGATIVE_SUITE};
use cohom_core::lattice::mnq::wedge_boundary;
use cohom_core::lattice::{
    alpha_image, build_mnq, exterior_sequence, lambda2_regular_decomposition, phi, rho_summary, GLattice,
};
use cohom_core::linalg::{BitVec, Subspace};
use cohom_core::resolution::{minimal_resolution, FreeResolution};
use cohom_core::{subgroup_classes, FiniteGroup, Subgroup};

#[path = "../../core/tests/common/mod.rs"]
mod common;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn core<T>(r: cohom_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn group(name: &str) -> Result<FiniteGroup, String> {
    builtin(name).ok_or_else(|| format!("no builtin {name}"))
}

/// Rank over 𝔽₂ of 0/1 rows.
fn rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        let piv = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] == 1 {
                row.iter_mut().zip(&piv).for_each(|(a, b)| *a ^= b);
            }
        }
        r += 1;
    }
    r
}

fn json_rows(v: &Value) -> Vec<Vec<u8>> {
    v["rows"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| r.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u8).collect())
                .collect()
        })
        .unwrap_or_default()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cohom"))
        .args(["criterion", "--group", "builtin:sz8-sylow", "--threads", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("exit status {}", out.status))?;
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let r = &report["result"];
    ensure(r["criterion_b"] == Value::Bool(true), "criterion_b is not true")?;
    let w: Vec<u8> = r["witness_b"]
        .as_array()
        .ok_or("no witness")?
        .iter()
        .map(|x| x.as_u64().unwrap() as u8)
        .collect();
    let sq1 = json_rows(&r["im_sq1"]);
    let v = json_rows(&r["v"]);
    let mut sq1_w = sq1.clone();
    sq1_w.push(w.clone());
    ensure(rank(&sq1_w) == rank(&sq1), "witness not in Im Sq¹")?;
    let mut v_w = v.clone();
    v_w.push(w.clone());
    ensure(rank(&v_w) == rank(&v) + 1, "witness lies in V_G")?;
    Ok(format!(
        "criterion_b = true, witness {w:?} ∈ Im Sq¹ \\ V_G (dim V_G = {}), {:.2?}",
        v.len(),
        t.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    for name in NEGATIVE_SUITE {
        let g = group(name)?;
        let r = core(criterion(&g, CriterionConfig::default()))?;
        ensure(
            r.criterion_a == Some(false) && r.criterion_b == Some(false),
            format!("{name}: a = {:?}, b = {:?}", r.criterion_a, r.criterion_b),
        )?;
    }
    Ok(format!("{} groups, (a) and (b) false, {:.2?}", NEGATIVE_SUITE.len(), t.elapsed()))
}

fn criterion_3() -> Outcome {
    let (dims, w_dim) = common::presentation::presentation_dims();
    ensure(dims == [1, 3, 5, 9], format!("oracle dims {dims:?}"))?;
    let g = group("sz8-sylow")?;
    let res = core(minimal_resolution(&g, 1, 4))?;
    let mut ours = [0usize; 4];
    for (i, d) in ours.iter_mut().enumerate() {
        *d = core(core(cohomology(&res, 1, i))?.dim())?;
    }
    ensure(ours == dims, format!("tool {ours:?} vs oracle {dims:?}"))?;
    Ok(format!("dims {ours:?} match the presentation oracle (degree-3 cubes span {w_dim})"))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let g = group("sz8-sylow")?;
    ensure(g.order() == 64, "order")?;
    let mut z = g.center();
    let mut d = g.derived_subgroup();
    z.sort_unstable();
    d.sort_unstable();
    ensure(z == d, "center ≠ derived subgroup")?;
    ensure(z.len() == 8 && z.iter().all(|&x| g.mul(x, x) == 0), "center is not elementary of order 8")?;
    ensure(core(g.abelianization())? == vec![2, 2, 2], "abelianization")?;
    ensure(g.num_involutions() == 7, "involutions")?;
    ensure(
        (0..64).filter(|x| !z.contains(x)).all(|x| g.element_order(x) == 4),
        "non-central element of order ≠ 4",
    )?;
    Ok(format!("order 64, Z = G' ≅ (ℤ/2)³, G^ab ≅ (ℤ/2)³, 7 involutions, {:.2?}", t.elapsed()))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for name in ["C2", "C4", "V4"] {
        let g = group(name)?;
        let m = core(build_mnq(&g))?.m;
        let p = core(phi(&m))?;
        ensure(p.image.dim == 0, format!("Φ({name}, M) has dim {}", p.image.dim))?;
        parts.push(format!("{name}: rank M {}, R {}", m.rank(), p.resolution.r.rank()));
    }
    Ok(format!("Φ(G, M) = 0 [{}], {:.2?}", parts.join("; "), t.elapsed()))
}

fn criterion_6() -> Outcome {
    for name in ["C2", "C4", "V4", "C8", "C4xC2", "C2^3", "D4", "Q8"] {
        let g = group(name)?;
        let n = g.order();
        let s = core(rho_summary(&g))?;
        ensure(s.kernel_rank == 1 && s.kernel_trivial_action, format!("{name}: ker ρ"))?;
        ensure(
            s.invariant_factors.as_deref() == Some(&vec![1; 2 * n - 1][..]),
            format!("{name}: Smith form of ρ"),
        )?;
        ensure(s.rank_m == (n - 1) * (n - 1), format!("{name}: rank M"))?;
        let d = core(build_mnq(&g))?;
        ensure(d.m.rank() == (n - 1) * (n - 1), format!("{name}: built M has rank {}", d.m.rank()))?;
    }
    let g = group("sz8-sylow")?;
    let s = core(rho_summary(&g))?;
    ensure(s.kernel_rank == 1 && s.kernel_trivial_action && s.torsion_free, "order 64: ρ certificate")?;
    ensure(s.rank_m == 63 * 63, "order 64: rank M")?;
    let dec = core(lambda2_regular_decomposition(&g))?;
    ensure(
        dec.s1.len() == 7 && dec.s2.len() == 28 && dec.rank == 2016,
        format!("decomposition {} {} {}", dec.s1.len(), dec.s2.len(), dec.rank),
    )?;
    Ok("ρ identities for |G| ≤ 8, rank M = (n−1)² (3969 at n = 64), |S₁| = 7, |S₂| = 28, rank 2016".to_string())
}

struct Ring {
    res4: FreeResolution,
    diag: DiagonalApproximation,
    h: Vec<CohomologyGroup>,
    res2: FreeResolution,
}

impl Ring {
    fn new(g: &FiniteGroup) -> Result<Ring, String> {
        let res4 = core(minimal_resolution(g, 2, 4))?;
        let res2 = core(res4.reduce(1))?;
        let diag = core(diagonal_approximation(&res2, 3))?;
        let h = (0..=3).map(|i| core(cohomology(&res2, 1, i))).collect::<Result<_, _>>()?;
        Ok(Ring { res4, diag, h, res2 })
    }
    fn basis(&self, i: usize) -> Result<Vec<CohClass>, String> {
        core(self.h[i].basis())
    }
    fn cup(&self, a: &CohClass, b: &CohClass) -> Result<CohClass, String> {
        core(cup(&self.diag, a, b, &self.h[a.degree + b.degree]))
    }
    fn sq1(&self, a: &CohClass) -> Result<CohClass, String> {
        core(sq1(&self.res4, a, &self.h[a.degree + 1]))
    }
    fn add(&self, a: &CohClass, b: &CohClass) -> CohClass {
        let rep: Vec<u8> = a.rep.iter().zip(&b.rep).map(|(x, y)| x ^ y).collect();
        self.h[a.degree].class_unchecked(&rep)
    }
}

fn ring_identities(name: &str) -> Result<(), String> {
    let g = group(name)?;
    let r = Ring::new(&g)?;
    for i in 0..=2 {
        for a in r.basis(i)? {
            if i <= 1 {
                ensure(r.sq1(&r.sq1(&a)?)?.rep.iter().all(|&x| x == 0), format!("{name}: Sq¹Sq¹ ≠ 0"))?;
            }
            if i == 1 {
                ensure(r.sq1(&a)? == r.cup(&a, &a)?, format!("{name}: Sq¹a ≠ a²"))?;
            }
            for b in r.basis(1)? {
                ensure(r.cup(&a, &b)? == r.cup(&b, &a)?, format!("{name}: ab ≠ ba"))?;
                if i <= 1 {
                    let lhs = r.sq1(&r.cup(&a, &b)?)?;
                    let rhs = r.add(&r.cup(&r.sq1(&a)?, &b)?, &r.cup(&a, &r.sq1(&b)?)?);
                    ensure(lhs == rhs, format!("{name}: Sq¹ is not a derivation"))?;
                }
            }
        }
        let img = core(reduction_image(&r.res4, 2, i))?;
        let images: Vec<BitVec> = r
            .basis(i)?
            .iter()
            .map(|a| core(r.h[i + 1].coordinates(&r.sq1(a)?)))
            .collect::<Result<_, _>>()?;
        let rk = Subspace::spanned_by(core(r.h[i + 1].dim())?, images).dim();
        ensure(img.dim() + rk == core(r.h[i].dim())?, format!("{name}: Bockstein exactness in degree {i}"))?;
    }
    for h in core(subgroup_classes(&g, 1000))? {
        if h.order() == 1 {
            continue;
        }
        let s = Ring::new(&h.as_group(&g))?;
        let tr = core(Transfer::new(&r.res2, &h, &s.res2, 3, true))?;
        for i in 0..=2 {
            for a in r.basis(i)? {
                let back = core(tr.corestriction(&core(tr.restriction_rep(&a))?, &r.h[i]))?;
                let want = if h.index() % 2 == 0 { vec![0; a.rep.len()] } else { a.rep.clone() };
                ensure(back.rep == want, format!("{name}: cor∘res ≠ index"))?;
            }
            for a in r.basis(1)? {
                let ra = core(tr.restriction(&a, &s.h[1]))?;
                for b in s.basis(i)? {
                    let lhs = core(tr.corestriction(&s.cup(&ra, &b)?, &r.h[i + 1]))?;
                    let rhs = r.cup(&a, &core(tr.corestriction(&b, &r.h[i]))?)?;
                    ensure(lhs == rhs, format!("{name}: Frobenius reciprocity"))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let small = ["C2", "C4", "V4", "C8", "C4xC2", "C2^3", "D4", "Q8"];
    for name in small {
        let g = group(name)?;
        for k in 1..=3 {
            let res = core(minimal_resolution(&g, k, 4))?;
            core(res.check_exact()).map_err(|e| format!("{name} k={k}: {e}"))?;
        }
    }
    for name in ["C2", "C4", "V4", "D4", "Q8"] {
        ring_identities(name)?;
    }
    for name in ["C2", "C4", "V4", "D4"] {
        let g = group(name)?;
        for h in core(subgroup_classes(&g, 100))? {
            let p = GLattice::coset_lattice(&g, &h);
            ensure(core(alpha_image(&p))?.dim == 0, format!("{name}: α ≠ 0 on ℤ[G/H]"))?;
        }
    }
    for name in ["C2", "C4", "V4"] {
        let g = group(name)?;
        let d = core(build_mnq(&g))?;
        let base = core(alpha_image(&d.n))?.dim;
        let bigger = core(d.n.direct_sum(&GLattice::regular(&g)))?;
        ensure(core(alpha_image(&bigger))?.dim == base, format!("{name}: Im α not stable"))?;
        core(core(exterior_sequence(&d.seq_b))?.verify())?;
        if name != "V4" {
            ensure(core(wedge_boundary(&d))?.surjective, format!("{name}: ∂ not onto H²(G, N)"))?;
        }
    }
    let g = group("D4")?;
    let ctx = core(CriterionContext::new(&g, CriterionConfig::default()))?;
    for h in core(ctx.subgroup_classes())? {
        let base = core(ctx.tau_image(&h))?.image;
        for x in 0..g.order() {
            let hc: Subgroup = h.conjugate(&g, x);
            ensure(core(ctx.tau_image(&hc))?.image == base, "τ_H not conjugation invariant")?;
        }
    }
    let sz = group("sz8-sylow")?;
    let cfg = CriterionConfig {
        which: Which::B,
        ..Default::default()
    };
    let r = core(criterion(&sz, cfg))?;
    ensure(r.v.is_subspace_of(&r.w), "V_G ⊄ W_G")?;
    Ok(format!(
        "resolution, ring, transfer, Bockstein, α, exterior and τ identities; V_G ⊆ W_G (dims {} ⊆ {}), {:.2?}",
        r.v.dim(),
        r.w.dim(),
        t.elapsed()
    ))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for name in ["trivial", "C2", "C4", "V4", "C8", "C4xC2", "C2^3", "D4", "Q8"] {
        let g = group(name)?;
        let res = core(minimal_resolution(&g, 2, 4))?;
        for m in [1u32, 2] {
            for i in 0..=3 {
                let ours = core(cohomology(&res, m, i))?;
                let bar = common::bar::bar_exponents(&g, i, m);
                ensure(
                    ours.exponents() == bar.as_slice(),
                    format!("{name} ℤ/{} H^{i}: {:?} vs bar {bar:?}", 1 << m, ours.exponents()),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (group, coefficients, degree) cases agree with the bar complex, {:.2?}", t.elapsed()))
}

fn main() -> std::process::ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {n}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {n}: {why}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
