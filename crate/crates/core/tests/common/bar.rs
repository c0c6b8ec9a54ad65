//! Normalized bar complex with trivial coefficients ℤ/2^m and a Smith
//! elimination over ℤ/2^m written from scratch.

use cohom_core::FiniteGroup;

struct Elim {
    m: u32,
    /// 2-adic valuations of the diagonal (only entries that are nonzero)
    diag: Vec<u32>,
    /// row transform `U` with `U · A · V = diag`
    u: Vec<Vec<u32>>,
}

fn val(x: u32) -> u32 {
    x.trailing_zeros()
}

fn inv_odd(x: u32, modulus: u32) -> u32 {
    (1..modulus).step_by(2).find(|&y| x * y % modulus == 1).unwrap()
}

fn smith_mod(mut a: Vec<Vec<u32>>, cols: usize, m: u32, track: bool) -> Elim {
    let q = 1u32 << m;
    let rows = a.len();
    let mut u: Vec<Vec<u32>> = if track {
        (0..rows).map(|i| (0..rows).map(|j| (i == j) as u32).collect()).collect()
    } else {
        Vec::new()
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|b| val(x) < b.0) {
                    best = Some((val(x), i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(t, pi);
        if track {
            u.swap(t, pi);
        }
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let unit = inv_odd(a[t][t] >> v, q);
        for x in a[t].iter_mut() {
            *x = *x * unit % q;
        }
        if track {
            for x in u[t].iter_mut() {
                *x = *x * unit % q;
            }
        }
        // now a[t][t] = 2^v and every entry has valuation ≥ v
        let piv = a[t].clone();
        let upiv = if track { u[t].clone() } else { Vec::new() };
        for i in 0..rows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let f = a[i][t] >> v;
            for (x, &p) in a[i].iter_mut().zip(&piv) {
                *x = (*x + q - f * p % q) % q;
            }
            if track {
                for (x, &p) in u[i].iter_mut().zip(&upiv) {
                    *x = (*x + q - f * p % q) % q;
                }
            }
        }
        for j in t + 1..cols {
            a[t][j] = 0;
        }
        diag.push(v);
        t += 1;
    }
    Elim { m, diag, u }
}

/// `log₂` of the order of the row span.
fn log_span(rows: Vec<Vec<u32>>, cols: usize, m: u32) -> u32 {
    smith_mod(rows, cols, m, false).diag.iter().map(|&v| m - v).sum()
}

/// Rows generating `{x : x · A = 0}`.
fn left_kernel(a: Vec<Vec<u32>>, cols: usize, m: u32) -> Vec<Vec<u32>> {
    let rows = a.len();
    let e = smith_mod(a, cols, m, true);
    let mut out = Vec::new();
    for i in 0..rows {
        let s = match e.diag.get(i) {
            Some(&v) => e.m - v,
            None => 0,
        };
        if s < e.m {
            out.push(e.u[i].iter().map(|&x| (x << s) % (1 << e.m)).collect());
        }
    }
    out
}

/// Normalized trivial-coefficient bar differential `Cⁱ → Cⁱ⁺¹` as rows of
/// the source basis; tuples avoid the identity.
fn normalized_bar(g: &FiniteGroup, i: usize, m: u32) -> (Vec<Vec<u32>>, usize) {
    let n = g.order();
    let q = 1u32 << m;
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (1..n).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    };
    let src = tuples(i);
    let dst = tuples(i + 1);
    let index = |t: &[usize]| -> Option<usize> {
        if t.contains(&0) {
            return None;
        }
        Some(t.iter().fold(0, |acc, &x| acc * (n - 1) + (x - 1)))
    };
    let mut rows = vec![vec![0u32; dst.len()]; src.len()];
    for (c, t) in dst.iter().enumerate() {
        let len = t.len();
        let mut faces: Vec<(bool, Vec<usize>)> = vec![(true, t[1..].to_vec())];
        for k in 0..len - 1 {
            let mut f = t[..k].to_vec();
            f.push(g.mul(t[k], t[k + 1]));
            f.extend_from_slice(&t[k + 2..]);
            faces.push(((k + 1) % 2 == 0, f));
        }
        faces.push((len % 2 == 0, t[..len - 1].to_vec()));
        for (plus, f) in faces {
            if let Some(r) = index(&f) {
                let x = &mut rows[r][c];
                *x = if plus { (*x + 1) % q } else { (*x + q - 1) % q };
            }
        }
    }
    (rows, dst.len())
}

/// Exponents of `Hⁱ(G, ℤ/2^m)` from the bar complex, ascending.
pub fn bar_exponents(g: &FiniteGroup, i: usize, m: u32) -> Vec<u32> {
    let (d_out, cols) = normalized_bar(g, i, m);
    let dim = d_out.len();
    let z = left_kernel(d_out, cols, m);
    let b: Vec<Vec<u32>> = if i == 0 { Vec::new() } else { normalized_bar(g, i - 1, m).0 };
    let log_b = log_span(b.clone(), dim, m);
    let mut o = Vec::new();
    for j in 0..=m {
        let mut rows = b.clone();
        rows.extend(z.iter().map(|r| r.iter().map(|&x| (x << j) % (1 << m)).collect::<Vec<_>>()));
        o.push(log_span(rows, dim, m) - log_b);
    }
    let mut out = Vec::new();
    for e in 1..=m as usize {
        let ge = o[e - 1] - o[e];
        let gt = if e < m as usize { o[e] - o[e + 1] } else { 0 };
        out.extend(std::iter::repeat_n(e as u32, (ge - gt) as usize));
    }
    out
}
