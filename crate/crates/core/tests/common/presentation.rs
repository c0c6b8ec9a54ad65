//! Truncated quotient of the degree-3 presentation of H*(G, ℤ/2) for the
//! order-64 Sylow subgroup: variables z,y,x (deg 1), w,v (deg 2), six in deg 3.

const DEGS: [usize; 11] = [1, 1, 1, 2, 2, 3, 3, 3, 3, 3, 3];
const Z: usize = 0;
const Y: usize = 1;
const X: usize = 2;
const W: usize = 3;
const V: usize = 4;

type Mono = [u8; 11];
type Poly = Vec<Mono>;

fn mono(vars: &[usize]) -> Mono {
    let mut m = [0u8; 11];
    for &v in vars {
        m[v] += 1;
    }
    m
}

fn degree(m: &Mono) -> usize {
    m.iter().zip(DEGS).map(|(&e, d)| e as usize * d).sum()
}

fn monomials(d: usize) -> Vec<Mono> {
    fn rec(i: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == 11 {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let mut e = 0;
        while e * DEGS[i] <= left {
            cur[i] = e as u8;
            rec(i + 1, left - e * DEGS[i], cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut [0u8; 11], &mut out);
    out
}

fn relations() -> Vec<Poly> {
    vec![
        vec![mono(&[Z, Z]), mono(&[Y, X])],
        vec![mono(&[Z, Y]), mono(&[Z, X]), mono(&[X, X])],
        vec![mono(&[Z, X]), mono(&[Y, Y]), mono(&[Y, X])],
        vec![mono(&[Z, X, X])],
        vec![mono(&[Y, X, X])],
        vec![mono(&[X, X, X])],
        vec![mono(&[Z, W]), mono(&[X, V])],
        vec![mono(&[Z, V]), mono(&[Y, W])],
        vec![mono(&[Y, V]), mono(&[X, W]), mono(&[X, V])],
    ]
}

/// Rank over 𝔽₂ of rows given as sets of column indices.
fn f2_rank(rows: Vec<Vec<usize>>, cols: usize) -> usize {
    let words = cols.div_ceil(64);
    let mut m: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![0u64; words];
            for c in r {
                v[c / 64] ^= 1 << (c % 64);
            }
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c / 64] >> (c % 64) & 1 == 1) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c / 64] >> (c % 64) & 1 == 1 {
                for (a, b) in row.iter_mut().zip(&piv) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn times(p: &Poly, m: &Mono) -> Poly {
    p.iter()
        .map(|t| {
            let mut r = *t;
            for i in 0..11 {
                r[i] += m[i];
            }
            r
        })
        .collect()
}

/// `(dim A_d, dim of the image of degree-1 cubes in A_3)` for `d ≤ 3`.
pub fn presentation_dims() -> ([usize; 4], usize) {
    let mut dims = [0usize; 4];
    let mut w_dim = 0;
    for d in 0..=3 {
        let basis = monomials(d);
        let pos = |m: &Mono| basis.iter().position(|b| b == m).unwrap();
        let mut ideal: Vec<Vec<usize>> = Vec::new();
        for rel in relations() {
            let rd = degree(&rel[0]);
            if rd > d {
                continue;
            }
            for m in monomials(d - rd) {
                let mut row: Vec<usize> = times(&rel, &m).iter().map(pos).collect();
                row.sort_unstable();
                ideal.push(row);
            }
        }
        let ri = f2_rank(ideal.clone(), basis.len());
        dims[d] = basis.len() - ri;
        if d == 3 {
            let mut with_cubes = ideal;
            for a in [Z, Y, X] {
                for b in [Z, Y, X] {
                    for c in [Z, Y, X] {
                        with_cubes.push(vec![pos(&mono(&[a, b, c]))]);
                    }
                }
            }
            w_dim = f2_rank(with_cubes, basis.len()) - ri;
        }
    }
    (dims, w_dim)
}
