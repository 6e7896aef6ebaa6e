//! Linear systems over `Z/m` by unimodular diagonalization.

fn md(x: i128, m: i64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

/// `(g, s, u)` with `s a + u b = g = gcd(a, b)`, for `a, b >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut u0, mut u1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (u0, u1) = (u1, u0 - q * u1);
    }
    (r0, s0, u0)
}

fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a.abs(), b.abs()).0
}

/// Combines lines `p` and `q` (rows or columns, via the accessors) with the unimodular
/// matrix `[[s, u], [-b/g, a/g]]` so that the `q` entry at the pivot becomes zero.
fn combine(a: i64, b: i64) -> [[i64; 2]; 2] {
    if a != 0 && b % a == 0 {
        return [[1, 0], [-(b / a), 1]];
    }
    let (g, s, u) = ext_gcd(a, b);
    [[s, u], [-(b / g), a / g]]
}

/// Some solution `x` of `a x = b (mod m)`, free variables set to zero; `None` if the
/// system is inconsistent.
pub(crate) fn solve_mod(a: &[Vec<i64>], b: &[i64], m: i64) -> Option<Vec<i64>> {
    assert!(m >= 1);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&x| md(x as i128, m)).collect()).collect();
    let mut rhs: Vec<i64> = b.iter().map(|&x| md(x as i128, m)).collect();
    // x = v z
    let mut v: Vec<Vec<i64>> = (0..cols).map(|i| (0..cols).map(|j| i64::from(i == j)).collect()).collect();

    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j])
        else {
            break;
        };
        d.swap(t, pi);
        rhs.swap(t, pi);
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t] == 0 {
                    continue;
                }
                dirty = true;
                let k = combine(d[t][t], d[i][t]);
                for j in 0..cols {
                    let (x, y) = (d[t][j] as i128, d[i][j] as i128);
                    d[t][j] = md(k[0][0] as i128 * x + k[0][1] as i128 * y, m);
                    d[i][j] = md(k[1][0] as i128 * x + k[1][1] as i128 * y, m);
                }
                let (x, y) = (rhs[t] as i128, rhs[i] as i128);
                rhs[t] = md(k[0][0] as i128 * x + k[0][1] as i128 * y, m);
                rhs[i] = md(k[1][0] as i128 * x + k[1][1] as i128 * y, m);
            }
            for j in t + 1..cols {
                if d[t][j] == 0 {
                    continue;
                }
                dirty = true;
                let k = combine(d[t][t], d[t][j]);
                // new col_t = s col_t + u col_j, new col_j = -b/g col_t + a/g col_j;
                // x = v z transforms with the inverse, i.e. v's columns the same way.
                for row in d.iter_mut().chain(v.iter_mut()) {
                    let (x, y) = (row[t] as i128, row[j] as i128);
                    row[t] = md(k[0][0] as i128 * x + k[0][1] as i128 * y, m);
                    row[j] = md(k[1][0] as i128 * x + k[1][1] as i128 * y, m);
                }
            }
            if !dirty {
                break;
            }
        }
        if d[t][t] == 0 {
            break;
        }
        rank = t + 1;
    }

    let mut z = vec![0i64; cols];
    for t in 0..rank {
        let (dt, ct) = (d[t][t], rhs[t]);
        let g = gcd(dt, m);
        if ct % g != 0 {
            return None;
        }
        let mg = m / g;
        let (_, s, _) = ext_gcd(dt / g, mg);
        z[t] = md((ct / g) as i128 * s as i128, mg);
    }
    if rhs[rank..].iter().any(|&c| c != 0) {
        return None;
    }
    Some(
        (0..cols)
            .map(|i| md((0..cols).map(|j| v[i][j] as i128 * z[j] as i128).sum(), m))
            .collect(),
    )
}
