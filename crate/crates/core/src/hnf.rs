//! Exact integer linear algebra: row-style Hermite normal form, integer
//! membership against an HNF basis, and fraction-free determinants.

pub type IntMatrix = Vec<Vec<i64>>;

/// (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// `dst -= k * src`, panicking on overflow.
#[inline]
fn axpy(dst: &mut [i64], k: i64, src: &[i64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = k
            .checked_mul(*s)
            .and_then(|m| d.checked_sub(m))
            .expect("HNF entry overflow");
    }
}

/// An integer row lattice kept in Hermite normal form as rows are added.
///
/// Rows are ordered by pivot column, pivots are positive and every entry
/// above a pivot lies in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    cols: usize,
    rows: IntMatrix,
    pivots: Vec<usize>,
}

impl Hnf {
    pub fn new(cols: usize) -> Self {
        Hnf {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a [i64]>) -> Self {
        let mut h = Hnf::new(cols);
        for r in rows {
            h.insert(r);
        }
        h
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn into_rows(self) -> IntMatrix {
        self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Adds a row to the spanned lattice.
    pub fn insert(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.cols, "row length");
        let mut v = row.to_vec();
        let mut k = 0;
        let mut changed = false;
        while let Some(lead) = v.iter().position(|&x| x != 0) {
            while k < self.rows.len() && self.pivots[k] < lead {
                k += 1;
            }
            if k == self.rows.len() || self.pivots[k] > lead {
                if v[lead] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.rows.insert(k, v);
                self.pivots.insert(k, lead);
                changed = true;
                break;
            }
            let p = self.rows[k][lead];
            let x = v[lead];
            if x % p == 0 {
                axpy(&mut v, x / p, &self.rows[k]);
            } else {
                let (g, s, t) = ext_gcd(p, x);
                let (pg, xg) = (p / g, x / g);
                let old = std::mem::take(&mut self.rows[k]);
                let combined: Vec<i64> = old
                    .iter()
                    .zip(&v)
                    .map(|(&r, &w)| s * r + t * w)
                    .collect();
                let reduced: Vec<i64> = old
                    .iter()
                    .zip(&v)
                    .map(|(&r, &w)| pg * w - xg * r)
                    .collect();
                self.rows[k] = combined;
                v = reduced;
                changed = true;
            }
        }
        if changed {
            self.normalize();
        }
    }

    fn normalize(&mut self) {
        for i in 0..self.rows.len() {
            let c = self.pivots[i];
            let (above, rest) = self.rows.split_at_mut(i);
            let row = &rest[0];
            let p = row[c];
            for h in above.iter_mut() {
                let q = h[c].div_euclid(p);
                if q != 0 {
                    axpy(h, q, row);
                }
            }
        }
    }

    /// Whether `v` is an integer combination of the rows.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v[c];
            if x == 0 {
                continue;
            }
            if x % row[c] != 0 {
                return false;
            }
            axpy(&mut v, x / row[c], row);
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Hermite normal form of the row span; zero rows dropped.
pub fn hnf(rows: &[Vec<i64>]) -> IntMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    Hnf::from_rows(cols, rows.iter().map(Vec::as_slice)).into_rows()
}

/// Rank over Q.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hnf(rows).len()
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// det(B B^T).
pub fn gram_determinant(rows: &[Vec<i64>]) -> i128 {
    let gram: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            rows.iter()
                .map(|s| r.iter().zip(s).map(|(&a, &b)| a as i128 * b as i128).sum())
                .collect()
        })
        .collect();
    determinant(&gram)
}
