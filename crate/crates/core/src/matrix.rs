use alloc::vec;
use alloc::vec::Vec;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ColMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// First `cols` columns of the identity.
    pub fn identity(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols.min(rows) {
            m.set(j, j, 1.0);
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            m.col_mut(j).copy_from_slice(c);
        }
        m
    }

    /// Builds from a column-major buffer.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.rows]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i + j * self.rows] = value;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.cols).map(move |j| self.col(j))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self^T * other`.
    pub fn gram(&self, other: &ColMatrix) -> ColMatrix {
        assert_eq!(self.rows, other.rows);
        let mut g = ColMatrix::zeros(self.cols, other.cols);
        for j in 0..other.cols {
            for i in 0..self.cols {
                g.set(i, j, dot(self.col(i), other.col(j)));
            }
        }
        g
    }
}

/// Dot product with four interleaved partial sums.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().min(b.len());
    let (a, b) = (&a[..len], &b[..len]);
    let mut s = [0.0; 4];
    let (ac, bc) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        for l in 0..4 {
            s[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ar.iter().zip(br).map(|(x, y)| x * y).sum();
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

/// `x -= alpha * p`, then returns `x . b`.
pub(crate) fn axpy_dot(x: &mut [f64], alpha: f64, p: &[f64], b: &[f64]) -> f64 {
    let mut s = [0.0; 4];
    let len = x.len();
    let (p, b) = (&p[..len], &b[..len]);
    let mut xc = x.chunks_exact_mut(4);
    let (mut pc, mut bc) = (p.chunks_exact(4), b.chunks_exact(4));
    for ((xs, ps), bs) in (&mut xc).zip(&mut pc).zip(&mut bc) {
        for l in 0..4 {
            xs[l] -= alpha * ps[l];
            s[l] += xs[l] * bs[l];
        }
    }
    let mut tail = 0.0;
    for ((xv, pv), bv) in xc.into_remainder().iter_mut().zip(pc.remainder()).zip(bc.remainder()) {
        *xv -= alpha * pv;
        tail += *xv * bv;
    }
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

/// `acc[c] += cols[c] . x` for every column, four columns per pass over `x`
/// with four row lanes each.
pub(crate) fn gemv_t(cols: &[&[f64]], x: &[f64], acc: &mut [f64]) {
    let len = x.len();
    let body = len - len % 4;
    let mut groups = cols.chunks_exact(4);
    let mut c0 = 0;
    for g in &mut groups {
        let y = [&g[0][..len], &g[1][..len], &g[2][..len], &g[3][..len]];
        let mut s = [[0.0; 4]; 4];
        for r in (0..body).step_by(4) {
            let xs = &x[r..r + 4];
            for (sc, yc) in s.iter_mut().zip(&y) {
                let ys = &yc[r..r + 4];
                for l in 0..4 {
                    sc[l] += ys[l] * xs[l];
                }
            }
        }
        for (c, (sc, yc)) in s.iter().zip(&y).enumerate() {
            let tail: f64 = yc[body..].iter().zip(&x[body..]).map(|(a, b)| a * b).sum();
            acc[c0 + c] += (sc[0] + sc[1]) + (sc[2] + sc[3]) + tail;
        }
        c0 += 4;
    }
    for (l, col) in groups.remainder().iter().enumerate() {
        acc[c0 + l] += dot(col, x);
    }
}

/// `out += sum_c w[c] * cols[c]`, four columns per pass over `out`.
pub(crate) fn gemv_n(cols: &[&[f64]], w: &[f64], out: &mut [f64]) {
    let len = out.len();
    let mut groups = cols.chunks_exact(4);
    let mut c0 = 0;
    for g in &mut groups {
        let (y0, y1, y2, y3) = (&g[0][..len], &g[1][..len], &g[2][..len], &g[3][..len]);
        let (w0, w1, w2, w3) = (w[c0], w[c0 + 1], w[c0 + 2], w[c0 + 3]);
        for (r, o) in out.iter_mut().enumerate() {
            *o += w0 * y0[r] + w1 * y1[r] + w2 * y2[r] + w3 * y3[r];
        }
        c0 += 4;
    }
    for (l, col) in groups.remainder().iter().enumerate() {
        let wc = w[c0 + l];
        for (o, y) in out.iter_mut().zip(&col[..len]) {
            *o += wc * y;
        }
    }
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
