use crate::exact_arith::Field;
use crate::polyseries::Poly;

/// Determinant of a square matrix of polynomials by fraction-free
/// (Bareiss) elimination; every division is exact.
pub fn det<F: Field>(mut m: Vec<Vec<Poly<F>>>, nvars: usize) -> Poly<F> {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Resultant of `p` and `q` with respect to the variable `v`, as the
/// determinant of their Sylvester matrix.
pub fn resultant<F: Field>(p: &Poly<F>, q: &Poly<F>, v: usize) -> Poly<F> {
    let n = p.nvars();
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    if pc.is_empty() || qc.is_empty() {
        return Poly::zero(n);
    }
    let (dp, dq) = (pc.len() - 1, qc.len() - 1);
    if dp == 0 && dq == 0 {
        return Poly::one(n);
    }
    let size = dp + dq;
    let mut m = vec![vec![Poly::zero(n); size]; size];
    for r in 0..dq {
        for (k, c) in pc.iter().enumerate() {
            m[r][r + dp - k] = c.clone();
        }
    }
    for r in 0..dp {
        for (k, c) in qc.iter().enumerate() {
            m[dq + r][r + dq - k] = c.clone();
        }
    }
    det(m, n)
}
