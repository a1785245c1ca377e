//! Dense univariate polynomials with real coefficients and real root isolation.

/// Polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the highest coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Degree after discarding coefficients below `rel · max|c|`.
    pub fn effective_degree(&self, rel: f64) -> Option<usize> {
        let cut = rel * self.max_abs_coeff();
        self.coeffs.iter().rposition(|c| c.abs() > cut)
    }

    /// Copy with coefficients below `rel · max|c|` at the top removed.
    pub fn trimmed(&self, rel: f64) -> Self {
        match self.effective_degree(rel) {
            Some(d) => Self::new(self.coeffs[..=d].to_vec()),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + other.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Synthetic division by `(x - r)`; returns quotient and remainder.
    pub fn deflate(&self, r: f64) -> (Self, f64) {
        let Some(d) = self.degree() else {
            return (Self::zero(), 0.0);
        };
        if d == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut q = vec![0.0; d];
        let mut carry = self.coeffs[d];
        for k in (0..d).rev() {
            q[k] = carry;
            carry = self.coeffs[k] + carry * r;
        }
        (Self::new(q), carry)
    }

    /// Cauchy bound: every real root satisfies `|x| <= bound`.
    pub fn root_bound(&self) -> f64 {
        let Some(d) = self.degree() else {
            return 0.0;
        };
        let lead = self.coeffs[d].abs();
        1.0 + self.coeffs[..d]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs() / lead))
    }

    /// Distinct real roots, sorted, found by bisection on the monotone
    /// pieces between consecutive critical points.
    ///
    /// Coefficients below `rel · max|c|` at the top are treated as zero.
    /// A critical point where `|p| <= rel · max|c|` is reported as an
    /// even-multiplicity root.
    pub fn real_roots(&self, rel: f64) -> Vec<f64> {
        let p = self.trimmed(rel);
        let scale = p.max_abs_coeff();
        let Some(d) = p.degree() else {
            return vec![];
        };
        if d == 0 {
            return vec![];
        }
        if d == 1 {
            return vec![-p.coeffs[0] / p.coeffs[1]];
        }
        let bound = p.root_bound();
        let crit = p.derivative().real_roots(rel);
        let mut knots = vec![-bound];
        knots.extend(crit.iter().copied().filter(|c| c.abs() < bound));
        knots.push(bound);

        let tol0 = rel * scale;
        let mut roots: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (p.eval(a), p.eval(b));
            if fa.abs() <= tol0 {
                push_distinct(&mut roots, a);
            }
            if fa.abs() > tol0 && fb.abs() > tol0 && fa.signum() != fb.signum() {
                push_distinct(&mut roots, bisect(&p, a, b, fa));
            }
        }
        if let Some(&last) = knots.last() {
            if p.eval(last).abs() <= tol0 {
                push_distinct(&mut roots, last);
            }
        }
        roots
    }
}

fn push_distinct(roots: &mut Vec<f64>, r: f64) {
    let close = roots
        .last()
        .is_some_and(|&prev| (r - prev).abs() <= 1e-12 * (1.0 + r.abs()));
    if !close {
        roots.push(r);
    }
}

fn bisect(p: &Poly, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
