//! Piecewise polynomials on a shared break grid.
//!
//! Coefficients are stored per piece in the local coordinate t = v - start,
//! which keeps them well scaled even on fine grids. All arithmetic that
//! combines two polynomials requires them to live on the same grid; the
//! basis construction guarantees that by building every function on the
//! full subdivision of [0, 1].

/// A piecewise polynomial: piece `i` covers `[breaks[i], breaks[i+1])` and
/// evaluates `coeffs[i]` (ascending powers) at `v - breaks[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Self {
        assert!(breaks.len() >= 2, "need at least one piece");
        assert_eq!(breaks.len(), coeffs.len() + 1, "break/coefficient mismatch");
        assert!(
            breaks.windows(2).all(|w| w[0] < w[1]),
            "breaks must be strictly increasing"
        );
        assert!(coeffs.iter().all(|c| !c.is_empty()), "empty coefficient list");
        PiecewisePoly { breaks, coeffs }
    }

    /// The zero function on the given grid.
    pub fn zero(breaks: Vec<f64>) -> Self {
        let coeffs = vec![vec![0.0]; breaks.len() - 1];
        PiecewisePoly::new(breaks, coeffs)
    }

    /// A constant function on the given grid.
    pub fn constant(breaks: Vec<f64>, value: f64) -> Self {
        let coeffs = vec![vec![value]; breaks.len() - 1];
        PiecewisePoly::new(breaks, coeffs)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn piece_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn piece_coeffs(&self, i: usize) -> &[f64] {
        &self.coeffs[i]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).max().unwrap_or(1) - 1
    }

    fn piece_index(&self, v: f64) -> usize {
        let n = self.coeffs.len();
        let starts = &self.breaks[..n];
        let idx = starts.partition_point(|&b| b <= v);
        idx.saturating_sub(1).min(n - 1)
    }

    pub fn eval(&self, v: f64) -> f64 {
        let i = self.piece_index(v);
        horner(&self.coeffs[i], v - self.breaks[i])
    }

    /// Pointwise sum; both operands must share the same break grid.
    pub fn add(&self, other: &PiecewisePoly) -> PiecewisePoly {
        assert_eq!(self.breaks, other.breaks, "grids differ");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let mut out = vec![0.0; a.len().max(b.len())];
                for (j, &c) in a.iter().enumerate() {
                    out[j] += c;
                }
                for (j, &c) in b.iter().enumerate() {
                    out[j] += c;
                }
                out
            })
            .collect();
        PiecewisePoly::new(self.breaks.clone(), coeffs)
    }

    pub fn scale(&self, factor: f64) -> PiecewisePoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().map(|&x| factor * x).collect())
            .collect();
        PiecewisePoly::new(self.breaks.clone(), coeffs)
    }

    /// Multiply by the global linear function `a + b v`.
    pub fn mul_linear(&self, a: f64, b: f64) -> PiecewisePoly {
        let coeffs = self
            .breaks
            .iter()
            .zip(&self.coeffs)
            .map(|(&start, c)| {
                // a + b v = (a + b start) + b t in local coordinates
                let a0 = a + b * start;
                let mut out = vec![0.0; c.len() + 1];
                for (j, &cj) in c.iter().enumerate() {
                    out[j] += a0 * cj;
                    out[j + 1] += b * cj;
                }
                out
            })
            .collect();
        PiecewisePoly::new(self.breaks.clone(), coeffs)
    }

    /// Continuous antiderivative vanishing at the left end of the grid.
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut acc = 0.0;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut out = vec![0.0; c.len() + 1];
            out[0] = acc;
            for (j, &cj) in c.iter().enumerate() {
                out[j + 1] = cj / (j + 1) as f64;
            }
            let width = self.breaks[i + 1] - self.breaks[i];
            acc = horner(&out, width);
            coeffs.push(out);
        }
        PiecewisePoly::new(self.breaks.clone(), coeffs)
    }

    /// Exact integral over [lo, hi] (clipped to the grid).
    pub fn integral_on(&self, lo: f64, hi: f64) -> f64 {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    /// True when piece `i` is constant up to `tol` in its coefficients.
    pub fn piece_is_constant(&self, i: usize, tol: f64) -> bool {
        self.coeffs[i].iter().skip(1).all(|&c| c.abs() <= tol)
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}
