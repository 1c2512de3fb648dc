//! Piecewise Chebyshev interpolation on uniform panels. Crate-internal
//! numeric plumbing for hot-loop evaluation of smooth scalar functions.

pub(crate) const CHEB_POINTS: usize = 17;

#[derive(Debug, Clone)]
pub(crate) struct PiecewiseChebyshev {
    lo: f64,
    hi: f64,
    panel_width: f64,
    coeffs: Vec<[f64; CHEB_POINTS]>,
}

impl PiecewiseChebyshev {
    pub(crate) fn fit<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> Self {
        assert!(panels > 0 && hi > lo);
        let panel_width = (hi - lo) / panels as f64;
        let mut coeffs = Vec::with_capacity(panels);
        for p in 0..panels {
            let a = lo + p as f64 * panel_width;
            let mid = a + 0.5 * panel_width;
            let half = 0.5 * panel_width;
            let mut values = [0.0f64; CHEB_POINTS];
            for (k, v) in values.iter_mut().enumerate() {
                let theta = std::f64::consts::PI * (k as f64 + 0.5) / CHEB_POINTS as f64;
                *v = f(mid + half * theta.cos());
            }
            let mut c = [0.0f64; CHEB_POINTS];
            for (j, cj) in c.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, v) in values.iter().enumerate() {
                    let theta = std::f64::consts::PI * (k as f64 + 0.5) / CHEB_POINTS as f64;
                    acc += v * (j as f64 * theta).cos();
                }
                *cj = 2.0 * acc / CHEB_POINTS as f64;
            }
            c[0] *= 0.5;
            coeffs.push(c);
        }
        PiecewiseChebyshev {
            lo,
            hi,
            panel_width,
            coeffs,
        }
    }

    pub(crate) fn lo(&self) -> f64 {
        self.lo
    }

    pub(crate) fn hi(&self) -> f64 {
        self.hi
    }

    /// Evaluates the interpolant, clamping the argument to the fitted range.
    #[inline]
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.lo, self.hi);
        let mut p = ((x - self.lo) / self.panel_width) as usize;
        if p >= self.coeffs.len() {
            p = self.coeffs.len() - 1;
        }
        let a = self.lo + p as f64 * self.panel_width;
        let t = (2.0 * (x - a) / self.panel_width - 1.0).clamp(-1.0, 1.0);
        let c = &self.coeffs[p];
        let (mut b1, mut b2) = (0.0f64, 0.0f64);
        let two_t = 2.0 * t;
        for &cj in c.iter().skip(1).rev() {
            let b0 = cj + two_t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + t * b1 - b2
    }
}
