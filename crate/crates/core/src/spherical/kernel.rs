//! Bi-invariant kernels with prescribed spherical transform.
//!
//! Inversion goes through the Abel transform: `F(X) = |W|⁻¹ ∫ h(μ)|c(μ)|⁻² e^{iμ(X)} dμ`
//! is computed by a two-dimensional FFT and `k(exp H) = ∫_K e^{ρ(A)} F(A) dk` with
//! `A = A(k exp H)`. The forward transform integrates `k·J` against the same plane waves.

use super::bump::BumpFunction;
use super::function::check_sample;
use super::multiplier::{jacobian, plancherel_density, PaleyWienerMultiplier};
use super::quadrature::{a_from_logs, gauss_legendre, So3Grid};
use super::table::{lagrange_weights, ChamberTable};
use super::{function::required_nodes, Estimate};
use crate::lie::{CartanCovec, CartanVec, Mat3};
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::Arc;

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT6: f64 = 2.449_489_742_783_178;

/// Orthonormal coordinates of the `A`-part from the logarithms of [`So3Grid::fold`].
fn a_coords(l1: f64, l3: f64) -> (f64, f64) {
    let a = a_from_logs(l1, l3);
    ((a[0] - a[1]) / SQRT2, (a[0] + a[1] - 2.0 * a[2]) / SQRT6)
}

/// Periodic spectral grid for the Abel transform: period `L` in each coordinate of the
/// flat and `n` points per period.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralGrid {
    pub period: f64,
    pub size: usize,
    /// Relative refusal threshold for grid doubling, as a fraction of `sup |k|`.
    pub tol: f64,
    /// Run the support check when building the kernel.
    pub check_support: bool,
}

impl SpectralGrid {
    /// Period four times the kernel support and spacing resolving the multiplier bandwidth.
    pub fn for_multiplier(h: &PaleyWienerMultiplier) -> Self {
        let period = (4.0 * h.kernel_support()).max(12.0);
        let band = h.bandwidth(KERNEL_REL);
        let mut size = 256;
        while size < 4096 && period / size as f64 * band > 0.15 {
            size *= 2;
        }
        SpectralGrid { period, size, tol: 1e-6, check_support: false }
    }
}

/// Profile level below which multiplier frequencies are ignored by the `K`-quadrature.
pub const KERNEL_REL: f64 = 1e-7;

/// `F` on the periodic grid `X = (iΔ, jΔ)`, indices taken mod `n`.
#[derive(Clone, Debug)]
struct AbelGrid {
    n: usize,
    spacing: f64,
    values: Vec<Complex64>,
}

impl AbelGrid {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        let (u, v) = (x / self.spacing, y / self.spacing);
        let (iu, iv) = (u.floor() as i64, v.floor() as i64);
        let wx = lagrange_weights::<6>(u - iu as f64);
        let wy = lagrange_weights::<6>(v - iv as f64);
        let n = self.n as i64;
        let mut s = Complex64::new(0.0, 0.0);
        for (a, wa) in wx.iter().enumerate() {
            let i = (iu + a as i64 - 2).rem_euclid(n) as usize;
            let row = &self.values[i * self.n..(i + 1) * self.n];
            let mut r = Complex64::new(0.0, 0.0);
            for (b, wb) in wy.iter().enumerate() {
                r += row[(iv + b as i64 - 2).rem_euclid(n) as usize] * wb;
            }
            s += r * wa;
        }
        s
    }
}

/// In-place two-dimensional inverse DFT (unnormalized) of a row-major `n × n` array.
fn inverse_fft_2d(data: &mut [Complex64], n: usize) {
    let fft = FftPlanner::new().plan_fft_inverse(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process(&mut col);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

type KernelFn = Arc<dyn Fn(&CartanVec) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Spectral { multiplier: PaleyWienerMultiplier, abel: AbelGrid },
    Explicit(KernelFn),
}

/// A bi-invariant kernel `k`, stored through its values `k(exp H)` on the flat.
#[derive(Clone)]
pub struct KernelFunction {
    source: Source,
    support_radius: f64,
    bandwidth: f64,
    scale: f64,
    tol: f64,
    table: Option<ChamberTable>,
    support_mass: Option<f64>,
}

impl KernelFunction {
    /// A kernel given in closed form on the flat, Weyl-invariant, supported in the ball of
    /// radius `support_radius` and oscillating at frequencies at most `bandwidth`.
    pub fn from_fn<F>(support_radius: f64, bandwidth: f64, f: F) -> Self
    where
        F: Fn(&CartanVec) -> Complex64 + Send + Sync + 'static,
    {
        let scale = f(&CartanVec::ZERO).norm().max(1e-300);
        KernelFunction { source: Source::Explicit(Arc::new(f)), support_radius, bandwidth, scale, tol: 1e-6, table: None, support_mass: None }
    }

    pub fn multiplier(&self) -> Option<&PaleyWienerMultiplier> {
        match &self.source {
            Source::Spectral { multiplier, .. } => Some(multiplier),
            Source::Explicit(_) => None,
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Frequency used by the resolution rule.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Upper bound for `|k|`: the total mass `|W|⁻¹ ∫ |h| |c|⁻²` of the spectral data.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Fraction of `∫ |k| J` lying outside the support radius, when checked.
    pub fn support_mass(&self) -> Option<f64> {
        self.support_mass
    }

    /// The Abel transform `F(X)` (spectral kernels only).
    pub fn abel(&self, x: &CartanVec) -> Option<Complex64> {
        match &self.source {
            Source::Spectral { abel, .. } => {
                let [a, b] = x.coords();
                Some(abel.eval(a, b))
            }
            Source::Explicit(_) => None,
        }
    }

    fn raw(&self, h: &CartanVec, grid: &So3Grid) -> Complex64 {
        match &self.source {
            Source::Spectral { abel, .. } => grid.fold(h, |l1, l3, w| {
                let (x, y) = a_coords(l1, l3);
                abel.eval(x, y) * w
            }),
            Source::Explicit(f) => f(h),
        }
    }

    fn grid_for(&self, h: &CartanVec) -> Result<So3Grid> {
        So3Grid::square(required_nodes(self.bandwidth, h))
    }

    /// `k(exp H)` with the grid-doubling error estimate.
    pub fn estimate(&self, h: &CartanVec) -> Result<Estimate> {
        if let Source::Explicit(f) = &self.source {
            return Ok(Estimate { value: f(h), error: 0.0 });
        }
        let grid = self.grid_for(h)?;
        let coarse = self.raw(h, &grid);
        let fine = self.raw(h, &grid.refined());
        let est = Estimate { value: fine, error: (fine - coarse).norm() };
        if est.error > self.tol * self.scale {
            return Err(Error::Resolution(format!("kernel grid doubling changed k by {:.2e} (scale {:.2e})", est.error, self.scale)));
        }
        Ok(est)
    }

    /// `k(exp H)` from the table when it covers `H`, otherwise by quadrature at the
    /// resolution rule.
    pub fn value(&self, h: &CartanVec) -> Result<Complex64> {
        if let Some(t) = &self.table {
            if h.norm() <= t.radius() {
                return t.eval(h);
            }
        }
        if let Source::Explicit(f) = &self.source {
            return Ok(f(h));
        }
        if h.norm() > self.support_radius * 1.5 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.raw(h, &self.grid_for(h)?))
    }

    /// `k(g)` through the Cartan projection of `g`.
    pub fn value_at(&self, g: &Mat3) -> Result<Complex64> {
        self.value(&crate::lie::cartan_projection(g)?)
    }

    /// Tabulates `k(exp H)` for `|H| ≤ radius`, checking a subsample against refined grids.
    pub fn tabulate(&mut self, radius: f64) -> Result<()> {
        let spacing = super::function::TABLE_SPACING / self.bandwidth.max(1.0);
        let table = ChamberTable::build(radius, spacing, |h| match &self.source {
            Source::Explicit(f) => Ok(f(h)),
            Source::Spectral { .. } => Ok(self.raw(h, &self.grid_for(h)?)),
        })?;
        check_sample(&table, self.tol * self.scale, |h| self.estimate(h))?;
        self.table = Some(table);
        Ok(())
    }

    pub fn table(&self) -> Option<&ChamberTable> {
        self.table.as_ref()
    }

    /// `∫_{|H|>R} |k| J / ∫ |k| J` over the chamber up to radius `outer·R`, `R` the support radius.
    pub fn outside_mass_fraction(&self, outer: f64) -> Result<f64> {
        let r = self.support_radius;
        let nr = (self.bandwidth * r / PI).ceil() as usize + 12;
        let nt = (self.bandwidth * r / 6.0).ceil() as usize + 8;
        let mass = |a: f64, b: f64, n: usize| -> Result<f64> {
            let mut s = 0.0;
            for (rad, wr) in gauss_legendre(n, a, b) {
                let grid = self.grid_for(&CartanVec::from_coords(rad, 0.0))?;
                for (th, wt) in gauss_legendre(nt, PI / 6.0, PI / 2.0) {
                    let h = CartanVec::from_coords(rad * th.cos(), rad * th.sin());
                    s += wr * wt * rad * jacobian(&h) * self.raw(&h, &grid).norm();
                }
            }
            Ok(s)
        };
        let inside = mass(0.0, r, nr)?;
        let outside = mass(r, outer * r, (nr / 2).max(8))?;
        Ok(outside / (inside + outside))
    }
}

/// `k` with spherical transform `h`: `k(exp H) = |W|⁻¹ ∫ h(μ) φ_μ(exp H) |c(μ)|⁻² dμ`.
///
/// Refuses spectral grids on whose boundary `h` exceeds `1e−8`. With
/// `grid.check_support` the mass of `|k|` outside the support radius (up to 1.25 times
/// it) must stay below 1%.
pub fn inverse_hc(h: &PaleyWienerMultiplier, grid: &SpectralGrid) -> Result<KernelFunction> {
    let n = grid.size;
    if n < 16 || n % 2 != 0 {
        return Err(Error::InvalidInput("spectral grid size must be an even number ≥ 16".into()));
    }
    let support = h.kernel_support();
    if grid.period < 2.0 * support {
        return Err(Error::Resolution(format!("period {} is shorter than twice the support {support}", grid.period)));
    }
    let dmu = 2.0 * PI / grid.period;
    let signed = |m: usize| if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    let mut edge = 0.0f64;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mu = CartanCovec::from_coords(signed(i) * dmu, signed(j) * dmu);
            let hv = h.value(&mu);
            if i == n / 2 || j == n / 2 {
                edge = edge.max(hv);
            }
            let g = hv * plancherel_density(&mu) * dmu * dmu / 6.0;
            total += g.abs();
            data[i * n + j] = Complex64::new(g, 0.0);
        }
    }
    if edge > 1e-8 {
        return Err(Error::Resolution(format!("multiplier is {edge:.2e} on the spectral grid boundary")));
    }
    inverse_fft_2d(&mut data, n);
    let abel = AbelGrid { n, spacing: grid.period / n as f64, values: data };
    let mut k = KernelFunction {
        source: Source::Spectral { multiplier: h.clone(), abel },
        support_radius: support,
        bandwidth: h.bandwidth(KERNEL_REL),
        scale: total,
        tol: grid.tol,
        table: None,
        support_mass: None,
    };
    if grid.check_support {
        let frac = k.outside_mass_fraction(1.25)?;
        k.support_mass = Some(frac);
        if frac > 0.01 {
            return Err(Error::Invariant(format!("kernel mass outside the support radius is {:.2}%", 100.0 * frac)));
        }
    }
    Ok(k)
}

/// Resolution of [`hc_transform`]: polar Gauss–Legendre counts on the chamber sector and
/// the spacing of the cloud-in-cell grid, as multiples of the defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct HcOptions {
    pub refine: f64,
    /// Relative refusal threshold for the doubling check, as a fraction of `max |ĥ|`.
    pub tol: f64,
}

impl Default for HcOptions {
    fn default() -> Self {
        HcOptions { refine: 1.0, tol: 0.02 }
    }
}

fn hc_once(k: &KernelFunction, mus: &[CartanCovec], refine: f64) -> Result<Vec<Complex64>> {
    let r = k.support_radius();
    let freq = mus.iter().map(|m| m.norm()).fold(k.bandwidth(), f64::max);
    let nr = ((freq * r / PI + 12.0) * refine).ceil() as usize;
    let nt = ((freq * r / 6.0 + 8.0) * refine).ceil() as usize;
    let dx = 0.2 / mus.iter().map(|m| m.norm()).fold(1.0, f64::max);
    let half = (r / dx).ceil() as i64 + 2;
    let side = (2 * half + 1) as usize;
    let mut cells = vec![Complex64::new(0.0, 0.0); side * side];
    for (rad, wr) in gauss_legendre(nr, 0.0, r) {
        // The node count depends on |H| only, so one grid serves the whole circle.
        let grid = So3Grid::square(required_nodes(freq, &CartanVec::from_coords(rad, 0.0)))?;
        for (th, wt) in gauss_legendre(nt, PI / 6.0, PI / 2.0) {
            let h = CartanVec::from_coords(rad * th.cos(), rad * th.sin());
            let weight = k.value(&h)? * (wr * wt * rad * jacobian(&h));
            grid.fold(&h, |l1, l3, w| {
                let (x, y) = a_coords(l1, l3);
                let (u, v) = (x / dx, y / dx);
                let (iu, iv) = (u.floor(), v.floor());
                let (fu, fv) = (u - iu, v - iv);
                let (i, j) = ((iu as i64 + half) as usize, (iv as i64 + half) as usize);
                let c = weight * w;
                cells[i * side + j] += c * ((1.0 - fu) * (1.0 - fv));
                cells[(i + 1) * side + j] += c * (fu * (1.0 - fv));
                cells[i * side + j + 1] += c * ((1.0 - fu) * fv);
                cells[(i + 1) * side + j + 1] += c * (fu * fv);
                Complex64::new(0.0, 0.0)
            });
        }
    }
    let sinc2 = |z: f64| if z.abs() < 1e-12 { 1.0 } else { (z.sin() / z).powi(2) };
    let occupied: Vec<(f64, f64, Complex64)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(idx, c)| (((idx / side) as i64 - half) as f64 * dx, ((idx % side) as i64 - half) as f64 * dx, *c))
        .collect();
    Ok(mus
        .iter()
        .map(|mu| {
            let [mx, my] = mu.coords();
            let s: Complex64 = occupied.iter().map(|&(x, y, c)| c * Complex64::cis(-(mx * x + my * y))).sum();
            s / (sinc2(0.5 * mx * dx) * sinc2(0.5 * my * dx))
        })
        .collect())
}

/// `ĥ(μ) = ∫_{𝔞⁺} k(exp H) φ_{−μ}(exp H) J(H) dH`, evaluated as the Euclidean transform of the
/// pushforward of `k·J dH dk` under `A(k exp H)`. The polar grid is doubled once; the
/// discrepancy is the error estimate.
pub fn hc_transform(k: &KernelFunction, mus: &[CartanCovec], opts: &HcOptions) -> Result<Vec<Estimate>> {
    let coarse = hc_once(k, mus, opts.refine)?;
    let fine = hc_once(k, mus, 2.0 * opts.refine)?;
    let peak = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let out: Vec<Estimate> = coarse.iter().zip(&fine).map(|(c, f)| Estimate { value: *f, error: (f - c).norm() }).collect();
    let worst = out.iter().map(|e| e.error).fold(0.0, f64::max);
    if worst > opts.tol * peak {
        return Err(Error::Resolution(format!("transform changed by {worst:.2e} under doubling (peak {peak:.2e})")));
    }
    Ok(out)
}

/// `p̂(μ) = ∫_𝔞 b₂(H) k(exp H) e^{−iμ(H)} dH` by the trapezoidal rule on a square grid over
/// the support of `b₂`, doubled once for the error estimate.
pub fn phat(k: &KernelFunction, b2: &BumpFunction, mus: &[CartanCovec]) -> Result<Vec<Estimate>> {
    let freq = mus.iter().map(|m| m.norm()).fold(0.0, f64::max) + k.bandwidth() + 100.0 / b2.radius();
    let step = 2.0 * PI / freq;
    let once = |step: f64| -> Result<Vec<Complex64>> {
        let [cx, cy] = b2.center().coords();
        let m = (b2.radius() / step).ceil() as i64;
        let mut pts = Vec::new();
        for i in -m..=m {
            for j in -m..=m {
                let h = CartanVec::from_coords(cx + i as f64 * step, cy + j as f64 * step);
                let b = b2.value(&h);
                if b > 0.0 {
                    pts.push((h, k.value(&h)? * (b * step * step)));
                }
            }
        }
        Ok(mus.iter().map(|mu| pts.iter().map(|(h, v)| v * Complex64::cis(-mu.eval(h))).sum()).collect())
    };
    let coarse = once(step)?;
    let fine = once(0.5 * step)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| Estimate { value: *f, error: (f - c).norm() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::WEYL_GROUP;

    #[test]
    fn inverse_fft_matches_direct_sum() {
        let n = 16;
        let mut data: Vec<Complex64> = (0..n * n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let orig = data.clone();
        inverse_fft_2d(&mut data, n);
        for (a, b) in [(0usize, 0usize), (3, 7), (15, 2)] {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    s += orig[i * n + j] * Complex64::cis(2.0 * PI * ((i * a + j * b) as f64) / n as f64);
                }
            }
            assert!((s - data[a * n + b]).norm() < 1e-10);
        }
    }

    #[test]
    fn narrow_kernel_has_flat_transform() {
        let b = BumpFunction::centered(0.05).unwrap();
        let k = KernelFunction::from_fn(0.05, 1.0, move |h| Complex64::new(b.value(h), 0.0));
        let mus: Vec<CartanCovec> = [(0.0, 0.0), (2.0, 0.0), (0.0, 3.0), (-2.0, 2.0), (3.0, 3.0)].iter().map(|&(x, y)| CartanCovec::from_coords(x, y)).collect();
        let vals = hc_transform(&k, &mus, &HcOptions::default()).unwrap();
        let mags: Vec<f64> = vals.iter().map(|e| e.value.norm()).collect();
        let (lo, hi) = (mags.iter().cloned().fold(f64::INFINITY, f64::min), mags.iter().cloned().fold(0.0, f64::max));
        assert!(hi / lo <= 1.1, "{mags:?}");
    }

    #[test]
    fn kernel_of_centered_multiplier_peaks_at_origin() {
        let h = PaleyWienerMultiplier::new(1.0, CartanCovec::ZERO, false).unwrap();
        let k = inverse_hc(&h, &SpectralGrid::for_multiplier(&h)).unwrap();
        let k0 = k.estimate(&CartanVec::ZERO).unwrap().value;
        assert!(k0.im.abs() < 1e-9 * k0.re && k0.re > 0.0);
        let mut rng = crate::rng::stream(48, "kernel-peak");
        for _ in 0..4 {
            let hv = crate::lie::random_cartan(&mut rng, 0.9);
            let v = k.estimate(&hv).unwrap().value;
            assert!(v.re < k0.re && v.im.abs() < 1e-6 * k0.re);
            for w in &WEYL_GROUP {
                assert!((k.value(&hv.act(w)).unwrap() - k.value(&hv).unwrap()).norm() < 1e-6 * k0.re);
            }
        }
        // k(e) = |W|⁻¹ ∫ h |c|⁻²: one sixth of the plane by polar Gauss–Legendre.
        let mut s = 0.0;
        for (r, wr) in gauss_legendre(200, 0.0, h.decay_radius(1e-16)) {
            for (th, wt) in gauss_legendre(40, 0.0, PI / 3.0) {
                let mu = CartanCovec::from_coords(r * th.cos(), r * th.sin());
                s += wr * wt * r * h.value(&mu) * plancherel_density(&mu);
            }
        }
        // The tanh factors of |c|⁻² give the Euclidean transform exponential tails, which the
        // periodic grid folds back.
        let want = s;
        assert!((k0.re / want - 1.0).abs() < 1e-3, "{} vs {want}", k0.re);
    }
}
