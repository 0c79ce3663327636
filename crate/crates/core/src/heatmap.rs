//! Cell-position likelihood maps and background intensity surfaces.
//!
//! Detection targets are Gaussian peaks rendered at point labels: the value at
//! a pixel is the *maximum* over cells of `exp(-d^2 / (2 sigma^2))`, so every
//! annotated pixel keeps an exact peak of 1.0 no matter how close its
//! neighbours are. Background surfaces are least-squares quadratics used to
//! fill masked-out pixels during forward propagation.

use ndarray::Array2;

use crate::{Error, Image, Point, Result};

/// Per-pixel cell-position likelihood in `[0, 1]`, aligned to a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodMap {
    pub values: Image,
    pub frame_index: usize,
}

impl LikelihoodMap {
    pub fn new(values: Image, frame_index: usize) -> Self {
        LikelihoodMap {
            values,
            frame_index,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        let s = self.values.shape();
        (s[0], s[1])
    }
}

/// Quadratic intensity surface `b(x, y) = a0 + a1*x + a2*y + a3*x^2 + a4*x*y + a5*y^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundModel {
    /// `[a0, a1, a2, a3, a4, a5]` in pixel coordinates.
    pub coefficients: [f64; 6],
}

impl BackgroundModel {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let [a0, a1, a2, a3, a4, a5] = self.coefficients;
        a0 + a1 * x + a2 * y + a3 * x * x + a4 * x * y + a5 * y * y
    }

    /// Evaluates the surface at every pixel of an `(h, w)` grid.
    pub fn render(&self, shape: (usize, usize)) -> Image {
        let (h, w) = shape;
        Array2::from_shape_fn((h, w), |(r, c)| self.evaluate(c as f64, r as f64) as f32)
    }
}

/// Renders the ground-truth likelihood map for a set of cell positions.
///
/// Composition over cells is a per-pixel maximum, keeping the peak at every
/// annotated (integer) position exactly 1.0. Positions may be fractional; the
/// value at distance `d` from the nearest position is exactly
/// `exp(-d^2 / (2 sigma^2))`.
pub fn render_likelihood(
    positions: &[Point],
    sigma: f32,
    shape: (usize, usize),
) -> Result<LikelihoodMap> {
    let (h, w) = shape;
    if sigma <= 0.0 {
        return Err(Error::Input(format!("sigma must be positive, got {sigma}")));
    }
    for &(x, y) in positions {
        if x < 0.0 || y < 0.0 || x > (w - 1) as f32 || y > (h - 1) as f32 {
            return Err(Error::Input(format!(
                "position ({x}, {y}) outside {w}x{h} image"
            )));
        }
    }
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut values = Array2::zeros((h, w));
    for ((r, c), v) in values.indexed_iter_mut() {
        let mut best = 0.0f32;
        for &(x, y) in positions {
            let dx = c as f32 - x;
            let dy = r as f32 - y;
            let g = (-(dx * dx + dy * dy) * inv).exp();
            if g > best {
                best = g;
            }
        }
        *v = best;
    }
    Ok(LikelihoodMap::new(values, 0))
}

/// Renders the likelihood of a single cell restricted to the disk of radius
/// `r` around it; zero outside. Used as the per-detection matching template.
pub fn render_single_cell_window(
    center: Point,
    sigma: f32,
    radius: f32,
    shape: (usize, usize),
) -> Image {
    let (h, w) = shape;
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut out = Array2::zeros((h, w));
    let (cx, cy) = center;
    let r2 = radius * radius;
    for ((r, c), v) in out.indexed_iter_mut() {
        let dx = c as f32 - cx;
        let dy = r as f32 - cy;
        let d2 = dx * dx + dy * dy;
        if d2 <= r2 {
            *v = (-d2 * inv).exp();
        }
    }
    out
}

/// Fits the least-squares quadratic surface to every pixel of `image`.
///
/// The fit runs in coordinates normalized to `[-1, 1]` and the coefficients
/// are expanded back to pixel coordinates, so conditioning stays good on
/// large frames.
pub fn estimate_background(image: &Image) -> Result<BackgroundModel> {
    let (h, w) = (image.nrows(), image.ncols());
    if h < 3 || w < 3 {
        return Err(Error::Input(format!(
            "background fit needs at least 3x3 pixels, got {w}x{h}"
        )));
    }
    // x -> u = ax*x + bx in [-1, 1]; y -> v likewise.
    let ax = 2.0 / (w as f64 - 1.0);
    let bx = -1.0;
    let ay = 2.0 / (h as f64 - 1.0);
    let by = -1.0;

    // Normal equations for [1, u, v, u^2, uv, v^2].
    let mut ata = [[0.0f64; 6]; 6];
    let mut atb = [0.0f64; 6];
    for ((r, c), &value) in image.indexed_iter() {
        let u = ax * c as f64 + bx;
        let v = ay * r as f64 + by;
        let basis = [1.0, u, v, u * u, u * v, v * v];
        for i in 0..6 {
            for j in i..6 {
                ata[i][j] += basis[i] * basis[j];
            }
            atb[i] += basis[i] * value as f64;
        }
    }
    for i in 0..6 {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
    }
    let coeff = solve6(&mut ata, &mut atb).ok_or_else(|| {
        Error::Input("singular normal equations in background fit".to_string())
    })?;

    // Expand b(u(x), v(y)) back to pixel-coordinate coefficients.
    let [c0, c1, c2, c3, c4, c5] = coeff;
    let a0 = c0 + c1 * bx + c2 * by + c3 * bx * bx + c4 * bx * by + c5 * by * by;
    let a1 = c1 * ax + 2.0 * c3 * ax * bx + c4 * ax * by;
    let a2 = c2 * ay + c4 * ay * bx + 2.0 * c5 * ay * by;
    let a3 = c3 * ax * ax;
    let a4 = c4 * ax * ay;
    let a5 = c5 * ay * ay;
    Ok(BackgroundModel {
        coefficients: [a0, a1, a2, a3, a4, a5],
    })
}

/// Gaussian elimination with partial pivoting on a 6x6 system.
fn solve6(a: &mut [[f64; 6]; 6], b: &mut [f64; 6]) -> Option<[f64; 6]> {
    for col in 0..6 {
        let pivot = (col..6).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..6 {
            let f = a[row][col] / a[col][col];
            for k in col..6 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 6];
    for col in (0..6).rev() {
        let mut acc = b[col];
        for k in col + 1..6 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_positions_give_zero_map() {
        let map = render_likelihood(&[], 6.0, (32, 48)).unwrap();
        assert_eq!(map.shape(), (32, 48));
        assert!(map.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_gaussian_matches_formula() {
        let map = render_likelihood(&[(10.0, 10.0)], 6.0, (64, 64)).unwrap();
        assert_eq!(map.values[[10, 10]], 1.0);
        let expected = (-25.0f32 / 72.0).exp(); // d = 5, sigma = 6
        assert!((map.values[[10, 15]] - expected).abs() < 1e-6);
        assert!((expected - 0.7066).abs() < 1e-3);
    }

    #[test]
    fn midpoint_of_two_cells_is_max_rule() {
        // Two cells 4*sigma apart: midpoint at 2*sigma from both -> exp(-2).
        let sigma = 4.0;
        let map = render_likelihood(&[(10.0, 20.0), (42.0, 20.0)], sigma, (40, 64)).unwrap();
        let expected = (-2.0f32).exp();
        assert!((map.values[[20, 26]] - expected).abs() < 1e-6);
    }

    #[test]
    fn position_outside_image_is_rejected() {
        assert!(matches!(
            render_likelihood(&[(64.0, 10.0)], 6.0, (64, 64)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn adding_a_cell_never_decreases_values() {
        let base = render_likelihood(&[(12.0, 9.0)], 5.0, (32, 32)).unwrap();
        let more = render_likelihood(&[(12.0, 9.0), (20.0, 25.0)], 5.0, (32, 32)).unwrap();
        for (a, b) in base.values.iter().zip(more.values.iter()) {
            assert!(b >= a);
        }
    }

    #[test]
    fn constant_image_fit() {
        let image = Array2::from_elem((16, 20), 0.37f32);
        let model = estimate_background(&image).unwrap();
        assert!((model.coefficients[0] - 0.37).abs() < 1e-9);
        for k in 1..6 {
            assert!(model.coefficients[k].abs() < 1e-9, "{:?}", model);
        }
    }

    #[test]
    fn quadratic_surface_round_trip() {
        let truth = [0.1, 0.002, 0.0, 0.0, 0.0, 0.001];
        let image = Array2::from_shape_fn((40, 50), |(r, c)| {
            let (x, y) = (c as f64, r as f64);
            (truth[0] + truth[1] * x + truth[5] * y * y) as f32
        });
        let model = estimate_background(&image).unwrap();
        for k in 0..6 {
            assert!(
                (model.coefficients[k] - truth[k]).abs() < 1e-6,
                "coefficient {k}: {} vs {}",
                model.coefficients[k],
                truth[k]
            );
        }
    }

    #[test]
    fn fit_denoises_toward_clean_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let clean = |x: f64, y: f64| 0.2 + 1e-3 * x - 5e-4 * y + 2e-5 * x * x;
        let clean_img = Array2::from_shape_fn((48, 48), |(r, c)| clean(c as f64, r as f64) as f32);
        let noisy = clean_img.map(|&v| v + (rng.random::<f32>() - 0.5) * 0.1);
        let model = estimate_background(&noisy).unwrap();
        let fitted = model.render((48, 48));
        let dist = |a: &Image, b: &Image| -> f64 {
            a.iter()
                .zip(b.iter())
                .map(|(&x, &y)| ((x - y) as f64).powi(2))
                .sum::<f64>()
        };
        assert!(dist(&fitted, &clean_img) < dist(&noisy, &clean_img));
    }

    #[test]
    fn fit_is_affine_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let image = Array2::from_shape_fn((24, 24), |_| rng.random::<f32>());
        let scaled = image.map(|&v| 2.5 * v + 0.3);
        let m1 = estimate_background(&image).unwrap();
        let m2 = estimate_background(&scaled).unwrap();
        assert!((m2.coefficients[0] - (2.5 * m1.coefficients[0] + 0.3)).abs() < 1e-6);
        for k in 1..6 {
            assert!((m2.coefficients[k] - 2.5 * m1.coefficients[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn window_template_is_zero_outside_radius() {
        let win = render_single_cell_window((10.0, 10.0), 6.0, 4.0, (21, 21));
        assert_eq!(win[[10, 10]], 1.0);
        assert_eq!(win[[10, 15]], 0.0); // d = 5 > r = 4
        assert!(win[[10, 14]] > 0.0);
    }
}
