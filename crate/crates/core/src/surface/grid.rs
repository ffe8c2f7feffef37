use super::SurfaceError;

/// Samples per grid axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Resolution(usize);

impl Resolution {
    pub fn new(n: usize) -> Result<Self, SurfaceError> {
        if n < 2 {
            Err(SurfaceError::Resolution(n))
        } else {
            Ok(Resolution(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// `n` equally spaced samples over `[lo, hi]`, both endpoints included
/// bit-exactly.
pub(crate) fn lattice(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = (n - 1) as f64;
    (0..n).map(move |i| {
        let t = i as f64 / last;
        lo * (1.0 - t) + hi * t
    })
}

/// `n` samples over the half-open `[lo, hi)`, for wrapped directions.
fn periodic_lattice(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * (i as f64 / n as f64))
}

fn check_range((lo, hi): (f64, f64)) -> Result<(), SurfaceError> {
    if lo.is_finite() && hi.is_finite() && hi > lo {
        Ok(())
    } else {
        Err(SurfaceError::DegenerateRange(lo, hi))
    }
}

/// z = f(x, y) sampled on a rectangular lattice; `z[j * nx + i]` sits at
/// `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    nx: usize,
    ny: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
    z: Vec<f64>,
}

impl ScalarGrid {
    pub fn new(
        nx: usize,
        ny: usize,
        x_range: (f64, f64),
        y_range: (f64, f64),
        z: Vec<f64>,
    ) -> Result<Self, SurfaceError> {
        if nx < 2 || ny < 2 {
            return Err(SurfaceError::Resolution(nx.min(ny)));
        }
        check_range(x_range)?;
        check_range(y_range)?;
        if z.len() != nx * ny {
            return Err(SurfaceError::Shape(format!(
                "expected {} values for a {nx}x{ny} grid, got {}",
                nx * ny,
                z.len()
            )));
        }
        let grid = ScalarGrid {
            nx,
            ny,
            x_range,
            y_range,
            z,
        };
        if let Some(k) = grid.z.iter().position(|v| !v.is_finite()) {
            return Err(SurfaceError::NonFiniteSample {
                x: grid.x_at(k % nx),
                y: grid.y_at(k / nx),
            });
        }
        Ok(grid)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x_range
    }

    pub fn y_range(&self) -> (f64, f64) {
        self.y_range
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn z_at(&self, i: usize, j: usize) -> f64 {
        self.z[j * self.nx + i]
    }

    pub fn x_at(&self, i: usize) -> f64 {
        let t = i as f64 / (self.nx - 1) as f64;
        self.x_range.0 * (1.0 - t) + self.x_range.1 * t
    }

    pub fn y_at(&self, j: usize) -> f64 {
        let t = j as f64 / (self.ny - 1) as f64;
        self.y_range.0 * (1.0 - t) + self.y_range.1 * t
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.z
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Same values over new ranges with z multiplied by `z_scale`.
    pub fn remapped(
        &self,
        x_range: (f64, f64),
        y_range: (f64, f64),
        z_scale: f64,
    ) -> Result<ScalarGrid, SurfaceError> {
        ScalarGrid::new(
            self.nx,
            self.ny,
            x_range,
            y_range,
            self.z.iter().map(|v| v * z_scale).collect(),
        )
    }
}

/// Samples `f` on the `n x n` lattice spanning both ranges.
pub fn sample_scalar<F>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    res: Resolution,
) -> Result<ScalarGrid, SurfaceError>
where
    F: Fn(f64, f64) -> f64,
{
    check_range(x_range)?;
    check_range(y_range)?;
    let n = res.get();
    let xs: Vec<f64> = lattice(x_range.0, x_range.1, n).collect();
    let mut z = Vec::with_capacity(n * n);
    for y in lattice(y_range.0, y_range.1, n) {
        for &x in &xs {
            let v = f(x, y);
            if !v.is_finite() {
                return Err(SurfaceError::NonFiniteSample { x, y });
            }
            z.push(v);
        }
    }
    ScalarGrid::new(n, n, x_range, y_range, z)
}

/// Parametric surface samples; `points[j * nu + i]` is the image of
/// `(u_i, v_j)`. A wrapped direction joins its last sample back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricGrid {
    nu: usize,
    nv: usize,
    points: Vec<[f64; 3]>,
    wrap_u: bool,
    wrap_v: bool,
}

impl ParametricGrid {
    pub fn new(
        nu: usize,
        nv: usize,
        points: Vec<[f64; 3]>,
        wrap_u: bool,
        wrap_v: bool,
    ) -> Result<Self, SurfaceError> {
        if nu < 2 || nv < 2 {
            return Err(SurfaceError::Resolution(nu.min(nv)));
        }
        if points.len() != nu * nv {
            return Err(SurfaceError::Shape(format!(
                "expected {} points for a {nu}x{nv} grid, got {}",
                nu * nv,
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(SurfaceError::NonFiniteSample { x: p[0], y: p[1] });
        }
        Ok(ParametricGrid {
            nu,
            nv,
            points,
            wrap_u,
            wrap_v,
        })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn wrap_u(&self) -> bool {
        self.wrap_u
    }

    pub fn wrap_v(&self) -> bool {
        self.wrap_v
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 3] {
        self.points[j * self.nu + i]
    }

    /// Number of facet columns and rows, counting wrap-around facets.
    pub fn facet_dims(&self) -> (usize, usize) {
        (
            if self.wrap_u { self.nu } else { self.nu - 1 },
            if self.wrap_v { self.nv } else { self.nv - 1 },
        )
    }
}

/// Samples `f(u, v)`. Wrapped directions sample the half-open range so the
/// seam is not duplicated.
pub fn sample_parametric<F>(
    f: F,
    u_range: (f64, f64),
    v_range: (f64, f64),
    (nu, nv): (usize, usize),
    (wrap_u, wrap_v): (bool, bool),
) -> Result<ParametricGrid, SurfaceError>
where
    F: Fn(f64, f64) -> [f64; 3],
{
    check_range(u_range)?;
    check_range(v_range)?;
    if nu < 2 || nv < 2 {
        return Err(SurfaceError::Resolution(nu.min(nv)));
    }
    let us: Vec<f64> = if wrap_u {
        periodic_lattice(u_range.0, u_range.1, nu).collect()
    } else {
        lattice(u_range.0, u_range.1, nu).collect()
    };
    let vs: Vec<f64> = if wrap_v {
        periodic_lattice(v_range.0, v_range.1, nv).collect()
    } else {
        lattice(v_range.0, v_range.1, nv).collect()
    };
    let mut points = Vec::with_capacity(nu * nv);
    for &v in &vs {
        for &u in &us {
            points.push(f(u, v));
        }
    }
    ParametricGrid::new(nu, nv, points, wrap_u, wrap_v)
}
