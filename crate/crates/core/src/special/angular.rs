use super::double_factorial;

/// Average of `x^t y^u z^v` over the unit sphere.
pub fn spherical_average_monomial(t: u32, u: u32, v: u32) -> f64 {
    if t % 2 == 1 || u % 2 == 1 || v % 2 == 1 {
        return 0.0;
    }
    double_factorial(t as i64 - 1) * double_factorial(u as i64 - 1) * double_factorial(v as i64 - 1)
        / double_factorial((t + u + v) as i64 + 1)
}

/// Spherical averages for every `(t, u, v)` with `t + u + v <= max_degree`.
#[derive(Debug, Clone)]
pub struct AngularTables {
    max_degree: u32,
    stride: usize,
    spherical_avg: Vec<f64>,
}

impl AngularTables {
    pub fn new(max_degree: u32) -> Self {
        let stride = max_degree as usize + 1;
        let mut spherical_avg = vec![0.0; stride * stride * stride];
        for t in 0..=max_degree {
            for u in 0..=max_degree - t {
                for v in 0..=max_degree - t - u {
                    spherical_avg[(t as usize * stride + u as usize) * stride + v as usize] =
                        spherical_average_monomial(t, u, v);
                }
            }
        }
        Self {
            max_degree,
            stride,
            spherical_avg,
        }
    }

    /// Tables large enough for a basis whose highest shell has `sigma_max`.
    pub fn for_basis(sigma_max: u32) -> Self {
        Self::new(4 * sigma_max)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// `None` outside the tabulated degree range.
    pub fn get(&self, t: u32, u: u32, v: u32) -> Option<f64> {
        if t + u + v > self.max_degree {
            return None;
        }
        Some(self.spherical_avg[(t as usize * self.stride + u as usize) * self.stride + v as usize])
    }
}
