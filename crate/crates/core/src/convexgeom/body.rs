use crate::error::{check_dim, invalid, Error, Result};
use crate::lattice::{dot, Vector};
use crate::lp::{Cmp, LinearProgram, LpOutcome};

/// `{y : |y| ≤ Σ λ_k |g_k|, λ ≥ 0, Σ λ_k ≤ 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolidConvexBody {
    dim: usize,
    generators: Vec<Vector>,
}

impl SolidConvexBody {
    /// Generators are stored as moduli; exact duplicates are dropped.
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be positive");
        }
        let mut out: Vec<Vector> = Vec::with_capacity(generators.len());
        for g in generators {
            check_dim(dim, g.len())?;
            if g.iter().any(|v| !v.is_finite()) {
                return invalid("generators must be finite");
            }
            let g: Vector = g.iter().map(|v| v.abs()).collect();
            if g.iter().all(|v| *v == 0.0) || out.contains(&g) {
                continue;
            }
            out.push(g);
        }
        Ok(SolidConvexBody {
            dim,
            generators: out,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// A body with the extra generators appended.
    pub fn extended(&self, more: impl IntoIterator<Item = Vector>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(more);
        Self::new(self.dim, gens)
    }

    /// `max_k ⟨|g_k|, |b|⟩`.
    pub fn support_function(&self, b: &[f64]) -> Result<f64> {
        check_dim(self.dim, b.len())?;
        let a: Vec<f64> = b.iter().map(|v| v.abs()).collect();
        Ok(self
            .generators
            .iter()
            .map(|g| dot(g, &a))
            .fold(0.0, f64::max))
    }

    /// Minkowski functional; infinity off the ideal spanned by the generators.
    ///
    /// Solved as the dual LP `max ⟨|y|,z⟩ s.t. ⟨g_k,z⟩ ≤ 1, z ≥ 0` with
    /// constraint generation over the generators.
    pub fn gauge(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim, y.len())?;
        let a: Vec<f64> = y.iter().map(|v| v.abs()).collect();
        let support: Vec<usize> = (0..self.dim).filter(|&j| a[j] > 0.0).collect();
        if support.is_empty() {
            return Ok(0.0);
        }
        let mut active: Vec<usize> = Vec::new();
        for &j in &support {
            let mut best: Option<usize> = None;
            for (k, g) in self.generators.iter().enumerate() {
                if g[j] > 0.0 && best.is_none_or(|b| g[j] > self.generators[b][j]) {
                    best = Some(k);
                }
            }
            match best {
                None => return Ok(f64::INFINITY),
                Some(k) if !active.contains(&k) => active.push(k),
                _ => {}
            }
        }
        loop {
            let mut lp = LinearProgram::new(true);
            let vars: Vec<usize> = support
                .iter()
                .map(|&j| lp.add_var(a[j], 0.0, f64::INFINITY))
                .collect();
            for &k in &active {
                let g = &self.generators[k];
                let row = support.iter().zip(&vars).map(|(&j, &v)| (v, g[j])).collect();
                lp.add_row(row, Cmp::Le, 1.0);
            }
            let (value, z) = match lp.solve()? {
                LpOutcome::Optimal { value, x } => (value, x),
                _ => return Err(Error::Lp("gauge LP not optimal".into())),
            };
            let mut worst = 1.0;
            let mut worst_k = None;
            for (k, g) in self.generators.iter().enumerate() {
                let v: f64 = support.iter().zip(&z).map(|(&j, zj)| g[j] * zj).sum();
                if v > worst {
                    worst = v;
                    worst_k = Some(k);
                }
            }
            match worst_k {
                Some(k) if worst > 1.0 + 1e-11 && !active.contains(&k) => active.push(k),
                _ => return Ok(value),
            }
        }
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> Result<bool> {
        Ok(self.gauge(y)? <= 1.0 + tol)
    }
}
