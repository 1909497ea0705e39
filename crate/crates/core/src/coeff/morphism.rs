use std::fmt;
use std::sync::Arc;

use super::{CoeffSystem, Representation, Variance};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::fincat::FinFunctor;
use crate::simplex::{apply_simplex_map, delta_u, OrderMap, Simplex};

/// A component chosen per simplex.
pub type SimplexComponent<S> = Arc<dyn Fn(&Simplex) -> Matrix<S> + Send + Sync>;

/// Components of a natural transformation between coefficient systems.
#[derive(Clone)]
pub enum Tau<S> {
    /// Identity matrices (requires equal ranks).
    Identity,
    /// The same matrix at every simplex.
    Constant(Matrix<S>),
    /// An arbitrary component per simplex of the indexing category.
    PerSimplex(SimplexComponent<S>),
}

impl<S: fmt::Debug> fmt::Debug for Tau<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Identity => write!(f, "Identity"),
            Tau::Constant(m) => write!(f, "Constant({m:?})"),
            Tau::PerSimplex(_) => write!(f, "PerSimplex(..)"),
        }
    }
}

/// A morphism of coefficient systems `(φ, τ)`.
///
/// Covariant `T₁ → T₂` (on `C₁`, `C₂`): `φ: C₂ → C₁` and
/// `τ_g: T₁(φ∘g) → T₂(g)` for simplices `g` of `C₂`.
///
/// Contravariant `T₁ → T₂`: `φ: C₁ → C₂` and `τ_f: T₁(f) → T₂(φ∘f)` for
/// simplices `f` of `C₁`.
#[derive(Clone, Debug)]
pub struct CoeffMorphism<S> {
    pub phi: FinFunctor,
    pub tau: Tau<S>,
}

impl<S: Scalar> CoeffMorphism<S> {
    pub fn new(phi: FinFunctor, tau: Tau<S>) -> Self {
        CoeffMorphism { phi, tau }
    }

    /// The identity morphism of a system on `base`.
    pub fn identity(base: Arc<crate::fincat::FinCat>) -> Self {
        CoeffMorphism { phi: FinFunctor::identity(base), tau: Tau::Identity }
    }

    /// `τ` at simplex `s`, as a `rows × cols` matrix.
    pub fn component(&self, s: &Simplex, rows: usize, cols: usize) -> Result<Matrix<S>> {
        let m = match &self.tau {
            Tau::Identity => {
                if rows != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "identity component between ranks {cols} and {rows}"
                    )));
                }
                Matrix::identity(rows)
            }
            Tau::Constant(m) => m.clone(),
            Tau::PerSimplex(f) => f(s),
        };
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "component is {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(m)
    }

    /// Check that `φ` connects the two bases in the direction required by
    /// their (common) variance.
    pub fn check_endpoints(&self, t1: &CoeffSystem<S>, t2: &CoeffSystem<S>) -> Result<()> {
        if t1.variance() != t2.variance() {
            return Err(Error::VarianceMismatch { expected: t1.variance().name() });
        }
        let (src, dst) = match t1.variance() {
            Variance::Covariant => (t2.base(), t1.base()),
            Variance::Contravariant => (t1.base(), t2.base()),
        };
        if **self.phi.source() != **src || **self.phi.target() != **dst {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// `τ` at a simplex of the indexing category, with shapes read off the systems.
    pub fn component_at(&self, t1: &CoeffSystem<S>, t2: &CoeffSystem<S>, s: &Simplex) -> Result<Matrix<S>> {
        let image = delta_u(&self.phi, s);
        match t1.variance() {
            Variance::Covariant => self.component(s, t2.evaluate(s)?, t1.evaluate(&image)?),
            Variance::Contravariant => self.component(s, t2.evaluate(&image)?, t1.evaluate(s)?),
        }
    }

    /// Verify every naturality square for cofaces (and codegeneracies, when
    /// both systems carry them) on simplices of dimension `≤ max_dim`.
    pub fn check_naturality(&self, t1: &CoeffSystem<S>, t2: &CoeffSystem<S>, max_dim: usize) -> Result<()> {
        self.check_endpoints(t1, t2)?;
        let with_degeneracies = !matches!(t1.representation(), Representation::Truncated(_))
            && !matches!(t2.representation(), Representation::Truncated(_));
        let index = match t1.variance() {
            Variance::Covariant => t2,
            Variance::Contravariant => t1,
        };
        let cat = index.base().clone();
        for n in 0..=max_dim {
            let level = index.nerve().level(n);
            let mut maps = Vec::new();
            if n > 0 {
                maps.extend((0..=n).map(|i| OrderMap::coface(i, n - 1)));
            }
            if with_degeneracies && n < max_dim {
                maps.extend((0..=n).map(|j| OrderMap::codegeneracy(j, n)));
            }
            for g in level.simplices() {
                for sigma in &maps {
                    if sigma.target_dim() != n {
                        continue;
                    }
                    let f = apply_simplex_map(&cat, sigma, g)?;
                    let phi_g = delta_u(&self.phi, g);
                    let (lhs, rhs) = match t1.variance() {
                        // T₂(σ)·τ_f = τ_g·T₁(σ at φg)
                        Variance::Covariant => (
                            t2.induced_map(sigma, g)?.mul(&self.component_at(t1, t2, &f)?)?,
                            self.component_at(t1, t2, g)?.mul(&t1.induced_map(sigma, &phi_g)?)?,
                        ),
                        // T₂(σ at φg)^*·τ_g = τ_f·T₁(σ)^*
                        Variance::Contravariant => (
                            t2.induced_map(sigma, &phi_g)?.mul(&self.component_at(t1, t2, g)?)?,
                            self.component_at(t1, t2, &f)?.mul(&t1.induced_map(sigma, g)?)?,
                        ),
                    };
                    if lhs != rhs {
                        return Err(Error::NaturalityViolation(format!("{} along {sigma}", g.key(&cat))));
                    }
                }
            }
        }
        Ok(())
    }
}
