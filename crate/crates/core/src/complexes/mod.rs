//! Thomason cochain and chain complexes, the direct Baues–Wirsching
//! complex, normalization and induced chain maps.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffMorphism, CoeffSystem, Representation, Variance};
use crate::error::{Error, Result};
use crate::exactalg::{
    finite_colimit, finite_limit, Diagram, HomologyGroup, IntComplex, Matrix, Orientation, Scalar,
    TruncatedHomology, Q,
};
use crate::fincat::{Factorization, FinCat, MorId, Morphism, ObjId};
use crate::simplex::{delta_u, Nerve, Simplex};


/// How a complex was assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ThomasonCochain,
    ThomasonChain,
    BwDirect,
    Normalized,
}

/// The basis of one degree: one block per simplex, laid out consecutively.
#[derive(Clone, Debug)]
pub struct DegreeDirectory {
    simplices: Vec<Simplex>,
    offsets: Vec<usize>,
    index: HashMap<Simplex, usize>,
}

impl DegreeDirectory {
    fn new(simplices: Vec<Simplex>, ranks: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(ranks.len() + 1);
        offsets.push(0);
        for r in ranks {
            offsets.push(offsets.last().unwrap() + r);
        }
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        DegreeDirectory { simplices, offsets, index }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Total rank of the degree.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Global columns of block `i`.
    pub fn block(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Global column of `(s, local)`.
    pub fn global(&self, s: &Simplex, local: usize) -> Option<usize> {
        let r = self.block(self.position(s)?);
        (local < r.len()).then_some(r.start + local)
    }

    /// `(simplex, local index)` of a global column.
    pub fn locate(&self, column: usize) -> Option<(&Simplex, usize)> {
        if column >= self.dim() {
            return None;
        }
        let i = self.offsets.partition_point(|&o| o <= column) - 1;
        Some((&self.simplices[i], column - self.offsets[i]))
    }

    fn restrict(&self, keep: &[usize]) -> (DegreeDirectory, Vec<usize>) {
        let simplices = keep.iter().map(|&i| self.simplices[i].clone()).collect();
        let ranks: Vec<usize> = keep.iter().map(|&i| self.block(i).len()).collect();
        let columns = keep.iter().flat_map(|&i| self.block(i)).collect();
        (DegreeDirectory::new(simplices, &ranks), columns)
    }
}

/// A (co)chain complex together with its simplex-block directory.
#[derive(Clone, Debug)]
pub struct AssembledComplex<S> {
    complex: IntComplex<S>,
    directory: Vec<DegreeDirectory>,
    provenance: Provenance,
    category: Arc<FinCat>,
    // normalizable: Thomason assembly from pulled-back coefficients
    normalizable: bool,
}

impl<S: Scalar> AssembledComplex<S> {
    pub fn complex(&self) -> &IntComplex<S> {
        &self.complex
    }

    pub fn directory(&self, n: usize) -> &DegreeDirectory {
        &self.directory[n]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.category
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }

    pub fn dims(&self) -> &[usize] {
        self.complex.dims()
    }

    /// (Co)homology at `n`, with the truncation flag.
    pub fn truncated_homology(&self, n: usize) -> Result<TruncatedHomology> {
        self.complex.homology(n)
    }

    /// (Co)homology at a truncation-safe degree `n < top`.
    pub fn homology(&self, n: usize) -> Result<HomologyGroup> {
        if n >= self.top() {
            return Err(Error::DegreeOutOfRange { degree: n, top: self.top().saturating_sub(1) });
        }
        Ok(self.complex.homology(n)?.group)
    }
}

fn directories<S: Scalar>(t: &CoeffSystem<S>, top: usize) -> Result<Vec<DegreeDirectory>> {
    if let Some(max) = t.max_dim() {
        if top > max {
            return Err(Error::BeyondTruncation { dim: top, max_dim: max });
        }
    }
    (0..=top)
        .map(|n| {
            let level = t.nerve().level(n);
            let ranks = level.simplices().iter().map(|s| t.evaluate(s)).collect::<Result<Vec<_>>>()?;
            Ok(DegreeDirectory::new(level.simplices().to_vec(), &ranks))
        })
        .collect()
}

/// Entries of the rows belonging to each `(n+1)`-simplex. `block(i, g)` is
/// the contribution of face `i`, shaped `rank(g) × rank(g∘δ^i)`.
fn coface_rows<S: Scalar>(
    cat: &FinCat,
    big: &DegreeDirectory,
    small: &DegreeDirectory,
    block: impl Fn(usize, &Simplex) -> Result<Matrix<S>> + Sync,
) -> Result<Matrix<S>> {
    let rows = big
        .simplices()
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let mut out = vec![Vec::new(); big.block(gi).len()];
            for i in 0..=g.dim() {
                let f = g.face(cat, i);
                let off = small.block(small.position(&f).expect("face in nerve")).start;
                let m = block(i, g)?;
                for (r, row) in m.row_data().iter().enumerate() {
                    out[r].extend(row.iter().map(|(c, v)| (off + c, if i % 2 == 1 { -v.clone() } else { v.clone() })));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_row_entries(big.dim(), small.dim(), rows.into_iter().flatten().collect()))
}

fn thomason<S: Scalar>(t: &CoeffSystem<S>, top: usize, variance: Variance) -> Result<AssembledComplex<S>> {
    t.require_variance(variance)?;
    let cat = t.base().clone();
    let directory = directories(t, top)?;
    let diffs = (0..top)
        .map(|n| {
            let (small, big) = (&directory[n], &directory[n + 1]);
            match variance {
                Variance::Covariant => coface_rows(&cat, big, small, |i, g| t.coface_map(i, g)),
                Variance::Contravariant => {
                    coface_rows(&cat, big, small, |i, g| Ok(t.coface_map(i, g)?.transpose())).map(|m| m.transpose())
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (orientation, provenance) = match variance {
        Variance::Covariant => (Orientation::Cochain, Provenance::ThomasonCochain),
        Variance::Contravariant => (Orientation::Chain, Provenance::ThomasonChain),
    };
    let dims = directory.iter().map(DegreeDirectory::dim).collect();
    Ok(AssembledComplex {
        complex: IntComplex::new(orientation, dims, diffs)?,
        directory,
        provenance,
        category: cat,
        normalizable: matches!(t.representation(), Representation::PulledBack(_)),
    })
}

/// The Thomason cochain complex of a covariant system in degrees `0..=top`:
/// `(da)_g = Σ_i (−1)^i T(δ^i)(a_{g∘δ^i})`.
pub fn thomason_cochain_complex<S: Scalar>(t: &CoeffSystem<S>, top: usize) -> Result<AssembledComplex<S>> {
    thomason(t, top, Variance::Covariant)
}

/// The Thomason chain complex of a contravariant system in degrees `0..=top`:
/// `d(a_f) = Σ_i (−1)^i (δ^i)^*(a_f)` placed at `f∘δ^i`.
pub fn thomason_chain_complex<S: Scalar>(t: &CoeffSystem<S>, top: usize) -> Result<AssembledComplex<S>> {
    thomason(t, top, Variance::Contravariant)
}

/// The Baues–Wirsching cochain complex of a diagram `D` on the factorization
/// category, written out directly from the composable chains:
///
/// `(dc)(λ₁,…,λₙ₊₁) = D(id,λ₁)c(λ₂,…) + Σ (−1)^i c(…,λᵢλᵢ₊₁,…) + (−1)^{n+1} D(λₙ₊₁,id)c(λ₁,…,λₙ)`.
pub fn bw_direct_complex<S: Scalar>(fc: &Factorization, data: &Diagram<S>, top: usize) -> Result<AssembledComplex<S>> {
    if **data.category() != **fc.category() {
        return Err(Error::BaseMismatch);
    }
    let cat = fc.base().clone();
    let c = &*cat;
    let nerve = Nerve::new(cat.clone());
    // λ₁∘⋯∘λₙ, or the identity at `x` for the empty chain
    let composite = |arrows: &[MorId], x: ObjId| -> MorId {
        arrows.iter().rev().copied().reduce(|acc, l| c.compose_unchecked(l, acc)).unwrap_or_else(|| c.identity(x))
    };
    let chain = |arrows: Vec<MorId>, x: ObjId| -> Simplex {
        if arrows.is_empty() {
            Simplex::object(x)
        } else {
            Simplex::chain(c, arrows).expect("composable chain")
        }
    };
    let directory: Vec<DegreeDirectory> = (0..=top)
        .map(|n| {
            let level = nerve.level(n);
            let ranks: Vec<usize> = level
                .simplices()
                .iter()
                .map(|s| data.rank(ObjId(composite(s.arrows(), s.top()).0)))
                .collect();
            DegreeDirectory::new(level.simplices().to_vec(), &ranks)
        })
        .collect();

    let diffs = (0..top)
        .map(|n| {
            let (small, big) = (&directory[n], &directory[n + 1]);
            let rows = big
                .simplices()
                .par_iter()
                .enumerate()
                .map(|(gi, g)| {
                    let l = g.arrows();
                    let whole = composite(l, g.top());
                    let mut out = vec![Vec::new(); big.block(gi).len()];
                    let mut put = |target: Simplex, m: &Matrix<S>, sign: bool| {
                        let off = small.block(small.position(&target).expect("chain in nerve")).start;
                        for (r, row) in m.row_data().iter().enumerate() {
                            out[r].extend(row.iter().map(|(col, v)| (off + col, if sign { -v.clone() } else { v.clone() })));
                        }
                    };
                    // drop λ₁
                    let tail = &l[1..];
                    let f = composite(tail, c.src(l[0]));
                    let fc_map = fc.morphism(f, c.identity(c.src(f)), l[0]).expect("factorization morphism");
                    put(chain(tail.to_vec(), c.src(l[0])), data.map(fc_map), false);
                    // compose λᵢλᵢ₊₁
                    for i in 1..=n {
                        let mut merged = l[..i - 1].to_vec();
                        merged.push(c.compose_unchecked(l[i - 1], l[i]));
                        merged.extend_from_slice(&l[i + 1..]);
                        put(chain(merged, g.top()), &Matrix::identity(data.rank(ObjId(whole.0))), i % 2 == 1);
                    }
                    // drop λₙ₊₁
                    let head = &l[..n];
                    let f = composite(head, c.dst(l[n]));
                    let fc_map = fc.morphism(f, l[n], c.identity(c.dst(f))).expect("factorization morphism");
                    put(chain(head.to_vec(), c.dst(l[n])), data.map(fc_map), (n + 1) % 2 == 1);
                    out
                })
                .collect::<Vec<_>>();
            Matrix::from_row_entries(big.dim(), small.dim(), rows.into_iter().flatten().collect())
        })
        .collect::<Vec<_>>();
    let dims = directory.iter().map(DegreeDirectory::dim).collect();
    Ok(AssembledComplex {
        complex: IntComplex::new(Orientation::Cochain, dims, diffs)?,
        directory,
        provenance: Provenance::BwDirect,
        category: cat,
        normalizable: false,
    })
}

/// Restrict a Thomason complex of pulled-back coefficients to its
/// nondegenerate blocks. Degeneracies act by identities on pulled-back
/// systems, so the normalized subcomplex (cochains) and quotient (chains)
/// are both the nondegenerate submatrices.
pub fn normalized_complex<S: Scalar>(a: &AssembledComplex<S>) -> Result<AssembledComplex<S>> {
    Ok(normalize(a)?.0)
}

// the normalized complex and, per degree, the kept global columns
fn normalize<S: Scalar>(a: &AssembledComplex<S>) -> Result<(AssembledComplex<S>, Vec<Vec<usize>>)> {
    if !a.normalizable {
        return Err(Error::UnsupportedProvenance);
    }
    let cat = &*a.category;
    let (directory, columns): (Vec<_>, Vec<_>) = a
        .directory
        .iter()
        .map(|d| {
            let keep: Vec<usize> =
                (0..d.len()).filter(|&i| !d.simplices()[i].is_degenerate(cat)).collect();
            d.restrict(&keep)
        })
        .unzip();
    let orientation = a.complex.orientation();
    let diffs = a
        .complex
        .diffs()
        .iter()
        .enumerate()
        .map(|(k, d)| match orientation {
            Orientation::Cochain => d.select(&columns[k + 1], &columns[k]),
            Orientation::Chain => d.select(&columns[k], &columns[k + 1]),
        })
        .collect();
    let dims = directory.iter().map(DegreeDirectory::dim).collect();
    let n = AssembledComplex {
        complex: IntComplex::new(orientation, dims, diffs)?,
        directory,
        provenance: Provenance::Normalized,
        category: a.category.clone(),
        normalizable: false,
    };
    Ok((n, columns))
}

/// A degreewise map between assembled complexes of the same orientation.
#[derive(Clone, Debug)]
pub struct ChainMap<S> {
    pub source: AssembledComplex<S>,
    pub target: AssembledComplex<S>,
    /// `maps[n]`: degree `n` of the source to degree `n` of the target.
    pub maps: Vec<Matrix<S>>,
}

impl<S: Scalar> ChainMap<S> {
    /// Exact commutation with the differentials.
    pub fn commutes(&self) -> Result<bool> {
        let (src, dst) = (self.source.complex(), self.target.complex());
        for k in 0..src.diffs().len() {
            let ok = match src.orientation() {
                Orientation::Cochain => {
                    dst.diff(k).mul(&self.maps[k])? == self.maps[k + 1].mul(src.diff(k))?
                }
                Orientation::Chain => dst.diff(k).mul(&self.maps[k + 1])? == self.maps[k].mul(src.diff(k))?,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The map between normalized complexes. Simplex maps send degenerate
    /// simplices to degenerate ones, so this is the nondegenerate submatrix.
    pub fn normalized(&self) -> Result<ChainMap<S>> {
        let (source, cols) = normalize(&self.source)?;
        let (target, rows) = normalize(&self.target)?;
        let maps = self.maps.iter().enumerate().map(|(n, m)| m.select(&rows[n], &cols[n])).collect();
        Ok(ChainMap { source, target, maps })
    }

    /// The induced map on rational (co)homology at a truncation-safe degree,
    /// in the bases chosen by [`crate::exactalg::HomologyBasis`].
    pub fn on_homology(&self, n: usize) -> Result<Matrix<Q>> {
        let top = self.source.top().min(self.target.top());
        if n >= top {
            return Err(Error::DegreeOutOfRange { degree: n, top: top.saturating_sub(1) });
        }
        let src = self.source.complex().homology_basis(n)?;
        let dst = self.target.complex().homology_basis(n)?;
        src.transport(&self.maps[n].convert()?, &dst)
    }
}

fn induced_map<S: Scalar>(
    m: &CoeffMorphism<S>,
    t1: &CoeffSystem<S>,
    t2: &CoeffSystem<S>,
    top: usize,
    variance: Variance,
) -> Result<ChainMap<S>> {
    t1.require_variance(variance)?;
    m.check_endpoints(t1, t2)?;
    m.check_naturality(t1, t2, top)?;
    let source = thomason(t1, top, variance)?;
    let target = thomason(t2, top, variance)?;
    let maps = (0..=top)
        .map(|n| {
            let (d1, d2) = (source.directory(n), target.directory(n));
            let index = match variance {
                Variance::Covariant => d2,
                Variance::Contravariant => d1,
            };
            let mut rows = vec![Vec::new(); d2.dim()];
            for (si, s) in index.simplices().iter().enumerate() {
                let image = delta_u(&m.phi, s);
                let tau = m.component_at(t1, t2, s)?;
                let (row_block, col_block) = match variance {
                    Variance::Covariant => (d2.block(si), d1.block(d1.position(&image).expect("image simplex"))),
                    Variance::Contravariant => (d2.block(d2.position(&image).expect("image simplex")), d1.block(si)),
                };
                for (r, row) in tau.row_data().iter().enumerate() {
                    rows[row_block.start + r].extend(row.iter().map(|(c, v)| (col_block.start + c, v.clone())));
                }
            }
            Ok(Matrix::from_row_entries(d2.dim(), d1.dim(), rows))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = ChainMap { source, target, maps };
    if !map.commutes()? {
        return Err(Error::Internal("induced map does not commute with differentials".into()));
    }
    Ok(map)
}

/// `C*(φ, τ)`: `(a_f) ↦ (τ_g(a_{φ∘g}))` for covariant systems.
pub fn induced_cochain_map<S: Scalar>(
    m: &CoeffMorphism<S>,
    t1: &CoeffSystem<S>,
    t2: &CoeffSystem<S>,
    top: usize,
) -> Result<ChainMap<S>> {
    induced_map(m, t1, t2, top, Variance::Covariant)
}

/// `C_*(φ, τ)`: `a_f ↦ τ_f(a_f)` placed at `φ∘f` for contravariant systems.
pub fn induced_chain_map<S: Scalar>(
    m: &CoeffMorphism<S>,
    t1: &CoeffSystem<S>,
    t2: &CoeffSystem<S>,
    top: usize,
) -> Result<ChainMap<S>> {
    induced_map(m, t1, t2, top, Variance::Contravariant)
}

/// Assemble the Thomason complex through degree `top + 1`, optionally
/// normalized, so that degrees `0..=top` are truncation-safe.
pub fn assemble<S: Scalar>(t: &CoeffSystem<S>, top: usize, normalized: bool) -> Result<AssembledComplex<S>> {
    let a = thomason(t, top + 1, t.variance())?;
    if normalized {
        normalized_complex(&a)
    } else {
        Ok(a)
    }
}

/// `Hⁿ_Th(C, T)` of a covariant system.
pub fn cohomology<S: Scalar>(t: &CoeffSystem<S>, n: usize) -> Result<HomologyGroup> {
    t.require_variance(Variance::Covariant)?;
    assemble(t, n, false)?.homology(n)
}

/// `H_n^Th(C, T)` of a contravariant system.
pub fn homology<S: Scalar>(t: &CoeffSystem<S>, n: usize) -> Result<HomologyGroup> {
    t.require_variance(Variance::Contravariant)?;
    assemble(t, n, false)?.homology(n)
}

/// All groups in degrees `0..=top` from one assembly.
pub fn homology_groups<S: Scalar>(t: &CoeffSystem<S>, top: usize, normalized: bool) -> Result<Vec<HomologyGroup>> {
    let a = assemble(t, top, normalized)?;
    (0..=top).map(|n| a.homology(n)).collect()
}

/// The system restricted to simplices of dimension ≤ 1, as a diagram on the
/// category with one object per vertex and edge and one arrow per coface
/// (vertex → edge for covariant systems, edge → vertex for contravariant).
pub fn low_degree_diagram<S: Scalar>(t: &CoeffSystem<S>) -> Result<Diagram<S>> {
    let cat = t.base();
    let vertices = t.nerve().level(0);
    let edges = t.nerve().level(1);
    let nv = vertices.len();
    let mut objects: Vec<String> = vertices.simplices().iter().map(|s| s.key(cat)).collect();
    objects.extend(edges.simplices().iter().map(|s| s.key(cat)));
    let mut morphisms: Vec<Morphism> =
        objects.iter().enumerate().map(|(i, o)| Morphism { name: format!("id:{o}"), src: ObjId(i), dst: ObjId(i) }).collect();
    let identities: Vec<MorId> = (0..objects.len()).map(MorId).collect();
    let mut ranks = Vec::with_capacity(objects.len());
    for s in vertices.simplices().iter().chain(edges.simplices()) {
        ranks.push(t.evaluate(s)?);
    }
    let mut maps: Vec<Matrix<S>> = ranks.iter().map(|&r| Matrix::identity(r)).collect();
    for (ei, e) in edges.simplices().iter().enumerate() {
        for i in 0..2 {
            let v = vertices.index_of(&e.face(cat, i)).expect("vertex");
            let (src, dst) = match t.variance() {
                Variance::Covariant => (ObjId(v), ObjId(nv + ei)),
                Variance::Contravariant => (ObjId(nv + ei), ObjId(v)),
            };
            morphisms.push(Morphism { name: format!("d{i}:{}", e.key(cat)), src, dst });
            maps.push(t.coface_map(i, e)?);
        }
    }
    let category = FinCat::from_parts(objects, morphisms, identities, |g, f| {
        if g.0 < ranks.len() {
            Some(f)
        } else if f.0 < ranks.len() {
            Some(g)
        } else {
            None
        }
    })?;
    Diagram::new(Arc::new(category), ranks, maps)
}

/// `lim` (covariant) or `colim` (contravariant) of [`low_degree_diagram`],
/// which agrees with `H⁰` resp. `H₀`.
pub fn low_degree_limit<S: Scalar>(t: &CoeffSystem<S>) -> Result<HomologyGroup> {
    let d = low_degree_diagram(t)?;
    Ok(match t.variance() {
        Variance::Covariant => finite_limit(&d).group,
        Variance::Contravariant => finite_colimit(&d).group,
    })
}
