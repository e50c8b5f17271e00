//! Embedding problems: given phi: G -> A and a cover alpha: B -> A, find a
//! morphism gamma: G -> B with alpha after gamma equal to phi, or report that
//! none exists. Two independent routes are provided: a direct backtracking
//! search, and a factorization route that splits phi through a finite
//! epimorphism, pulls the cover back, and pushes the solution forward.

use crate::extend::{factor_morphism, ExtendError};
use crate::fiber::fiber_product;
use crate::group::{hom_search, GroupError};
use crate::structure::{
    sub_structure, GroupStructure, StructureError, StructureMorphism,
};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("the two arrows have different targets")]
    TargetMismatch,
    #[error("the projection arrow is not a cover: {0}")]
    NotACover(String),
    #[error("the base arrow is not a morphism: {0}")]
    NotAMorphism(String),
    #[error("the cover admits no section")]
    NoSection,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Extend(#[from] ExtendError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A pair (phi: G -> A, alpha: B -> A) with alpha a cover.
pub struct EmbeddingProblem {
    phi: StructureMorphism,
    alpha: StructureMorphism,
}

/// Unsolvability is an answer, not an error.
#[derive(Debug)]
pub enum SolveOutcome {
    Solved(StructureMorphism),
    Unsolvable,
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved(_))
    }

    pub fn solution(&self) -> Option<&StructureMorphism> {
        match self {
            SolveOutcome::Solved(m) => Some(m),
            SolveOutcome::Unsolvable => None,
        }
    }
}

impl EmbeddingProblem {
    pub fn new(
        phi: StructureMorphism,
        alpha: StructureMorphism,
    ) -> Result<Self, EmbedError> {
        if phi.target().as_ref() != alpha.target().as_ref() {
            return Err(EmbedError::TargetMismatch);
        }
        let pc = phi.classify();
        if !pc.morphism {
            return Err(EmbedError::NotAMorphism(defect_text(pc.defect)));
        }
        let ac = alpha.classify();
        if !ac.cover {
            return Err(EmbedError::NotACover(defect_text(ac.defect)));
        }
        Ok(EmbeddingProblem { phi, alpha })
    }

    pub fn phi(&self) -> &StructureMorphism {
        &self.phi
    }

    pub fn alpha(&self) -> &StructureMorphism {
        &self.alpha
    }

    /// Backtracking search in lexicographic order: group homomorphisms
    /// compatible with the two arrows first, then one target point per
    /// source orbit, propagated along the orbit. Returns the first solution.
    pub fn solve_direct(&self) -> Result<SolveOutcome, EmbedError> {
        let g = self.phi.source();
        let b = self.alpha.source();
        let phi = &self.phi;
        let alpha = &self.alpha;
        let mut found: Option<(Vec<usize>, Vec<usize>)> = None;
        hom_search(
            g.group(),
            b.group(),
            &[],
            |e, img| alpha.apply_group(img) == phi.apply_group(e),
            &mut |map| match assign_points(g, b, phi, alpha, map) {
                Some(pm) => {
                    found = Some((map.to_vec(), pm));
                    false
                }
                None => true,
            },
        )?;
        match found {
            Some((map, pm)) => {
                let gamma =
                    StructureMorphism::new(Arc::clone(g), Arc::clone(b), map, pm)?;
                debug_assert!(gamma.classify().morphism);
                Ok(SolveOutcome::Solved(gamma))
            }
            None => Ok(SolveOutcome::Unsolvable),
        }
    }

    /// Splits phi through a finite epimorphism, pulls alpha back over the
    /// split, solves the resulting problem directly, and maps the solution
    /// down. Agrees with `solve_direct` on solvability.
    pub fn solve_via_factorization(&self) -> Result<SolveOutcome, EmbedError> {
        let (hat, bar) = factor_morphism(&self.phi)?;
        let pulled = fiber_product(&self.alpha, &bar)?;
        let sub = EmbeddingProblem::new(hat, pulled.proj_second.clone())?;
        match sub.solve_direct()? {
            SolveOutcome::Solved(gamma_hat) => {
                let gamma = gamma_hat.then(&pulled.proj_first)?;
                Ok(SolveOutcome::Solved(gamma))
            }
            SolveOutcome::Unsolvable => Ok(SolveOutcome::Unsolvable),
        }
    }
}

fn defect_text(defect: Option<crate::structure::MorphismDefect>) -> String {
    defect
        .map(|d| d.to_string())
        .unwrap_or_else(|| "unclassified".into())
}

/// One candidate target point per orbit representative, smallest first; the
/// rest of the orbit follows by equivariance. The stabilizer condition at
/// the representative makes the propagation single-valued.
fn assign_points(
    g: &GroupStructure,
    b: &GroupStructure,
    phi: &StructureMorphism,
    alpha: &StructureMorphism,
    gamma: &[usize],
) -> Option<Vec<usize>> {
    let image = |sub: &crate::group::Subgroup| -> Vec<usize> {
        let mut v: Vec<usize> = sub.members().iter().map(|&m| gamma[m]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut pm = vec![usize::MAX; g.points()];
    for orbit in g.orbits() {
        let x = orbit[0];
        let gx_image = image(g.assigned(x));
        let sx_image = image(&g.stabilizer(x));
        let mut chosen = None;
        for j in 0..b.points() {
            if alpha.apply_point(j) != phi.apply_point(x) {
                continue;
            }
            if !gx_image.iter().all(|&e| b.assigned(j).contains(e)) {
                continue;
            }
            let sj = b.stabilizer(j);
            if !sx_image.iter().all(|&e| sj.contains(e)) {
                continue;
            }
            chosen = Some(j);
            break;
        }
        let j = chosen?;
        for e in 0..g.group().order() {
            pm[g.act(x, e)] = b.act(j, gamma[e]);
        }
    }
    debug_assert!(pm.iter().all(|&v| v != usize::MAX));
    Some(pm)
}

/// A section of a cover: gamma with psi after gamma the identity, together
/// with the image sub-structure it spans inside the source of the cover.
pub fn find_cover_section(
    psi: &StructureMorphism,
) -> Result<(StructureMorphism, GroupStructure), EmbedError> {
    let identity = StructureMorphism::identity(psi.target());
    let problem = EmbeddingProblem::new(identity, psi.clone())?;
    match problem.solve_direct()? {
        SolveOutcome::Solved(gamma) => {
            let image_group = gamma.hom().image();
            let mut image_points: Vec<usize> = gamma.point_map().to_vec();
            image_points.sort_unstable();
            image_points.dedup();
            let theta = sub_structure(psi.source(), &image_group, &image_points)?;
            Ok((gamma, theta))
        }
        SolveOutcome::Unsolvable => Err(EmbedError::NoSection),
    }
}
