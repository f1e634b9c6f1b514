use std::time::Instant;

use lie_transport::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{BenchConfig, GroupChoice, SchemeTag};
use crate::error::Result;

/// One benchmark row.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub scheme: SchemeTag,
    pub beta: f64,
    pub n: usize,
    /// Metric norm of the difference to the reference transport. NaN when the
    /// pole ladder's shooting failed to converge.
    pub error: f64,
    pub wall_time_s: f64,
}

impl ConvergenceRecord {
    pub fn failed(&self) -> bool {
        self.error.is_nan()
    }
}

/// Test problem shared by every cell of a run.
#[derive(Clone, Debug)]
pub struct TransportProblem {
    pub structure: LieGroupStructure,
    pub direction: AlgebraVector,
    pub zeta0: AlgebraVector,
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> AlgebraVector {
    let v = AlgebraVector::from_vec((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect());
    let norm = v.norm();
    v * (1.0 / norm)
}

impl TransportProblem {
    /// Direction and transported vector drawn uniformly in `[-1, 1]^n` and
    /// normalised to unit metric norm.
    pub fn from_config(cfg: &BenchConfig) -> Result<Self> {
        let structure = match cfg.group {
            GroupChoice::Se3 => build_se3_structure(cfg.beta)?,
            GroupChoice::So3 => build_so3_structure(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let direction = random_unit(&mut rng, structure.dim());
        let zeta0 = random_unit(&mut rng, structure.dim());
        Ok(Self {
            structure,
            direction,
            zeta0,
        })
    }

    /// Transported vector at the end of the geodesic, by `scheme` with `n` steps or rungs.
    pub fn transport(&self, scheme: SchemeTag, n: usize) -> lie_transport::Result<AlgebraVector> {
        let s = &self.structure;
        let base = GroupElement::identity(s);
        match scheme {
            SchemeTag::Rk2 | SchemeTag::Rk4 => {
                let integrator = if scheme == SchemeTag::Rk2 {
                    Scheme::Rk2
                } else {
                    Scheme::Rk4
                };
                parallel_transport_geodesic(s, &base, &self.direction, &self.zeta0, n, integrator)
                    .map(|(_, zeta)| zeta)
            }
            SchemeTag::Pole => pole_ladder(s, &base, &self.direction, &self.zeta0, n),
        }
    }

    pub fn reference(&self, steps: usize) -> lie_transport::Result<AlgebraVector> {
        self.transport(SchemeTag::Rk4, steps)
    }
}

/// Error of every `(scheme, n)` cell against an RK4 reference transport.
/// Cells run in parallel; rows come back sorted by scheme, then `n`.
pub fn run_convergence(cfg: &BenchConfig) -> Result<Vec<ConvergenceRecord>> {
    cfg.validate()?;
    let problem = TransportProblem::from_config(cfg)?;
    let reference = problem.reference(cfg.reference_steps)?;
    let beta = problem.structure.beta();

    let cells: Vec<(SchemeTag, usize)> = cfg
        .schemes
        .iter()
        .flat_map(|&scheme| cfg.n_grid.iter().map(move |&n| (scheme, n)))
        .collect();
    let mut records = cells
        .into_par_iter()
        .map(|(scheme, n)| {
            let start = Instant::now();
            let error = match problem.transport(scheme, n) {
                Ok(zeta) => (&zeta - &reference).norm(),
                Err(lie_transport::Error::NonConvergence { .. }) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            Ok(ConvergenceRecord {
                scheme,
                beta,
                n,
                error,
                wall_time_s: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.scheme, r.n));
    Ok(records)
}

/// Grid values at which the error grew compared with the previous (smaller) `n`.
pub fn non_monotone_points(records: &[ConvergenceRecord]) -> Vec<usize> {
    records
        .windows(2)
        .filter(|w| w[0].scheme == w[1].scheme && w[1].error > w[0].error)
        .map(|w| w[1].n)
        .collect()
}
