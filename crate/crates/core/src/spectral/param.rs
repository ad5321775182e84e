//! Sampling check of a rational parameterization of a constraint variety.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::parse::{parse_assignments, Ast};

use super::constraint::ConstraintVariety;

pub const DEFAULT_SAMPLES: usize = 20;

/// `var ↦ expression in one auxiliary variable`.
#[derive(Clone, Debug)]
pub struct Parameterization {
    src: String,
    aux: String,
    subs: Vec<(String, Ast)>,
}

impl Parameterization {
    /// Parse `s_x = 2/(lambda - 1/lambda), s_y = 1, ...` with `aux` the free
    /// variable.
    pub fn parse(src: &str, aux: &str) -> Result<Self> {
        let subs = parse_assignments(src)?;
        for (_, ast) in &subs {
            if let Some(bad) = ast.identifiers().into_iter().find(|n| n != aux && n != "i") {
                return Err(Error::UnknownName(bad));
            }
        }
        Ok(Self { src: src.to_string(), aux: aux.to_string(), subs })
    }

    pub fn aux(&self) -> &str {
        &self.aux
    }

    /// Values of every constraint variable at `lambda`; `None` at a pole.
    fn values(&self, cv: &ConstraintVariety, lambda: &BigRational) -> Result<Option<Vec<GaussRational>>> {
        let env = HashMap::from([(self.aux.clone(), GaussRational::real(lambda.clone()))]);
        let mut out = Vec::new();
        for v in cv.vars() {
            let (_, ast) = self
                .subs
                .iter()
                .find(|(n, _)| n == v)
                .ok_or_else(|| Error::Invalid(format!("parameterization does not assign `{v}`")))?;
            match ast.eval_exact(&self.src, &env)? {
                Some(x) => out.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamOutcome {
    Pass { samples: usize, poles: usize },
    Fail { lambda: BigRational, residual: GaussRational },
}

impl ParamOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, ParamOutcome::Pass { .. })
    }
}

/// Evaluate the cleared constraint at `samples` seeded rational points,
/// skipping poles of the substitution.
pub fn check_parameterization(
    cv: &ConstraintVariety,
    param: &Parameterization,
    samples: usize,
    seed: u64,
) -> Result<ParamOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = samples.max(1) * 50;
    let (mut valid, mut poles) = (0, 0);
    for _ in 0..budget {
        if valid == samples {
            break;
        }
        let p: i64 = rng.gen_range(-40..=40);
        let q: i64 = rng.gen_range(1..=15);
        let lambda = BigRational::new(BigInt::from(p), BigInt::from(q));
        let Some(values) = param.values(cv, &lambda)? else {
            poles += 1;
            continue;
        };
        valid += 1;
        let r = cv.poly().eval_exact(&values);
        if !num_traits::Zero::is_zero(&r) {
            return Ok(ParamOutcome::Fail { lambda, residual: r });
        }
    }
    if valid == 0 {
        return Err(Error::AllPoles(poles));
    }
    Ok(ParamOutcome::Pass { samples: valid, poles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::parse_operator;
    use crate::spectral::adjoint_constraint;

    fn sextic() -> ConstraintVariety {
        adjoint_constraint(&parse_operator("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2").unwrap())
    }

    #[test]
    fn rational_parameterization_passes() {
        let p = Parameterization::parse("s_x = 2/(l - 1/l), s_y = 1, s_z = 2/(l + 1/l)", "l").unwrap();
        let r = check_parameterization(&sextic(), &p, DEFAULT_SAMPLES, 7).unwrap();
        assert!(matches!(r, ParamOutcome::Pass { samples: 20, .. }), "{r:?}");
    }

    #[test]
    fn perturbed_fails() {
        let p = Parameterization::parse("s_x = 2/(l - 1/l), s_y = 1, s_z = 2/(l + 1/l) + 1", "l").unwrap();
        assert!(matches!(check_parameterization(&sextic(), &p, 20, 7).unwrap(), ParamOutcome::Fail { .. }));
    }

    #[test]
    fn all_poles() {
        let p = Parameterization::parse("s_x = 1/(l - l), s_y = 1, s_z = 1", "l").unwrap();
        assert!(matches!(check_parameterization(&sextic(), &p, 5, 1), Err(Error::AllPoles(_))));
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(matches!(Parameterization::parse("s_x = mu", "l"), Err(Error::UnknownName(_))));
    }
}
