//! Built-in manufactured solutions with matching spectral points.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::decomposition::{decompose, default_plan};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::forms::assemble;
use crate::operator::{parse_operator, Operator};
use crate::parallel::Execution;
use crate::spectral::{substitute_exponential, BoxDomain, ExponentialAnsatz, SubstitutedForm};

use super::quadrature::QuadratureSpec;
use super::residual::{adjoint_defect, boundary_residual, concrete_box, pde_defect, ManufacturedSolution, Residual};

pub const TAGS: [&str; 4] = ["wave", "heat", "biharmonic", "stokes"];

/// An operator, an exact solution and a point on its constraint variety.
#[derive(Clone, Debug)]
pub struct CatalogCase {
    pub tag: &'static str,
    pub operator: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub solution: Vec<&'static str>,
    /// Exponent assignment for the adjoint solution.
    pub ansatz: &'static str,
    /// Values of the ansatz's free names.
    pub point: Vec<(&'static str, Complex64)>,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn catalog_case(tag: &str) -> Result<CatalogCase> {
    Ok(match tag {
        "wave" => CatalogCase {
            tag: "wave",
            operator: fixtures::WAVE,
            params: Vec::new(),
            solution: vec!["(x - t)^3 + (x + t)^2"],
            ansatz: "s_t=-1, s_x=1",
            point: Vec::new(),
        },
        "heat" => CatalogCase {
            tag: "heat",
            operator: fixtures::HEAT,
            params: Vec::new(),
            solution: vec!["exp(x + t)"],
            ansatz: "s_t=-i*a^2, s_x=a",
            point: vec![("a", re(1.3))],
        },
        "biharmonic" => CatalogCase {
            tag: "biharmonic",
            operator: fixtures::BIHARMONIC,
            params: Vec::new(),
            solution: vec!["x^3 - 3*x*y^2 + z"],
            ansatz: "s_x=1, s_y=0, s_z=i",
            point: Vec::new(),
        },
        "stokes" => CatalogCase {
            tag: "stokes",
            operator: fixtures::STOKES,
            params: vec![("nu", 0.5)],
            solution: vec!["exp(-nu*t)*sin(y)", "0", "0", "0"],
            ansatz: "s_t=xi3, s_x=-(xi1^2 - xi2^2), s_y=-i*(xi1^2 + xi2^2), s_z=2*xi1*xi2, \
                     amp_u1=xi1^2 - xi2^2, amp_u2=i*(xi1^2 + xi2^2), amp_u3=-2*xi1*xi2, amp_p=xi3",
            point: vec![("xi1", re(0.8)), ("xi2", re(0.5)), ("xi3", re(0.7))],
        },
        other => return Err(Error::UnknownTag(other.to_string())),
    })
}

/// Solutions available for `tag`.
pub fn builtin_solutions(tag: &str) -> Result<Vec<ManufacturedSolution>> {
    let case = catalog_case(tag)?;
    let op = parse_operator(case.operator)?;
    Ok(vec![case.manufactured(&op)?])
}

/// Everything needed to integrate one case.
#[derive(Clone, Debug)]
pub struct PreparedCase {
    pub op: Operator,
    pub ansatz: ExponentialAnsatz,
    pub form: SubstitutedForm,
    pub point: Vec<Complex64>,
    pub solution: ManufacturedSolution,
}

impl CatalogCase {
    fn param_map(&self) -> HashMap<String, Complex64> {
        self.params.iter().map(|(n, v)| (n.to_string(), re(*v))).collect()
    }

    fn manufactured(&self, op: &Operator) -> Result<ManufacturedSolution> {
        ManufacturedSolution::parse(&op.space().axes, &self.solution, &self.param_map())
    }

    pub fn prepare(&self) -> Result<PreparedCase> {
        let mut values = self.param_map();
        values.extend(self.point.iter().map(|(n, v)| (n.to_string(), *v)));
        PreparedCase::new(parse_operator(self.operator)?, self.ansatz, &self.solution, &values)
    }
}

impl PreparedCase {
    /// Decompose `op` under its default plan and substitute the ansatz;
    /// `values` must bind every parameter and free ansatz name.
    pub fn new(op: Operator, ansatz: &str, solution: &[&str], values: &HashMap<String, Complex64>) -> Result<Self> {
        let ansatz = ExponentialAnsatz::parse(op.space(), &op.field_names(), ansatz)?;
        let f = assemble(&decompose(&op, &default_plan(&op))?)?;
        let form = substitute_exponential(&f, &ansatz)?;
        let point = form
            .vars()
            .iter()
            .map(|v| values.get(v).copied().ok_or_else(|| Error::UnknownName(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        if solution.len() != op.field_count() {
            return Err(Error::DimensionMismatch { expected: op.field_count(), found: solution.len() });
        }
        let params: HashMap<String, Complex64> =
            op.space().params.iter().filter_map(|p| values.get(p).map(|v| (p.clone(), *v))).collect();
        let solution = ManufacturedSolution::parse(&op.space().axes, solution, &params)?;
        Ok(Self { op, ansatz, form, point, solution })
    }
}

/// Result of running one catalog case.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub tag: String,
    pub residual: Residual,
    pub pde_defect: f64,
    pub adjoint_defect: f64,
}

impl PreparedCase {
    pub fn params(&self) -> Vec<Complex64> {
        self.point[..self.op.space().params.len()].to_vec()
    }

    pub fn run(&self, domain: &BoxDomain, quad: &QuadratureSpec, exec: Execution) -> Result<CaseReport> {
        self.run_with(&self.solution, domain, quad, exec)
    }

    /// Integrate with a different solution (for detector checks).
    pub fn run_with(
        &self,
        q: &ManufacturedSolution,
        domain: &BoxDomain,
        quad: &QuadratureSpec,
        exec: Execution,
    ) -> Result<CaseReport> {
        let b = concrete_box(domain)?;
        let residual = boundary_residual(&self.form, &self.point, q, &b, quad, exec)?;
        Ok(CaseReport {
            tag: String::new(),
            residual,
            pde_defect: pde_defect(&self.op, q, &self.params(), &b, 50, 11),
            adjoint_defect: adjoint_defect(&self.op, &self.ansatz, &self.point)?,
        })
    }
}

/// Run a catalog case on the unit box with `nodes` per axis.
pub fn run_catalog(tag: &str, nodes: usize, exec: Execution) -> Result<CaseReport> {
    let case = catalog_case(tag)?;
    let prepared = case.prepare()?;
    let domain = BoxDomain::unit(&prepared.op.space().axes);
    let quad = QuadratureSpec::uniform(prepared.op.dim(), nodes);
    let mut r = prepared.run(&domain, &quad, exec)?;
    r.tag = tag.to_string();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;

    #[test]
    fn every_case_closes() {
        for tag in TAGS {
            let r = run_catalog(tag, 20, Execution::Sequential).unwrap();
            assert!(r.adjoint_defect < 1e-12, "{tag}: adjoint {}", r.adjoint_defect);
            assert!(r.pde_defect < 1e-10, "{tag}: pde {}", r.pde_defect);
            assert!(r.residual.passes(1e-8), "{tag}: {:?}", r.residual);
            assert!(r.residual.scale > 1e-3, "{tag}: trivial scale");
        }
    }

    #[test]
    fn unknown_tag() {
        assert!(matches!(builtin_solutions("kdv"), Err(Error::UnknownTag(_))));
    }

    #[test]
    fn biharmonic_entry_is_biharmonic() {
        let s = &builtin_solutions("biharmonic").unwrap()[0];
        let lap = |e: &super::super::expr::Expr| {
            super::super::expr::Expr::add(
                (0..3).map(|k| e.derivative(&MultiIndex::unit(3, k).plus_unit(k))).collect(),
            )
        };
        let l2 = lap(&lap(&s.fields[0]));
        assert!(l2.is_zero() || l2.eval(&[0.3, 0.2, 0.1]).norm() < 1e-14);
    }
}
