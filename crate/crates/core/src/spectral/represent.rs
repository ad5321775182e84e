//! Integral representations `q(x) = −(2π)^{−n} ∫ dk ∫_{∂Ω} e^{ik·x} η(y,k) / L(ik)`.

use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose, default_plan};
use crate::error::{Error, Result};
use crate::forms::assemble;
use crate::multi_index::MultiIndex;
use crate::operator::{Operator, SymbolMode};
use crate::poly::{latex_symbol, Poly};
use crate::render::{signed_sum, Style};

use super::substitute::{substitute_exponential, ExponentSign, ExponentialAnsatz, SubstitutedDoc, SubstitutedForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralRepresentation {
    axes: Vec<String>,
    vars: Vec<String>,
    denominator: Poly,
    constant: Poly,
    form: SubstitutedForm,
}

/// Build the representation of a scalar operator; `η` uses `q̃ = e^{−i s·y}`.
pub fn integral_representation(op: &Operator) -> Result<IntegralRepresentation> {
    let Operator::Scalar(s) = op else {
        return Err(Error::Invalid("integral representations are built for scalar operators".into()));
    };
    let denominator = s.symbol(SymbolMode::PlusI);
    if denominator.is_zero() {
        return Err(Error::ZeroSymbol);
    }
    let f = assemble(&decompose(op, &default_plan(op))?)?;
    let ans = ExponentialAnsatz::standard(s.space(), 1, ExponentSign::Minus);
    let form = substitute_exponential(&f, &ans)?;
    Ok(IntegralRepresentation {
        axes: s.space().axes.clone(),
        vars: s.symbol_names(),
        denominator,
        constant: s.coeff(&MultiIndex::zero(s.dim())),
        form,
    })
}

impl IntegralRepresentation {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// `L(i s_1, …, i s_n)`.
    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// The denominator recovered from the form: with `q̃ = e^{−i s·y}`,
    /// `dη = e^{−i s·y}(Lq − L(is) q)`, so `L(is) = c₀ − [q]dη`.
    pub fn denominator_from_form(&self) -> Poly {
        let bare = self.form.exterior_derivative().coeff(0, &MultiIndex::zero(self.dim()));
        &self.constant - &bare
    }

    pub fn form(&self) -> &SubstitutedForm {
        &self.form
    }

    fn kernel(&self, style: Style) -> String {
        let np = self.vars.len() - self.dim();
        let items: Vec<(Poly, String)> = self
            .axes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let name = match style {
                    Style::Text => a.clone(),
                    Style::Latex => latex_symbol(a),
                };
                (Poly::var(np + k), name)
            })
            .collect();
        signed_sum(&items, &self.vars, style)
    }

    fn measure(&self) -> String {
        let np = self.vars.len() - self.dim();
        (0..self.dim())
            .map(|k| format!("\\mathrm{{d}}{}", latex_symbol(&self.vars[np + k])))
            .collect::<Vec<_>>()
            .join("\\,")
    }

    pub fn to_latex(&self) -> String {
        let n = self.dim();
        let xs: Vec<String> = self.axes.iter().map(|a| latex_symbol(a)).collect();
        format!(
            "q({x}) = \\frac{{-1}}{{(2\\pi)^{{{n}}}}} \\int_{{\\mathbb{{R}}^{{{n}}}}} {m} \\int_{{\\partial\\Omega}} \\frac{{e^{{i({k})}} \\eta(y, s)}}{{{d}}}\n\\eta(y, s):\\ {eta}",
            x = xs.join(", "),
            m = self.measure(),
            k = self.kernel(Style::Latex),
            d = self.denominator.to_latex(&self.vars),
            eta = self.form.to_latex(),
        )
    }

    /// Two-dimensional form with a positive prefactor: `η_FZ = −η` and
    /// `𝔭(is) = L(is)`.
    pub fn fokas_zyskin_latex(&self) -> Option<String> {
        if self.dim() != 2 {
            return None;
        }
        let xs: Vec<String> = self.axes.iter().map(|a| latex_symbol(a)).collect();
        let neg = self.form.map_coeffs(|c| -c);
        Some(format!(
            "q({x}) = \\frac{{1}}{{(2\\pi)^{{2}}}} \\int_{{\\mathbb{{R}}^{{2}}}} {m} \\int_{{\\partial\\Omega}} \\frac{{e^{{i({k})}} \\eta(y, s)}}{{\\mathfrak{{p}}}}, \\quad \\mathfrak{{p}} = {d}\n\\eta(y, s):\\ {eta}",
            x = xs.join(", "),
            m = self.measure(),
            k = self.kernel(Style::Latex),
            d = self.denominator.to_latex(&self.vars),
            eta = neg.to_latex(),
        ))
    }

    pub fn to_doc(&self) -> RepresentationDoc {
        let n = self.dim();
        RepresentationDoc {
            dim: n,
            axes: self.axes.clone(),
            vars: self.vars.clone(),
            prefactor: format!("-1/(2*pi)^{n}"),
            prefactor_sign: -1,
            two_pi_power: n,
            integrals: n,
            boundary_integral: true,
            kernel: format!("exp(i*({}))", self.kernel(Style::Text)),
            denominator: self.denominator.to_text(&self.vars),
            eta: self.form.to_doc(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!(
            "q(x) = -1/(2*pi)^{n} * int_R^{n} ds * int_boundary exp(i*({})) * eta(y,s) / ({})\n",
            self.kernel(Style::Text),
            self.denominator.to_text(&self.vars)
        );
        let labels = self.form.labels();
        for (k, f) in self.form.fluxes().iter().enumerate() {
            out.push_str(&format!(
                "a_{} = exp(i*({})) * ({})\n",
                labels.axes[k],
                signed_sum(
                    &self
                        .form
                        .weight()
                        .iter()
                        .zip(&labels.axes)
                        .map(|(w, a)| (w.clone(), a.clone()))
                        .collect::<Vec<_>>(),
                    &self.vars,
                    Style::Text
                ),
                f.render(labels, &self.vars, Style::Text)
            ));
        }
        out
    }
}

/// JSON form; `eta` holds the fluxes with `q̃ = e^{−i s·y}` factored out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub dim: usize,
    pub axes: Vec<String>,
    pub vars: Vec<String>,
    pub prefactor: String,
    pub prefactor_sign: i32,
    pub two_pi_power: usize,
    pub integrals: usize,
    pub boundary_integral: bool,
    pub kernel: String,
    pub denominator: String,
    pub eta: SubstitutedDoc,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::parse_operator;
    use crate::parse::parse_poly;

    #[test]
    fn wave_denominator() {
        let r = integral_representation(&parse_operator("axes t,x; Dt^2 - Dx^2").unwrap()).unwrap();
        assert_eq!(r.denominator(), &parse_poly("s_x^2 - s_t^2", r.vars()).unwrap());
        assert_eq!(&r.denominator_from_form(), r.denominator());
    }

    #[test]
    fn laplacian_shape() {
        let r = integral_representation(&parse_operator("axes x,y; Dx^2 + Dy^2 - 3").unwrap()).unwrap();
        assert_eq!(r.denominator(), &parse_poly("-s_x^2 - s_y^2 - 3", r.vars()).unwrap());
        assert_eq!(&r.denominator_from_form(), r.denominator());
        let doc = r.to_doc();
        assert_eq!((doc.prefactor_sign, doc.two_pi_power, doc.integrals), (-1, 2, 2));
        let fz = r.fokas_zyskin_latex().unwrap();
        assert!(fz.contains("\\frac{1}{(2\\pi)^{2}}"));
        assert!(fz.contains("\\mathfrak{p}"));
    }

    #[test]
    fn zero_symbol_rejected() {
        assert!(matches!(integral_representation(&parse_operator("axes x; 0").unwrap()), Err(Error::ZeroSymbol)));
    }
}
