//! Reference operators and hand-transcribed decompositions, forms and
//! relations used by tests, the CLI and the numeric catalog.

use crate::bilinear::BilinearExpr;
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::parse::parse_poly;
use crate::render::Labels;
use crate::spectral::{
    BoxDomain, End, GlobalRelation, LinearExpr, QuadricRule, RelationTerm, SubstitutedForm,
};

pub const WAVE: &str = "axes t,x; Dt^2 - Dx^2";
pub const HEAT: &str = "axes t,x; Dt - Dx^2";
pub const SEXTIC: &str = "axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2";
pub const BIHARMONIC: &str = "axes x,y,z; Dx^4 + Dy^4 + Dz^4 + 2*Dx^2*Dy^2 + 2*Dy^2*Dz^2 + 2*Dz^2*Dx^2";
pub const LAPLACE_2D: &str = "axes x,y; Dx^2 + Dy^2";

pub const STOKES: &str = r#"{
  "axes": ["t", "x", "y", "z"],
  "params": ["nu"],
  "fields": ["u1", "u2", "u3", "p"],
  "entries": [
    ["Dt - nu*(Dx^2 + Dy^2 + Dz^2)", "0", "0", "Dx"],
    ["0", "Dt - nu*(Dx^2 + Dy^2 + Dz^2)", "0", "Dy"],
    ["0", "0", "Dt - nu*(Dx^2 + Dy^2 + Dz^2)", "Dz"],
    ["Dx", "Dy", "Dz", "0"]
  ]
}"#;

/// Wave fluxes per axis.
pub const WAVE_FLUXES: [(&str, &str); 2] = [("t", "q~*q_t - q*q~_t"), ("x", "-(q~*q_x - q*q~_x)")];

pub const SEXTIC_FLUXES: [(&str, &str); 3] = [
    ("x", "q~*q_xyyzz - q*q~_xyyzz + q~*q_xyy - q*q~_xyy"),
    ("y", "-(q~_x*q_xyzz - q_x*q~_xyzz + q~_x*q_xy - q_x*q~_xy)"),
    ("z", "q~_xy*q_xyz - q_xy*q~_xyz + q~*q_z - q*q~_z"),
];

pub const STOKES_RHO: &str = "u1~*u1 + u2~*u2 + u3~*u3";

pub const STOKES_J1: &str =
    "u1~*p + u1*p~ + nu*(u1*u1~_x - u1~*u1_x + u2*u2~_x - u2~*u2_x + u3*u3~_x - u3~*u3_x)";

pub const STOKES_J2: &str =
    "u2~*p + u2*p~ + nu*(u1*u1~_y - u1~*u1_y + u2*u2~_y - u2~*u2_y + u3*u3~_y - u3~*u3_y)";

/// `J³` with `∂_x u₃` in its last term; it does not close.
pub const STOKES_J3_DX: &str =
    "u3~*p + u3*p~ + nu*(u1*u1~_z - u1~*u1_z + u2*u2~_z - u2~*u2_z + u3*u3~_z - u3~*u3_x)";

pub const STOKES_J3: &str =
    "u3~*p + u3*p~ + nu*(u1*u1~_z - u1~*u1_z + u2*u2~_z - u2~*u2_z + u3*u3~_z - u3~*u3_z)";

pub const BIHARMONIC_VARS: [&str; 3] = ["sigma1", "sigma2", "sigma3"];

/// The σ-substituted biharmonic fluxes with two coefficient slips.
pub const BIHARMONIC_SLIPPED: [&str; 3] = [
    "q_xxx + i*sigma1^3*q - i*sigma1*q_xx - sigma1^2*q_x + 2*q_xyy + i*sigma1*sigma2^2*q + 2*q_xzz + 2*i*sigma1*sigma3^2*q",
    "q_yyy + i*sigma2^3*q - i*sigma2*q_yy - sigma2^2*q_y - 2*i*sigma1*q_xy - 2*sigma1*sigma2*q_x + 2*q_yzz + 2*i*sigma1*sigma3^2*q",
    "q_zzz + i*sigma3^3*q - i*sigma3*q_zz - sigma3^2*q_z - 2*i*sigma1*q_xz - 2*sigma1*sigma3*q_x - 2*i*sigma2*q_yz - 2*sigma2*sigma3*q_y",
];

/// The same display with the two coefficient slips repaired: `2iσ₁σ₂² q` in
/// the x flux and `2iσ₂σ₃² q` in the y flux.
pub const BIHARMONIC_CORRECTED: [&str; 3] = [
    "q_xxx + i*sigma1^3*q - i*sigma1*q_xx - sigma1^2*q_x + 2*q_xyy + 2*i*sigma1*sigma2^2*q + 2*q_xzz + 2*i*sigma1*sigma3^2*q",
    "q_yyy + i*sigma2^3*q - i*sigma2*q_yy - sigma2^2*q_y - 2*i*sigma1*q_xy - 2*sigma1*sigma2*q_x + 2*q_yzz + 2*i*sigma2*sigma3^2*q",
    BIHARMONIC_SLIPPED[2],
];

/// Rational parameterization of the sextic constraint in `lambda`.
pub const SEXTIC_PARAMETERIZATION: &str =
    "s_x = 2/(lambda - 1/lambda), s_y = 1, s_z = 2/(lambda + 1/lambda)";

pub const SEXTIC_PERTURBED: &str =
    "s_x = 2/(lambda - 1/lambda), s_y = 1, s_z = 2/(lambda + 1/lambda) + 1";

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Parse per-axis flux text into fluxes ordered like `labels.axes`.
pub fn fluxes_from_text(labels: &Labels, entries: &[(&str, &str)]) -> Result<Vec<BilinearExpr>> {
    let n = labels.axes.len();
    let mut out = vec![BilinearExpr::zero(n); n];
    for (axis, text) in entries {
        let k = labels.axes.iter().position(|a| a == axis).ok_or_else(|| Error::UnknownName(axis.to_string()))?;
        out[k] = &out[k] + &labels.parse_bilinear(text)?;
    }
    Ok(out)
}

/// Stokes fluxes `(ρ, J¹, J², J³)`; `dx_variant` selects [`STOKES_J3_DX`].
pub fn stokes_fluxes(dx_variant: bool) -> Result<Vec<BilinearExpr>> {
    let labels = stokes_labels();
    let j3 = if dx_variant { STOKES_J3_DX } else { STOKES_J3 };
    fluxes_from_text(&labels, &[("t", STOKES_RHO), ("x", STOKES_J1), ("y", STOKES_J2), ("z", j3)])
}

pub fn stokes_labels() -> Labels {
    Labels::new(strings(&["t", "x", "y", "z"]), strings(&["nu"]), strings(&["u1", "u2", "u3", "p"]))
}

/// The biharmonic display as a substituted form over `sigma1..sigma3` with
/// weight `exp(i σ_j x^j)`.
pub fn biharmonic_display(corrected: bool) -> Result<SubstitutedForm> {
    let labels = Labels::new(strings(&["x", "y", "z"]), Vec::new(), strings(&["q"]));
    let vars = strings(&BIHARMONIC_VARS);
    let texts = if corrected { BIHARMONIC_CORRECTED } else { BIHARMONIC_SLIPPED };
    let fluxes = texts.iter().map(|t| LinearExpr::parse(t, &vars, &labels)).collect::<Result<Vec<_>>>()?;
    let weight = (0..3).map(crate::poly::Poly::var).collect();
    SubstitutedForm::from_fluxes(labels, vars, weight, fluxes)
}

/// `σ₃² = −σ₁² − σ₂²` over [`BIHARMONIC_VARS`].
pub fn biharmonic_rule() -> QuadricRule {
    let vars = strings(&BIHARMONIC_VARS);
    QuadricRule::new(2, parse_poly("-sigma1^2 - sigma2^2", &vars).expect("fixed text")).expect("valid rule")
}

/// Branches of the wave adjoint solution `e^{ik(x ∓ t)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveBranch {
    /// `q̃ = e^{ik(x−t)}`.
    Minus,
    /// `q̃ = e^{ik(x+t)}`.
    Plus,
}

impl WaveBranch {
    pub fn ansatz(self) -> &'static str {
        match self {
            WaveBranch::Minus => "s_t=-k, s_x=k",
            WaveBranch::Plus => "s_t=k, s_x=k",
        }
    }
}

pub const WAVE_BOX: &str = "t=0:T, x=0:l";

/// Hand transcription of the two wave relations on `(0,T)×(0,l)` after the
/// Dirichlet conditions `q(0,t) = q(l,t) = 0` remove the `q` traces on the
/// `x` faces. Each row is one named transform:
///
/// | name | face | trace |
/// |------|------|-------|
/// | `q̂_t(k,T)`, `q̂(k,T)` | `t = T` | `q_t`, `q` |
/// | `f̂(k)`, `ĝ(k)` | `t = 0` | `q_t`, `q` |
/// | `h₁(±k,T)` | `x = l` | `q_x` |
/// | `h₂(±k,T)` | `x = 0` | `q_x` |
pub fn wave_relation_fixture(branch: WaveBranch) -> GlobalRelation {
    let labels = Labels::new(strings(&["t", "x"]), Vec::new(), strings(&["q"]));
    let vars = strings(&["k", "T", "l"]);
    let p = |s: &str| parse_poly(s, &vars).expect("fixed text");
    // sign of k in the time exponent: −k for e^{ik(x−t)}, +k for e^{ik(x+t)}
    let (wt, qcoef) = match branch {
        WaveBranch::Minus => ("-k", "i*k"),
        WaveBranch::Plus => ("k", "-i*k"),
    };
    let qt = MultiIndex::new(vec![1, 0]);
    let q = MultiIndex::new(vec![0, 0]);
    let qx = MultiIndex::new(vec![0, 1]);
    let row = |axis: usize, end: End, deriv: &MultiIndex, coeff: &str, weight: &str, kernel: &str| RelationTerm {
        axis,
        end,
        sign: end.sign(),
        coeff: p(coeff),
        weight: p(weight),
        kernel: vec![p(kernel)],
        field: 0,
        deriv: deriv.clone(),
    };
    let hi_t = format!("{wt}*T");
    let terms = vec![
        // q̂_t(k,T) and q̂(k,T)
        row(0, End::Hi, &qt, "1", &hi_t, "k"),
        row(0, End::Hi, &q, qcoef, &hi_t, "k"),
        // f̂(k) and ĝ(k)
        row(0, End::Lo, &qt, "1", "0", "k"),
        row(0, End::Lo, &q, qcoef, "0", "k"),
        // h₁ at x = l and h₂ at x = 0, kernel e^{∓ikτ}
        row(1, End::Hi, &qx, "-1", "k*l", wt),
        row(1, End::Lo, &qx, "-1", "0", wt),
    ];
    let domain = BoxDomain::parse(&labels.axes, WAVE_BOX).expect("fixed box");
    GlobalRelation::from_terms(labels, vars, domain, terms)
}

/// Drop the traces `q(0,t)` and `q(l,t)` that the Dirichlet data remove.
pub fn wave_dirichlet(r: &GlobalRelation) -> GlobalRelation {
    r.retain(|t| !(t.axis == 1 && t.deriv.is_zero()))
}
