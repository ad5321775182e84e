//! Constant-coefficient linear partial differential operators.

mod dsl;

use std::collections::BTreeMap;

use crate::bilinear::{pairing, BilinearExpr, Pairing, TermKey};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{Coeff, Poly};

pub use dsl::{parse_operator, parse_scalar, MatrixSource};

/// Named axes and coefficient parameters shared by an operator and everything
/// derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub axes: Vec<String>,
    pub params: Vec<String>,
}

impl Space {
    pub fn new(axes: &[&str], params: &[&str]) -> Self {
        Self {
            axes: axes.iter().map(|s| s.to_string()).collect(),
            params: params.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a == name)
    }

    /// Default spectral variable names `s_<axis>`.
    pub fn spectral_names(&self) -> Vec<String> {
        self.axes.iter().map(|a| format!("s_{a}")).collect()
    }
}

/// One `c_α ∂^α` entry of an operator; `row` indexes the adjoint field `q̃`,
/// `col` the field `q` it acts on (both 0 for scalar operators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTerm {
    pub row: usize,
    pub col: usize,
    pub alpha: MultiIndex,
    pub coeff: Coeff,
}

impl OperatorTerm {
    pub fn pairing(&self) -> Pairing {
        Pairing::for_order(self.alpha.order())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarPDO {
    space: Space,
    terms: BTreeMap<MultiIndex, Coeff>,
}

impl ScalarPDO {
    pub fn zero(space: Space) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn from_terms(space: Space, terms: impl IntoIterator<Item = (MultiIndex, Coeff)>) -> Result<Self> {
        let mut op = Self::zero(space);
        for (alpha, c) in terms {
            if alpha.dim() != op.space.dim() {
                return Err(Error::DimensionMismatch { expected: op.space.dim(), found: alpha.dim() });
            }
            op.add_term(alpha, c);
        }
        Ok(op)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Coeff) {
        let sum = &self.terms.get(&alpha).cloned().unwrap_or_default() + &c;
        if sum.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Coeff {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(self.space.clone());
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::Invalid("operators live in different spaces".into()));
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    /// Formal adjoint: `c_α ↦ (−1)^{|α|} c_α`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.space.clone());
        for (a, c) in &self.terms {
            let c = if a.order() % 2 == 1 { -c } else { c.clone() };
            out.add_term(a.clone(), c);
        }
        out
    }

    /// `(L_e, L_o)`: even-order (self-adjoint) and odd-order (skew-adjoint) parts.
    pub fn even_odd_split(&self) -> (Self, Self) {
        let mut even = Self::zero(self.space.clone());
        let mut odd = Self::zero(self.space.clone());
        for (a, c) in &self.terms {
            if a.order() % 2 == 0 {
                even.add_term(a.clone(), c.clone());
            } else {
                odd.add_term(a.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// `q̃Lq − qL†q̃` assembled as `Σ_{odd} c_α {α,0} + Σ_{even} c_α [α,0]`.
    pub fn bilinear_rhs(&self) -> BilinearExpr {
        concomitant(self.dim(), &self.op_terms())
    }

    /// The same expression by direct expansion of `q̃Lq` and `qL†q̃`.
    pub fn bilinear_rhs_direct(&self) -> BilinearExpr {
        let n = self.dim();
        let zero = MultiIndex::zero(n);
        let adj = self.adjoint();
        let mut out = BilinearExpr::zero(n);
        for (a, c) in &self.terms {
            out.add_term(TermKey::scalar(a.clone(), zero.clone()), c.clone());
        }
        for (a, c) in &adj.terms {
            out.add_term(TermKey::scalar(zero.clone(), a.clone()), -c);
        }
        out
    }

    /// Polynomial symbol with `∂_k ↦ i·w_k`; the `w_k` live in a variable table
    /// whose first entries are the operator's parameters.
    pub fn symbol_at(&self, w: &[Poly]) -> Result<Poly> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        let iw: Vec<Poly> = w.iter().map(|p| &Poly::i() * p).collect();
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in a.entries().iter().enumerate() {
                if e > 0 {
                    t = &t * &iw[k].pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Symbol over the variable table `params ++ s_<axis>`.
    pub fn symbol(&self, mode: SymbolMode) -> Poly {
        let p = self.space.params.len();
        let sign = match mode {
            SymbolMode::PlusI => Poly::one(),
            SymbolMode::MinusI => Poly::int(-1),
        };
        let w: Vec<Poly> = (0..self.dim()).map(|k| &sign * &Poly::var(p + k)).collect();
        self.symbol_at(&w).expect("dimension checked by construction")
    }

    /// Variable names for [`ScalarPDO::symbol`] output.
    pub fn symbol_names(&self) -> Vec<String> {
        let mut n = self.space.params.clone();
        n.extend(self.space.spectral_names());
        n
    }

    pub fn op_terms(&self) -> Vec<OperatorTerm> {
        self.terms
            .iter()
            .map(|(a, c)| OperatorTerm { row: 0, col: 0, alpha: a.clone(), coeff: c.clone() })
            .collect()
    }

    pub fn to_dsl(&self) -> String {
        dsl::print_scalar(self)
    }

    pub(crate) fn expr_text(&self) -> String {
        dsl::print_expr(self)
    }
}

/// Sign convention for the symbol substitution `∂_k ↦ ±i·s_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolMode {
    PlusI,
    MinusI,
}

/// Square matrix of scalar operators acting on a vector of fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPDO {
    space: Space,
    fields: Vec<String>,
    entries: Vec<Vec<ScalarPDO>>,
}

impl MatrixPDO {
    pub fn new(space: Space, fields: Vec<String>, entries: Vec<Vec<ScalarPDO>>) -> Result<Self> {
        let m = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::NonSquare { rows: m, row: i, cols: row.len() });
            }
            for e in row {
                if e.space != space {
                    return Err(Error::Invalid("matrix entries must share one space".into()));
                }
            }
        }
        if fields.len() != m {
            return Err(Error::Invalid(format!("{} field names for a {m}x{m} operator", fields.len())));
        }
        Ok(Self { space, fields, entries })
    }

    /// A 1×1 matrix wrapping a scalar operator.
    pub fn from_scalar(op: &ScalarPDO, field: &str) -> Self {
        Self {
            space: op.space.clone(),
            fields: vec![field.to_string()],
            entries: vec![vec![op.clone()]],
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn entry(&self, row: usize, col: usize) -> &ScalarPDO {
        &self.entries[row][col]
    }

    /// Entrywise adjoint, then transpose.
    pub fn adjoint(&self) -> Self {
        let m = self.size();
        let entries = (0..m)
            .map(|i| (0..m).map(|j| self.entries[j][i].adjoint()).collect())
            .collect();
        Self { space: self.space.clone(), fields: self.fields.clone(), entries }
    }

    /// `φ̃_i L_ij φ_j − φ_i (L†)_ij φ̃_j`, summed over all entries.
    pub fn system_bilinear_rhs(&self) -> BilinearExpr {
        concomitant(self.dim(), &self.op_terms())
    }

    /// Direct expansion of the same expression through the matrix adjoint.
    pub fn system_bilinear_rhs_direct(&self) -> BilinearExpr {
        let n = self.dim();
        let zero = MultiIndex::zero(n);
        let adj = self.adjoint();
        let mut out = BilinearExpr::zero(n);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (a, c) in e.terms() {
                    out.add_term(TermKey::new(j, i, a.clone(), zero.clone()), c.clone());
                }
            }
        }
        for (i, row) in adj.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (a, c) in e.terms() {
                    out.add_term(TermKey::new(i, j, zero.clone(), a.clone()), -c);
                }
            }
        }
        out
    }

    pub fn op_terms(&self) -> Vec<OperatorTerm> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (a, c) in e.terms() {
                    out.push(OperatorTerm { row: i, col: j, alpha: a.clone(), coeff: c.clone() });
                }
            }
        }
        out
    }

    pub fn to_source(&self) -> MatrixSource {
        MatrixSource {
            axes: self.space.axes.clone(),
            params: self.space.params.clone(),
            fields: self.fields.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(ScalarPDO::expr_text).collect())
                .collect(),
        }
    }
}

/// A parsed operator of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    Scalar(ScalarPDO),
    Matrix(MatrixPDO),
}

impl Operator {
    pub fn space(&self) -> &Space {
        match self {
            Operator::Scalar(s) => s.space(),
            Operator::Matrix(m) => m.space(),
        }
    }

    pub fn dim(&self) -> usize {
        self.space().dim()
    }

    pub fn field_count(&self) -> usize {
        match self {
            Operator::Scalar(_) => 1,
            Operator::Matrix(m) => m.size(),
        }
    }

    pub fn field_names(&self) -> Vec<String> {
        match self {
            Operator::Scalar(_) => vec!["q".to_string()],
            Operator::Matrix(m) => m.fields.clone(),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Operator::Scalar(s) => Operator::Scalar(s.adjoint()),
            Operator::Matrix(m) => Operator::Matrix(m.adjoint()),
        }
    }

    pub fn op_terms(&self) -> Vec<OperatorTerm> {
        match self {
            Operator::Scalar(s) => s.op_terms(),
            Operator::Matrix(m) => m.op_terms(),
        }
    }

    /// The bilinear concomitant the decomposition must reproduce.
    pub fn concomitant(&self) -> BilinearExpr {
        match self {
            Operator::Scalar(s) => s.bilinear_rhs(),
            Operator::Matrix(m) => m.system_bilinear_rhs(),
        }
    }

    /// View as a matrix (scalars become 1×1).
    pub fn as_matrix(&self) -> MatrixPDO {
        match self {
            Operator::Scalar(s) => MatrixPDO::from_scalar(s, "q"),
            Operator::Matrix(m) => m.clone(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Operator::Scalar(_))
    }
}

impl From<ScalarPDO> for Operator {
    fn from(s: ScalarPDO) -> Self {
        Operator::Scalar(s)
    }
}

impl From<MatrixPDO> for Operator {
    fn from(m: MatrixPDO) -> Self {
        Operator::Matrix(m)
    }
}

fn concomitant(dim: usize, terms: &[OperatorTerm]) -> BilinearExpr {
    let zero = MultiIndex::zero(dim);
    let mut out = BilinearExpr::zero(dim);
    for t in terms {
        let p = pairing(t.pairing(), &t.alpha, &zero, t.col, t.row).expect("dimension checked");
        out.add_assign(&p.scale(&t.coeff));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::bracket;

    fn op(src: &str) -> ScalarPDO {
        parse_scalar(src).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn adjoint_examples() {
        let wave = op("axes x,t; Dt^2 - Dx^2");
        assert_eq!(wave.adjoint(), wave);
        let dx = op("axes x; Dx");
        assert_eq!(dx.adjoint(), op("axes x; -Dx"));
    }

    #[test]
    fn split_examples() {
        let wave = op("axes x,t; Dt^2 - Dx^2");
        let (e, o) = wave.even_odd_split();
        assert_eq!(e, wave);
        assert!(o.is_zero());

        let heat = op("axes x,t; Dt - Dx^2");
        let (e, o) = heat.even_odd_split();
        assert_eq!(e, op("axes x,t; -Dx^2"));
        assert_eq!(o, op("axes x,t; Dt"));

        let kdv = op("axes x,t; Dt + Dx^3");
        let (e, o) = kdv.even_odd_split();
        assert!(e.is_zero());
        assert_eq!(o, kdv);
    }

    #[test]
    fn wave_concomitant() {
        let wave = op("axes x,t; Dt^2 - Dx^2");
        let z = mi(&[0, 0]);
        let expected = &bracket(&mi(&[0, 2]), &z, 0, 0).unwrap() - &bracket(&mi(&[2, 0]), &z, 0, 0).unwrap();
        assert_eq!(wave.bilinear_rhs(), expected);
        assert_eq!(wave.bilinear_rhs_direct(), expected);
    }

    #[test]
    fn helmholtz_zero_order_term_vanishes() {
        let helm = op("axes x,y; Dx^2 + Dy^2 + 5");
        let lap = op("axes x,y; Dx^2 + Dy^2");
        assert_eq!(helm.bilinear_rhs(), lap.bilinear_rhs());
        assert_ne!(helm.symbol(SymbolMode::PlusI), lap.symbol(SymbolMode::PlusI));
    }

    #[test]
    fn sextic_concomitant() {
        let l = op("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2");
        let z = mi(&[0, 0, 0]);
        let mut expected = BilinearExpr::zero(3);
        for v in [[2, 2, 2], [2, 2, 0], [0, 0, 2]] {
            expected.add_assign(&bracket(&mi(&v), &z, 0, 0).unwrap());
        }
        assert_eq!(l.bilinear_rhs(), expected);
    }

    #[test]
    fn symbols() {
        let wave = op("axes x,t; Dt^2 - Dx^2");
        let names = wave.symbol_names();
        let s = wave.symbol(SymbolMode::PlusI);
        assert_eq!(s, crate::parse::parse_poly("s_x^2 - s_t^2", &names).unwrap());

        let ex2 = op("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2");
        let names = ex2.symbol_names();
        assert_eq!(
            ex2.symbol(SymbolMode::PlusI),
            crate::parse::parse_poly("-s_x^2*s_y^2*s_z^2 + s_x^2*s_y^2 - s_z^2", &names).unwrap()
        );

        let heat = op("axes x,t; Dt - Dx^2");
        assert_eq!(heat.adjoint().symbol(SymbolMode::PlusI), heat.symbol(SymbolMode::MinusI));
    }

    #[test]
    fn biharmonic_symbol_vanishes_on_null_cone() {
        let b = op("axes x,y,z; Dx^4 + Dy^4 + Dz^4 + 2*Dx^2*Dy^2 + 2*Dy^2*Dz^2 + 2*Dz^2*Dx^2");
        let s = b.symbol(SymbolMode::PlusI);
        // s_z^2 -> -(s_x^2 + s_y^2): substitute s_z = i*sqrt(...) is irrational, so
        // eliminate via the square: symbol is (s_x^2+s_y^2+s_z^2)^2
        let names = b.symbol_names();
        let q = crate::parse::parse_poly("s_x^2 + s_y^2 + s_z^2", &names).unwrap();
        assert_eq!(s, q.pow(2));
    }

    #[test]
    fn matrix_adjoint_transposes() {
        let src = r#"{"axes":["x","t"],"params":[],"fields":["a","b"],
            "entries":[["Dt","Dx"],["0","Dt - Dx^2"]]}"#;
        let Operator::Matrix(m) = parse_operator(src).unwrap() else { panic!() };
        let adj = m.adjoint();
        assert_eq!(adj.entry(1, 0), &op("axes x,t; -Dx"));
        assert!(adj.entry(0, 1).is_zero());
        assert_eq!(adj.adjoint(), m);
        assert_eq!(m.system_bilinear_rhs(), m.system_bilinear_rhs_direct());
    }

    #[test]
    fn single_field_system_matches_scalar() {
        let heat = op("axes x,t; Dt - Dx^2");
        let m = MatrixPDO::from_scalar(&heat, "q");
        assert_eq!(m.system_bilinear_rhs(), heat.bilinear_rhs());
    }
}
