//! Three-term q-difference equations `P f(qx) + Z f(x) + M f(x/q) = 0`,
//! their Newton diagrams, and the degenerate q-Heun taxonomy.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::symkernel::{RatFun, Rational, SymError, UPoly, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QDiffError {
    #[error("all three coefficient polynomials vanish")]
    AllZero,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// The three shifts, in the column order of the Newton diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shift {
    M,
    Z,
    P,
}

impl Shift {
    pub const ALL: [Shift; 3] = [Shift::M, Shift::Z, Shift::P];

    pub fn col(self) -> u32 {
        match self {
            Shift::M => 0,
            Shift::Z => 1,
            Shift::P => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Shift::M => "M",
            Shift::Z => "Z",
            Shift::P => "P",
        }
    }
}

#[derive(Clone, Debug)]
pub struct QDiffEq {
    var: Var,
    p: UPoly,
    z: UPoly,
    m: UPoly,
}

pub const CONVENTION: &str = "P*f(q*x) + Z*f(x) + M*f(x/q) = 0";

impl QDiffEq {
    pub fn new(var: Var, p: UPoly, z: UPoly, m: UPoly) -> Result<QDiffEq, QDiffError> {
        if p.is_zero() && z.is_zero() && m.is_zero() {
            return Err(QDiffError::AllZero);
        }
        Ok(QDiffEq { var, p, z, m })
    }

    /// Build from rational functions that must be polynomial in `var`.
    pub fn from_ratfuns(var: Var, p: &RatFun, z: &RatFun, m: &RatFun) -> Result<QDiffEq, QDiffError> {
        QDiffEq::new(
            var,
            UPoly::from_ratfun(p, var)?,
            UPoly::from_ratfun(z, var)?,
            UPoly::from_ratfun(m, var)?,
        )
    }

    /// Build from the paper's `A f(qx) - B f(x) + C f(x/q)` form.
    pub fn from_abc(var: Var, a: &RatFun, b: &RatFun, c: &RatFun) -> Result<QDiffEq, QDiffError> {
        QDiffEq::from_ratfuns(var, a, &b.neg(), c)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn p(&self) -> &UPoly {
        &self.p
    }

    pub fn z(&self) -> &UPoly {
        &self.z
    }

    pub fn m(&self) -> &UPoly {
        &self.m
    }

    pub fn poly(&self, s: Shift) -> &UPoly {
        match s {
            Shift::M => &self.m,
            Shift::Z => &self.z,
            Shift::P => &self.p,
        }
    }

    pub fn coeff(&self, s: Shift, k: usize) -> RatFun {
        self.poly(s).coeff(k)
    }

    /// Largest degree among the three coefficient polynomials.
    pub fn degree(&self) -> usize {
        [&self.p, &self.z, &self.m]
            .iter()
            .filter_map(|u| u.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn map_coeffs(
        &self,
        f: impl Fn(&RatFun) -> Result<RatFun, SymError>,
    ) -> Result<QDiffEq, QDiffError> {
        QDiffEq::new(self.var, self.p.map(&f)?, self.z.map(&f)?, self.m.map(&f)?)
    }

    pub fn scale(&self, r: &RatFun) -> QDiffEq {
        QDiffEq {
            var: self.var,
            p: self.p.scale(r),
            z: self.z.scale(r),
            m: self.m.scale(r),
        }
    }

    /// Multiply all three coefficients by one polynomial in the variable.
    pub fn mul_poly(&self, u: &UPoly) -> QDiffEq {
        QDiffEq {
            var: self.var,
            p: self.p.mul(u),
            z: self.z.mul(u),
            m: self.m.mul(u),
        }
    }

    /// Remove the common polynomial factor of the three coefficients.
    pub fn primitive(&self) -> QDiffEq {
        let g = self.p.gcd(&self.z).gcd(&self.m);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        QDiffEq {
            var: self.var,
            p: self.p.exact_div(&g).expect("gcd divides"),
            z: self.z.exact_div(&g).expect("gcd divides"),
            m: self.m.exact_div(&g).expect("gcd divides"),
        }
    }

    /// All coefficients as (shift, degree, value), P then Z then M.
    pub fn entries(&self) -> Vec<(Shift, usize, RatFun)> {
        let mut out = Vec::new();
        for s in [Shift::P, Shift::Z, Shift::M] {
            for (k, c) in self.poly(s).coeffs().iter().enumerate() {
                out.push((s, k, c.clone()));
            }
        }
        out
    }

    /// The first nonzero coefficient in (P, Z, M) × descending degree order.
    pub fn leading_coeff(&self) -> RatFun {
        for s in [Shift::P, Shift::Z, Shift::M] {
            if let Some(l) = self.poly(s).lead() {
                return l.clone();
            }
        }
        unreachable!("validated nonzero")
    }

    /// Equality up to one overall nonzero factor.
    pub fn projective_eq(&self, other: &QDiffEq) -> bool {
        if self.var != other.var {
            return false;
        }
        let (a, b) = (self.leading_coeff(), other.leading_coeff());
        for s in Shift::ALL {
            let n = self.poly(s).coeffs().len().max(other.poly(s).coeffs().len());
            for k in 0..n {
                if !self.coeff(s, k).mul(&b).ratfun_eq(&other.coeff(s, k).mul(&a)) {
                    return false;
                }
            }
        }
        true
    }

    /// Bind parameters to rationals; coefficients become constants (or
    /// remain symbolic in the unbound ones).
    pub fn bind(&self, bindings: &HashMap<Var, Rational>) -> Result<QDiffEq, QDiffError> {
        self.map_coeffs(|r| r.partial_eval(bindings))
    }

    pub fn parameters(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for (_, _, c) in self.entries() {
            s.extend(c.variables());
        }
        s
    }

    pub fn as_ratfuns(&self) -> (RatFun, RatFun, RatFun) {
        (
            self.p.to_ratfun(self.var),
            self.z.to_ratfun(self.var),
            self.m.to_ratfun(self.var),
        )
    }
}

impl fmt::Display for QDiffEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.var.name();
        let (p, z, m) = self.as_ratfuns();
        write!(f, "({p})*f(q*{x}) + ({z})*f({x}) + ({m})*f({x}/q) = 0")
    }
}

// ---------------------------------------------------------------------------
// Newton diagram

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonDiagram {
    pub filled: BTreeSet<(Shift, u32)>,
    /// Number of rows drawn (at least three).
    pub rows: u32,
    /// Convex hull vertices as (column, row), counterclockwise from the
    /// lowest-left point.
    pub hull: Vec<(u32, u32)>,
}

pub fn newton_diagram(eq: &QDiffEq) -> NewtonDiagram {
    let mut filled = BTreeSet::new();
    for s in Shift::ALL {
        for (k, c) in eq.poly(s).coeffs().iter().enumerate() {
            if !c.is_zero() {
                filled.insert((s, k as u32));
            }
        }
    }
    NewtonDiagram::from_support(filled)
}

impl NewtonDiagram {
    pub fn from_support(filled: BTreeSet<(Shift, u32)>) -> NewtonDiagram {
        let rows = filled.iter().map(|&(_, r)| r + 1).max().unwrap_or(0).max(3);
        let pts: Vec<(i64, i64)> = filled
            .iter()
            .map(|&(s, r)| (s.col() as i64, r as i64))
            .collect();
        let hull = convex_hull(pts)
            .into_iter()
            .map(|(c, r)| (c as u32, r as u32))
            .collect();
        NewtonDiagram { filled, rows, hull }
    }

    pub fn is_filled(&self, s: Shift, row: u32) -> bool {
        self.filled.contains(&(s, row))
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; collinear boundary points are dropped.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Ascii,
    Svg,
}

pub fn render_diagram(d: &NewtonDiagram, format: DiagramFormat) -> String {
    match format {
        DiagramFormat::Ascii => render_ascii(d),
        DiagramFormat::Svg => render_svg(d),
    }
}

fn render_ascii(d: &NewtonDiagram) -> String {
    let mut out = String::new();
    for row in (0..d.rows).rev() {
        out.push_str(&format!("{row} |"));
        for s in Shift::ALL {
            out.push_str(if d.is_filled(s, row) { " #" } else { " o" });
        }
        out.push('\n');
    }
    out.push_str("    M Z P\n");
    let hull: Vec<String> = d
        .hull
        .iter()
        .map(|&(c, r)| format!("({},{})", Shift::ALL[c as usize].label(), r))
        .collect();
    out.push_str(&format!("hull: {}\n", hull.join(" ")));
    out
}

fn svg_xy(col: u32, row: u32) -> (u32, u32) {
    (60 + 40 * col, 140 - 40 * row)
}

fn render_svg(d: &NewtonDiagram) -> String {
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 200 160\">\n",
    );
    for row in 0..d.rows.min(4) {
        for s in Shift::ALL {
            let (x, y) = svg_xy(s.col(), row);
            let fill = if d.is_filled(s, row) { "black" } else { "white" };
            out.push_str(&format!(
                "  <circle cx=\"{x}\" cy=\"{y}\" r=\"5\" fill=\"{fill}\" stroke=\"black\"/>\n"
            ));
        }
    }
    if d.hull.len() >= 2 {
        let mut path = String::new();
        for (i, &(c, r)) in d.hull.iter().enumerate() {
            let (x, y) = svg_xy(c, r);
            path.push_str(&format!("{}{} {}", if i == 0 { "M" } else { " L" }, x, y));
        }
        if d.hull.len() > 2 {
            path.push_str(" Z");
        }
        out.push_str(&format!(
            "  <path d=\"{path}\" fill=\"none\" stroke=\"black\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

// ---------------------------------------------------------------------------
// Taxonomy

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaxonClass {
    QHeun,
    Confluent,
    Biconfluent,
    DoublyConfluent,
    HypergeometricType,
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    CqHE,
    CqHE2,
    CqHE3,
    CqHE4,
    BqHE,
    BqHE2,
    BqHE3,
    BqHE4,
    BqHE5,
    BqHE6,
    DqHE,
    DqHE2,
    DqHE3,
    DqHE4,
}

impl Variant {
    pub const ALL: [Variant; 14] = [
        Variant::CqHE,
        Variant::CqHE2,
        Variant::CqHE3,
        Variant::CqHE4,
        Variant::BqHE,
        Variant::BqHE2,
        Variant::BqHE3,
        Variant::BqHE4,
        Variant::BqHE5,
        Variant::BqHE6,
        Variant::DqHE,
        Variant::DqHE2,
        Variant::DqHE3,
        Variant::DqHE4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::CqHE => "cqHE",
            Variant::CqHE2 => "cqHE2",
            Variant::CqHE3 => "cqHE3",
            Variant::CqHE4 => "cqHE4",
            Variant::BqHE => "bqHE",
            Variant::BqHE2 => "bqHE2",
            Variant::BqHE3 => "bqHE3",
            Variant::BqHE4 => "bqHE4",
            Variant::BqHE5 => "bqHE5",
            Variant::BqHE6 => "bqHE6",
            Variant::DqHE => "dqHE",
            Variant::DqHE2 => "dqHE2",
            Variant::DqHE3 => "dqHE3",
            Variant::DqHE4 => "dqHE4",
        }
    }

    pub fn class(self) -> TaxonClass {
        use Variant::*;
        match self {
            CqHE | CqHE2 | CqHE3 | CqHE4 => TaxonClass::Confluent,
            BqHE | BqHE2 | BqHE3 | BqHE4 | BqHE5 | BqHE6 => TaxonClass::Biconfluent,
            DqHE | DqHE2 | DqHE3 | DqHE4 => TaxonClass::DoublyConfluent,
        }
    }

    /// The form obtained after `x -> 1/x`.
    pub fn mirror(self) -> Variant {
        use Variant::*;
        match self {
            CqHE => CqHE3,
            CqHE3 => CqHE,
            CqHE2 => CqHE4,
            CqHE4 => CqHE2,
            BqHE => BqHE3,
            BqHE3 => BqHE,
            BqHE2 => BqHE4,
            BqHE4 => BqHE2,
            BqHE5 => BqHE6,
            BqHE6 => BqHE5,
            DqHE => DqHE2,
            DqHE2 => DqHE,
            DqHE3 => DqHE3,
            DqHE4 => DqHE4,
        }
    }

    /// Zero/nonzero requirements as (must vanish, must not vanish), each a
    /// list of (shift, degree).
    fn pattern(self) -> (&'static [(Shift, u32)], &'static [(Shift, u32)]) {
        use Shift::{M, P, Z};
        use Variant::*;
        match self {
            CqHE => (&[(P, 2)], &[(P, 1), (P, 0), (M, 2), (M, 0)]),
            CqHE2 => (&[(M, 2)], &[(P, 2), (P, 0), (M, 1), (M, 0)]),
            CqHE3 => (&[(M, 0)], &[(P, 2), (P, 0), (M, 2), (M, 1)]),
            CqHE4 => (&[(P, 0)], &[(P, 2), (P, 1), (M, 2), (M, 0)]),
            BqHE => (&[(P, 2), (P, 1)], &[(P, 0), (Z, 2), (M, 2), (M, 0)]),
            BqHE2 => (&[(M, 2), (M, 1)], &[(M, 0), (P, 2), (P, 0), (Z, 2)]),
            BqHE3 => (&[(M, 1), (M, 0)], &[(M, 2), (P, 2), (P, 0), (Z, 0)]),
            BqHE4 => (&[(P, 1), (P, 0)], &[(P, 2), (Z, 0), (M, 2), (M, 0)]),
            BqHE5 => (&[(P, 2), (M, 2)], &[(P, 1), (P, 0), (Z, 2), (M, 1), (M, 0)]),
            BqHE6 => (&[(P, 0), (M, 0)], &[(P, 2), (P, 1), (Z, 0), (M, 2), (M, 1)]),
            DqHE => (&[(P, 2), (P, 0)], &[(P, 1), (M, 2), (M, 0)]),
            DqHE2 => (&[(M, 2), (M, 0)], &[(M, 1), (P, 2), (P, 0)]),
            DqHE3 => (&[(P, 2), (M, 0)], &[(P, 1), (P, 0), (M, 2), (M, 1)]),
            DqHE4 => (&[(P, 0), (M, 2)], &[(P, 2), (P, 1), (M, 1), (M, 0)]),
        }
    }

    fn matches(self, sig: u16) -> bool {
        let (zero, nonzero) = self.pattern();
        zero.iter().all(|&(s, k)| !bit(sig, s, k)) && nonzero.iter().all(|&(s, k)| bit(sig, s, k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    NonReduced,
    SinglyReduced,
    DoublyReduced,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TaxonomyLabel {
    pub class: TaxonClass,
    pub variant: Option<Variant>,
    pub reduction: Reduction,
    /// Support bits: bit `3*row + col` with columns M=0, Z=1, P=2, rows 0..3.
    pub signature: u16,
}

fn bit(sig: u16, s: Shift, k: u32) -> bool {
    sig & (1 << (3 * k + s.col())) != 0
}

pub fn signature_of(eq: &QDiffEq) -> u16 {
    let mut sig = 0u16;
    for s in Shift::ALL {
        for (k, c) in eq.poly(s).coeffs().iter().enumerate() {
            if !c.is_zero() && k < 4 {
                sig |= 1 << (3 * k as u32 + s.col());
            }
        }
    }
    sig
}

/// Human-readable support pattern, one group per column, degree 0 first.
pub fn signature_string(sig: u16) -> String {
    Shift::ALL
        .iter()
        .map(|&s| {
            let bits: String = (0..3).map(|k| if bit(sig, s, k) { '1' } else { '0' }).collect();
            format!("{}:{}", s.label(), bits)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn classify(eq: &QDiffEq) -> TaxonomyLabel {
    classify_signature(signature_of(eq), eq.degree())
}

pub fn classify_signature(sig: u16, degree: usize) -> TaxonomyLabel {
    let unclassified = TaxonomyLabel {
        class: TaxonClass::Unclassified,
        variant: None,
        reduction: Reduction::NotApplicable,
        signature: sig,
    };
    if degree > 2 {
        return unclassified;
    }
    use Shift::{M, P, Z};
    let nz = |s, k| bit(sig, s, k);
    if nz(P, 2) && nz(P, 0) && nz(M, 2) && nz(M, 0) {
        return TaxonomyLabel {
            class: TaxonClass::QHeun,
            ..unclassified
        };
    }
    if !nz(P, 2) && !nz(Z, 2) && !nz(M, 2) {
        return TaxonomyLabel {
            class: TaxonClass::HypergeometricType,
            ..unclassified
        };
    }
    let Some(v) = Variant::ALL.iter().copied().find(|v| v.matches(sig)) else {
        return unclassified;
    };
    let reduction = match v {
        Variant::CqHE | Variant::CqHE2 => {
            if nz(Z, 2) {
                Reduction::NonReduced
            } else {
                Reduction::SinglyReduced
            }
        }
        Variant::CqHE3 | Variant::CqHE4 => {
            if nz(Z, 0) {
                Reduction::NonReduced
            } else {
                Reduction::SinglyReduced
            }
        }
        Variant::DqHE | Variant::DqHE2 | Variant::DqHE3 | Variant::DqHE4 => {
            match (nz(Z, 2), nz(Z, 0)) {
                (true, true) => Reduction::NonReduced,
                (false, false) => Reduction::DoublyReduced,
                _ => Reduction::SinglyReduced,
            }
        }
        _ => Reduction::NotApplicable,
    };
    TaxonomyLabel {
        class: v.class(),
        variant: Some(v),
        reduction,
        signature: sig,
    }
}

impl TaxonomyLabel {
    /// The label expected after `x -> 1/x`.
    pub fn mirrored(&self) -> TaxonomyLabel {
        let mut sig = 0u16;
        for s in Shift::ALL {
            for k in 0..3 {
                if bit(self.signature, s, k) {
                    let t = match s {
                        Shift::M => Shift::P,
                        Shift::Z => Shift::Z,
                        Shift::P => Shift::M,
                    };
                    sig |= 1 << (3 * (2 - k) + t.col());
                }
            }
        }
        TaxonomyLabel {
            class: self.class,
            variant: self.variant.map(Variant::mirror),
            reduction: self.reduction,
            signature: sig,
        }
    }
}

impl fmt::Display for TaxonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}
