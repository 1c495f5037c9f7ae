//! Geometry of monomial subalgebras `R` of an affine domain `S` whose
//! maximal spectrum is obtained from that of `S` by collapsing a closed
//! subvariety to a point.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, Rat};
use crate::monomial::{format_list, Monomial};

/// The depicting ring `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    /// The polynomial ring in the listed variables.
    Polynomial { variables: Vec<String> },
    /// The monomial subalgebra of the polynomial ring generated by
    /// `generators`.
    Toric {
        variables: Vec<String>,
        generators: Vec<Monomial>,
    },
}

impl Ambient {
    pub fn polynomial<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        Ambient::Polynomial {
            variables: variables.into_iter().map(Into::into).collect(),
        }
    }

    pub fn variables(&self) -> &[String] {
        match self {
            Ambient::Polynomial { variables } | Ambient::Toric { variables, .. } => variables,
        }
    }

    /// Monoid generators of `S`.
    pub fn generators(&self) -> Vec<Monomial> {
        match self {
            Ambient::Polynomial { variables } => (0..variables.len())
                .map(|i| Monomial::var(variables.len(), i))
                .collect(),
            Ambient::Toric { generators, .. } => generators.clone(),
        }
    }

    /// Krull dimension: the rank of the exponent lattice.
    pub fn dimension(&self) -> usize {
        lattice::rank(&exponent_rows(&self.generators()))
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        match self {
            Ambient::Polynomial { .. } => true,
            Ambient::Toric { generators, .. } => in_monoid(m, generators, &mut HashMap::new()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Ambient::Polynomial { variables } => format!("S = k[{}]", variables.join(", ")),
            Ambient::Toric {
                variables,
                generators,
            } => format!("S = k[{}]", format_list(generators, variables)),
        }
    }
}

fn exponent_rows(gens: &[Monomial]) -> Vec<Vec<i64>> {
    gens.iter()
        .map(|m| m.exponents().iter().map(|&e| e as i64).collect())
        .collect()
}

/// Whether `m` is a product of elements of `gens`.
pub fn in_monoid(m: &Monomial, gens: &[Monomial], memo: &mut HashMap<Monomial, bool>) -> bool {
    if m.is_one() {
        return true;
    }
    if let Some(&b) = memo.get(m) {
        return b;
    }
    let found = gens
        .iter()
        .filter(|g| !g.is_one())
        .any(|g| m.checked_div(g).is_some_and(|rest| in_monoid(&rest, gens, memo)));
    memo.insert(m.clone(), found);
    found
}

/// How `R` sits inside `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Form {
    /// `R = k + J S` for the monomial ideal generated by the list.
    KPlusIdeal(Vec<Monomial>),
    /// `R = k[R', I S]` for monomial generators of `R'` and `I`.
    KAdjoin {
        subalgebra: Vec<Monomial>,
        ideal: Vec<Monomial>,
    },
    /// `R = k + n_1 ... n_r` for the maximal ideals of the listed points of
    /// the polynomial ring `S`.
    PointProduct(Vec<Vec<Rational64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraPresentation {
    pub ambient: Ambient,
    pub form: Form,
}

fn format_rational(c: &Rational64) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_point(p: &[Rational64]) -> String {
    let coords: Vec<String> = p.iter().map(format_rational).collect();
    if p.len() == 1 {
        coords[0].clone()
    } else {
        format!("({})", coords.join(", "))
    }
}

fn point_ideal(vars: &[String], p: &[Rational64]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(p)
        .map(|(v, c)| {
            if c.is_zero() {
                v.clone()
            } else if c.is_positive() {
                format!("{v} - {}", format_rational(c))
            } else {
                format!("{v} + {}", format_rational(&-c))
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

impl SubalgebraPresentation {
    /// Checks that every monomial generator lies in `S` and that the point
    /// data is consistent.
    pub fn new(ambient: Ambient, form: Form) -> Result<Self> {
        let n = ambient.variables().len();
        let check = |gens: &[Monomial]| -> Result<()> {
            for g in gens {
                if g.nvars() != n {
                    return Err(Error::Malformed(format!(
                        "monomial has {} exponents, expected {n}",
                        g.nvars()
                    )));
                }
                if !ambient.contains(g) {
                    return Err(Error::Malformed(format!(
                        "{} is not in {}",
                        g.format(ambient.variables()),
                        ambient.describe()
                    )));
                }
            }
            Ok(())
        };
        match &form {
            Form::KPlusIdeal(j) => {
                if j.is_empty() {
                    return Err(Error::Malformed("ideal has no generators".into()));
                }
                check(j)?;
            }
            Form::KAdjoin { subalgebra, ideal } => {
                if ideal.is_empty() {
                    return Err(Error::Malformed("ideal has no generators".into()));
                }
                check(subalgebra)?;
                check(ideal)?;
            }
            Form::PointProduct(points) => {
                if !matches!(ambient, Ambient::Polynomial { .. }) {
                    return Err(Error::Unsupported("points of a toric ambient ring".into()));
                }
                if points.is_empty() {
                    return Err(Error::Malformed("no points".into()));
                }
                let mut seen = BTreeSet::new();
                for p in points {
                    if p.len() != n {
                        return Err(Error::Malformed(format!(
                            "point {} has {} coordinates, expected {n}",
                            format_point(p),
                            p.len()
                        )));
                    }
                    if !seen.insert(p.clone()) {
                        return Err(Error::Malformed(format!("duplicate point {}", format_point(p))));
                    }
                }
            }
        }
        Ok(SubalgebraPresentation { ambient, form })
    }

    /// Whether `R = S`.
    pub fn is_trivial(&self) -> bool {
        match &self.form {
            Form::KPlusIdeal(j) => j.iter().any(Monomial::is_one),
            Form::KAdjoin { ideal, .. } => ideal.iter().any(Monomial::is_one),
            Form::PointProduct(points) => points.len() == 1,
        }
    }

    pub fn describe(&self) -> String {
        if self.is_trivial() {
            return "R = S".into();
        }
        let vars = self.ambient.variables();
        match &self.form {
            Form::KPlusIdeal(j) => format!("R = k + ({})S", format_list(j, vars)),
            Form::KAdjoin { subalgebra, ideal } => {
                let mut parts: Vec<String> = subalgebra.iter().map(|m| m.format(vars)).collect();
                parts.push(format!("({})S", format_list(ideal, vars)));
                format!("R = k[{}]", parts.join(", "))
            }
            Form::PointProduct(points) => {
                let ideals: String = points.iter().map(|p| point_ideal(vars, p)).collect();
                format!("R = k + {ideals}S")
            }
        }
    }
}

/// A closed subset of `Max S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locus {
    Empty,
    /// The zero set of the monomials.
    ZeroSet(Vec<Monomial>),
    Points(Vec<Vec<Rational64>>),
}

impl Locus {
    pub fn describe(&self, vars: &[String]) -> String {
        match self {
            Locus::Empty => "empty".into(),
            Locus::ZeroSet(gens) => format!("Z({})", format_list(gens, vars)),
            Locus::Points(points) => {
                let ps: Vec<String> = points.iter().map(|p| format_point(p)).collect();
                format!("{{{}}}", ps.join(", "))
            }
        }
    }
}

/// Complements of the loci `U` (where `S` and `R` agree locally) and `W`
/// (where the contraction map is injective).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loci {
    pub u_complement: Locus,
    pub w_complement: Locus,
    /// False when only `U ⊇ Z(I)ᶜ` is known.
    pub exact: bool,
}

pub fn loci(pres: &SubalgebraPresentation) -> Loci {
    if pres.is_trivial() {
        return Loci {
            u_complement: Locus::Empty,
            w_complement: Locus::Empty,
            exact: true,
        };
    }
    match &pres.form {
        Form::KPlusIdeal(j) => Loci {
            u_complement: Locus::ZeroSet(j.clone()),
            w_complement: Locus::ZeroSet(j.clone()),
            exact: true,
        },
        Form::KAdjoin { ideal, .. } => Loci {
            u_complement: Locus::ZeroSet(ideal.clone()),
            w_complement: Locus::ZeroSet(ideal.clone()),
            exact: false,
        },
        Form::PointProduct(points) => Loci {
            u_complement: Locus::Points(points.clone()),
            w_complement: Locus::Points(points.clone()),
            exact: true,
        },
    }
}

/// Faces of the cone spanned by the integer vectors `gens`, each given by
/// the indices of the generators it contains. Includes the whole cone and
/// the minimal face.
pub fn cone_faces(gens: &[Vec<i64>]) -> Vec<BTreeSet<usize>> {
    let d = lattice::rank(gens);
    let all: BTreeSet<usize> = (0..gens.len()).collect();
    if d == 0 {
        return vec![all];
    }
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        let mut trial = basis.clone();
        trial.push(g.clone());
        if lattice::rank(&trial) > basis.len() {
            basis = trial;
        }
    }
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let mut facets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for subset in combinations(gens.len(), d - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| gens[i].clone()).collect();
        if lattice::rank(&rows) != d - 1 {
            continue;
        }
        let system: Vec<Vec<Rat>> = rows
            .iter()
            .map(|t| basis.iter().map(|b| Rat::from_integer(dot(b, t) as i128)).collect())
            .collect();
        let ns = lattice::nullspace(&system, d);
        let Some(c) = ns.first() else { continue };
        let c = lattice::primitive(c);
        let normal: Vec<i128> = (0..gens[0].len())
            .map(|k| basis.iter().zip(&c).map(|(b, &ci)| b[k] as i128 * ci).sum())
            .collect();
        let values: Vec<i128> = gens
            .iter()
            .map(|g| g.iter().zip(&normal).map(|(&x, &y)| x as i128 * y).sum())
            .collect();
        if !(values.iter().all(|&v| v >= 0) || values.iter().all(|&v| v <= 0)) {
            continue;
        }
        let members: BTreeSet<usize> = (0..gens.len()).filter(|&i| values[i] == 0).collect();
        let member_rows: Vec<Vec<i64>> = members.iter().map(|&i| gens[i].clone()).collect();
        if lattice::rank(&member_rows) == d - 1 {
            facets.insert(members);
        }
    }
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    faces.insert(all);
    let mut frontier: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for facet in &facets {
            let g: BTreeSet<usize> = f.intersection(facet).copied().collect();
            if faces.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
    faces.into_iter().collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the locus of `Max S` lying over the closed point of `R`.
pub fn geometric_dimension(pres: &SubalgebraPresentation) -> Result<usize> {
    if pres.is_trivial() {
        return Err(Error::Unsupported("R = S has no collapsed point".into()));
    }
    match &pres.form {
        Form::KPlusIdeal(j) => {
            let gens = pres.ambient.generators();
            let rows = exponent_rows(&gens);
            let mut best = None;
            for face in cone_faces(&rows) {
                let face_gens: Vec<Monomial> = face.iter().map(|&i| gens[i].clone()).collect();
                let mut memo = HashMap::new();
                if j.iter().any(|m| in_monoid(m, &face_gens, &mut memo)) {
                    continue;
                }
                let face_rows: Vec<Vec<i64>> = face.iter().map(|&i| rows[i].clone()).collect();
                let dim = lattice::rank(&face_rows);
                best = best.max(Some(dim));
            }
            best.ok_or_else(|| Error::Structural("the ideal contains a unit".into()))
        }
        Form::PointProduct(_) => Ok(0),
        Form::KAdjoin { .. } => Err(Error::Unsupported(
            "geometric dimension needs a presentation R = k + J S".into(),
        )),
    }
}

/// The common value of the dimension of `R` relative to `S`, the
/// transcendence degree of `Frac R` and the dimension of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionEqualities {
    pub dim_s_r: usize,
    pub trdeg: usize,
    pub dim_s: usize,
}

pub fn dimension_equalities(pres: &SubalgebraPresentation) -> DimensionEqualities {
    let d = pres.ambient.dimension();
    DimensionEqualities {
        dim_s_r: d,
        trdeg: d,
        dim_s: d,
    }
}

/// `R = k + n_1 ... n_r` identifying finitely many points of affine space.
pub fn finite_point_gluing(
    variables: Vec<String>,
    points: Vec<Vec<Rational64>>,
) -> Result<SubalgebraPresentation> {
    SubalgebraPresentation::new(Ambient::Polynomial { variables }, Form::PointProduct(points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    UniqueMaximalDepiction,
    Unknown,
}

impl Uniqueness {
    pub fn as_str(self) -> &'static str {
        match self {
            Uniqueness::UniqueMaximalDepiction => "unique-maximal-depiction",
            Uniqueness::Unknown => "unknown",
        }
    }
}

/// Unique when `S` is a polynomial ring: then `a | bⁿ` with `a` a nonunit
/// forces a common prime factor.
pub fn uniqueness_flag(ambient: &Ambient) -> Uniqueness {
    match ambient {
        Ambient::Polynomial { .. } => Uniqueness::UniqueMaximalDepiction,
        Ambient::Toric { .. } => Uniqueness::Unknown,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryReport {
    pub presentation: String,
    pub ambient: String,
    pub loci: Loci,
    pub closed_point: Option<String>,
    pub geometric_dimension: Option<usize>,
    pub dimensions: DimensionEqualities,
    pub depiction: bool,
    pub birational: bool,
    pub uniqueness: Uniqueness,
    variables: Vec<String>,
}

pub fn geometry_report(pres: &SubalgebraPresentation) -> GeometryReport {
    let vars = pres.ambient.variables().to_vec();
    let closed_point = if pres.is_trivial() {
        None
    } else {
        Some(match &pres.form {
            Form::KPlusIdeal(j) => format!("({})S ∩ R", format_list(j, &vars)),
            Form::KAdjoin { subalgebra, ideal } => format!(
                "one per fibre of Z({}) over k[{}]",
                format_list(ideal, &vars),
                format_list(subalgebra, &vars)
            ),
            Form::PointProduct(points) => {
                let ideals: String = points.iter().map(|p| point_ideal(&vars, p)).collect();
                format!("{ideals}S")
            }
        })
    };
    GeometryReport {
        presentation: pres.describe(),
        ambient: pres.ambient.describe(),
        loci: loci(pres),
        closed_point,
        geometric_dimension: geometric_dimension(pres).ok(),
        dimensions: dimension_equalities(pres),
        depiction: true,
        birational: pres.ambient.dimension() > 0,
        uniqueness: uniqueness_flag(&pres.ambient),
        variables: vars,
    }
}

impl fmt::Display for GeometryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dimensions;
        writeln!(f, "presentation: {}", self.presentation)?;
        writeln!(f, "ambient: {}", self.ambient)?;
        let within = if self.loci.exact { "" } else { "contained in " };
        let vars = &self.variables;
        writeln!(f, "W-complement: {within}{}", self.loci.w_complement.describe(vars))?;
        writeln!(f, "U-complement: {within}{}", self.loci.u_complement.describe(vars))?;
        match &self.closed_point {
            Some(p) if self.loci.exact => writeln!(f, "closed-point: {p}")?,
            Some(p) => writeln!(f, "closed-points: {p}")?,
            None => writeln!(f, "closed-point: none")?,
        }
        match self.geometric_dimension {
            Some(g) => writeln!(f, "geometric-dimension: {g} (dim_S for the given S)")?,
            None => writeln!(f, "geometric-dimension: n/a")?,
        }
        writeln!(f, "dim_S R = trdeg Frac R = dim S = {}", d.dim_s)?;
        if let Some(g) = self.geometric_dimension {
            writeln!(f, "dimension-bound: {g} <= {}", d.trdeg)?;
        }
        writeln!(
            f,
            "depiction: {}",
            if self.depiction { "S depicts R" } else { "unknown" }
        )?;
        writeln!(f, "birational: {}", self.birational)?;
        write!(f, "maximal-depiction: {}", self.uniqueness.as_str())
    }
}
