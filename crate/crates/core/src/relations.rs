//! Commutation relations checked as matrix identities on safe levels.
//!
//! Each named check compares two operator expressions twice: once through
//! materialized products of creators and annihilators, and once through the
//! contraction-kernel formulas for `a*a` and `aa*`. Columns above
//! `N_max - depth` are never compared, since clipped creation output would
//! fabricate violations there.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, SpaceRef};
use crate::operators::{block_norm, color_inner, unit_color, ColorVector, Op, OperatorMatrix};
use crate::species::{Payload, Structure};
use crate::weights::kernels::{lower_row, upper_row};
use crate::weights::{parse_weight, WeightRef};

type C = Complex64;

const IMAGINARY_TOL: f64 = 1e-8;

/// Parameters a report was produced with.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub weight: String,
    pub params: Params,
    pub colors: usize,
    pub max_level: usize,
    /// Inclusive range of compared column levels.
    pub safe_levels: (usize, usize),
    /// Largest of the matrix and kernel deviations.
    pub deviation: f64,
    pub matrix_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_deviation: Option<f64>,
    /// Largest entry of the difference between the two routes' left sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_discrepancy: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// `lhs = rhs`, optionally with a second left side built from kernels.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: Op,
    pub rhs: Op,
    pub kernel_lhs: Option<Op>,
}

/// Sizes and tolerance shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub colors: usize,
    pub levels: usize,
    pub tol: f64,
}

impl CheckConfig {
    pub fn new(colors: usize, levels: usize, tol: f64) -> Self {
        Self { colors, levels, tol }
    }
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Equal, orthogonal and generic complex pairs `(h1, h2)`.
pub fn sample_pairs(k: usize) -> Vec<(ColorVector, ColorVector)> {
    let generic = |v: [C; 2]| -> ColorVector { (0..k).map(|i| if i < 2 { v[i] } else { re(0.0) }).collect() };
    let mut out = vec![(unit_color(k, 0), unit_color(k, 0))];
    if k >= 2 {
        out.push((unit_color(k, 0), unit_color(k, 1)));
    }
    out.push((
        generic([C::new(0.6, 0.2), C::new(-0.3, 0.5)]),
        generic([C::new(0.1, -0.7), C::new(0.4, 0.25)]),
    ));
    out
}

/// Highest level at which every relation can be compared.
pub fn safe_top(space: &FockSpace, relations: &[Relation]) -> Result<usize> {
    let depth = relations
        .iter()
        .flat_map(|r| [Some(&r.lhs), Some(&r.rhs), r.kernel_lhs.as_ref()])
        .flatten()
        .map(Op::depth)
        .max()
        .unwrap_or(0);
    space
        .max_level()
        .checked_sub(depth)
        .ok_or_else(|| Error::Truncation(format!("creation depth {depth} exceeds N_max = {}", space.max_level())))
}

/// Compares the relations entrywise on safe columns and aggregates the
/// worst deviation of each route.
pub fn evaluate(name: &str, weight: &str, params: Params, space: &FockSpace, relations: &[Relation], tol: f64) -> Result<IdentityReport> {
    let top = safe_top(space, relations)?;
    let safe = |e: &crate::fock::BasisElement| e.level() <= top;
    let (mut matrix, mut kernel, mut route) = (0.0f64, None::<f64>, None::<f64>);
    for r in relations {
        let lhs = OperatorMatrix::build_columns(space, &r.lhs, top)?;
        let rhs = OperatorMatrix::build_columns(space, &r.rhs, top)?;
        matrix = matrix.max(lhs.max_abs_diff(&rhs, safe));
        if let Some(k) = &r.kernel_lhs {
            let klhs = OperatorMatrix::build_columns(space, k, top)?;
            kernel = Some(kernel.unwrap_or(0.0).max(klhs.max_abs_diff(&rhs, safe)));
            route = Some(route.unwrap_or(0.0).max(klhs.max_abs_diff(&lhs, safe)));
        }
    }
    let deviation = matrix.max(kernel.unwrap_or(0.0));
    let bottom = (0..=top).find(|&n| space.level(n).map(|l| !l.is_empty()).unwrap_or(false)).unwrap_or(0);
    Ok(IdentityReport {
        name: name.into(),
        weight: weight.into(),
        params,
        colors: space.num_colors(),
        max_level: space.max_level(),
        safe_levels: (bottom, top),
        deviation,
        matrix_deviation: matrix,
        kernel_deviation: kernel,
        route_discrepancy: route,
        tol,
        pass: deviation <= tol,
    })
}

/// A single identity `lhs = rhs`, compared by matrices only.
pub fn check_identity(name: &str, space: &FockSpace, lhs: Op, rhs: Op, tol: f64) -> Result<IdentityReport> {
    let weight = space.species().name();
    evaluate(name, &weight, Params::default(), space, &[Relation { lhs, rhs, kernel_lhs: None }], tol)
}

fn weighted_space(weight: &str, config: CheckConfig) -> Result<(SpaceRef, WeightRef)> {
    let w = parse_weight(weight)?;
    let space = FockSpace::new(w.species(), config.colors, config.levels)?;
    Ok((space, w))
}

struct Ops {
    a: Op,
    ad: Op,
    low: Op,
    up: Op,
    overlap: C,
}

/// `a(h1)`, `a*(h2)`, kernel forms of `a*(h2)a(h1)` and `a(h1)a*(h2)`.
fn ops(space: &FockSpace, w: &WeightRef, h1: &[C], h2: &[C]) -> Result<Ops> {
    Ok(Ops {
        a: Op::annihilator(space, w, h1)?,
        ad: Op::creator(space, w, h2)?,
        low: Op::kernel_lower(space, w, h2, h1)?,
        up: Op::kernel_upper(space, w, h1, h2)?,
        overlap: color_inner(h1, h2),
    })
}

/// `a a* - q a* a = rhs` for each sample pair, where `rhs(⟨h1,h2⟩)`.
fn q_relations(space: &FockSpace, w: &WeightRef, q: f64, rhs: impl Fn(C) -> Op) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for (h1, h2) in sample_pairs(space.num_colors()) {
        let o = ops(space, w, &h1, &h2)?;
        let lhs = o.a.clone().then_after(o.ad.clone()).minus(o.ad.then_after(o.a).scale(re(q)));
        let kernel_lhs = o.up.minus(o.low.scale(re(q)));
        out.push(Relation { lhs, rhs: rhs(o.overlap), kernel_lhs: Some(kernel_lhs) });
    }
    Ok(out)
}

/// Bosonic relations on `(E, ω_E)`: `[a(h1), a*(h2)] = ⟨h1,h2⟩`.
pub fn check_ccr(config: CheckConfig) -> Result<IdentityReport> {
    let (space, w) = weighted_space("E", config)?;
    let rels = q_relations(&space, &w, 1.0, |x| Op::Identity.scale(x))?;
    evaluate("ccr", "E", Params::default(), &space, &rels, config.tol)
}

/// Full Fock relation on `(L, ω_L)`: `a(h1) a*(h2) = ⟨h1,h2⟩`.
pub fn check_full_fock(config: CheckConfig) -> Result<IdentityReport> {
    let (space, w) = weighted_space("L", config)?;
    let rels = q_relations(&space, &w, 0.0, |x| Op::Identity.scale(x))?;
    evaluate("fullfock", "L", Params::default(), &space, &rels, config.tol)
}

/// g-commutation on `E±`, together with its commutator form on
/// `φ(+)+φ(-)` and anticommutator form on `φ(+)-φ(-)`.
pub fn check_gcomm(config: CheckConfig) -> Result<IdentityReport> {
    let (space, w) = weighted_space("Epm", config)?;
    let g = Op::switch(&space)?;
    let even = Op::Identity.plus(g.clone()).scale(re(0.5));
    let odd = Op::Identity.minus(g.clone()).scale(re(0.5));
    let mut rels = Vec::new();
    for (h1, h2) in sample_pairs(space.num_colors()) {
        let o = ops(&space, &w, &h1, &h2)?;
        let aad = o.a.clone().then_after(o.ad.clone());
        let ada = o.ad.clone().then_after(o.a.clone());
        rels.push(Relation {
            lhs: aad.clone().minus(g.clone().then_after(ada.clone())),
            rhs: Op::Identity.scale(o.overlap),
            kernel_lhs: Some(o.up.clone().minus(g.clone().then_after(o.low.clone()))),
        });
        rels.push(Relation {
            lhs: aad.clone().minus(ada.clone()).then_after(even.clone()),
            rhs: even.clone().scale(o.overlap),
            kernel_lhs: Some(o.up.clone().minus(o.low.clone()).then_after(even.clone())),
        });
        rels.push(Relation {
            lhs: aad.plus(ada).then_after(odd.clone()),
            rhs: odd.clone().scale(o.overlap),
            kernel_lhs: Some(o.up.plus(o.low).then_after(odd.clone())),
        });
    }
    evaluate("gcomm", "Epm", Params::default(), &space, &rels, config.tol)
}

/// Rooted trees: `[a, a*] = ⟨h1,h2⟩ (N + c)`, with the plain weight when
/// `c` is absent.
pub fn check_tree(c: Option<f64>, config: CheckConfig) -> Result<IdentityReport> {
    let name = match c {
        Some(c) => format!("tree_c:{c}"),
        None => "tree".into(),
    };
    let (space, w) = weighted_space(&name, config)?;
    let shift = c.unwrap_or(0.0);
    let rels = q_relations(&space, &w, 1.0, |x| Op::Poly(vec![shift, 1.0]).scale(x))?;
    evaluate("tree", &name, Params { c, ..Params::default() }, &space, &rels, config.tol)
}

/// Rooted forests with a new tree of amplitude `c^{1/2}`:
/// `[a, a*] = ⟨h1,h2⟩ (N + c)`.
pub fn check_forest(c: f64, config: CheckConfig) -> Result<IdentityReport> {
    let name = format!("forest_c:{c}");
    let (space, w) = weighted_space(&name, config)?;
    let rels = q_relations(&space, &w, 1.0, |x| Op::Poly(vec![c, 1.0]).scale(x))?;
    evaluate("forest", &name, Params { c: Some(c), ..Params::default() }, &space, &rels, config.tol)
}

/// Digraphs: `a a* - q a* a = ⟨h1,h2⟩`.
pub fn check_digraph(q: f64, config: CheckConfig) -> Result<IdentityReport> {
    let name = format!("digraph:{q}");
    let (space, w) = weighted_space(&name, config)?;
    let rels = q_relations(&space, &w, q, |x| Op::Identity.scale(x))?;
    evaluate("digraph", &name, Params { q: Some(q), ..Params::default() }, &space, &rels, config.tol)
}

/// A real polynomial with nonnegative coefficients `p_0, p_1, ..`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSpec {
    coefficients: Vec<f64>,
}

/// `P = lead · Π (x + c_i) · Π (x² + d_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub lead: f64,
    pub linear: Vec<f64>,
    pub quadratic: Vec<f64>,
}

impl PolynomialSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if let Some(c) = coefficients.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::Parameter(format!("polynomial coefficients must be nonnegative, got {c}")));
        }
        let mut coefficients = coefficients;
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            return Err(Error::PolynomialForm("the zero polynomial".into()));
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Factors through the eigenvalues of the companion matrix, accepting
    /// only roots that are real and nonpositive or purely imaginary.
    pub fn factor(&self) -> Result<Factorization> {
        let d = self.degree();
        let lead = self.coefficients[d];
        let mut out = Factorization { lead, linear: vec![], quadratic: vec![] };
        if d == 0 {
            return Ok(out);
        }
        let companion = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -self.coefficients[i] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let mut negative_imaginary = 0;
        for z in companion.complex_eigenvalues().iter() {
            if z.im.abs() <= IMAGINARY_TOL {
                if z.re > IMAGINARY_TOL {
                    return Err(Error::PolynomialForm(format!("positive real root {}", z.re)));
                }
                out.linear.push((-z.re).max(0.0));
            } else if z.re.abs() > IMAGINARY_TOL {
                return Err(Error::PolynomialForm(format!("root {z} is neither real nor purely imaginary")));
            } else if z.im > 0.0 {
                out.quadratic.push(z.im * z.im);
            } else {
                negative_imaginary += 1;
            }
        }
        if negative_imaginary != out.quadratic.len() {
            return Err(Error::PolynomialForm("unpaired complex roots".into()));
        }
        out.linear.sort_by(f64::total_cmp);
        out.quadratic.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// The catalog weight for `[a, a*] = ⟨h1,h2⟩ P(N)`: a cartesian product
    /// with one factor per `x + c` and per `x² + d`, scaled by `lead^{1/2}`.
    pub fn weight_name(&self, construction: Construction) -> Result<String> {
        let f = self.factor()?;
        let (linear, quadratic) = match construction {
            Construction::Forest => ("forest_c", "pairforest_c"),
            Construction::Tree => ("tree_c", "pairtree_c"),
        };
        let mut factors: Vec<String> = f.linear.iter().map(|c| format!("{linear}:{c}")).collect();
        factors.extend(f.quadratic.iter().map(|d| format!("{quadratic}:{d}")));
        let base = match factors.pop() {
            None => "E".to_string(),
            Some(last) => factors.into_iter().rev().fold(last, |acc, w| format!("cartesian({w},{acc})")),
        };
        Ok(if f.lead == 1.0 { base } else { format!("scaled:{}({base})", f.lead.sqrt()) })
    }
}

/// Factor spaces for `x + c` and `x² + d`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Construction {
    /// `forest_c` and `pairforest_c`: the new point may also start a tree of
    /// its own, an event no relabeling confuses with adding a leaf.
    #[default]
    Forest,
    /// `tree_c` and `pairtree_c`: rerooting at the new point. Rerooting and
    /// adding a leaf at the old root differ by a transposition, so their
    /// amplitudes interfere and `[a, a*]` picks up a cross term (`2c^{1/2}` on
    /// the first level of `tree_c`).
    Tree,
}

/// `[a, a*] = ⟨h1,h2⟩ P(N)` on the constructed factor space.
pub fn check_polynomial(p: &PolynomialSpec, construction: Construction, config: CheckConfig) -> Result<IdentityReport> {
    let name = p.weight_name(construction)?;
    let (space, w) = weighted_space(&name, config)?;
    let rels = q_relations(&space, &w, 1.0, |x| Op::Poly(p.coefficients.clone()).scale(x))?;
    let params = Params { polynomial: Some(p.coefficients.clone()), ..Params::default() };
    evaluate("poly", &name, params, &space, &rels, config.tol)
}

/// `[a(h), dΓ(A)] = a(A* h)`, `[dΓ(A), dΓ(B)] = dΓ([A,B])` and `dΓ(1) = N`
/// on the space of `weight`.
pub fn check_second_quantization(weight: &str, a: &DMatrix<C>, b: &DMatrix<C>, config: CheckConfig) -> Result<IdentityReport> {
    let (space, w) = weighted_space(weight, config)?;
    let da = Op::second_quantization(&space, a.clone())?;
    let db = Op::second_quantization(&space, b.clone())?;
    let dab = Op::second_quantization(&space, a * b - b * a)?;
    let one = Op::second_quantization(&space, DMatrix::identity(config.colors, config.colors))?;
    let mut rels = vec![
        Relation { lhs: da.clone().then_after(db.clone()).minus(db.then_after(da.clone())), rhs: dab, kernel_lhs: None },
        Relation { lhs: one, rhs: Op::Number, kernel_lhs: None },
    ];
    for (h, _) in sample_pairs(config.colors) {
        let ah = Op::annihilator(&space, &w, &h)?;
        let adjoint_h: Vec<C> = (a.adjoint() * nalgebra::DVector::from_vec(h.clone())).iter().copied().collect();
        rels.push(Relation {
            lhs: ah.clone().then_after(da.clone()).minus(da.clone().then_after(ah)),
            rhs: Op::annihilator(&space, &w, &adjoint_h)?,
            kernel_lhs: None,
        });
    }
    evaluate("secondquant", weight, Params::default(), &space, &rels, config.tol)
}

/// Largest deviation of the kernels of `cartesian(left, right)` from the
/// products of the factor kernels, over levels `1..=top`.
pub fn cartesian_kernel_deviation(left: &str, right: &str, top: usize) -> Result<f64> {
    let (wl, wr) = (parse_weight(left)?, parse_weight(right)?);
    let w = parse_weight(&format!("cartesian({left},{right})"))?;
    let mut worst: f64 = 0.0;
    for n in 1..=top {
        for s in w.species().enumerate(n).iter() {
            let Payload::Cartesian(f, g) = &s.payload else { unreachable!("cartesian species") };
            for upper in [false, true] {
                let ks = if upper { n + 1 } else { n };
                for k in 0..ks {
                    let (row, rf, rg) = if upper {
                        (upper_row(&*w, k, s)?, upper_row(&*wl, k, f)?, upper_row(&*wr, k, g)?)
                    } else {
                        (lower_row(&*w, k, s)?, lower_row(&*wl, k, f)?, lower_row(&*wr, k, g)?)
                    };
                    let mut expected = std::collections::BTreeMap::new();
                    for (f2, x) in &rf {
                        for (g2, y) in &rg {
                            let t = Structure::new(n, Payload::Cartesian(Box::new(f2.clone()), Box::new(g2.clone())));
                            expected.insert(t, x * y);
                        }
                    }
                    for t in row.keys().chain(expected.keys()) {
                        let d = row.get(t).copied().unwrap_or_default() - expected.get(t).copied().unwrap_or_default();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// The annihilator norm on one level against `n^{1/2} C ‖h‖`.
#[derive(Clone, Debug, Serialize)]
pub struct NormBound {
    pub level: usize,
    pub norm: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Per-level operator norms of `a(h)` from level `n` down to `n - 1`.
pub fn norm_bounds(weight: &str, h: &[C], config: CheckConfig) -> Result<Vec<NormBound>> {
    let (space, w) = weighted_space(weight, config)?;
    let a = OperatorMatrix::build(&space, &Op::annihilator(&space, &w, h)?)?;
    let hn = color_inner(h, h).re.sqrt();
    Ok((1..=config.levels)
        .map(|n| {
            let norm = block_norm(&a, n - 1, n);
            let bound = (n as f64).sqrt() * w.bound() * hn;
            NormBound { level: n, norm, bound, holds: norm <= bound * (1.0 + 1e-12) }
        })
        .collect())
}

/// Options for [`run_named`].
#[derive(Clone, Debug, Default)]
pub struct NamedArgs {
    pub q: Option<f64>,
    pub c: Option<f64>,
    pub poly: Option<Vec<f64>>,
    pub construction: Construction,
}

/// Names accepted by [`run_named`].
pub const CHECK_NAMES: [&str; 7] = ["ccr", "fullfock", "gcomm", "tree", "forest", "digraph", "poly"];

/// Dispatches a check by name.
pub fn run_named(name: &str, args: &NamedArgs, config: CheckConfig) -> Result<IdentityReport> {
    match name {
        "ccr" => check_ccr(config),
        "fullfock" => check_full_fock(config),
        "gcomm" => check_gcomm(config),
        "tree" => check_tree(args.c, config),
        "forest" => check_forest(args.c.unwrap_or(0.0), config),
        "digraph" => check_digraph(args.q.ok_or_else(|| Error::Parameter("digraph needs --q".into()))?, config),
        "poly" => {
            let coefficients = args.poly.clone().ok_or_else(|| Error::Parameter("poly needs --poly".into()))?;
            check_polynomial(&PolynomialSpec::new(coefficients)?, args.construction, config)
        }
        other => Err(Error::Parameter(format!("unknown check `{other}`, expected one of {}", CHECK_NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CheckConfig {
        CheckConfig::new(2, 3, 1e-10)
    }

    #[test]
    fn named_checks_pass_on_small_spaces() {
        for r in [
            check_ccr(small()).unwrap(),
            check_full_fock(small()).unwrap(),
            check_gcomm(small()).unwrap(),
            check_tree(None, small()).unwrap(),
            check_tree(Some(0.0), small()).unwrap(),
            check_forest(2.5, small()).unwrap(),
            check_digraph(0.3, small()).unwrap(),
        ] {
            assert!(r.pass, "{r:?}");
            assert!(r.route_discrepancy.unwrap() < 1e-10, "{r:?}");
            assert_eq!(r.safe_levels.1, 2);
        }
    }

    #[test]
    fn rerooting_weight_has_cross_term() {
        // on one point: a a* = |1 + c^{1/2}|², a* a = 0
        for c in [1.0, 2.5] {
            let r = check_tree(Some(c), small()).unwrap();
            assert!(!r.pass);
            assert!((r.deviation - 2.0 * f64::sqrt(c)).abs() < 1e-12, "{r:?}");
            assert!(r.route_discrepancy.unwrap() < 1e-12);
        }
    }

    #[test]
    fn wrong_relation_fails() {
        let (space, w) = weighted_space("L", small()).unwrap();
        let h = unit_color(2, 0);
        let a = Op::annihilator(&space, &w, &h).unwrap();
        let ad = Op::creator(&space, &w, &h).unwrap();
        let commutator = a.clone().then_after(ad.clone()).minus(ad.then_after(a));
        let r = check_identity("not ccr", &space, commutator, Op::Identity, 1e-10).unwrap();
        assert!(!r.pass);
        assert!((r.deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depth_beyond_truncation() {
        let (space, w) = weighted_space("E", CheckConfig::new(1, 1, 1e-10)).unwrap();
        let ad = Op::creator(&space, &w, &unit_color(1, 0)).unwrap();
        let deep = ad.clone().then_after(ad);
        assert!(matches!(check_identity("x", &space, deep, Op::Identity, 1e-10), Err(Error::Truncation(_))));
    }

    #[test]
    fn factorization() {
        let p = PolynomialSpec::new(vec![2.0, 2.0, 1.0, 1.0]).unwrap();
        let f = p.factor().unwrap();
        assert_eq!(f.linear.len(), 1);
        assert!((f.linear[0] - 1.0).abs() < 1e-10 && (f.quadratic[0] - 2.0).abs() < 1e-10);
        assert!(p.weight_name(Construction::Tree).unwrap().starts_with("cartesian(tree_c:"));
        let name = |c: Vec<f64>, k| PolynomialSpec::new(c).unwrap().weight_name(k).unwrap();
        assert_eq!(name(vec![2.0, 1.0], Construction::Tree), "tree_c:2");
        assert_eq!(name(vec![2.0, 1.0], Construction::Forest), "forest_c:2");
        assert_eq!(name(vec![1.0], Construction::Forest), "E");
        assert_eq!(name(vec![4.0], Construction::Forest), "scaled:2(E)");
        assert!(matches!(PolynomialSpec::new(vec![1.0, 1.0, 1.0]).unwrap().factor(), Err(Error::PolynomialForm(_))));
        assert!(matches!(PolynomialSpec::new(vec![-1.0, 1.0]), Err(Error::Parameter(_))));
        assert!(matches!(PolynomialSpec::new(vec![0.0]), Err(Error::PolynomialForm(_))));
    }

    #[test]
    fn polynomial_small() {
        for coeffs in [vec![2.0, 1.0], vec![1.0, 0.0, 1.0], vec![3.0], vec![0.0, 2.0], vec![0.0, 0.0, 1.0]] {
            let p = PolynomialSpec::new(coeffs).unwrap();
            let r = check_polynomial(&p, Construction::Forest, CheckConfig::new(2, 3, 1e-9)).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let p = PolynomialSpec::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!(!check_polynomial(&p, Construction::Tree, CheckConfig::new(2, 3, 1e-9)).unwrap().pass);
    }

    #[test]
    fn cartesian_kernels_factor() {
        assert!(cartesian_kernel_deviation("E", "L", 3).unwrap() < 1e-12);
        assert!(cartesian_kernel_deviation("tree", "digraph:0.4", 2).unwrap() < 1e-12);
    }

    #[test]
    fn second_quantization() {
        let a = DMatrix::from_row_slice(2, 2, &[C::new(0.3, 0.1), C::new(-1.0, 0.4), C::new(0.2, 0.0), C::new(0.5, -0.6)]);
        let b = DMatrix::from_row_slice(2, 2, &[C::new(0.0, 1.0), C::new(0.7, 0.0), C::new(-0.2, 0.3), C::new(1.1, 0.0)]);
        for w in ["E", "L", "tree"] {
            let r = check_second_quantization(w, &a, &b, small()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn unknown_check() {
        assert!(matches!(run_named("nope", &NamedArgs::default(), small()), Err(Error::Parameter(_))));
        assert!(matches!(run_named("digraph", &NamedArgs::default(), small()), Err(Error::Parameter(_))));
    }
}
