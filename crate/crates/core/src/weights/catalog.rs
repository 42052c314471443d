//! Weights addressed by name, e.g. `product:0.5(L,tree_c:2)`.
//!
//! Grammar: `name [':' number] ['(' arg {',' arg} ')']`.

use std::sync::Arc;

use super::{
    AddWeight, BallotWeight, CartesianWeight, ComposeWeight, DigraphWeight, ElementLast, ElementOne, ElementWeightRef, FreeWeight,
    OrderWeight, OrientedWeight, PairTreeWeight, ProductWeight, ScaledWeight, SetWeight, SumWeight, TreeWeight, WeightRef,
};
use crate::error::{Error, Result};

struct Spec<'a> {
    name: &'a str,
    param: Option<f64>,
    args: Vec<&'a str>,
}

fn split(text: &str) -> Result<Spec<'_>> {
    let text = text.trim();
    let (head, args) = match text.find('(') {
        Some(open) => {
            if !text.ends_with(')') {
                return Err(Error::Syntax { pos: text.len(), msg: "expected `)`".into() });
            }
            (&text[..open], split_args(&text[open + 1..text.len() - 1], open + 1)?)
        }
        None => (text, vec![]),
    };
    let (name, param) = match head.split_once(':') {
        Some((n, p)) => {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("`{p}` is not a number in `{text}`")))?;
            (n.trim(), Some(v))
        }
        None => (head.trim(), None),
    };
    Ok(Spec { name, param, args })
}

fn split_args(inner: &str, offset: usize) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Syntax { pos: offset + i, msg: "unbalanced `)`".into() })?
            }
            ',' if depth == 0 => {
                out.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Syntax { pos: offset + inner.len(), msg: "unbalanced `(`".into() });
    }
    out.push(inner[start..].trim());
    if out.iter().any(|a| a.is_empty()) {
        return Err(Error::Arity("empty argument".into()));
    }
    Ok(out)
}

fn expect_arity(spec: &Spec, n: usize) -> Result<()> {
    if spec.args.len() != n {
        return Err(Error::Arity(format!("`{}` takes {n} arguments, got {}", spec.name, spec.args.len())));
    }
    Ok(())
}

fn param(spec: &Spec) -> Result<f64> {
    spec.param.ok_or_else(|| Error::Parameter(format!("`{}` needs a parameter, as in `{}:<value>`", spec.name, spec.name)))
}

fn no_param(spec: &Spec) -> Result<()> {
    if spec.param.is_some() {
        return Err(Error::Parameter(format!("`{}` takes no parameter", spec.name)));
    }
    Ok(())
}

/// Parses a weight name from the catalog.
pub fn parse_weight(text: &str) -> Result<WeightRef> {
    let spec = split(text)?;
    let leaf = |w: WeightRef| -> Result<WeightRef> {
        no_param(&spec)?;
        expect_arity(&spec, 0)?;
        Ok(w)
    };
    match spec.name {
        "E" => leaf(Arc::new(SetWeight::new())),
        "Eplus" => leaf(Arc::new(SetWeight::nonempty())),
        "L" => leaf(Arc::new(OrderWeight::new())),
        "Epm" => leaf(Arc::new(OrientedWeight::new())),
        "tree" => leaf(Arc::new(TreeWeight::new())),
        "tree_c" => {
            expect_arity(&spec, 0)?;
            Ok(Arc::new(TreeWeight::modified(param(&spec)?)?))
        }
        "digraph" => {
            expect_arity(&spec, 0)?;
            Ok(Arc::new(DigraphWeight::new(param(&spec)?)?))
        }
        "ballot" => {
            expect_arity(&spec, 0)?;
            Ok(Arc::new(BallotWeight::new(param(&spec)?)?))
        }
        "pairtree_c" => {
            expect_arity(&spec, 0)?;
            Ok(Arc::new(PairTreeWeight::new(param(&spec)?)?))
        }
        "forest_c" => {
            expect_arity(&spec, 0)?;
            parse_weight(&forest(param(&spec)?)?)
        }
        "pairforest_c" => {
            expect_arity(&spec, 0)?;
            parse_weight(&pair_forest(param(&spec)?)?)
        }
        "add" => {
            no_param(&spec)?;
            expect_arity(&spec, 2)?;
            Ok(Arc::new(AddWeight::new(parse_weight(spec.args[0])?, parse_weight(spec.args[1])?)?))
        }
        "cartesian" => {
            no_param(&spec)?;
            expect_arity(&spec, 2)?;
            Ok(Arc::new(CartesianWeight::new(parse_weight(spec.args[0])?, parse_weight(spec.args[1])?)))
        }
        "sum" => {
            no_param(&spec)?;
            expect_arity(&spec, 2)?;
            Ok(Arc::new(SumWeight::new(parse_weight(spec.args[0])?, parse_weight(spec.args[1])?)))
        }
        "product" => {
            expect_arity(&spec, 2)?;
            Ok(Arc::new(ProductWeight::new(param(&spec)?, parse_weight(spec.args[0])?, parse_weight(spec.args[1])?)?))
        }
        "scaled" => {
            expect_arity(&spec, 1)?;
            Ok(Arc::new(ScaledWeight::new(parse_weight(spec.args[0])?, param(&spec)?)))
        }
        "compose" => {
            no_param(&spec)?;
            expect_arity(&spec, 3)?;
            Ok(Arc::new(ComposeWeight::new(
                parse_weight(spec.args[0])?,
                parse_weight(spec.args[1])?,
                element_weight(spec.args[2])?,
            )?))
        }
        "free" => {
            no_param(&spec)?;
            if spec.args.is_empty() {
                return Err(Error::Arity("`free` needs at least one argument".into()));
            }
            let ws = spec.args.iter().map(|a| parse_weight(a)).collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(FreeWeight::new(ws)?))
        }
        other => Err(Error::UnknownWeight(other.to_string())),
    }
}

fn root_amplitude(c: f64) -> Result<f64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::Parameter(format!("c must be nonnegative, got {c}")));
    }
    Ok(c.sqrt())
}

/// Rooted forests `E∘A`: the new point becomes a leaf, or with amplitude
/// `c^{1/2}` a tree of its own. Realizes `[a, a*] = N + c`.
fn forest(c: f64) -> Result<String> {
    Ok(format!("compose(scaled:{}(E),tree,Eeps)", root_amplitude(c)?))
}

/// Pairs of rooted forests: the new point is a leaf in both forests, or with
/// amplitude `c^{1/2}` isolated in both. Realizes `[a, a*] = N² + c`.
fn pair_forest(c: f64) -> Result<String> {
    let leaf = "compose(scaled:0(E),tree,Eeps)";
    let isolated = "compose(E,scaled:0(tree),Eeps)";
    Ok(format!(
        "add(cartesian({leaf},{leaf}),scaled:{}(cartesian({isolated},{isolated})))",
        root_amplitude(c)?
    ))
}

/// Parses a weight on `F×ε`: `Leps` (last element of an order) or `Eeps` (constant 1).
pub fn element_weight(text: &str) -> Result<ElementWeightRef> {
    match text.trim() {
        "Leps" => Ok(Arc::new(ElementLast)),
        "Eeps" => Ok(Arc::new(ElementOne)),
        other => Err(Error::UnknownWeight(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors() {
        assert!(matches!(parse_weight("foo"), Err(Error::UnknownWeight(_))));
        assert!(matches!(parse_weight("digraph"), Err(Error::Parameter(_))));
        assert!(matches!(parse_weight("digraph:1.5"), Err(Error::Parameter(_))));
        assert!(matches!(parse_weight("tree_c:-1"), Err(Error::Parameter(_))));
        assert!(matches!(parse_weight("sum(E)"), Err(Error::Arity(_))));
        assert!(matches!(parse_weight("sum(E,L"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_weight("compose(L,E,Leps)"), Err(Error::Composition(_))));
        assert!(matches!(parse_weight("free(tree)"), Err(Error::FreeOperand(_))));
    }

    #[test]
    fn species_follow_weights() {
        assert_eq!(parse_weight("cartesian(tree,pairtree_c:1)").unwrap().species().name(), "(A & (A & A))");
        assert_eq!(parse_weight("product:0.5(Epm,Epm)").unwrap().species().name(), "(Epm * Epm)");
        assert_eq!(parse_weight("forest_c:2").unwrap().species().name(), "(E o A)");
        assert_eq!(parse_weight("pairforest_c:2").unwrap().species().name(), "((E o A) & (E o A))");
        assert!(matches!(parse_weight("add(E,L)"), Err(Error::SpeciesMismatch { .. })));
        assert!(matches!(parse_weight("forest_c:-1"), Err(Error::Parameter(_))));
    }
}
