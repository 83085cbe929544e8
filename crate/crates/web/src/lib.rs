//! Browser demo: three operations over the `hyperprox` library, each taking
//! plain strings/numbers and returning a JSON document. The functions are
//! ordinary Rust so they can be tested natively; the `#[wasm_bindgen]`
//! exports are thin wrappers.

use hyperprox::cli::{cmd_compare, cmd_relations, cmd_validate, exit_code, Options, PairSelection};
use hyperprox::model::Model;
use hyperprox::proximity::gap_proximity;
use hyperprox::space::{GroundSpace, Metric, Rational, Subset};
use hyperprox::{Error, Result};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest line the explorer builds.
pub const MAX_LINE: usize = 12;

fn json(result: Result<String>) -> String {
    result.unwrap_or_else(|e: Error| {
        serde_json::json!({ "error": e.to_string(), "exit_code": exit_code(&e) }).to_string()
    })
}

/// Axiom report for a model file.
pub fn validate(model: &str) -> String {
    json(cmd_validate(model, &Options::default()).map(|r| r.to_json()))
}

/// Points `0..n` on a line with unit spacing and the gap proximity at
/// `epsilon`, serialised as a model file with subsets `A` and `B`.
pub fn line_model(n: usize, epsilon: &str, a: &[usize], b: &[usize]) -> Result<String> {
    if n == 0 || n > MAX_LINE {
        return Err(Error::CapExceeded { what: "line explorer", n, cap: MAX_LINE });
    }
    let eps = hyperprox::model::parse_rational(epsilon)
        .filter(|e| *e >= Rational::from_integer(0))
        .ok_or_else(|| Error::Parse(format!("epsilon {epsilon:?} is not a non-negative rational")))?;
    let check = |pts: &[usize]| -> Result<Subset> {
        match pts.iter().find(|&&p| p >= n) {
            Some(p) => Err(Error::InvalidSpec(format!("point {p} is not on the line 0..{}", n - 1))),
            None => Ok(Subset::from_points(pts.iter().copied())),
        }
    };
    let (a, b) = (check(a)?, check(b)?);
    let prox = gap_proximity(&GroundSpace::discrete(n)?, &Metric::line(n), eps)?;
    Ok(Model::from_relation(&prox, vec![("A".into(), a), ("B".into(), b)])?.to_toml())
}

/// Near / far / strongly-far / hat rows for `(A,B)` and `(B,A)` on the line.
pub fn explore_line(n: usize, epsilon: &str, a: &[usize], b: &[usize]) -> String {
    json(line_model(n, epsilon, a, b).and_then(|text| {
        let pairs = PairSelection::List(vec!["A:B".into(), "B:A".into()]);
        cmd_relations(&text, &pairs, &Options::default()).map(|r| r.to_json())
    }))
}

/// Compares two hypertopology specs on a model.
pub fn compare(model: &str, left: &str, right: &str) -> String {
    json(cmd_compare(model, left, right, &Options::default()).map(|r| r.to_json()))
}

fn points(list: &str) -> Vec<usize> {
    list.split(|c: char| c == ',' || c.is_whitespace()).filter_map(|t| t.parse().ok()).collect()
}

#[wasm_bindgen(js_name = validateModel)]
pub fn validate_js(model: &str) -> String {
    validate(model)
}

/// `a` and `b` are comma-separated point indices.
#[wasm_bindgen(js_name = exploreLine)]
pub fn explore_line_js(n: usize, epsilon: &str, a: &str, b: &str) -> String {
    explore_line(n, epsilon, &points(a), &points(b))
}

#[wasm_bindgen(js_name = compareTopologies)]
pub fn compare_js(model: &str, left: &str, right: &str) -> String {
    compare(model, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn line_explorer_finds_the_separating_set() {
        let v = parse(&explore_line(10, "1", &[0], &[9]));
        assert_eq!(v["pairs"][0]["strongly_far"]["c"], "{0,1}");
        assert_eq!(v["pairs"][0]["hat_strongly_far"]["verdict"], "holds");
        let near = parse(&explore_line(10, "1", &[0], &[1]));
        assert_eq!(near["pairs"][0]["near"], true);
    }

    #[test]
    fn errors_are_json_with_exit_codes() {
        assert_eq!(parse(&explore_line(40, "1", &[0], &[1]))["exit_code"], 3);
        assert_eq!(parse(&explore_line(5, "x", &[0], &[1]))["exit_code"], 2);
        assert_eq!(parse(&explore_line(5, "1", &[0], &[7]))["exit_code"], 1);
        assert_eq!(parse(&validate("points = ")).get("exit_code").unwrap(), 2);
    }

    #[test]
    fn validate_and_compare() {
        let model = "points = 3\n[topology]\nkind = \"discrete\"\n[proximity]\nkind = \"overlap\"\n";
        assert_eq!(parse(&validate(model))["proximity"]["classification"], "ef");
        assert_eq!(parse(&compare(model, "far_miss", "vietoris"))["verdict"], "equal");
    }

    #[test]
    fn point_lists_are_lenient() {
        assert_eq!(points("0, 2 3,,x"), vec![0, 2, 3]);
    }
}
