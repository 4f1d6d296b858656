//! Reproducible end-to-end constructions that re-check every invariant they touch.

use std::f64::consts::{FRAC_PI_2, PI};

use serde_json::{json, Value};
use specred::graphs::{canonical_form, enumerate_q4_variants, hypercube};
use specred::io::Json;
use specred::linalg::max_abs;
use specred::quantumwalk::{pst_check, reduction_from_trig_walk, restricted_walk, walk_equivalence_check, weighted_target};
use specred::unfolding::{block_bandwidth_defect, compress_band, hollow, sign_cleanup, unfold_hermitian};
use specred::{reduce, ExactRational as Q, LabeledMatrix, Scalar};

use crate::commands::pst_json;
use crate::{Failure, Options, Outcome};

/// Named pass/fail results; any failure turns the demo into an error.
#[derive(Default)]
struct Checks(Vec<(String, bool, String)>);

impl Checks {
    fn record(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let (name, detail) = (name.into(), detail.into());
        eprintln!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.0.push((name, pass, detail));
    }

    fn finish(self, mut doc: Value) -> Result<Outcome, Failure> {
        let failed: Vec<String> = self.0.iter().filter(|c| !c.1).map(|c| c.0.clone()).collect();
        doc["checks"] = Value::Array(
            self.0.iter().map(|(n, p, d)| json!({"name": n, "pass": p, "detail": d})).collect(),
        );
        doc["pass"] = json!(failed.is_empty());
        if failed.is_empty() {
            Ok(Outcome::ok(doc))
        } else {
            Err(Failure::new("InvariantViolation", format!("failed checks: {}", failed.join(", "))))
        }
    }
}

fn demo_times(o: &Options) -> Vec<f64> {
    if o.times.is_empty() {
        (0..50).map(|k| PI * k as f64 / 49.0).collect()
    } else {
        o.times.clone()
    }
}

fn adjacency(g: &LabeledMatrix<Q>) -> Vec<Vec<bool>> {
    let m = g.matrix();
    (0..g.size()).map(|i| (0..g.size()).map(|j| !m[(i, j)].is_zero()).collect()).collect()
}

pub fn hypercube_variants(o: &Options) -> Result<Outcome, Failure> {
    let mut checks = Checks::default();
    let times = demo_times(o);
    let q4 = hypercube::<Q>(4);
    let pair = ["0000", "1111"];
    let q4_pst = pst_check(&q4, pair[0], pair[1], FRAC_PI_2, 1e-10)?;
    checks.record("Q4 antipodal PST at π/2", q4_pst.is_certified(), format!("{:?}", q4_pst.certificate().map(|c| c.deviation)));

    let variants = enumerate_q4_variants::<Q>(usize::MAX)?;
    checks.record("at least four variants", variants.len() >= 4, format!("{} variants", variants.len()));
    let forms: Vec<_> = variants.iter().map(|g| canonical_form(&adjacency(g))).collect();
    let distinct = forms.iter().enumerate().all(|(i, f)| forms[..i].iter().all(|g| g != f));
    checks.record("variants pairwise non-isomorphic", distinct, format!("{} canonical forms", forms.len()));

    let target = reduce(&q4, &pair)?;
    let ends = ["1", "16"];
    let mut docs = Vec::new();
    for (k, g) in variants.iter().enumerate() {
        let same = reduce(g, &ends)? == target;
        checks.record(format!("variant {k} reduction equals Q4's"), same, "exact");
        let pst = pst_check(g, ends[0], ends[1], FRAC_PI_2, 1e-8)?;
        checks.record(format!("variant {k} PST at π/2"), pst.is_certified(), format!("{:?}", pst.certificate().map(|c| c.deviation)));
        let eq = walk_equivalence_check(&q4, &pair, g, &ends, &times, 1e-9)?;
        checks.record(format!("variant {k} walk equivalent to Q4"), eq, format!("{} times", times.len()));
        docs.push(json!({"matrix": g.to_json(), "certificate": pst_json(&pst)}));
    }
    checks.finish(json!({"q4_certificate": pst_json(&q4_pst), "target": target.to_json(), "variants": docs}))
}

pub fn weighted_pst(o: &Options) -> Result<Outcome, Failure> {
    let mut checks = Checks::default();
    let spec = weighted_target();
    let red = reduction_from_trig_walk::<Q>(&spec)?;
    let u = sign_cleanup(&compress_band(&hollow(&unfold_hermitian(&red)?)?)?)?;
    let a = u.cmatrix();
    let n = u.size();
    checks.record("size 16", n == 16, format!("{n}"));
    let asym = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (a[(i, j)] - a[(j, i)]).norm() + a[(i, j)].im.abs())
        .fold(0.0, f64::max);
    checks.record("real symmetric", asym <= 1e-10, format!("defect {asym:.1e}"));
    checks.record("hollow", u.max_diagonal() <= 1e-10, format!("max diagonal {:.1e}", u.max_diagonal()));
    let band = block_bandwidth_defect(&a, u.blocks());
    checks.record("block tridiagonal", band == 0.0, format!("blocks {:?}", u.blocks()));

    let mut ev: Vec<f64> = u.eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    let odd: Vec<f64> = (-15..=15).step_by(2).map(f64::from).collect();
    let ev_err = if ev.len() == odd.len() {
        ev.iter().zip(&odd).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    checks.record("eigenvalues are the odd integers in [-15, 15]", ev_err <= 1e-4, format!("error {ev_err:.1e}"));

    let times = demo_times(o);
    let walk = restricted_walk(u.matrix(), &["1", "2"], &times)?;
    let walk_err = walk.times.iter().zip(&walk.blocks).map(|(&t, b)| max_abs(&(b - spec.eval(t)))).fold(0.0, f64::max);
    checks.record("restricted walk matches the target", walk_err <= 1e-6, format!("error {walk_err:.1e} over {} times", times.len()));
    let pst = pst_check(u.matrix(), "1", "2", FRAC_PI_2, 1e-8)?;
    checks.record("PST between 1 and 2 at π/2", pst.is_certified(), format!("{:?}", pst.certificate().map(|c| c.deviation)));

    checks.finish(json!({
        "spec": spec.to_json(),
        "reduction": red.to_json(),
        "unfolding": u.to_json(),
        "eigenvalues": ev,
        "certificate": pst_json(&pst),
    }))
}
