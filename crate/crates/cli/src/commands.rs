use std::path::Path;

use serde_json::{json, Value};
use specred::graphs::{distance_partition, is_equitable, Equitability, VertexPartition};
use specred::io::{c64_to_json, labels_to_json, parse_document, scalar_to_json, Json};
use specred::quantumwalk::{pst_check, pst_scan, reduction_from_trig_walk, restricted_walk, weighted_target, PstOutcome};
use specred::ratmat::pfd_matrix;
use specred::unfolding::{compress_band, hollow, sign_cleanup, unfold_general, unfold_hermitian, Unfolding};
use specred::{
    reduce, reduce_frame, CMatrix, ExactRational, FloatComplex, Matrix, RatMatrix, Scalar, Selector, TrigWalkSpec,
};

use crate::input::{read, read_matrix, read_text};
use crate::{demos, Backend, Command, Failure, Options, Outcome};

macro_rules! dispatch {
    ($backend:expr, $f:ident($($arg:expr),*)) => {
        match $backend {
            Backend::Exact => $f::<ExactRational>($($arg),*),
            Backend::Float => $f::<FloatComplex>($($arg),*),
        }
    };
}

pub fn run(cmd: &Command, o: &Options) -> Result<Outcome, Failure> {
    match cmd {
        Command::Reduce { input } => dispatch!(o.backend, reduce_cmd(input, o)),
        Command::Greduce { input } => dispatch!(o.backend, greduce_cmd(input, o)),
        Command::Pfd { input } => dispatch!(o.backend, pfd_cmd(input)),
        Command::Unfold { input, general } => dispatch!(o.backend, unfold_cmd(input, *general)),
        Command::Hollow { input } => Ok(Outcome::ok(hollow(&read::<Unfolding>(input)?)?.to_json())),
        Command::Compress { input, sign_cleanup: clean } => {
            let mut u = compress_band(&read::<Unfolding>(input)?)?;
            if *clean {
                u = sign_cleanup(&u)?;
            }
            Ok(Outcome::ok(u.to_json()))
        }
        Command::Qwalk { input } => dispatch!(o.backend, qwalk_cmd(input, o)),
        Command::Pst { input, t_max, tol } => dispatch!(o.backend, pst_cmd(input, o, *t_max, *tol)),
        Command::Divisor { input, partition, root } => {
            dispatch!(o.backend, divisor_cmd(input, partition.as_deref(), root.as_deref()))
        }
        Command::Walkgen { input } => dispatch!(o.backend, walkgen_cmd(input.as_deref())),
        Command::DemoHypercube => demos::hypercube_variants(o),
        Command::DemoWeightedPst => demos::weighted_pst(o),
    }
}

fn need_subset(o: &Options) -> Result<&[String], Failure> {
    if o.subset.is_empty() {
        return Err(Failure::new("EmptySubset", "--subset is required"));
    }
    Ok(&o.subset)
}

fn reduce_cmd<T: Scalar>(input: &Path, o: &Options) -> Result<Outcome, Failure> {
    let a = read_matrix::<T>(input)?;
    Ok(Outcome::ok(reduce(&a, need_subset(o)?)?.to_json()))
}

fn greduce_cmd<T: Scalar>(input: &Path, o: &Options) -> Result<Outcome, Failure> {
    let a = read_matrix::<T>(input)?;
    let selector = match &o.frame {
        Some(path) => {
            let v = parse_document(&read_text(path)?)?;
            if v.get("frame").is_some() || v.get("subset").is_some() {
                Selector::from_json(&v)?
            } else {
                Selector::Frame(Matrix::from_json(&v)?)
            }
        }
        None => Selector::Subset(need_subset(o)?.to_vec()),
    };
    Ok(Outcome::ok(reduce_frame(&a, &selector.frame_for(&a)?)?.to_json()))
}

fn cmatrix_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| c64_to_json(m[(i, j)])).collect())).collect())
}

fn pfd_cmd<T: Scalar>(input: &Path) -> Result<Outcome, Failure> {
    let p = pfd_matrix(&read::<RatMatrix<T>>(input)?)?;
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|t| json!({"pole": c64_to_json(t.pole), "order": t.order, "coeff": cmatrix_json(&t.coeff)}))
        .collect();
    Ok(Outcome::ok(json!({"constant": cmatrix_json(&p.constant), "terms": terms})))
}

fn unfold_cmd<T: Scalar>(input: &Path, general: bool) -> Result<Outcome, Failure> {
    let r = read::<RatMatrix<T>>(input)?;
    let u = if general { unfold_general(&r)? } else { unfold_hermitian(&r)? };
    Ok(Outcome::ok(u.to_json()))
}

fn qwalk_cmd<T: Scalar>(input: &Path, o: &Options) -> Result<Outcome, Failure> {
    if o.times.is_empty() {
        return Err(Failure::new("MissingTimes", "--times is required"));
    }
    let a = read_matrix::<T>(input)?;
    Ok(Outcome::ok(restricted_walk(&a, need_subset(o)?, &o.times)?.to_json()))
}

pub fn pst_json(outcome: &PstOutcome) -> Value {
    match outcome {
        PstOutcome::Certified(c) => json!({
            "certified": true, "u": c.u, "v": c.v, "tau": c.tau,
            "gamma": c64_to_json(c.gamma), "deviation": c.deviation,
        }),
        PstOutcome::Failed(f) => json!({
            "certified": false, "u": f.u, "v": f.v, "tau": f.tau,
            "mass": f.mass, "required": f.required,
        }),
    }
}

fn pst_cmd<T: Scalar>(input: &Path, o: &Options, t_max: f64, tol: f64) -> Result<Outcome, Failure> {
    let [u, v] = need_subset(o)? else {
        return Err(Failure::new("SubsetViolation", "--subset must name exactly two vertices"));
    };
    let a = read_matrix::<T>(input)?;
    let (doc, certified) = if o.times.is_empty() {
        let found = pst_scan(&a, u, v, t_max, o.grid, tol)?;
        let certified = found.iter().any(|c| c.certificate.is_some());
        let list: Vec<Value> = found
            .iter()
            .map(|c| json!({"tau": c.tau, "amplitude": c.amplitude, "certified": c.certificate.is_some()}))
            .collect();
        (json!({"u": u, "v": v, "t_max": t_max, "candidates": list, "certified": certified}), certified)
    } else {
        let checks = o.times.iter().map(|&t| pst_check(&a, u, v, t, tol)).collect::<Result<Vec<_>, _>>()?;
        let certified = checks.iter().any(PstOutcome::is_certified);
        let list: Vec<Value> = checks.iter().map(pst_json).collect();
        (json!({"u": u, "v": v, "checks": list, "certified": certified}), certified)
    };
    Ok(if certified { Outcome::ok(doc) } else { Outcome::negative(doc) })
}

fn divisor_cmd<T: Scalar>(input: &Path, partition: Option<&str>, root: Option<&str>) -> Result<Outcome, Failure> {
    let a = read_matrix::<T>(input)?;
    let pi = match (partition, root) {
        (Some(p), None) => VertexPartition::new(
            p.split(';').map(|c| c.split(',').map(|l| l.trim().to_string()).collect()).collect(),
        )?,
        (None, Some(v)) => distance_partition(&a, v)?,
        _ => return Err(Failure::new("InvalidPartition", "give exactly one of --partition or --root")),
    };
    let classes = Value::Array(pi.classes().iter().map(|c| labels_to_json(c)).collect());
    Ok(match is_equitable(&a, &pi)? {
        Equitability::Equitable(d) => {
            Outcome::ok(json!({"partition": classes, "equitable": true, "divisor": d.to_json()}))
        }
        Equitability::NotEquitable(w) => Outcome::negative(json!({
            "partition": classes,
            "equitable": false,
            "witness": {
                "class": w.class,
                "target": w.target,
                "first": [w.first.0, scalar_to_json(&w.first.1)],
                "second": [w.second.0, scalar_to_json(&w.second.1)],
            },
        })),
    })
}

fn walkgen_cmd<T: Scalar>(input: Option<&Path>) -> Result<Outcome, Failure> {
    let spec = match input {
        Some(path) => read::<TrigWalkSpec>(path)?,
        None => weighted_target(),
    };
    Ok(Outcome::ok(json!({"spec": spec.to_json(), "reduction": reduction_from_trig_walk::<T>(&spec)?.to_json()})))
}
