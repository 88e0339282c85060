//! Command dispatch for the `bowlab` binary.
//!
//! Exit codes: 0 success, 1 verification or validation failure (stdout still
//! carries a JSON document), 2 usage or parse error (stdout empty).

use std::fs;
use std::io::{self, Read, Write};

use bowlab_core::combinatorics::{enumerate_fixed_points, for_each_fixed_point, gale_ryser, pointful_check, RowColumnData};
use bowlab_core::cores::{
    base_case_descriptor, core_data, example_presentation, graded_dimension, nil_and_m_shape, node_budget_from_env,
    recursion_tree, retraction_weights, u_step, v_step, valid_signatures, GradedPresentation, TwoRowSignature,
    validate_two_row,
};
use bowlab_core::exact::{PolyMatrix, RatMatrix};
use bowlab_core::json::{
    poly_matrix_from_json, poly_matrix_to_json, poly_to_json, rat_matrix_from_json, rat_matrix_to_json,
    usize_list_from_json,
};
use bowlab_core::mvy::{
    coefficient_table, mvy_inverse, mvy_map, quotient_basis_check, random_slice, recursion_b_table, utv_factorize,
    verify_jordan_type, w_membership,
};
use bowlab_core::normalizer::{normalize_mu, sample_level_with_witness};
use bowlab_core::shapes::{level_p_membership, slice_s_membership, MuVector};
use bowlab_core::Error;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bowlab", version, about = "Exact matrix models for bow varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether row and column margins admit a {0,1} matrix.
    Feasible {
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
    },
    /// Enumerate {0,1} matrices with the given margins.
    FixedPoints {
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
        /// Include the matrices in the output.
        #[arg(long)]
        json: bool,
        /// One JSON document per line: each matrix, then the count.
        #[arg(long, conflicts_with = "json")]
        stream: bool,
        /// Enumerate past the size guard.
        #[arg(long)]
        force: bool,
    },
    /// Conjugate a level-set matrix into the slice.
    Normalize {
        /// JSON file {"mu": [...], "K": [[...]]}; `-` reads stdin.
        #[arg(long, conflicts_with = "mu")]
        input: Option<String>,
        /// Sample a level-set matrix for this shape instead of reading one.
        #[arg(long, value_delimiter = ',', requires = "seed")]
        mu: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Map a polynomial matrix in W_mu to its slice matrix.
    Mvy {
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<usize>>,
        /// JSON file with {"mu", "A"} or a bare matrix.
        #[arg(long, required = true)]
        input: String,
        /// Fixed Laurent depth for an extra factorization residual check.
        #[arg(long, allow_negative_numbers = true)]
        depth: Option<i64>,
    },
    /// Map a slice matrix back to W_mu.
    MvyInv {
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<usize>>,
        /// JSON file with {"mu", "B"} or a bare matrix.
        #[arg(long, required = true)]
        input: String,
    },
    /// Compare invariant factors of A and of xI - B.
    JordanCheck {
        /// JSON file {"A": [[poly...]], "B": [[...]]}.
        #[arg(long, required = true)]
        input: String,
    },
    /// Two-row signature data; `--tree` prints the recursion tree.
    Core {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<usize>,
        #[arg(long)]
        tree: bool,
    },
    /// Dimension of a graded piece of a presented ring.
    Hilbert {
        /// Presentation JSON; the built-in example is used when omitted.
        #[arg(long, alias = "input")]
        pres: Option<String>,
        /// Cohomological degree.
        #[arg(long)]
        degree: usize,
    },
    /// Run the property suite with a fixed seed.
    Selftest {
        #[arg(long)]
        seed: u64,
        /// Samples per shape.
        #[arg(long, default_value_t = 10)]
        samples: u64,
    },
}

/// Outcome of a command before it is written out.
enum Outcome {
    Ok(Value),
    Fail(Value),
    /// Output was already written line by line.
    Streamed,
}

struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Cmd = std::result::Result<Outcome, Usage>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(outcome) => {
            let (code, docs) = match outcome {
                Outcome::Ok(v) => (0, vec![v]),
                Outcome::Fail(v) => (1, vec![v]),
                Outcome::Streamed => (0, Vec::new()),
            };
            for d in docs {
                let _ = writeln!(out, "{d}");
            }
            code
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Cmd {
    match cmd {
        Command::Feasible { rows, cols } => feasible(rows, cols),
        Command::FixedPoints { rows, cols, stream: true, force, .. } => stream_fixed_points(rows, cols, force, out),
        Command::FixedPoints { rows, cols, json, force, .. } => fixed_points(rows, cols, json, force),
        Command::Normalize { input, mu, seed } => normalize(input, mu, seed),
        Command::Mvy { mu, input, depth } => mvy(mu, &input, depth),
        Command::MvyInv { mu, input } => mvy_inv(mu, &input),
        Command::JordanCheck { input } => jordan_check(&input),
        Command::Core { k, c, tree } => core(k, c, tree),
        Command::Hilbert { pres, degree } => hilbert(pres, degree),
        Command::Selftest { seed, samples } => Ok(selftest(seed, samples, err)),
    }
}

fn read_json(path: &str) -> std::result::Result<Value, Usage> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Usage(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Usage(format!("{path}: malformed JSON: {e}")))
}

fn fail(msg: impl std::fmt::Display) -> Outcome {
    Outcome::Fail(json!({"error": msg.to_string()}))
}

/// Shape from the flag, else from the payload's `"mu"`.
fn resolve_mu(flag: Option<Vec<usize>>, doc: &Value) -> std::result::Result<MuVector, Usage> {
    let parts = match (flag, doc.get("mu")) {
        (Some(p), _) => p,
        (None, Some(v)) => usize_list_from_json(v)?,
        (None, None) => return Err(Usage("mu must be given by --mu or in the input".into())),
    };
    Ok(MuVector::new(parts)?)
}

/// Payload field `key`, or the whole document when it is a bare matrix.
fn matrix_field<'a>(doc: &'a Value, key: &str) -> std::result::Result<&'a Value, Usage> {
    match doc {
        Value::Array(_) => Ok(doc),
        Value::Object(o) => o.get(key).ok_or_else(|| Usage(format!("input needs a {key:?} field"))),
        _ => Err(Usage("input must be a JSON object or matrix".into())),
    }
}

fn feasible(rows: Vec<usize>, cols: Vec<usize>) -> Cmd {
    let d = RowColumnData::new(rows, cols);
    let ok = pointful_check(&d, d.m(), d.n());
    let doc = json!({"feasible": ok, "sums_match": d.sums_match()});
    Ok(if ok { Outcome::Ok(doc) } else { Outcome::Fail(doc) })
}

fn fixed_points(rows: Vec<usize>, cols: Vec<usize>, full: bool, force: bool) -> Cmd {
    let d = RowColumnData::new(rows, cols);
    let mats = match enumerate_fixed_points(&d, force) {
        Ok(m) => m,
        Err(e @ Error::TooLarge(_)) => return Ok(fail(format!("{e}; pass --force to enumerate anyway"))),
        Err(e) => return Ok(fail(e)),
    };
    let mut doc = json!({"count": mats.len()});
    if full {
        doc["matrices"] = Value::Array(mats.iter().map(|m| m.to_json()).collect());
    }
    Ok(Outcome::Ok(doc))
}

/// JSON lines: one matrix per line, then `{"count": N}`.
fn stream_fixed_points(rows: Vec<usize>, cols: Vec<usize>, force: bool, out: &mut dyn Write) -> Cmd {
    let d = RowColumnData::new(rows, cols);
    let m = d.m() * d.n();
    if m > bowlab_core::combinatorics::ENUMERATION_GUARD && !force {
        return fixed_points(d.rows, d.cols, false, false);
    }
    let count = for_each_fixed_point(&d, force, &mut |b| {
        let _ = writeln!(out, "{}", b.to_json());
    })?;
    let _ = writeln!(out, "{}", json!({"count": count}));
    Ok(Outcome::Streamed)
}

fn normalize(input: Option<String>, mu: Option<Vec<usize>>, seed: Option<u64>) -> Cmd {
    let (mu, k, witness) = match (input, mu) {
        (Some(path), _) => {
            let doc = read_json(&path)?;
            let mu = resolve_mu(None, &doc)?;
            let k = rat_matrix_from_json(matrix_field(&doc, "K")?)?;
            (mu, k, None)
        }
        (None, Some(parts)) => {
            let mu = MuVector::new(parts)?;
            let seed = seed.ok_or_else(|| Usage("--mu requires --seed".into()))?;
            let sample = sample_level_with_witness(&mu, seed);
            (mu, sample.k.clone(), Some(sample))
        }
        (None, None) => return Err(Usage("normalize needs --input or --mu with --seed".into())),
    };
    if k.rows() != mu.total() || k.cols() != mu.total() {
        return Err(Usage(format!("K must be {0}x{0} for mu {1:?}", mu.total(), mu.parts())));
    }
    let rep = level_p_membership(&mu, &k)?;
    if !rep.ok() {
        return Ok(Outcome::Fail(json!({
            "error": "K is not in the level set",
            "violations": rep.violations,
            "total_violations": rep.total_violations,
        })));
    }
    let res = match normalize_mu(&mu, &k) {
        Ok(r) => r,
        Err(e) => return Ok(fail(e)),
    };
    let s_ok = slice_s_membership(&mu, &res.s)?.ok();
    let mut doc = json!({
        "mu": mu.parts(),
        "u": rat_matrix_to_json(&res.u),
        "s": rat_matrix_to_json(&res.s),
        "s_in_slice": s_ok,
    });
    if let Some(w) = witness {
        doc["K"] = rat_matrix_to_json(&w.k);
        doc["matches_sample"] = json!(w.s == res.s);
    }
    Ok(if s_ok { Outcome::Ok(doc) } else { Outcome::Fail(doc) })
}

fn mvy(mu: Option<Vec<usize>>, input: &str, depth: Option<i64>) -> Cmd {
    let doc = read_json(input)?;
    let mu = resolve_mu(mu, &doc)?;
    let a = poly_matrix_from_json(matrix_field(&doc, "A")?)?;
    if a.rows() != mu.n() || a.cols() != mu.n() {
        return Err(Usage(format!("A must be {0}x{0} for mu {1:?}", mu.n(), mu.parts())));
    }
    let w = w_membership(&mu, &a)?;
    if let Some(f) = w.failure {
        return Ok(fail(format!("A is not in W_mu: {f}")));
    }
    let table = match coefficient_table(&mu, &a) {
        Ok(t) => t,
        Err(e) => return Ok(fail(e)),
    };
    let c_consistent = table.c_consistent();
    let b = match mvy_map(&mu, &a) {
        Ok(b) => b.into_matrix(),
        Err(e) => return Ok(Outcome::Fail(json!({"error": e.to_string(), "c_consistent": c_consistent}))),
    };
    let jordan_ok = verify_jordan_type(&a, &b)?.ok();
    let mut doc = json!({
        "mu": mu.parts(),
        "B": rat_matrix_to_json(&b),
        "jordan_ok": jordan_ok,
        "c_consistent": c_consistent,
    });
    let mut ok = jordan_ok && c_consistent;
    if let Some(d) = depth {
        match utv_factorize(&mu, &a, d) {
            Ok(f) => {
                let r = f.residual_vanishes(&a);
                doc["depth"] = json!(d);
                doc["residual_ok"] = json!(r);
                ok &= r;
            }
            Err(e) => {
                doc["depth"] = json!(d);
                doc["error"] = json!(e.to_string());
                ok = false;
            }
        }
    }
    Ok(if ok { Outcome::Ok(doc) } else { Outcome::Fail(doc) })
}

fn mvy_inv(mu: Option<Vec<usize>>, input: &str) -> Cmd {
    let doc = read_json(input)?;
    let mu = resolve_mu(mu, &doc)?;
    let b = rat_matrix_from_json(matrix_field(&doc, "B")?)?;
    if b.rows() != mu.total() || b.cols() != mu.total() {
        return Err(Usage(format!("B must be {0}x{0} for mu {1:?}", mu.total(), mu.parts())));
    }
    let rep = slice_s_membership(&mu, &b)?;
    if !rep.ok() {
        return Ok(Outcome::Fail(json!({
            "error": "B is not in the slice",
            "violations": rep.violations,
            "total_violations": rep.total_violations,
        })));
    }
    let w = match mvy_inverse(&mu, &b) {
        Ok(w) => w,
        Err(e) => return Ok(fail(e)),
    };
    let jordan_ok = verify_jordan_type(w.matrix(), &b)?.ok();
    let doc = json!({"mu": mu.parts(), "A": poly_matrix_to_json(w.matrix()), "jordan_ok": jordan_ok});
    Ok(if jordan_ok { Outcome::Ok(doc) } else { Outcome::Fail(doc) })
}

fn jordan_check(input: &str) -> Cmd {
    let doc = read_json(input)?;
    let a: PolyMatrix = poly_matrix_from_json(matrix_field(&doc, "A")?)?;
    let b: RatMatrix = rat_matrix_from_json(matrix_field(&doc, "B")?)?;
    let rep = match verify_jordan_type(&a, &b) {
        Ok(r) => r,
        Err(e) => return Ok(fail(e)),
    };
    let doc = json!({
        "jordan_ok": rep.ok(),
        "lattice_factors": rep.lattice_factors.iter().map(poly_to_json).collect::<Vec<_>>(),
        "slice_factors": rep.slice_factors.iter().map(poly_to_json).collect::<Vec<_>>(),
    });
    Ok(if rep.ok() { Outcome::Ok(doc) } else { Outcome::Fail(doc) })
}

fn core(k: usize, c: Vec<usize>, tree: bool) -> Cmd {
    let sig = TwoRowSignature::new(k, c);
    let report = validate_two_row(&sig);
    if !report.ok() {
        return Ok(Outcome::Fail(json!({"signature": sig.to_json(), "validation": report.to_json()})));
    }
    if tree {
        let t = recursion_tree(&sig, node_budget_from_env())?;
        return Ok(Outcome::Ok(t.to_json()));
    }
    let data = core_data(&sig)?;
    let (nil, shape) = nil_and_m_shape(&sig.u())?;
    let mut doc = json!({
        "signature": sig.to_json(),
        "validation": report.to_json(),
        "core": data.to_json(),
        "nil": rat_matrix_to_json(&nil),
        "m_shape": shape.to_json(),
        "weights": retraction_weights(&sig)?.to_json(),
    });
    if data.rank == 0 {
        doc["base"] = base_case_descriptor(&sig)?.to_json();
    } else {
        let u = u_step(&sig)?;
        let v = v_step(&sig)?;
        doc["u_step"] = json!({"signature": u.sig.to_json(), "rank": u.rank_after, "split_tori": u.split_tori});
        doc["v_step"] = json!({"signature": v.sig.to_json(), "rank": v.rank_after, "claimed_rank": v.claimed_rank()});
    }
    Ok(Outcome::Ok(doc))
}

fn hilbert(pres: Option<String>, degree: usize) -> Cmd {
    let p = match pres {
        Some(path) => GradedPresentation::from_json(&read_json(&path)?)?,
        None => example_presentation(),
    };
    match graded_dimension(&p, degree) {
        Ok(d) => Ok(Outcome::Ok(json!({"degree": degree, "dimension": d}))),
        Err(e) => Ok(fail(e)),
    }
}

struct Tally {
    name: &'static str,
    passed: u64,
    failed: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "failed": self.failed, "first_failure": self.first_failure})
    }
}

fn selftest(seed: u64, samples: u64, err: &mut dyn Write) -> Outcome {
    let shapes: [&[usize]; 5] = [&[2, 4], &[1, 1, 1], &[3, 2], &[2, 2, 1], &[1, 2]];
    let mut tallies = Vec::new();

    let mut t = Tally::new("normalize-round-trip");
    for parts in shapes {
        let mu = MuVector::new(parts.to_vec()).expect("fixed shape");
        for i in 0..samples {
            let s = sample_level_with_witness(&mu, seed.wrapping_add(i));
            let ok = normalize_mu(&mu, &s.k).map(|r| r.s == s.s).unwrap_or(false);
            t.record(ok, || format!("mu {parts:?}, sample {i}"));
        }
    }
    tallies.push(t);

    let mut t = Tally::new("mvy-round-trip");
    let mut paths = Tally::new("mvy-two-paths");
    for parts in shapes {
        let mu = MuVector::new(parts.to_vec()).expect("fixed shape");
        for i in 0..samples {
            let b = random_slice(&mu, seed.wrapping_add(i));
            let check = || -> bowlab_core::Result<(bool, bool)> {
                let w = mvy_inverse(&mu, &b)?;
                let a = w.matrix();
                let back = mvy_map(&mu, a)?.into_matrix();
                let table = coefficient_table(&mu, a)?;
                let ok = back == b
                    && verify_jordan_type(a, &b)?.ok()
                    && table.c_consistent()
                    && quotient_basis_check(a, &table)?.ok();
                let rec = recursion_b_table(&mu, a)?;
                let agree = (0..mu.n()).all(|r| (0..mu.n()).all(|c| rec[r][c].as_slice() == table.b_vector(r, c)));
                Ok((ok, agree))
            };
            let (ok, agree) = check().unwrap_or((false, false));
            t.record(ok, || format!("mu {parts:?}, sample {i}"));
            paths.record(agree, || format!("mu {parts:?}, sample {i}"));
        }
    }
    tallies.push(t);
    tallies.push(paths);

    let mut t = Tally::new("gale-ryser-vs-enumeration");
    for code in 0..(samples * 20) {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(code);
        let mut take = |len: usize| -> Vec<usize> {
            (0..len)
                .map(|_| {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((x >> 33) % 4) as usize
                })
                .collect()
        };
        let rows = take(3);
        let cols = take(3);
        let d = RowColumnData::new(rows.clone(), cols.clone());
        let brute = !enumerate_fixed_points(&d, false).map(|v| v.is_empty()).unwrap_or(true);
        let gr = d.sums_match() && gale_ryser(&rows, &cols);
        t.record(brute == gr, || format!("rows {rows:?}, cols {cols:?}"));
    }
    tallies.push(t);

    let mut t = Tally::new("core-steps");
    for n in 1..=5 {
        for sig in valid_signatures(n) {
            let ok = match core_data(&sig) {
                Ok(d) if d.rank == 0 => base_case_descriptor(&sig).is_ok(),
                Ok(d) => u_step(&sig).is_ok_and(|u| u.rank_after < d.rank) && v_step(&sig).is_ok(),
                Err(_) => false,
            };
            t.record(ok, || format!("{sig:?}"));
        }
    }
    tallies.push(t);

    let mut t = Tally::new("graded-dimension");
    let p = example_presentation();
    t.record(graded_dimension(&p, 2).ok() == Some(4), || "degree 2".into());
    t.record(graded_dimension(&p, 4).ok() == Some(8), || "degree 4".into());
    tallies.push(t);

    let passed: u64 = tallies.iter().map(|t| t.passed).sum();
    let failed: u64 = tallies.iter().map(|t| t.failed).sum();
    for t in &tallies {
        let _ = writeln!(err, "{}: {} passed, {} failed", t.name, t.passed, t.failed);
    }
    let doc = json!({
        "seed": seed,
        "passed": passed,
        "failed": failed,
        "checks": tallies.iter().map(Tally::to_json).collect::<Vec<_>>(),
    });
    if failed == 0 {
        Outcome::Ok(doc)
    } else {
        Outcome::Fail(doc)
    }
}
