use std::fs;
use std::path::{Path, PathBuf};

use relop::doi::{difference_relative, difference_standard, DoiRequest, RelativeForm};
use relop::ensemble::{gaussian_hermitian, gaussian_matrix, seeded_rng, Family};
use relop::perturb::{block_dilation, cayley_commutator_identity, commutator_probe, Ratio};
use relop::schur::{multiplier_norm_with, sample_symbol, CertificateSource, SymbolMatrix, UpperOptions};
use relop::ssf::{eigen_flow, ssf_from_flow, ssf_oracle, trace_formula_check, SpectralShift};
use relop::symbols::{divided_difference, weight_symbol};
use relop::{eigh, func_calc, norms, HermitianMatrix, Matrix, Norms, ScalarFunction, Symbol, Weight, C64};
use serde_json::{json, Value};

use crate::cli::*;
use crate::error::{usage, CliError, CliResult};
use crate::fnspec::{parse_complex, parse_function, render_function};
use crate::matrix_file::{read_general, read_hermitian, Kind, MatrixFile};
use crate::report::{complex, matrix, real, InputDigest, Report};

/// Environment variable that relocates relative --out paths.
pub const OUT_DIR_ENV: &str = "RELOP_OUT_DIR";

pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Where the command's bytes go.
pub enum Sink {
    Stdout(Vec<u8>),
    Written(Vec<PathBuf>),
}

fn emit(output: &Output, default: Format, json: &Report, csv: Option<Vec<u8>>) -> CliResult<Sink> {
    let bytes = match (output.format.unwrap_or(default), csv) {
        (Format::Json, _) => json.to_json().into_bytes(),
        (Format::Csv, Some(csv)) => csv,
        (Format::Csv, None) => {
            return Err(usage(format!(
                "{}: csv output is only available for ssf and flow",
                json.command
            )))
        }
    };
    match &output.out {
        None => Ok(Sink::Stdout(bytes)),
        Some(p) => {
            let path = resolve_out(p);
            write_file(&path, &bytes)?;
            Ok(Sink::Written(vec![path]))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Operators {
    a: HermitianMatrix,
    k: HermitianMatrix,
    b: HermitianMatrix,
    r: Matrix,
    digest: InputDigest,
}

impl Instance {
    fn family(&self) -> Family {
        match self.family {
            FamilyArg::Gaussian => Family::Gaussian,
            FamilyArg::Diagdom => Family::DiagonallyDominant,
            FamilyArg::Clustered => Family::Clustered,
        }
    }

    fn load(&self) -> CliResult<Operators> {
        if self.n == 0 {
            return Err(usage("--n must be positive"));
        }
        if !self.k_scale.is_finite() {
            return Err(usage("--k-scale must be finite"));
        }
        let mut rng = seeded_rng(self.seed);
        let a = match &self.a {
            Some(p) => read_hermitian(p)?,
            None => self.family().sample(self.n, &mut rng),
        };
        let n = a.n();
        let k = match (&self.k, &self.b) {
            (Some(p), _) => read_hermitian(p)?,
            (None, Some(p)) => {
                let b = read_hermitian(p)?;
                if b.n() != n {
                    return Err(usage(format!("B is {}x{} but A is {n}x{n}", b.n(), b.n())));
                }
                b.add_scaled(-1.0, &a)
            }
            (None, None) => gaussian_hermitian(n, self.k_scale, &mut rng),
        };
        if k.n() != n {
            return Err(usage(format!("K is {}x{} but A is {n}x{n}", k.n(), k.n())));
        }
        let r = gaussian_matrix(n, n, &mut rng);
        let b = a.add_scaled(1.0, &k);
        let mut digest = InputDigest::new();
        digest
            .count("seed", self.seed)
            .matrix("A", a.as_matrix())
            .matrix("K", k.as_matrix());
        Ok(Operators { a, k, b, r, digest })
    }
}

fn norms_json(n: &Norms) -> Value {
    json!({"op": n.op, "trace": n.trace, "hs": n.hs})
}

fn function_arg(spec: &str, digest: &mut InputDigest) -> CliResult<ScalarFunction> {
    let f = parse_function(spec)?;
    digest.text("function", &render_function(&f));
    Ok(f)
}

fn build_symbol(args: &SymbolArgs, digest: &mut InputDigest) -> CliResult<Symbol> {
    digest.text("symbol", &format!("{:?}", args.symbol));
    if args.symbol == SymbolKind::Constant {
        let v = parse_complex(&args.value)
            .ok_or_else(|| usage(format!("--value: '{}' is not a complex number", args.value)))?;
        digest.number("value.re", v.re).number("value.im", v.im);
        return Ok(Symbol::constant(v));
    }
    let f = function_arg(&args.function, digest)?;
    Ok(match args.symbol {
        SymbolKind::Dd => divided_difference(&f),
        SymbolKind::DdI => weight_symbol(&f, Weight::I),
        SymbolKind::DdIi => weight_symbol(&f, Weight::II),
        SymbolKind::Resolvent => weight_symbol(&f, Weight::Resolvent),
        SymbolKind::Constant => unreachable!("handled above"),
    })
}

pub fn gen(args: &GenArgs) -> CliResult<(Report, Vec<PathBuf>)> {
    let ops = args.instance.load()?;
    let dir = resolve_out(&args.out);
    let mut written = Vec::new();
    for (name, m, kind) in [
        ("A.json", ops.a.as_matrix(), Kind::Hermitian),
        ("K.json", ops.k.as_matrix(), Kind::Hermitian),
        ("R.json", &ops.r, Kind::General),
    ] {
        let path = dir.join(name);
        write_file(&path, MatrixFile::from_matrix(m, kind).to_json().as_bytes())?;
        written.push(path);
    }
    let mut digest = ops.digest;
    digest.matrix("R", &ops.r);
    let results = json!({
        "n": ops.a.n(),
        "family": args.instance.family().name(),
        "k_scale": args.instance.k_scale,
        "files": ["A.json", "K.json", "R.json"],
    });
    Ok((Report::new("gen", args.instance.seed, digest, results), written))
}

pub fn doi(args: &DoiArgs) -> CliResult<Sink> {
    let mut ops = args.instance.load()?;
    let sym = build_symbol(&args.symbol, &mut ops.digest)?;
    let q = match &args.q {
        Some(p) => read_general(p)?,
        None => ops.k.as_matrix().clone(),
    };
    ops.digest.matrix("Q", &q);
    let left = eigh(&ops.b);
    let right = eigh(&ops.a);
    let value = relop::doi::doi(&DoiRequest::new(&sym, &left, &right, &q)?)?;
    let results = json!({
        "symbol": sym.label(),
        "value": matrix(&value),
        "norms": norms_json(&norms(&value)),
        "q_norms": norms_json(&norms(&q)),
    });
    let report = Report::new("doi", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Json, &report, None)
}

pub fn diff(args: &DiffArgs) -> CliResult<Sink> {
    let mut ops = args.instance.load()?;
    let f = function_arg(&args.function, &mut ops.digest)?;
    let fa = func_calc(|x| f.eval(x), &eigh(&ops.a))?;
    let fb = func_calc(|x| f.eval(x), &eigh(&ops.b))?;
    let reference = &fb - &fa;
    let scale = 1.0 + fa.frobenius_norm() + fb.frobenius_norm();
    let standard = difference_standard(&f, &ops.a, &ops.b)?;
    let rel_i = difference_relative(&f, &ops.a, &ops.k, RelativeForm::I)?;
    let rel_ii = difference_relative(&f, &ops.a, &ops.k, RelativeForm::II)?;
    let residual = |m: &Matrix| (m - &reference).frobenius_norm();
    let results = json!({
        "function": render_function(&f),
        "scale": scale,
        "reference_norms": norms_json(&norms(&reference)),
        "standard": {"residual": residual(&standard)},
        "relative_i": {
            "residual": residual(&rel_i.value),
            "ratio": real(rel_i.ratio),
            "q_op": norms(&rel_i.q).op,
        },
        "relative_ii": {
            "residual": residual(&rel_ii.value),
            "ratio": real(rel_ii.ratio),
            "q_op": norms(&rel_ii.q).op,
        },
        "forms_agreement": (&rel_i.value - &rel_ii.value).frobenius_norm(),
    });
    let report = Report::new("diff", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Json, &report, None)
}

fn check_grid(steps: usize, bins: usize) -> CliResult<()> {
    if steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    if bins < 3 {
        return Err(usage("--bins must be at least 3"));
    }
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    w.into_inner().map_err(|e| CliError::from(csv::Error::from(e.into_error())))
}

pub fn ssf(args: &SsfArgs) -> CliResult<Sink> {
    check_grid(args.steps, args.bins)?;
    let mut ops = args.instance.load()?;
    ops.digest.count("steps", args.steps as u64).count("bins", args.bins as u64);
    let oracle = ssf_oracle(&ops.a, &ops.b)?;
    let flow = eigen_flow(&ops.a, &ops.k, args.steps)?;
    let profile = ssf_from_flow(&flow, args.bins)?;
    let distance = profile.weighted_l1_distance(&oracle);
    let (lip, sum) = flow.invariant_violations();
    let results = json!({
        "steps": args.steps,
        "bins": args.bins,
        "distance": distance,
        "oracle": {"breakpoints": oracle.breakpoints, "values": oracle.values},
        "profile": {"edges": profile.edges, "xi": profile.xi},
        "imag_residual": profile.imag_residual,
        "flagged_steps": flow.flagged_steps,
        "flow_violations": {"lipschitz": lip, "weight_sum": sum},
    });
    let csv = csv_bytes(
        &["s_lo", "s_hi", "xi_hat", "xi_oracle"],
        (0..profile.bins()).map(|b| {
            vec![
                profile.edges[b].to_string(),
                profile.edges[b + 1].to_string(),
                profile.xi[b].to_string(),
                oracle.value_at(profile.center(b)).to_string(),
            ]
        }),
    )?;
    let report = Report::new("ssf", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Json, &report, Some(csv))
}

pub fn trace_check(args: &TraceCheckArgs) -> CliResult<Sink> {
    let mut ops = args.instance.load()?;
    let f = function_arg(&args.function, &mut ops.digest)?;
    let xi: Box<dyn SpectralShift> = match args.xi {
        XiSource::Oracle => {
            ops.digest.text("xi", "oracle");
            Box::new(ssf_oracle(&ops.a, &ops.b)?)
        }
        XiSource::Profile => {
            check_grid(args.steps, args.bins)?;
            ops.digest
                .text("xi", "profile")
                .count("steps", args.steps as u64)
                .count("bins", args.bins as u64);
            Box::new(ssf_from_flow(&eigen_flow(&ops.a, &ops.k, args.steps)?, args.bins)?)
        }
    };
    let check = trace_formula_check(&f, &ops.a, &ops.k, xi.as_ref())?;
    let results = json!({
        "function": render_function(&f),
        "xi": match args.xi { XiSource::Oracle => "oracle", XiSource::Profile => "profile" },
        "lhs": complex(check.lhs),
        "rhs": complex(check.rhs),
        "abs_error": check.abs_error,
        "relative_error": check.abs_error / (1.0 + check.lhs.norm()),
    });
    let report = Report::new("trace-check", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Json, &report, None)
}

fn source_name(s: CertificateSource) -> &'static str {
    match s {
        CertificateSource::Rows => "rows",
        CertificateSource::Columns => "columns",
        CertificateSource::DualScaling => "dual-scaling",
        CertificateSource::AlternatingProjections => "alternating-projections",
    }
}

pub fn multnorm(args: &MultnormArgs) -> CliResult<Sink> {
    if !(args.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let seed = args.instance.seed;
    let (m, mut digest) = match args.source {
        MultSource::Symbol => {
            let mut ops = args.instance.load()?;
            let sym = build_symbol(&args.symbol, &mut ops.digest)?;
            let x = eigh(&ops.b).lambdas;
            let y = eigh(&ops.a).lambdas;
            (sample_symbol(&sym, &x, &y)?, ops.digest)
        }
        MultSource::Triangular | MultSource::Sign => {
            let n = args.instance.n;
            if n == 0 {
                return Err(usage("--n must be positive"));
            }
            let mut d = InputDigest::new();
            d.count("n", n as u64);
            let m = if args.source == MultSource::Triangular {
                d.text("source", "triangular");
                relop::schur::triangular_truncation(n)
            } else {
                d.text("source", "sign");
                relop::schur::sign_symbol(n)
            };
            (m, d)
        }
        MultSource::File => {
            let p = args.matrix.as_ref().ok_or_else(|| usage("--source file needs --matrix"))?;
            (SymbolMatrix::from_matrix(read_general(p)?)?, InputDigest::new())
        }
    };
    digest
        .matrix("M", &m.entries)
        .number("tol", args.tol)
        .count("probes", args.probes as u64)
        .count("max_iter", args.max_iter as u64);
    let opts = UpperOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        probes: args.probes,
        seed,
    };
    let bounds = multiplier_norm_with(&m, &opts)?;
    let cert = &bounds.certificate;
    let mut results = json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "lo": bounds.lo,
        "hi": bounds.hi,
        "gap": bounds.gap(),
        "converged": cert.converged,
        "source": source_name(cert.source),
        "rank": cert.rank(),
        "verified": cert.verify(&m),
        "max_entry_error": cert.max_entry_error(&m),
    });
    if args.certificate {
        let vecs = |v: &[Vec<C64>]| -> Value {
            Value::Array(v.iter().map(|x| Value::Array(x.iter().map(|z| complex(*z)).collect())).collect())
        };
        results["certificate"] = json!({"x": vecs(&cert.x_vectors), "y": vecs(&cert.y_vectors)});
    }
    let report = Report::new("multnorm", seed, digest, results);
    emit(&args.output, Format::Json, &report, None)
}

fn ratio_json(r: &Ratio) -> Value {
    json!({
        "numerator": r.numerator,
        "denominator": r.denominator,
        "value": real(r.value),
        "flagged": r.flagged,
    })
}

pub fn probe(args: &ProbeArgs) -> CliResult<Sink> {
    let mut ops = args.instance.load()?;
    let f = function_arg(&args.function, &mut ops.digest)?;
    let r = match &args.r {
        Some(p) => read_general(p)?,
        None => ops.r.clone(),
    };
    ops.digest.matrix("R", &r);
    let ratios = commutator_probe(&f, &ops.a, &ops.b, &r)?;
    let cayley = cayley_commutator_identity(&ops.a, &ops.b, &r)?;

    // The dilation carries BR − RA as a block of a plain commutator.
    let (big_a, big_r) = block_dilation(&ops.a, &ops.b, &r)?;
    let big = &(big_a.as_matrix() * &big_r) - &(&big_r * big_a.as_matrix());
    let small = &(ops.b.as_matrix() * &r) - &(&r * ops.a.as_matrix());
    let (nb, ns) = (norms(&big), norms(&small));
    let dilation_gap = (nb.op - ns.op).abs().max((nb.trace - ns.trace).abs()).max((nb.hs - ns.hs).abs());

    let mut results = json!({
        "function": render_function(&f),
        "ratio_b": ratio_json(&ratios.ratio_b),
        "ratio_c": ratio_json(&ratios.ratio_c),
        "cayley": {
            "residual": cayley.residual,
            "scale": cayley.scale,
            "relative": cayley.relative(),
        },
        "dilation": {
            "commutator_norms": norms_json(&nb),
            "quasi_commutator_norms": norms_json(&ns),
            "max_abs_difference": dilation_gap,
        },
    });
    if args.bound {
        if !(args.tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        let sym = weight_symbol(&f, Weight::I);
        let la = eigh(&ops.a).lambdas;
        let lb = eigh(&ops.b).lambdas;
        let opts = UpperOptions {
            tol: args.tol,
            seed: args.instance.seed,
            ..UpperOptions::default()
        };
        let hi_b = multiplier_norm_with(&sample_symbol(&sym, &la, &la)?, &opts)?.hi;
        let hi_c = multiplier_norm_with(&sample_symbol(&sym, &lb, &la)?, &opts)?.hi;
        results["bound"] = json!({
            "hi_b": hi_b,
            "hi_c": hi_c,
            "ratio_b_within": ratios.ratio_b.value <= hi_b + args.tol,
            "ratio_c_within": ratios.ratio_c.value <= hi_c + args.tol,
        });
    }
    let report = Report::new("probe", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Json, &report, None)
}

pub fn flow(args: &FlowArgs) -> CliResult<Sink> {
    if args.steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    let mut ops = args.instance.load()?;
    ops.digest.count("steps", args.steps as u64);
    let flow = eigen_flow(&ops.a, &ops.k, args.steps)?;
    let (lip, sum) = flow.invariant_violations();
    let csv = csv_bytes(
        &["t", "j", "lambda", "weight"],
        flow.t_grid.iter().enumerate().flat_map(|(k, t)| {
            let flow = &flow;
            (0..flow.trajectories()).map(move |j| {
                vec![
                    t.to_string(),
                    j.to_string(),
                    flow.lambdas[k][j].to_string(),
                    flow.weights[k][j].to_string(),
                ]
            })
        }),
    )?;
    let results = json!({
        "steps": args.steps,
        "t": flow.t_grid,
        "lambda": flow.lambdas,
        "weight": flow.weights,
        "flagged_steps": flow.flagged_steps,
        "trace_k": flow.trace_k,
        "flow_violations": {"lipschitz": lip, "weight_sum": sum},
    });
    let report = Report::new("flow", args.instance.seed, ops.digest, results);
    emit(&args.output, Format::Csv, &report, Some(csv))
}
