use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use tenbound::bounds::{BoundInterval, BoundMethod, ExactInterval};
use tenbound::inclusion::{
    brualdi_regions, build_digraph, check_containment_b_in_g, gershgorin_regions, region_contains,
    regions_to_value, render_svg, weakly_irreducible_paper, weakly_irreducible_standard,
    BrualdiOptions, CircuitRegion, RegionKind, SvgScene, SUBSET_SEARCH_LIMIT,
};
use tenbound::io::{
    parse_tensor_json, tensor_to_value, to_json_string_pretty, AnyTensor, JsonScalar,
};
use tenbound::oracle::{matrix_spectrum, power_rho, small_tensor_spectrum, PowerOptions};
use tenbound::{
    cw_certificate, diagonal, exact_minc_bounds, exact_minc_self, general_product_with_cap,
    minc_bounds, minc_power, minc_self, power_rho_bounds, product_rho_bounds, row_sums,
    rowsum_bounds, tensor_power_with_cap, Error, Real, RowSumProfile, Scalar, Tensor,
};

use crate::args::{BoundsCommand, CwCertArgs, ProductArgs, RegionArgs, RegionsCommand, RhoArgs};
use crate::error::{CliError, EXIT_NOT_CONVERGED};
use crate::report::InputDigest;

pub type CmdResult = std::result::Result<Value, CliError>;

/// Per-invocation state: caps, digests of the files read, warnings.
#[derive(Debug)]
pub struct Context {
    pub entry_cap: usize,
    pub circuit_cap: usize,
    pub inputs: Vec<InputDigest>,
    pub warnings: Vec<String>,
    /// Nonzero when the command produced output but should still fail.
    pub exit_code: i32,
}

impl Context {
    pub fn new(entry_cap: usize, circuit_cap: usize) -> Self {
        Context {
            entry_cap,
            circuit_cap,
            inputs: Vec::new(),
            warnings: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn load(&mut self, path: &Path) -> Result<AnyTensor, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Input {
            path: path.to_path_buf(),
            message: e.to_string(),
            kind: tenbound::ErrorKind::Parse,
        })?;
        self.inputs.push(InputDigest::new(path, &bytes));
        let text = String::from_utf8_lossy(&bytes);
        parse_tensor_json(&text).map_err(|e| CliError::Input {
            path: path.to_path_buf(),
            message: e.to_string(),
            kind: e.kind(),
        })
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn profile_value<R: Real>(p: &RowSumProfile<R>) -> Value {
    json!({
        "values": p.values.iter().map(Real::to_f64).collect::<Vec<_>>(),
        "min": p.min.to_f64(),
        "max": p.max.to_f64(),
        "argmin": p.argmin + 1,
        "argmax": p.argmax + 1,
    })
}

fn real_operand(t: &AnyTensor, name: &'static str) -> Result<Tensor<f64>, CliError> {
    t.to_real()
        .ok_or(CliError::Core(Error::NotNonnegative(name)))
}

/// Both operands in a common scalar type.
enum Pair {
    Real(Tensor<f64>, Tensor<f64>),
    Complex(Tensor<Complex64>, Tensor<Complex64>),
}

fn pair(a: &AnyTensor, b: &AnyTensor) -> Pair {
    match (a, b) {
        (AnyTensor::Real(a), AnyTensor::Real(b)) => Pair::Real(a.clone(), b.clone()),
        _ => Pair::Complex(a.to_complex(), b.to_complex()),
    }
}

pub fn info(ctx: &mut Context, path: &Path) -> CmdResult {
    let t = ctx.load(path)?;
    Ok(match &t {
        AnyTensor::Real(x) => info_value(x),
        AnyTensor::Complex(x) => info_value(x),
    })
}

fn info_value<T: Scalar>(t: &Tensor<T>) -> Value {
    let g = build_digraph(t);
    let subset = if t.dim() <= SUBSET_SEARCH_LIMIT {
        weakly_irreducible_paper(t).ok()
    } else {
        None
    };
    let rs = row_sums(t);
    json!({
        "order": t.order(),
        "dim": t.dim(),
        "kind": t.scalar_kind().to_string(),
        "storage": if t.is_dense() { "dense" } else { "sparse" },
        "nnz": t.nnz(),
        "nonneg": t.is_nonneg(),
        "row_sums": profile_value(&rs),
        "diagonal": diagonal(t).entries.iter().map(|v| complex_value(v.to_complex64())).collect::<Vec<_>>(),
        "weakly_irreducible": {
            "standard": weakly_irreducible_standard(t),
            "subset": subset,
        },
        "digraph": {
            "arcs": g.arcs().iter().map(|(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
            "uncovered_vertex": g.first_uncovered_vertex().map(|v| v + 1),
        },
    })
}

pub fn rowsum(ctx: &mut Context, path: &Path) -> CmdResult {
    let t = ctx.load(path)?;
    let p = match &t {
        AnyTensor::Real(x) => row_sums(x),
        AnyTensor::Complex(x) => row_sums(x),
    };
    Ok(profile_value(&p))
}

fn product_value<T: JsonScalar>(
    c: &Tensor<T>,
    power: Option<usize>,
    out: &Option<PathBuf>,
) -> CmdResult {
    let tensor = tensor_to_value(c);
    if let Some(path) = out {
        write_file(path, &(to_json_string_pretty(&tensor) + "\n"))?;
    }
    Ok(json!({
        "order": c.order(),
        "dim": c.dim(),
        "power": power,
        "nnz": c.nnz(),
        "row_sums": profile_value(&row_sums(c)),
        "tensor": tensor,
        "written": out.as_ref().map(|p| p.display().to_string()),
    }))
}

pub fn product(ctx: &mut Context, args: &ProductArgs) -> CmdResult {
    let a = ctx.load(&args.a)?;
    let cap = ctx.entry_cap;
    match (args.power, &args.b) {
        (Some(k), _) => match &a {
            AnyTensor::Real(x) => {
                product_value(&tensor_power_with_cap(x, k, cap)?, Some(k), &args.out)
            }
            AnyTensor::Complex(x) => {
                product_value(&tensor_power_with_cap(x, k, cap)?, Some(k), &args.out)
            }
        },
        (None, Some(bpath)) => {
            let b = ctx.load(bpath)?;
            match pair(&a, &b) {
                Pair::Real(x, y) => {
                    product_value(&general_product_with_cap(&x, &y, cap)?, None, &args.out)
                }
                Pair::Complex(x, y) => {
                    product_value(&general_product_with_cap(&x, &y, cap)?, None, &args.out)
                }
            }
        }
        (None, None) => Err(CliError::Usage("product needs B or --power K".into())),
    }
}

fn bound_value(iv: &BoundInterval<f64>, exact: Option<ExactInterval>) -> Value {
    let k = match iv.method {
        BoundMethod::MincPower { k } | BoundMethod::Power { k } | BoundMethod::PowerUpper { k } => {
            Some(k)
        }
        _ => None,
    };
    let mut v = json!({
        "lower": iv.lower,
        "upper": iv.upper,
        "method": iv.method.name(),
        "k": k,
        "witnesses": { "low": iv.witness_low + 1, "high": iv.witness_high + 1 },
    });
    if let Some(e) = exact {
        v["exact_fractions"] = json!([e.lower.to_string(), e.upper.to_string()]);
    }
    v
}

pub fn bounds(ctx: &mut Context, cmd: &BoundsCommand) -> CmdResult {
    match cmd {
        BoundsCommand::Rowsum { a } => {
            let a = real_operand(&ctx.load(a)?, "A")?;
            Ok(bound_value(&rowsum_bounds(&a)?, None))
        }
        BoundsCommand::Minc { a, b, self_ } => {
            let a = real_operand(&ctx.load(a)?, "A")?;
            if *self_ {
                let iv = minc_self(&a)?;
                Ok(bound_value(&iv, exact_minc_self(&a)))
            } else {
                let path = b
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("minc needs B or --self".into()))?;
                let b = real_operand(&ctx.load(path)?, "B")?;
                let iv = minc_bounds(&a, &b)?;
                Ok(bound_value(&iv, exact_minc_bounds(&a, &b)))
            }
        }
        BoundsCommand::MincPower { a, k } => {
            let a = real_operand(&ctx.load(a)?, "A")?;
            Ok(bound_value(&minc_power(&a, *k)?, None))
        }
        BoundsCommand::Product { a, b } => {
            let a = real_operand(&ctx.load(a)?, "A")?;
            let b = real_operand(&ctx.load(b)?, "B")?;
            Ok(bound_value(&product_rho_bounds(&a, &b)?, None))
        }
        BoundsCommand::Power { a, k } => {
            let iv = match ctx.load(a)? {
                AnyTensor::Real(x) => power_rho_bounds(&x, *k)?,
                AnyTensor::Complex(x) => power_rho_bounds(&x, *k)?,
            };
            if matches!(iv.method, BoundMethod::PowerUpper { .. }) {
                ctx.warnings
                    .push("A is not nonnegative: only the upper bound applies".into());
            }
            Ok(bound_value(&iv, None))
        }
    }
}

/// Eigenvalues of `AB` when an exact oracle covers its shape.
fn oracle_eigenvalues<T: Scalar>(
    ctx: &mut Context,
    a: &Tensor<T>,
    b: &Tensor<T>,
) -> Option<Vec<Complex64>> {
    let ab = match general_product_with_cap(a, b, ctx.entry_cap) {
        Ok(ab) => ab,
        Err(e) => {
            ctx.warnings
                .push(format!("eigenvalue overlay skipped: {e}"));
            return None;
        }
    };
    let result = match (ab.order(), ab.dim()) {
        (2, n) if n <= tenbound::oracle::spectrum::MAX_MATRIX_DIM => matrix_spectrum(&ab),
        (3, 2) => small_tensor_spectrum(&ab),
        (m, n) => {
            ctx.warnings.push(format!(
                "eigenvalue overlay skipped: no exact oracle for order {m}, dimension {n}"
            ));
            return None;
        }
    };
    match result {
        Ok(s) => Some(s.eigenvalues),
        Err(e) => {
            ctx.warnings
                .push(format!("eigenvalue overlay skipped: {e}"));
            None
        }
    }
}

fn regions_generic<T: Scalar>(
    ctx: &mut Context,
    a: &Tensor<T>,
    b: &Tensor<T>,
    kind: RegionKind,
    args: &RegionArgs,
) -> CmdResult {
    if args.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let disks = gershgorin_regions(a, b)?;
    let regions: Vec<CircuitRegion> = match kind {
        RegionKind::Gershgorin => Vec::new(),
        RegionKind::Brualdi => brualdi_regions(
            a,
            b,
            &BrualdiOptions {
                circuit_cap: ctx.circuit_cap,
                entry_cap: ctx.entry_cap,
            },
        )?,
    };
    let eigenvalues = if args.overlay_eigs {
        oracle_eigenvalues(ctx, a, b)
    } else {
        None
    };
    let mut v = regions_to_value(kind, &disks, &regions);
    if let Some(eigs) = &eigenvalues {
        let brualdi = kind == RegionKind::Brualdi;
        v["eigenvalues"] = eigs
            .iter()
            .map(|z| {
                json!({
                    "value": complex_value(*z),
                    "in_gershgorin": region_contains(&disks, *z),
                    "in_brualdi": brualdi.then(|| region_contains(&regions, *z)),
                })
            })
            .collect();
        let outside = eigs
            .iter()
            .filter(|z| {
                !region_contains(&disks, **z) || (brualdi && !region_contains(&regions, **z))
            })
            .count();
        if outside > 0 {
            ctx.warnings.push(format!(
                "{outside} eigenvalues fall outside the inclusion set"
            ));
        }
    }
    if kind == RegionKind::Brualdi {
        let report = check_containment_b_in_g(&disks, &regions, args.grid, args.grid);
        v["containment"] = json!({
            "holds": report.holds,
            "grid": args.grid,
            "samples": report.samples,
            "brualdi_hits": report.brualdi_hits,
            "violations": report.violations,
            "worst": report.worst.map(|w| json!({"z": complex_value(w.z), "excess": w.excess})),
        });
    }
    if let Some(path) = &args.svg {
        let eigs = eigenvalues.unwrap_or_default();
        let svg = render_svg(&SvgScene {
            disks: &disks,
            circuit_regions: (kind == RegionKind::Brualdi).then_some(regions.as_slice()),
            eigenvalues: &eigs,
            raster: args.grid,
        });
        write_file(path, &svg)?;
        v["svg"] = json!(path.display().to_string());
    }
    Ok(v)
}

pub fn regions(ctx: &mut Context, cmd: &RegionsCommand) -> CmdResult {
    let (kind, args) = match cmd {
        RegionsCommand::Gershgorin(args) => (RegionKind::Gershgorin, args),
        RegionsCommand::Brualdi(args) => (RegionKind::Brualdi, args),
    };
    let a = ctx.load(&args.a)?;
    let b = ctx.load(&args.b)?;
    match pair(&a, &b) {
        Pair::Real(x, y) => regions_generic(ctx, &x, &y, kind, args),
        Pair::Complex(x, y) => regions_generic(ctx, &x, &y, kind, args),
    }
}

pub fn rho(ctx: &mut Context, args: &RhoArgs) -> CmdResult {
    let a = real_operand(&ctx.load(&args.a)?, "A")?;
    let opts = PowerOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        record_history: false,
    };
    let est = power_rho(&a, &opts)?;
    if !est.converged {
        ctx.warnings.push(format!(
            "power iteration did not converge in {} iterations; the interval still encloses rho",
            est.iterations
        ));
        ctx.exit_code = EXIT_NOT_CONVERGED;
    }
    Ok(json!({
        "rho": est.rho,
        "vector": est.vector,
        "residual": est.residual,
        "cw_interval": { "lower": est.cw_interval.lower, "upper": est.cw_interval.upper },
        "iterations": est.iterations,
        "converged": est.converged,
    }))
}

pub fn cw_cert(ctx: &mut Context, args: &CwCertArgs) -> CmdResult {
    let a = real_operand(&ctx.load(&args.a)?, "A")?;
    let cert = cw_certificate(&a, args.k, args.tol)?;
    Ok(json!({
        "k": args.k,
        "gap": cert.gap,
        "lower": cert.bounds.lower,
        "upper": cert.bounds.upper,
        "rho": cert.estimate.rho,
        "vector": cert.estimate.vector,
        "b": tensor_to_value(&cert.b),
    }))
}
