//! mirrorkit: fan checking, spine and skeleton computation, graded-hom
//! verification, and amoeba measurement from JSON inputs.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical check failed (the report
//! carries the witness), 2 input or configuration error.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use mirrorkit_core::amoeba::{
    boundary_to_json, complement_components, patchwork, render_amoeba_svg, sample_amoeba,
    sample_to_json, skeleton_over_boundary, spine_distance, Window,
};
use mirrorkit_core::bondal::{
    all_pairs_hom, boundary_diagram, compatibility_square_commutes, diagram_to_json, hom_graded,
    hom_to_json, Side,
};
use mirrorkit_core::fan::{
    fan_from_json, fan_to_json, is_quasiprojective, knutson_construct, pl_from_json, pl_to_json,
    validate, PLFunction, StackyFan,
};
use mirrorkit_core::polyhedra::LatticePolytope;
use mirrorkit_core::report::{canonical_string, envelope};
use mirrorkit_core::skeleton::{
    build_skeleton, negation_involution_holds, render_skeleton_2d, sector_cover, skeleton_to_json,
};
use mirrorkit_core::spine::{
    bounded_component, dual_complex, dual_complex_to_json, poset_antiequivalence,
    render_spine_svg,
};
use mirrorkit_core::{arith, Int};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mirrorkit", version, about = "Stacky fans, tropical spines, FLTZ skeleta, graded homs, and amoebas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report to this path (stdout is used otherwise)
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write an SVG rendering to this path (drawing commands only)
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Suppress the stdout report
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a stacky fan and certify quasiprojectivity
    FanCheck { fan: PathBuf },
    /// Star-triangulate a polytope containing the origin into a certified fan
    FanFromPolytope { polytope: PathBuf },
    /// Dual complex, bounded chamber, and the face-poset anti-equivalence
    Spine {
        fan: PathBuf,
        /// PL lift to use instead of the computed certificate
        #[arg(long)]
        pl: Option<PathBuf>,
    },
    /// Skeleton strata, closure order, and the sector-cover laws
    Skeleton { fan: PathBuf },
    /// Graded hom dimensions for every ordered cone pair
    BondalHoms {
        fan: PathBuf,
        #[arg(long = "box", default_value_t = 4)]
        box_bound: i64,
        #[arg(long, default_value = "A", value_parser = ["A", "B"])]
        side: String,
    },
    /// A-path vs B-path agreement, vanishing pattern, compatibility squares
    BondalVerify {
        fan: PathBuf,
        #[arg(long = "box", default_value_t = 4)]
        box_bound: i64,
    },
    /// Boundary-descent diagram: multiplicities and end degrees both ways
    BoundaryVerify {
        fan: PathBuf,
        #[arg(long = "box", default_value_t = 4)]
        box_bound: i64,
    },
    /// Patchwork, sample the amoeba, and measure it against the spine
    Amoeba {
        fan: PathBuf,
        /// PL lift to use instead of the computed certificate
        #[arg(long)]
        pl: Option<PathBuf>,
        #[arg(long, default_value_t = 16.0)]
        t: f64,
        /// Half-width of the square sampling window
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        #[arg(long, default_value_t = 96)]
        resolution: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also check each chamber face against the measured boundary
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { report, pass }) => {
            let text = canonical_string(&report);
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(resolve_out(path), &text) {
                    eprintln!("error: cannot write report: {e}");
                    return ExitCode::from(2);
                }
            }
            if !cli.quiet && cli.json.is_none() {
                print!("{text}");
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

struct Outcome {
    report: Value,
    pass: bool,
}

/// Relative output paths land under MIRRORKIT_OUT_DIR when it is set.
fn resolve_out(p: &Path) -> PathBuf {
    match std::env::var_os("MIRRORKIT_OUT_DIR") {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn load_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn load_fan(path: &Path) -> Result<StackyFan> {
    fan_from_json(&load_json(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_pl(path: &Path) -> Result<PLFunction> {
    pl_from_json(&load_json(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn write_svg(cli: &Cli, svg: Option<String>) -> Result<()> {
    if let Some(path) = &cli.svg {
        match svg {
            Some(content) => std::fs::write(resolve_out(path), content)
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => eprintln!("note: this command has no drawing for the given input"),
        }
    }
    Ok(())
}

/// Lift from --pl when given, otherwise the quasiprojectivity certificate.
fn resolve_lift(fan: &StackyFan, pl: &Option<PathBuf>) -> Result<Result<PLFunction, Value>> {
    if let Some(path) = pl {
        return Ok(Ok(load_pl(path)?));
    }
    match is_quasiprojective(fan) {
        Ok(res) if res.quasiprojective => Ok(Ok(res.certificate.expect("certified"))),
        Ok(res) => Ok(Err(json!({
            "error": "fan is not quasiprojective",
            "infeasible_walls": res.infeasible_walls.map(|ws| ws.iter().map(|w| json!({
                "shared": w.shared, "left": w.left, "right": w.right,
            })).collect::<Vec<_>>()),
        }))),
        Err(e) => Ok(Err(json!({ "error": e.to_string() }))),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::FanCheck { fan } => fan_check(cli, fan),
        Command::FanFromPolytope { polytope } => fan_from_polytope(cli, polytope),
        Command::Spine { fan, pl } => spine_cmd(cli, fan, pl),
        Command::Skeleton { fan } => skeleton_cmd(cli, fan),
        Command::BondalHoms { fan, box_bound, side } => bondal_homs(cli, fan, *box_bound, side),
        Command::BondalVerify { fan, box_bound } => bondal_verify(cli, fan, *box_bound),
        Command::BoundaryVerify { fan, box_bound } => boundary_verify(cli, fan, *box_bound),
        Command::Amoeba { fan, pl, t, window, resolution, seed, tolerance } => {
            amoeba_cmd(cli, fan, pl, *t, *window, *resolution, *seed, *tolerance)
        }
    }
}

fn fan_check(cli: &Cli, path: &Path) -> Result<Outcome> {
    let fan = load_fan(path)?;
    let validation = validate(&fan);
    let mut body = json!({
        "rank": fan.rank,
        "rays": fan.rays.len(),
        "maximal_cones": fan.maximal_cones.len(),
        "violations": validation.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    write_svg(cli, None)?;
    if !validation.is_valid() {
        return Ok(Outcome { report: envelope("fan-check", false, body), pass: false });
    }
    body["cones"] = json!(fan.all_cones().len());
    let (pass, extra) = match is_quasiprojective(&fan) {
        Ok(res) => {
            let cert = res.certificate.as_ref().map(pl_to_json);
            (
                res.quasiprojective,
                json!({
                    "quasiprojective": res.quasiprojective,
                    "certificate": cert,
                }),
            )
        }
        Err(e) => (false, json!({ "quasiprojective": false, "error": e.to_string() })),
    };
    merge(&mut body, extra);
    Ok(Outcome { report: envelope("fan-check", pass, body), pass })
}

fn fan_from_polytope(cli: &Cli, path: &Path) -> Result<Outcome> {
    let v = load_json(path)?;
    let obj = v.as_object().ok_or_else(|| anyhow!("polytope JSON must be an object"))?;
    let rank = obj
        .get("rank")
        .and_then(|r| r.as_u64())
        .ok_or_else(|| anyhow!("missing integer field \"rank\""))? as usize;
    if rank > 2 {
        return Err(anyhow!("fan-from-polytope supports rank <= 2"));
    }
    let verts = obj
        .get("vertices")
        .and_then(|x| x.as_array())
        .ok_or_else(|| anyhow!("missing array field \"vertices\""))?;
    let mut points = Vec::new();
    for pv in verts {
        let arr = pv.as_array().ok_or_else(|| anyhow!("each vertex must be an array"))?;
        if arr.len() != rank {
            return Err(anyhow!("vertex length does not match rank"));
        }
        let p: Vec<Int> = arr
            .iter()
            .map(|c| c.as_i64().map(Int::from).ok_or_else(|| anyhow!("vertex coordinates must be integers")))
            .collect::<Result<_>>()?;
        points.push(p);
    }
    let delta = LatticePolytope::from_points(&points, rank);
    write_svg(cli, None)?;
    match knutson_construct(&delta, &[]) {
        Ok((fan, lift)) => {
            let valid = validate(&fan).is_valid();
            let body = json!({
                "fan": fan_to_json(&fan),
                "lift": pl_to_json(&lift),
                "valid": valid,
            });
            Ok(Outcome { report: envelope("fan-from-polytope", valid, body), pass: valid })
        }
        Err(e) => {
            let body = json!({ "error": e.to_string() });
            Ok(Outcome { report: envelope("fan-from-polytope", false, body), pass: false })
        }
    }
}

fn spine_cmd(cli: &Cli, path: &Path, pl: &Option<PathBuf>) -> Result<Outcome> {
    let fan = load_fan(path)?;
    if let Some(out) = reject_invalid("spine", &fan)? {
        return Ok(out);
    }
    let lift = match resolve_lift(&fan, pl)? {
        Ok(l) => l,
        Err(witness) => {
            return Ok(Outcome { report: envelope("spine", false, witness), pass: false })
        }
    };
    let dc = match dual_complex(&fan, &lift) {
        Ok(dc) => dc,
        Err(e) => {
            let body = json!({ "error": e.to_string() });
            return Ok(Outcome { report: envelope("spine", false, body), pass: false });
        }
    };
    let region = bounded_component(&dc);
    let mut body = dual_complex_to_json(&dc);
    let mut pass = true;
    let region_json = json!({
        "bounded": region.bounded,
        "vertices": region.vertices.iter().map(|p| {
            p.iter().map(arith::format_rat).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    });
    merge(&mut body, json!({ "region": region_json }));
    if region.bounded {
        let report = poset_antiequivalence(&fan, &dc, &region);
        let ok = report.is_bijective()
            && report.order_reversing
            && report.matches.iter().all(|m| m.argmax_matches);
        pass = ok;
        merge(
            &mut body,
            json!({
                "poset_antiequivalence": {
                    "matches": report.matches.len(),
                    "unmatched_cones": report.unmatched_cones,
                    "unmatched_faces": report.unmatched_faces,
                    "order_reversing": report.order_reversing,
                    "bijective": report.is_bijective(),
                }
            }),
        );
    }
    let svg = (dc.rank == 2).then(|| render_spine_svg(&dc, &region));
    write_svg(cli, svg)?;
    Ok(Outcome { report: envelope("spine", pass, body), pass })
}

fn skeleton_cmd(cli: &Cli, path: &Path) -> Result<Outcome> {
    let fan = load_fan(path)?;
    if let Some(out) = reject_invalid("skeleton", &fan)? {
        return Ok(out);
    }
    let graph = build_skeleton(&fan);
    let cover = sector_cover(&fan);
    let negation = negation_involution_holds(&fan);
    let pass = cover.all_isomorphic() && cover.pairwise_law_holds && negation;
    let mut body = skeleton_to_json(&graph);
    merge(
        &mut body,
        json!({
            "sector_cover": {
                "restrictions": cover.restrictions.iter().map(|r| json!({
                    "sigma": r.sigma,
                    "strata": r.strata_count,
                    "quotient_strata": r.quotient_strata_count,
                    "gamma_order": r.gamma_order.to_string(),
                    "poset_isomorphic": r.poset_isomorphic,
                })).collect::<Vec<_>>(),
                "pairwise_law_holds": cover.pairwise_law_holds,
            },
            "negation_involution": negation,
        }),
    );
    let svg = render_skeleton_2d(&graph).ok();
    write_svg(cli, svg)?;
    Ok(Outcome { report: envelope("skeleton", pass, body), pass })
}

fn bondal_homs(cli: &Cli, path: &Path, box_bound: i64, side: &str) -> Result<Outcome> {
    if box_bound < 0 {
        return Err(anyhow!("--box must be nonnegative"));
    }
    let fan = load_fan(path)?;
    if let Some(out) = reject_invalid("bondal-homs", &fan)? {
        return Ok(out);
    }
    let side = if side == "A" { Side::A } else { Side::B };
    let homs = all_pairs_hom(&fan, side, box_bound);
    let body = json!({
        "box": box_bound,
        "pairs": homs.iter().map(|(_, _, h)| hom_to_json(h)).collect::<Vec<_>>(),
    });
    write_svg(cli, None)?;
    Ok(Outcome { report: envelope("bondal-homs", true, body), pass: true })
}

fn bondal_verify(cli: &Cli, path: &Path, box_bound: i64) -> Result<Outcome> {
    if box_bound < 0 {
        return Err(anyhow!("--box must be nonnegative"));
    }
    let fan = load_fan(path)?;
    if let Some(out) = reject_invalid("bondal-verify", &fan)? {
        return Ok(out);
    }
    let cones = fan.all_cones().to_vec();
    let mut pairs = Vec::new();
    let mut mismatches = Vec::new();
    let mut squares = 0usize;
    for s in &cones {
        for t in &cones {
            let a = hom_graded(&fan, Side::A, s, t, box_bound);
            let b = hom_graded(&fan, Side::B, s, t, box_bound);
            let contains = t.iter().all(|r| s.contains(r));
            let agree = a.dims == b.dims;
            let vanishing_ok = a.is_zero() == !contains && b.is_zero() == !contains;
            if !(agree && vanishing_ok) {
                mismatches.push(json!({ "source": s, "target": t, "agree": agree, "vanishing": vanishing_ok }));
            }
            pairs.push(json!({
                "source": s,
                "target": t,
                "dim": a.dims.len(),
                "agree": agree,
            }));
            if contains {
                squares += 1;
                if !compatibility_square_commutes(&fan, t, s, box_bound) {
                    mismatches.push(json!({ "chain": [t, s], "square_commutes": false }));
                }
            }
        }
    }
    let pass = mismatches.is_empty();
    let body = json!({
        "box": box_bound,
        "pairs": pairs,
        "squares_checked": squares,
        "mismatches": mismatches,
    });
    write_svg(cli, None)?;
    Ok(Outcome { report: envelope("bondal-verify", pass, body), pass })
}

fn boundary_verify(cli: &Cli, path: &Path, box_bound: i64) -> Result<Outcome> {
    if box_bound < 0 {
        return Err(anyhow!("--box must be nonnegative"));
    }
    let fan = load_fan(path)?;
    if let Some(out) = reject_invalid("boundary-verify", &fan)? {
        return Ok(out);
    }
    let report = boundary_diagram(&fan, box_bound);
    let pass = report.pass;
    let body = diagram_to_json(&report);
    write_svg(cli, None)?;
    Ok(Outcome { report: envelope("boundary-verify", pass, body), pass })
}

#[allow(clippy::too_many_arguments)]
fn amoeba_cmd(
    cli: &Cli,
    path: &Path,
    pl: &Option<PathBuf>,
    t: f64,
    window: f64,
    resolution: usize,
    seed: u64,
    tolerance: Option<f64>,
) -> Result<Outcome> {
    if !(t > 1.0) {
        return Err(anyhow!("--t must exceed 1"));
    }
    if window <= 0.0 {
        return Err(anyhow!("--window must be positive"));
    }
    if resolution < 16 {
        return Err(anyhow!("--resolution must be at least 16"));
    }
    if let Some(tol) = tolerance {
        if !(tol > 0.0) {
            return Err(anyhow!("--tolerance must be positive"));
        }
    }
    let fan = load_fan(path)?;
    if fan.rank != 2 {
        return Err(anyhow!("amoeba sampling is rank 2 only"));
    }
    if let Some(out) = reject_invalid("amoeba", &fan)? {
        return Ok(out);
    }
    let lift = match resolve_lift(&fan, pl)? {
        Ok(l) => l,
        Err(witness) => {
            return Ok(Outcome { report: envelope("amoeba", false, witness), pass: false })
        }
    };
    let dc = match dual_complex(&fan, &lift) {
        Ok(dc) => dc,
        Err(e) => {
            let body = json!({ "error": e.to_string() });
            return Ok(Outcome { report: envelope("amoeba", false, body), pass: false });
        }
    };
    let region = bounded_component(&dc);
    let w = patchwork(&fan, &lift, t);
    let win = Window::square(window);
    let sample = sample_amoeba(&w, win, resolution, seed, t);
    let mut body = sample_to_json(&sample);
    if sample.points.is_empty() {
        merge(&mut body, json!({ "error": "no sample points in the window" }));
        return Ok(Outcome { report: envelope("amoeba", false, body), pass: false });
    }
    let mut pass = true;
    let dist = spine_distance(&sample, &dc).expect("sample is nonempty");
    let comps = complement_components(&sample, &win, resolution, None).expect("sample is nonempty");
    merge(
        &mut body,
        json!({
            "spine_distance": { "one_sided": dist.one_sided, "spine_coverage": dist.spine_coverage },
            "complement": { "bounded": comps.bounded, "total_in_window": comps.total_in_window },
        }),
    );
    if let Some(tol) = tolerance {
        match skeleton_over_boundary(&sample, &fan, &dc, resolution, tol) {
            Ok(rep) => {
                pass = rep.all_matched;
                merge(&mut body, json!({ "boundary": boundary_to_json(&rep) }));
            }
            Err(e) => {
                pass = false;
                merge(&mut body, json!({ "boundary": { "error": e.to_string() } }));
            }
        }
    }
    let svg_region = region.bounded.then_some(&region);
    write_svg(cli, Some(render_amoeba_svg(&sample, Some(&dc), svg_region)))?;
    Ok(Outcome { report: envelope("amoeba", pass, body), pass })
}

/// Structural violations short-circuit every command with the same shape.
fn reject_invalid(command: &str, fan: &StackyFan) -> Result<Option<Outcome>> {
    let validation = validate(fan);
    if validation.is_valid() {
        return Ok(None);
    }
    let body = json!({
        "violations": validation.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    Ok(Some(Outcome { report: envelope(command, false, body), pass: false }))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        for (k, v) in b {
            a.insert(k, v);
        }
    }
}
