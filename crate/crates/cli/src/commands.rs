use std::fs;

use anyhow::{anyhow, Context};
use serde_json::json;

use entrack_core::boundaries::{
    default_grid, flexible_e, flexible_gap, mpd_density, mpd_edges, page_entropy,
    page_entropy_exact, renyi_flexible, sample_curve, tight_containment,
};
use entrack_core::export::{
    curve_json, curve_table, default_boundaries, parse_trajectory_csv, trajectory_csv,
    trajectory_json, Table,
};
use entrack_core::rmt::{
    conditional_bins, dominant_sweep, mpd_ks, page_mc_values, sample_random_rhos, sample_wishart,
    EnsembleConfig, McEstimate, MpdCdf,
};
use entrack_core::scenarios::exact_cover::EcInstance;
use entrack_core::scenarios::{
    adiabatic_trajectory, grover_custom_oracle_trajectory, grover_ec_trajectory, prime_trajectory,
    shor_trajectory, EcOracle, GroverRun, ShorConfig, ShorOutcome, TableOracle, Trajectory,
};
use entrack_core::tolerances;
use entrack_core::{CurveName, CurveParams, Stream};

use crate::manifest::OutputDir;
use crate::{
    AdiabaticArgs, BoundaryArgs, Cli, Command, ConditionalArgs, DominantArgs, Failure,
    GenInstanceArgs, GroverArgs, MpdArgs, PageArgs, PrimesArgs, RmtCommand, ShorArgs, ValidateArgs,
};

type Res = std::result::Result<(), Failure>;

const BOUNDARY_POINTS: usize = 200;

pub fn run(cli: &Cli) -> Res {
    match &cli.command {
        Command::Adiabatic(a) => adiabatic(cli, a),
        Command::Grover(a) => grover(cli, a),
        Command::Shor(a) => shor(cli, a),
        Command::Primes(a) => primes(cli, a),
        Command::Rmt(RmtCommand::Mpd(a)) => rmt_mpd(cli, a),
        Command::Rmt(RmtCommand::Dominant(a)) => rmt_dominant(cli, a),
        Command::Rmt(RmtCommand::Page(a)) => rmt_page(cli, a),
        Command::Rmt(RmtCommand::Conditional(a)) => rmt_conditional(cli, a),
        Command::Boundary(a) => boundary(cli, a),
        Command::GenInstance(a) => gen_instance(a),
        Command::Validate(a) => validate(a),
    }
}

fn read_instance(path: &std::path::Path) -> std::result::Result<EcInstance, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))
        .map_err(Failure::Runtime)?;
    EcInstance::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_trajectory(cli: &Cli, out: &mut OutputDir, traj: &Trajectory) -> anyhow::Result<()> {
    out.set_config(traj.config.clone(), traj.seeds.clone());
    out.write("trajectory.csv", &trajectory_csv(traj))?;
    if cli.common.json {
        let curves = default_boundaries(traj, BOUNDARY_POINTS)?;
        out.write_json("trajectory.json", &trajectory_json(traj, &curves))?;
    }
    out.result("rows", json!(traj.len()));
    out.result("containment_violations", json!(traj.containment_violations()));
    Ok(())
}

fn adiabatic(cli: &Cli, a: &AdiabaticArgs) -> Res {
    let inst = read_instance(&a.instance)?;
    let traj = adiabatic_trajectory(&inst, a.s_step, a.partitions, a.seed)?;
    let mut out = OutputDir::create(&cli.common.out)?;
    write_trajectory(cli, &mut out, &traj)?;
    let exceed = traj.flexible_exceedances(tolerances::CONTAINMENT.value);
    out.result("flexible_exceedances", json!(exceed.len()));
    out.finish()?;
    Ok(())
}

fn grover(cli: &Cli, a: &GroverArgs) -> Res {
    let run: GroverRun = match (&a.instance, a.n, &a.marked) {
        (Some(path), _, _) => {
            let inst = read_instance(path)?;
            if a.iterations.is_some() {
                grover_custom_oracle_trajectory(&EcOracle::new(inst), a.seed, a.iterations)?
            } else {
                grover_ec_trajectory(&inst, a.seed)?
            }
        }
        (None, Some(n), Some(marked)) => {
            let oracle = TableOracle::new(n, marked)?;
            grover_custom_oracle_trajectory(&oracle, a.seed, a.iterations)?
        }
        _ => {
            return Err(Failure::Usage(
                "grover needs --instance or both --n and --marked".into(),
            ))
        }
    };
    let mut out = OutputDir::create(&cli.common.out)?;
    write_trajectory(cli, &mut out, &run.trajectory)?;
    out.result("iterations", json!(run.iterations));
    out.result("marked", json!(run.marked));
    out.result("success_probability", json!(run.success_probability));
    out.result("measured", json!(run.measured));
    out.finish()?;
    Ok(())
}

fn shor(cli: &Cli, a: &ShorArgs) -> Res {
    let cfg = ShorConfig {
        modulus: a.modulus,
        a: a.a,
        seed: a.seed,
    };
    let run = shor_trajectory(&cfg)?;
    let mut out = OutputDir::create(&cli.common.out)?;
    write_trajectory(cli, &mut out, &run.trajectory)?;
    let factors = match &run.outcome {
        ShorOutcome::Factors { p, q } | ShorOutcome::TrivialFactor { p, q } => json!([p, q]),
        ShorOutcome::Failure { .. } => json!(null),
    };
    out.result("factors", factors);
    out.result("outcome", serde_json::to_value(&run.outcome).map_err(anyhow::Error::from)?);
    out.result("measured_phase", json!(run.measured_phase));
    out.result("order", json!(run.order));
    out.finish()?;
    Ok(())
}

fn primes(cli: &Cli, a: &PrimesArgs) -> Res {
    let traj = prime_trajectory(a.n, a.qft)?;
    let mut out = OutputDir::create(&cli.common.out)?;
    write_trajectory(cli, &mut out, &traj)?;
    out.result("pi_k", traj.config["pi_k"].clone());
    out.finish()?;
    Ok(())
}

fn write_table(cli: &Cli, out: &mut OutputDir, stem: &str, t: &Table) -> anyhow::Result<()> {
    out.write(&format!("{stem}.csv"), &t.to_csv())?;
    if cli.common.json {
        out.write_json(&format!("{stem}.json"), &t.to_json())?;
    }
    Ok(())
}

fn rmt_mpd(cli: &Cli, a: &MpdArgs) -> Res {
    if !(a.ratio > 0.0 && a.ratio <= 1.0) {
        return Err(Failure::Usage(format!("--ratio {} must lie in (0, 1]", a.ratio)));
    }
    if a.bins == 0 {
        return Err(Failure::Usage("--bins must be >= 1".into()));
    }
    let beta = (a.alpha as f64 / a.ratio).round() as usize;
    let lambda = a.alpha as f64 / beta as f64;
    let cfg = EnsembleConfig {
        alpha: a.alpha,
        beta,
        gamma: 0.0,
        sigma: a.sigma,
        samples: a.samples,
        seed: a.seed,
    };
    let spectra = sample_wishart(&cfg)?;
    let ks = mpd_ks(&spectra, a.sigma, lambda)?;
    let (lo, hi) = mpd_edges(a.sigma, lambda)?;
    let cdf = MpdCdf::new(a.sigma, lambda)?;
    let pooled: Vec<f64> = spectra.iter().flat_map(|s| s.values().to_vec()).collect();
    let width = (hi - lo) / a.bins as f64;
    let mut counts = vec![0usize; a.bins];
    let mut outside = 0usize;
    for &v in &pooled {
        if v < lo || v > hi {
            outside += 1;
        } else {
            counts[(((v - lo) / width) as usize).min(a.bins - 1)] += 1;
        }
    }
    let total = pooled.len() as f64;
    let mut t = Table::new(["bin_lo", "bin_hi", "center", "density_empirical", "density_mpd", "density_mpd_bin"]);
    for (b, &c) in counts.iter().enumerate() {
        let (bl, bh) = (lo + width * b as f64, lo + width * (b + 1) as f64);
        let center = 0.5 * (bl + bh);
        t.push(vec![
            bl,
            bh,
            center,
            c as f64 / (total * width),
            mpd_density(center, a.sigma, lambda)?,
            (cdf.cdf(bh) - cdf.cdf(bl)) / width,
        ])?;
    }
    let mut out = OutputDir::create(&cli.common.out)?;
    out.set_config(
        json!({"alpha": a.alpha, "beta": beta, "lambda": lambda, "sigma": a.sigma,
               "samples": a.samples, "bins": a.bins, "seed": a.seed}),
        vec![a.seed],
    );
    write_table(cli, &mut out, "mpd", &t)?;
    out.result("ks", json!(ks));
    out.result("edges", json!([lo, hi]));
    out.result("outside_support", json!(outside));
    out.finish()?;
    Ok(())
}

fn rmt_dominant(cli: &Cli, a: &DominantArgs) -> Res {
    if !(a.gamma_step > 0.0 && a.gamma_max >= 0.0) {
        return Err(Failure::Usage("need --gamma-step > 0 and --gamma-max >= 0".into()));
    }
    let steps = (a.gamma_max / a.gamma_step + 1e-9).floor() as usize;
    let gammas: Vec<f64> = (0..=steps).map(|k| k as f64 * a.gamma_step).collect();
    let sweep = dominant_sweep(a.alpha, a.beta, &gammas, a.samples, a.seed)?;
    let mut t = Table::new(["gamma", "mean_lambda0", "stderr", "predicted", "lambda_plus"]);
    for p in &sweep {
        t.push(vec![p.gamma, p.mean_lambda0, p.stderr, p.predicted, p.lambda_plus])?;
    }
    let mut out = OutputDir::create(&cli.common.out)?;
    out.set_config(
        json!({"alpha": a.alpha, "beta": a.beta, "gammas": gammas, "samples": a.samples, "seed": a.seed}),
        vec![a.seed],
    );
    write_table(cli, &mut out, "dominant", &t)?;
    out.finish()?;
    Ok(())
}

fn rmt_page(cli: &Cli, a: &PageArgs) -> Res {
    let root = Stream::new(a.seed).named("page");
    let mut samples = Table::new(["beta", "sample", "entropy"]);
    let mut summary = Table::new(["beta", "mean", "stderr", "page_asymptotic", "page_exact"]);
    for (i, &beta) in a.betas.iter().enumerate() {
        let vals = page_mc_values(a.alpha, beta, a.samples, root.split(i as u64))?;
        for (k, &e) in vals.iter().enumerate() {
            samples.push(vec![beta as f64, k as f64, e])?;
        }
        let est = McEstimate::from_values(&vals);
        summary.push(vec![
            beta as f64,
            est.mean,
            est.stderr,
            page_entropy(a.alpha as f64, beta as f64),
            page_entropy_exact(a.alpha, beta),
        ])?;
    }
    let mut out = OutputDir::create(&cli.common.out)?;
    out.set_config(
        json!({"alpha": a.alpha, "betas": a.betas, "samples": a.samples, "seed": a.seed}),
        vec![a.seed],
    );
    write_table(cli, &mut out, "page", &samples)?;
    write_table(cli, &mut out, "page_summary", &summary)?;
    out.finish()?;
    Ok(())
}

fn rmt_conditional(cli: &Cli, a: &ConditionalArgs) -> Res {
    let spectra = sample_random_rhos(a.alpha, a.beta, a.samples, Stream::new(a.seed).named("conditional"))?;
    let bins = conditional_bins(&spectra, a.bins)?;
    let (al, be) = (a.alpha as f64, a.beta as f64);
    let mut t = Table::new([
        "center", "lo", "hi", "count", "mean_lambda0", "mean_entropy", "mean_renyi_2", "mean_gap",
        "flexible_E", "renyi_flexible_2", "flexible_gap",
    ]);
    for b in &bins {
        let x = b.mean_lambda0;
        let renyi2 = if a.alpha == a.beta {
            renyi_flexible(x, al, 2).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        t.push(vec![
            b.center,
            b.lo,
            b.hi,
            b.count as f64,
            x,
            b.mean_entropy,
            b.mean_renyi2,
            b.mean_gap,
            flexible_e(x, al, be).unwrap_or(f64::NAN),
            renyi2,
            flexible_gap(x, al, be).unwrap_or(f64::NAN),
        ])?;
    }
    let mut out = OutputDir::create(&cli.common.out)?;
    out.set_config(
        json!({"alpha": a.alpha, "beta": a.beta, "samples": a.samples, "bins": a.bins, "seed": a.seed}),
        vec![a.seed],
    );
    write_table(cli, &mut out, "conditional", &t)?;
    out.finish()?;
    Ok(())
}

fn boundary(cli: &Cli, a: &BoundaryArgs) -> Res {
    let name: CurveName = a
        .curve
        .parse()
        .map_err(|e: entrack_core::Error| Failure::Usage(e.to_string()))?;
    let beta = a.beta.unwrap_or(a.alpha);
    let params = CurveParams {
        alpha: a.alpha,
        beta,
        sigma: a.sigma,
        lambda: a.lambda.unwrap_or(a.alpha / beta),
    };
    let curve = sample_curve(name, &params, &default_grid(name, &params, a.grid))?;
    let mut out = OutputDir::create(&cli.common.out)?;
    out.set_config(serde_json::to_value(params).map_err(anyhow::Error::from)?, vec![]);
    out.write("boundary.csv", &curve_table(&curve).to_csv())?;
    let mut meta = curve_json(&curve);
    if name == CurveName::FlexibleE {
        let endpoint = a.alpha.ln() - a.alpha / (2.0 * beta);
        meta["page_endpoint"] = json!([0.0, endpoint]);
        out.result("page_endpoint", json!(endpoint));
    }
    if cli.common.json {
        out.write_json("boundary.json", &meta)?;
    }
    out.result("clipped", json!(curve.clipped.len()));
    out.finish()?;
    Ok(())
}

fn gen_instance(a: &GenInstanceArgs) -> Res {
    let inst = EcInstance::generate_unique(a.n, a.clauses, Stream::new(a.seed).named("instance"))?;
    let text = inst.to_text();
    match &a.file {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn validate(a: &ValidateArgs) -> Res {
    let text = fs::read_to_string(&a.file)
        .with_context(|| format!("reading {}", a.file.display()))?;
    let rows = parse_trajectory_csv(&text)?;
    let bad: Vec<_> = rows
        .iter()
        .filter(|r| !tight_containment(r.lambda0, r.entropy, r.alpha, a.tol))
        .collect();
    println!("rows {} violations {}", rows.len(), bad.len());
    for r in &bad {
        println!("violation {} {} lambda0={} entropy={}", r.sequence, r.label, r.lambda0, r.entropy);
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(anyhow!("{} rows outside the tight envelope", bad.len())))
    }
}
