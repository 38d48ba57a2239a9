//! The thin subcommands: exact, sample, mix, congestion and bench.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{BenchArgs, CongestionArgs, ExactArgs, Family, Format, MixArgs, Output, SampleArgs};
use crate::analysis::{build_matrix, mixing_reports};
use crate::chains::{autocorrelation, gj_lift, integrated_time, Chain, ChainConfig, ChainKind, Histogram};
use crate::error::{Error, Result};
use crate::graph::SubsetSpace;
use crate::measures::{even_partition, ising_partition, rc_measure, stratum_partition, worm_partition};
use crate::paths::{lifted_traffic, rc_congestion, worm_report, DeltaKernel, WormFamily};
use crate::rational::{fraction_string, int, parse_rational, pow, Rational};
use crate::report::{exact, float, lines, mode_name, params as params_json, record};

pub fn cmd_exact(args: &ExactArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    let (g, params) = (&loaded.graph, &loaded.params);
    let space = SubsetSpace::new(g, &loaded.guards)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let rc = rc_measure(&space, params.p_rc(), params.q());
    if args.spec.format == Format::Csv {
        let mut out = String::from("subset_bitmask,weight,probability\n");
        for (mask, w) in rc.iter() {
            writeln!(out, "{mask},{},{}", fraction_string(w), fraction_string(&rc.prob(mask))).unwrap();
        }
        return Ok(Output { text: out, pass: true });
    }

    let p = params.p_even();
    let mut body = json!({
        "params": params_json(params),
        "z_rc": exact(rc.total_weight()),
        "z_even": exact(&even_partition(&space, p)),
        "z_2": exact(&stratum_partition(&space, p, 2)),
        "z_worm": exact(&worm_partition(&space, p)),
    });
    let mut pass = true;
    if let Some(beta) = params.beta() {
        let z_ising = ising_partition(g, beta, &loaded.guards)?;
        let beta_m = pow(beta, m);
        body["z_ising"] = exact(&z_ising);
        body["rc_side"] = exact(&(&beta_m * rc.total_weight()));
        if params.q() == &int(2) {
            let even_side = pow(&int(2), n) * &beta_m * even_partition(&space, p);
            body["even_side"] = exact(&even_side);
            pass = z_ising == &beta_m * rc.total_weight() && z_ising == even_side;
            body["pass"] = json!(pass);
        }
    }
    let text = lines(&[record("exact", &loaded.name, body)]);
    Ok(Output { text, pass })
}

pub fn cmd_sample(args: &SampleArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    let g = &loaded.graph;
    if args.lift && args.chain != ChainKind::Worm {
        return Err(Error::Parameter {
            name: "lift",
            value: args.chain.name().into(),
            expected: "--lift together with --chain worm",
        });
    }
    let cfg = ChainConfig::new(args.chain, loaded.params.clone(), args.spec.seed, args.steps);
    let mut chain = Chain::new(g, cfg, g.empty_subset())?;
    let lift = |chain: &mut Chain| {
        let s = chain.state().clone();
        if args.lift {
            gj_lift(g, &s, &loaded.params, chain.rng())
        } else {
            s
        }
    };

    if let Some(samples) = args.samples {
        chain.advance(args.steps);
        let mut hist = Histogram::default();
        for _ in 0..samples {
            chain.advance(args.thinning.max(1));
            hist.record(lift(&mut chain).mask());
        }
        let text = match args.spec.format {
            Format::Csv => hist.to_csv(),
            Format::Json => {
                let rows: Vec<Value> = hist
                    .iter()
                    .map(|(mask, count)| json!({ "subset_bitmask": mask, "count": count, "frequency": float(hist.frequency(mask)) }))
                    .collect();
                lines(&[record(
                    "histogram",
                    &loaded.name,
                    json!({
                        "chain": args.chain.name(),
                        "params": params_json(&loaded.params),
                        "seed": args.spec.seed,
                        "burn_in": args.steps,
                        "samples": samples,
                        "thinning": args.thinning.max(1),
                        "lifted": args.lift,
                        "histogram": rows,
                    }),
                )])
            }
        };
        return Ok(Output { text, pass: true });
    }

    if args.trace {
        let mut out = String::new();
        if args.spec.format == Format::Csv {
            out.push_str("t,edge,kind,accepted\n");
        }
        for _ in 0..args.steps {
            let step = chain.step();
            match args.spec.format {
                Format::Json => {
                    out.push_str(&serde_json::to_string(&step).expect("trace serializes"));
                    out.push('\n');
                }
                Format::Csv => {
                    let edge = step.edge.map(|e| e.to_string()).unwrap_or_default();
                    let kind = serde_json::to_value(step.kind).expect("kind serializes");
                    writeln!(
                        out,
                        "{},{edge},{},{}",
                        step.t,
                        kind.as_str().unwrap_or(""),
                        step.accepted
                    )
                    .unwrap();
                }
            }
        }
        return Ok(Output { text: out, pass: true });
    }

    chain.advance(args.steps);
    let state = lift(&mut chain);
    let text = match args.spec.format {
        Format::Csv => format!("subset_bitmask,size\n{},{}\n", state.mask(), state.len()),
        Format::Json => lines(&[record(
            "sample",
            &loaded.name,
            json!({
                "chain": args.chain.name(),
                "params": params_json(&loaded.params),
                "seed": args.spec.seed,
                "steps": args.steps,
                "lifted": args.lift,
                "subset_bitmask": state.mask(),
                "edges": state.iter().collect::<Vec<_>>(),
            }),
        )]),
    };
    Ok(Output { text, pass: true })
}

fn parse_eps(eps: &[String]) -> Result<Vec<Rational>> {
    eps.iter()
        .map(|e| {
            let r = parse_rational(e)?;
            if r <= int(0) || r >= int(1) {
                return Err(Error::Parameter {
                    name: "eps",
                    value: e.clone(),
                    expected: "0 < eps < 1",
                });
            }
            Ok(r)
        })
        .collect()
}

pub fn cmd_mix(args: &MixArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    let (g, params, guards) = (&loaded.graph, &loaded.params, &loaded.guards);
    params.require_q2()?;
    params.require_open_rc()?;
    let eps = parse_eps(&args.eps)?;
    guards.check_matrix(g)?;
    let space = SubsetSpace::new(g, guards)?;
    let mat = build_matrix(&space, params, args.chain, guards)?;
    let rho = if args.chain == ChainKind::Rc {
        let family = WormFamily::new(&space, params.p_even(), guards)?;
        let kernel = DeltaKernel::new(g.edge_count(), &params.lift_probability());
        let table = lifted_traffic(&family, &kernel);
        Some(rc_congestion(&family, params, &table)?.max_congestion)
    } else {
        None
    };
    let reports = mixing_reports(
        &mat,
        g.vertex_count(),
        g.edge_count(),
        params.p_rc(),
        &eps,
        rho.as_ref(),
    )?;
    let mut pass = true;
    let mut records = Vec::new();
    let mut csv = String::from("eps,tau_exact,tau_from_empty,bound_thm43,bound_thm21,gap,mode,pass\n");
    for r in &reports {
        // The bounds concern the single-bond chain; the other kinds only need
        // to mix before the cap.
        let ok = match args.chain {
            ChainKind::Worm => r.tau.is_some(),
            _ => r.pass(),
        };
        pass &= ok;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{ok}",
            fraction_string(&r.eps),
            r.tau.map(|t| t.to_string()).unwrap_or_default(),
            r.tau_from_empty.map(|t| t.to_string()).unwrap_or_default(),
            r.path_bound,
            opt(r.congestion_bound),
            opt(r.gap),
            mode_name(r.mode),
        )
        .unwrap();
        records.push(record(
            "mixing",
            &loaded.name,
            json!({
                "kind": args.chain.name(),
                "p": exact(params.p_rc()),
                "params": params_json(params),
                "eps": exact(&r.eps),
                "tau_exact": r.tau,
                "worst_start": r.worst_start,
                "tau_from_empty": r.tau_from_empty,
                "bound_thm43": float(r.path_bound),
                "bound_thm21": r.congestion_bound.map(float),
                "rho": rho.as_ref().map(exact),
                "gap": r.gap.map(float),
                "mode": mode_name(r.mode),
                "cap": r.cap,
                "pass": ok,
            }),
        ));
    }
    let text = match args.spec.format {
        Format::Json => lines(&records),
        Format::Csv => csv,
    };
    Ok(Output { text, pass })
}

pub fn cmd_congestion(args: &CongestionArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    let (g, params, guards) = (&loaded.graph, &loaded.params, &loaded.guards);
    params.require_q2()?;
    let space = SubsetSpace::new(g, guards)?;
    let family = WormFamily::new(&space, params.p_even(), guards)?;

    let (body, csv, pass) = match args.family {
        Family::Rc => {
            let kernel = DeltaKernel::new(g.edge_count(), &params.lift_probability());
            let table = lifted_traffic(&family, &kernel);
            let r = rc_congestion(&family, params, &table)?;
            let mut csv = String::from("from,to,traffic,probability,congestion\n");
            for row in &r.rows {
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    row.from,
                    row.to,
                    fraction_string(&row.traffic),
                    fraction_string(&row.probability),
                    fraction_string(&row.congestion)
                )
                .unwrap();
            }
            let body = json!({
                "p": exact(params.p_rc()),
                "params": params_json(params),
                "family": "rc",
                "max_congestion": exact(&r.max_congestion),
                "bound": exact(&r.bound),
                "witness_transition": [r.witness.0, r.witness.1],
                "max_length": r.length,
                "transitions": r.rows.len(),
                "unsupported": r.unsupported.len(),
                "pass": r.pass(),
            });
            (body, csv, r.pass())
        }
        Family::Worm => {
            let r = worm_report(&family);
            let mut csv = String::from("from,edge,insertion,traffic,bound\n");
            for c in family.certificates() {
                let bound = if c.insertion { &c.insertion_bound } else { &c.bound };
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    c.from,
                    c.edge,
                    c.insertion,
                    fraction_string(&c.traffic),
                    fraction_string(bound)
                )
                .unwrap();
            }
            let body = json!({
                "p": exact(params.p_even()),
                "params": params_json(params),
                "family": "worm",
                "max_congestion": exact(&r.max_ratio),
                "bound": exact(&int(1)),
                "witness_transition": r.failures.first().map(|c| [c.from, c.to()]),
                "max_length": r.max_len,
                "transitions": r.transitions,
                "legality_errors": r.legality_errors.len(),
                "pass": r.pass(),
            });
            (body, csv, r.pass())
        }
    };
    if let Some(path) = &args.transitions_csv {
        std::fs::write(path, &csv)?;
    }
    let text = match args.spec.format {
        Format::Json => lines(&[record("congestion", &loaded.name, body)]),
        Format::Csv => csv,
    };
    Ok(Output { text, pass })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    let g = &loaded.graph;
    let mut acfs = Vec::new();
    let mut records = Vec::new();
    for kind in [ChainKind::Rc, ChainKind::Sw] {
        let cfg = ChainConfig::new(kind, loaded.params.clone(), args.spec.seed, args.steps);
        let mut chain = Chain::new(g, cfg, g.empty_subset())?;
        let mut series = Vec::with_capacity(args.steps as usize);
        for _ in 0..args.steps {
            chain.step();
            series.push(chain.state().len() as f64);
        }
        let acf = autocorrelation(&series, args.max_lag);
        let tau = integrated_time(&acf);
        records.push(record(
            "bench",
            &loaded.name,
            json!({
                "chain": kind.name(),
                "params": params_json(&loaded.params),
                "seed": args.spec.seed,
                "steps": args.steps,
                "observable": "edge_count",
                "integrated_time": float(tau),
                "autocorrelation": { "mode": "float", "tolerance": crate::measures::FLOAT_TOLERANCE, "values": acf },
            }),
        ));
        acfs.push(acf);
    }
    let text = match args.spec.format {
        Format::Json => lines(&records),
        Format::Csv => {
            let mut out = String::from("lag,rc,sw\n");
            for (lag, (rc, sw)) in acfs[0].iter().zip(&acfs[1]).enumerate() {
                writeln!(out, "{lag},{rc},{sw}").unwrap();
            }
            out
        }
    };
    Ok(Output { text, pass: true })
}
