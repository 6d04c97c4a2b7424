use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};
use tdi_core::corpus::corpus;
use tdi_core::formulations::{
    build_maxcut, build_maxcut_strengthened, build_theta_dual_parts, build_theta_trace,
    build_theta_variant, homogenize_maxcut, pair_index, ThetaVariant,
};
use tdi_core::integrality::{clique_cover_to_integral_dual, integral_dual_to_clique_cover, ASSEMBLY_TOL};
use tdi_core::io::to_graph6;
use tdi_core::oracles::{
    alpha, chi, clique_cover_number, maxcut_bruteforce, maxcut_integer_dual_signed,
    maxcut_integer_dual_solve, omega, zero_extension, Multiset,
};
use tdi_core::sdp::{solve, verify_chain, Solution};
use tdi_core::tdi::{
    audit_weights, int_distance, integrality_audit, tdi_check_theta_weights, AuditVerdict,
    BodyOracle, TdiThetaReport, TdiVerdict,
};
use tdi_core::{Graph, WeightVec};

use crate::config::{Command, MaxcutArg, RunConfig, ThetaArg};
use crate::output::{g9, g9_list, int_list, CliError, Outcome};

type Res<T> = Result<T, CliError>;

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res<Outcome> {
    match cmd {
        Command::Theta { variant, show_primal } => cmd_theta(cfg, *variant, *show_primal),
        Command::Cover => cmd_cover(cfg),
        Command::Perfect => cmd_perfect(cfg),
        Command::TdiAudit {
            corpus: None,
            integrality,
            ..
        } => cmd_tdi_audit(cfg, *integrality),
        Command::TdiAudit {
            corpus: Some(max_n),
            all,
            integrality,
        } => cmd_tdi_audit_corpus(cfg, *max_n, *all, *integrality),
        Command::Maxcut { variant } => cmd_maxcut(cfg, *variant),
        Command::MaxcutDual => cmd_maxcut_dual(cfg),
        Command::Chain => cmd_chain(cfg),
        Command::Corpus { max_n, all } => cmd_corpus(cfg, *max_n, *all),
    }
}

fn ok(text: String, json: Value) -> Outcome {
    Outcome {
        text,
        json,
        csv: None,
        violation: None,
    }
}

fn header(g: &Graph) -> String {
    format!("graph: n={} m={} g6={}\n", g.n(), g.edge_count(), to_graph6(g))
}

fn status_line(sol: &Solution) -> String {
    let r = &sol.report;
    format!(
        "status: {:?} gap={} iterations={} primal_residual={} dual_residual={}\n",
        r.status,
        g9(r.gap),
        r.iterations,
        g9(r.primal_residual),
        g9(r.dual_residual)
    )
}

fn matrix_text(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&x| format!("{:>12}", g9(x))).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    out
}

fn multiset_text(m: &Multiset) -> String {
    if m.is_empty() {
        return "  (empty)\n".into();
    }
    let mut out = String::new();
    for (set, mult) in m.iter() {
        let vs: Vec<String> = set.vertices().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  {{{}}} x{mult}", vs.join(","));
    }
    out
}

fn cmd_theta(cfg: &RunConfig, variant: ThetaArg, show_primal: bool) -> Res<Outcome> {
    let g = cfg.graph();
    let w = cfg.weights();
    let lifted = match variant {
        ThetaArg::Theta => Some(ThetaVariant::Theta),
        ThetaArg::ThetaPrime => Some(ThetaVariant::ThetaPrime),
        ThetaArg::ThetaPlus => Some(ThetaVariant::ThetaPlus),
        ThetaArg::Trace => None,
    };
    let p = match lifted {
        Some(v) => build_theta_variant(g, &w, v)?,
        None => build_theta_trace(g, &w)?,
    };
    let sol = solve(&p, &cfg.solve_options())?;
    let value = sol.value();
    let mut text = header(g);
    let _ = writeln!(text, "weights: {}", int_list(&w.0));
    let _ = writeln!(text, "variant: {}", serde_json::to_value(variant).unwrap().as_str().unwrap());
    let _ = writeln!(text, "value: {}", g9(value));
    let _ = writeln!(text, "int_distance: {}", g9(int_distance(value)));
    text += &status_line(&sol);
    let mut report = json!({
        "variant": variant,
        "value": value,
        "int_distance": int_distance(value),
        "solve": sol.report,
    });
    if let Some(v) = lifted {
        let parts = build_theta_dual_parts(g, &w, v, &sol.dual.y)?;
        let n = g.n();
        let pairs: Vec<Value> = g
            .edges()
            .iter()
            .copied()
            .chain(if v == ThetaVariant::ThetaPrime { g.non_edges() } else { Vec::new() })
            .map(|(i, j)| json!({"i": i, "j": j, "y": parts.y[pair_index(n, i, j)]}))
            .collect();
        let _ = writeln!(text, "dual eta: {}", g9(parts.eta));
        let _ = writeln!(text, "dual u: {}", g9_list(&parts.u));
        let _ = writeln!(text, "dual z: {}", g9_list(&parts.z));
        for pr in &pairs {
            let _ = writeln!(
                text,
                "dual y[{},{}]: {}",
                pr["i"],
                pr["j"],
                g9(pr["y"].as_f64().unwrap_or(0.0))
            );
        }
        report["dual"] = json!({"eta": parts.eta, "u": parts.u, "z": parts.z, "y": pairs});
    }
    if show_primal {
        let rows = sol.primal.x.to_rows();
        text += "primal:\n";
        text += &matrix_text(&rows);
        report["primal"] = json!(rows);
    }
    Ok(ok(text, report))
}

fn cmd_cover(cfg: &RunConfig) -> Res<Outcome> {
    let g = cfg.graph();
    let w = cfg.weights();
    let sol = clique_cover_number(g, &w)?;
    let cert = clique_cover_to_integral_dual(g, &w, &sol.m)?;
    let back = integral_dual_to_clique_cover(&cert, g)?;
    let slack_min = cert.theta_dual_parts(ThetaVariant::Theta)?.slack.min_eigenvalue()?;
    let mut violation = None;
    if back.m != sol.m {
        violation = Some("certificate does not round-trip to the same cover".to_string());
    } else if slack_min < -ASSEMBLY_TOL {
        violation = Some(format!("certificate slack has eigenvalue {}", g9(slack_min)));
    }
    let mut text = header(g);
    let _ = writeln!(text, "weights: {}", int_list(&w.0));
    let _ = writeln!(text, "cover value: {}", sol.value);
    text += "cliques:\n";
    text += &multiset_text(&sol.m);
    let _ = writeln!(
        text,
        "certificate: eta={} u={} z={}",
        cert.eta.unwrap_or(0),
        int_list(cert.u.as_deref().unwrap_or(&[])),
        int_list(cert.z.as_deref().unwrap_or(&[]))
    );
    let _ = writeln!(text, "certificate slack min eigenvalue: {}", g9(slack_min));
    let _ = writeln!(text, "round trip: {}", back.m == sol.m);
    let report = json!({
        "value": sol.value,
        "cover": sol.m,
        "tight_vertices": sol.tight_vertices,
        "certificate": cert,
        "slack_min_eigenvalue": slack_min,
        "round_trip": back.m == sol.m,
    });
    Ok(Outcome {
        violation,
        ..ok(text, report)
    })
}

fn cmd_perfect(cfg: &RunConfig) -> Res<Outcome> {
    let g = cfg.graph();
    let perfect = g.is_perfect()?;
    let (a, _) = alpha(g, &WeightVec::ones(g.n()))?;
    let om = omega(g)?;
    let ch = chi(g)?;
    let cover = clique_cover_number(g, &WeightVec::ones(g.n()))?.value;
    let mut text = header(g);
    let _ = writeln!(text, "perfect: {perfect}");
    let _ = writeln!(text, "omega: {om}\nchi: {ch}\nalpha: {a}\nclique cover number: {cover}");
    let report = json!({
        "perfect": perfect,
        "omega": om,
        "chi": ch,
        "alpha": a,
        "clique_cover_number": cover,
    });
    Ok(ok(text, report))
}

struct GraphAudit {
    g6: String,
    n: usize,
    edges: usize,
    tdi: TdiThetaReport,
    /// `Some(all integral)` when the integrality audit ran.
    integral: Option<bool>,
}

impl GraphAudit {
    fn violation(&self) -> Option<String> {
        if self.tdi.perfect && !self.tdi.verdict.passed() {
            return Some(format!("{}: perfect graph fails the TDI check", self.g6));
        }
        if self.tdi.verdict.passed() && self.integral == Some(false) {
            return Some(format!("{}: TDI on the tested weights but a support value is fractional", self.g6));
        }
        None
    }

    fn counterexample(&self) -> Option<&[i64]> {
        match &self.tdi.verdict {
            TdiVerdict::Counterexample { w, .. } => Some(w),
            TdiVerdict::TdiOnBox => None,
        }
    }
}

fn audit_graph(cfg: &RunConfig, g: &Graph, integrality: bool) -> Res<GraphAudit> {
    let weights = audit_weights(g.n(), &cfg.wbox, cfg.samples, cfg.seed)?;
    let opts = cfg.solve_options();
    let tdi = tdi_check_theta_weights(g, &weights, cfg.tol_int, &opts)?;
    let integral = if integrality {
        let body = BodyOracle::theta(g, ThetaVariant::Theta).with_options(opts);
        let audit = integrality_audit(&body, &weights, cfg.tol_int)?;
        Some(audit.verdict == AuditVerdict::AllIntegral)
    } else {
        None
    };
    Ok(GraphAudit {
        g6: to_graph6(g),
        n: g.n(),
        edges: g.edge_count(),
        tdi,
        integral,
    })
}

fn verdict_text(v: &TdiVerdict) -> String {
    match v {
        TdiVerdict::TdiOnBox => "tdi_on_box".into(),
        TdiVerdict::Counterexample { .. } => "counterexample".into(),
    }
}

fn cmd_tdi_audit(cfg: &RunConfig, integrality: bool) -> Res<Outcome> {
    let g = cfg.graph();
    let a = audit_graph(cfg, g, integrality)?;
    let mut text = header(g);
    let _ = writeln!(
        text,
        "box: {}..{} plus {} samples (seed {})",
        cfg.wbox.lo, cfg.wbox.hi, cfg.samples, cfg.seed
    );
    let _ = writeln!(text, "verdict: {}", verdict_text(&a.tdi.verdict));
    if let TdiVerdict::Counterexample {
        w,
        integral_dual,
        sdp_value,
    } = &a.tdi.verdict
    {
        let _ = writeln!(
            text,
            "counterexample: w={} cover number={} theta={}",
            int_list(w),
            integral_dual.map_or("-".into(), |v| v.to_string()),
            g9(*sdp_value)
        );
    }
    let _ = writeln!(text, "weights tested: {}", a.tdi.tested);
    let _ = writeln!(text, "perfect: {}", a.tdi.perfect);
    let _ = writeln!(text, "agreement: {}", a.tdi.agreement);
    if let Some(i) = a.integral {
        let _ = writeln!(text, "all support values integral: {i}");
    }
    let mut report = json!({"tdi": a.tdi});
    if let Some(i) = a.integral {
        report["all_integral"] = json!(i);
    }
    Ok(Outcome {
        violation: a.violation(),
        ..ok(text, report)
    })
}

fn cmd_tdi_audit_corpus(cfg: &RunConfig, max_n: usize, all: bool, integrality: bool) -> Res<Outcome> {
    let graphs = corpus(max_n, !all)?;
    let audits = graphs
        .par_iter()
        .map(|g| audit_graph(cfg, g, integrality))
        .collect::<Res<Vec<_>>>()?;
    let mut csv = String::from("g6,n,edges,perfect,verdict,counterexample,tested,agreement");
    if integrality {
        csv += ",all_integral";
    }
    csv.push('\n');
    for a in &audits {
        let cx = a
            .counterexample()
            .map(|w| w.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let _ = write!(
            csv,
            "{},{},{},{},{},{},{},{}",
            a.g6,
            a.n,
            a.edges,
            a.tdi.perfect,
            verdict_text(&a.tdi.verdict),
            cx,
            a.tdi.tested,
            a.tdi.agreement
        );
        if let Some(i) = a.integral {
            let _ = write!(csv, ",{i}");
        }
        csv.push('\n');
    }
    let disagreements = audits.iter().filter(|a| !a.tdi.agreement).count();
    let text = format!(
        "{} graphs, {} disagreements with perfection\n",
        audits.len(),
        disagreements
    );
    let report: Vec<Value> = audits
        .iter()
        .map(|a| {
            let mut v = json!({"g6": a.g6, "tdi": a.tdi});
            if let Some(i) = a.integral {
                v["all_integral"] = json!(i);
            }
            v
        })
        .collect();
    let violation = audits.iter().find_map(GraphAudit::violation);
    Ok(Outcome {
        text,
        json: Value::Array(report),
        csv: Some(csv),
        violation,
    })
}

/// The closed-form integer dual: `m* = zero extension of w⁺`, `y* = w⁻`.
fn closed_form_check(g: &Graph, w: &WeightVec) -> Res<(Value, String, bool)> {
    if w.0.iter().all(|&x| x >= 0) {
        let sol = maxcut_integer_dual_solve(g, w)?;
        let expected = zero_extension(g, &w.0)?;
        let matches = sol.cover.m == expected && sol.optimal_count == 1;
        let mut text = format!("integer dual value: {}\n", sol.cover.value);
        text += "integer dual cliques:\n";
        text += &multiset_text(&sol.cover.m);
        let _ = writeln!(text, "optimal solutions: {}", sol.optimal_count);
        let _ = writeln!(text, "closed form matches: {matches}");
        let v = json!({
            "value": sol.cover.value,
            "m": sol.cover.m,
            "optimal_count": sol.optimal_count,
            "closed_form_matches": matches,
        });
        Ok((v, text, matches))
    } else {
        let sol = maxcut_integer_dual_signed(g, w)?;
        let plus: Vec<i64> = w.0.iter().map(|&x| x.max(0)).collect();
        let minus: Vec<i64> = w.0.iter().map(|&x| (-x).max(0)).collect();
        let matches = sol.m == zero_extension(g, &plus)? && sol.y == minus;
        let mut text = format!("integer dual value: {}\n", sol.value);
        text += "integer dual cliques:\n";
        text += &multiset_text(&sol.m);
        let _ = writeln!(text, "integer dual y: {}", int_list(&sol.y));
        let _ = writeln!(text, "optimal solutions: {}", sol.optimal_count);
        let _ = writeln!(text, "closed form matches: {matches}");
        let v = json!({
            "value": sol.value,
            "m": sol.m,
            "y": sol.y,
            "optimal_count": sol.optimal_count,
            "closed_form_matches": matches,
        });
        Ok((v, text, matches))
    }
}

fn cmd_maxcut(cfg: &RunConfig, variant: MaxcutArg) -> Res<Outcome> {
    let g = cfg.graph();
    let w = cfg.weights();
    let p = match variant {
        MaxcutArg::Plain => build_maxcut(g, &w)?,
        MaxcutArg::Homog => homogenize_maxcut(g, &w)?,
        MaxcutArg::Strengthened => build_maxcut_strengthened(g, &w)?,
    };
    let sol = solve(&p, &cfg.solve_options())?;
    let nontrivial = variant == MaxcutArg::Strengthened;
    let (cut, shore) = maxcut_bruteforce(g, &w, nontrivial)?;
    let mut text = header(g);
    let _ = writeln!(text, "weights: {}", int_list(&w.0));
    let _ = writeln!(text, "variant: {}", serde_json::to_value(variant).unwrap().as_str().unwrap());
    let _ = writeln!(text, "sdp value: {}", g9(sol.value()));
    text += &status_line(&sol);
    let _ = writeln!(text, "max cut: {cut} (shore {})", int_list(&shore.vertices().iter().map(|&v| v as i64).collect::<Vec<_>>()));
    let mut report = json!({
        "variant": variant,
        "sdp_value": sol.value(),
        "solve": sol.report,
        "max_cut": cut,
        "shore": shore.vertices(),
        "nontrivial_shores": nontrivial,
    });
    let mut violation = None;
    if variant != MaxcutArg::Strengthened {
        let (dual, dual_text, matches) = closed_form_check(g, &w)?;
        text += &dual_text;
        report["integer_dual"] = dual;
        if !matches {
            violation = Some("integer dual differs from the closed form".into());
        }
    }
    Ok(Outcome {
        violation,
        ..ok(text, report)
    })
}

fn cmd_maxcut_dual(cfg: &RunConfig) -> Res<Outcome> {
    let g = cfg.graph();
    let w = cfg.weights();
    let (dual, dual_text, matches) = closed_form_check(g, &w)?;
    let mut text = header(g);
    let _ = writeln!(text, "weights: {}", int_list(&w.0));
    text += &dual_text;
    Ok(Outcome {
        violation: (!matches).then(|| "integer dual differs from the closed form".into()),
        ..ok(text, dual)
    })
}

fn cmd_chain(cfg: &RunConfig) -> Res<Outcome> {
    let g = cfg.graph();
    let w = cfg.weights();
    let p = build_theta_variant(g, &w, ThetaVariant::Theta)?;
    let sol = solve(&p, &cfg.solve_options())?;
    let (a, _) = alpha(g, &w)?;
    let cover = clique_cover_number(g, &w)?.value;
    let chain = verify_chain(&p, &sol.primal, &sol.dual, Some(a as f64), Some(cover as f64))?;
    let mut text = header(g);
    let _ = writeln!(text, "weights: {}", int_list(&w.0));
    let _ = writeln!(
        text,
        "integral primal (alpha): {a}\nsdp primal: {}\nsdp dual: {}\nintegral dual (cover): {cover}",
        g9(chain.sdp),
        g9(chain.sdd)
    );
    text += &status_line(&sol);
    let _ = writeln!(text, "ordered: {}", chain.ordered);
    let violation = (!chain.ordered).then(|| format!("chain out of order: {}", chain.violations.join(", ")));
    Ok(Outcome {
        violation,
        ..ok(text, json!({"chain": chain, "solve": sol.report}))
    })
}

struct CorpusRow {
    g6: String,
    n: usize,
    edges: usize,
    connected: bool,
    perfect: bool,
    alpha: i64,
    theta: f64,
    cover: i64,
}

fn cmd_corpus(cfg: &RunConfig, max_n: usize, all: bool) -> Res<Outcome> {
    let graphs = corpus(max_n, !all)?;
    let opts = cfg.solve_options();
    let rows = graphs
        .par_iter()
        .map(|g| -> Res<CorpusRow> {
            let ones = WeightVec::ones(g.n());
            let theta = solve(&build_theta_variant(g, &ones, ThetaVariant::Theta)?, &opts)?.value();
            Ok(CorpusRow {
                g6: to_graph6(g),
                n: g.n(),
                edges: g.edge_count(),
                connected: g.is_connected(),
                perfect: g.is_perfect()?,
                alpha: alpha(g, &ones)?.0,
                theta,
                cover: clique_cover_number(g, &ones)?.value,
            })
        })
        .collect::<Res<Vec<_>>>()?;
    let mut csv = String::from("g6,n,edges,connected,perfect,alpha,theta,clique_cover_number\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.g6,
            r.n,
            r.edges,
            r.connected,
            r.perfect,
            r.alpha,
            g9(r.theta),
            r.cover
        );
    }
    let json = Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "g6": r.g6, "n": r.n, "edges": r.edges, "connected": r.connected,
                    "perfect": r.perfect, "alpha": r.alpha, "theta": r.theta,
                    "clique_cover_number": r.cover,
                })
            })
            .collect(),
    );
    let violation = rows
        .iter()
        .find(|r| (r.alpha as f64) > r.theta + cfg.tol_int || r.theta > r.cover as f64 + cfg.tol_int)
        .map(|r| format!("{}: sandwich alpha <= theta <= cover number fails", r.g6));
    Ok(Outcome {
        text: String::new(),
        json,
        csv: Some(csv),
        violation,
    })
}
