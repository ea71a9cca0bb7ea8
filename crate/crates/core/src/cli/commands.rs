use funcqaoa::ansatz::{AnsatzConfig, Init, Mixer};
use funcqaoa::arithmetic::classical::is_prime;
use funcqaoa::arithmetic::{bit_length, build_adder, build_multiplier, Register, RegisterLayout};
use funcqaoa::certificates::{Candidate, Certificate, PhaseMode};
use funcqaoa::circuits::{emit_circuit, parse_circuit, resource_count, Circuit};
use funcqaoa::optimizer::{optimize_with, Backend, EvalMode, Evaluator, Strategy};
use funcqaoa::statevec::{qubit_cap, State};
use funcqaoa::vqf::{
    compression_report, default_widths, detect_reductions, generate_clauses, plan_to_init, preprocess, ReductionPlan,
};
use funcqaoa::{Error, Result};
use serde_json::{json, Map, Value};

use super::output::{JsonReport, Table};
use super::{
    BackendArg, CertificateArg, CircuitKind, ClausesArgs, CompressionArgs, FactorArgs, InitArg, MixerArg, PhaseModeArg,
    ReduceArgs, ResourcesArgs, SimulateArgs, StrategyArg, WidthArgs,
};

/// Widest full register `--backend auto` still simulates gate by gate.
const AUTO_CIRCUIT_WIDTH: usize = 12;

fn check_factor_input(m: u64) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::precondition(format!("m = {m} is even; only odd moduli are factored")));
    }
    if m < 9 {
        return Err(Error::precondition(format!("m = {m} is below 9")));
    }
    if is_prime(m) {
        return Err(Error::precondition(format!("m = {m} is prime")));
    }
    Ok(())
}

/// Reduction plan over the certificate's own factor registers.
fn reduced_plan(cert: &Certificate, m: u64, max_vars: usize) -> Result<ReductionPlan> {
    let layout = &cert.layout;
    let n_q = layout.q.map_or(bit_length(m) - 1, |q| q.len);
    let pre = preprocess(&generate_clauses(m, layout.p.len, n_q)?)?;
    let plan = detect_reductions(&pre, max_vars)?;
    Ok(if layout.q.is_some() { plan } else { plan.restrict_to_p() })
}

pub fn factor(a: &FactorArgs, seed: u64) -> Result<JsonReport> {
    check_factor_input(a.m)?;
    let (mode, mode_name) = match a.phase_mode {
        PhaseModeArg::Hamming => (PhaseMode::HammingDistance, "hamming"),
        PhaseModeArg::Abs => (PhaseMode::AbsDifference, "abs"),
        PhaseModeArg::Squared => (PhaseMode::SquaredDifference, "squared"),
    };
    let cert = match a.certificate {
        CertificateArg::Multiplication => Certificate::multiplication(a.m, mode)?,
        CertificateArg::Modulo => Certificate::modulo(a.m, mode)?,
    };
    let width = cert.layout.total_width;
    if width > qubit_cap() {
        return Err(Error::resource(format!("{width} qubits exceed the cap of {}", qubit_cap())));
    }
    let init = match a.init {
        InitArg::Uniform => Init::UniformHadamard,
        InitArg::Reduced => Init::Reduced(reduced_plan(&cert, a.m, a.max_vars)?),
    };
    let mixer = match a.mixer {
        MixerArg::X => Mixer::X,
        MixerArg::Grover => Mixer::Grover,
    };
    let config = AnsatzConfig::new(cert.clone(), a.layers, mixer, init.clone())?;
    let backend = match a.backend {
        BackendArg::Auto if width <= AUTO_CIRCUIT_WIDTH => Backend::Circuit,
        BackendArg::Auto | BackendArg::Compiled => Backend::Compiled,
        BackendArg::Circuit => Backend::Circuit,
    };
    let eval_mode = a.shots.map_or(EvalMode::Exact, |shots| EvalMode::Sampled { shots, seed });
    let eval = Evaluator::new(&config, backend, eval_mode)?;

    let (params, optimization) = match &a.params {
        Some(p) => {
            let e = eval.evaluate(p)?;
            (p.clone(), json!({ "params": p, "energy": e.energy, "success": e.success }))
        }
        None => {
            let strategy = match a.strategy {
                StrategyArg::Grid => Strategy::GridSearch {
                    resolution: a.resolution.unwrap_or_else(|| funcqaoa::optimizer::default_resolution(a.layers)),
                },
                StrategyArg::NelderMead => {
                    Strategy::NelderMead { restarts: a.restarts, tol: a.tol, max_evals: a.max_evals }
                }
                StrategyArg::Hybrid => Strategy::Hybrid {
                    resolution: a.resolution,
                    restarts: a.restarts,
                    tol: a.tol,
                    max_evals: a.max_evals,
                },
            };
            let r = optimize_with(&eval, strategy, seed)?;
            (r.best_params.clone(), r.to_json())
        }
    };

    let (s, probability) = eval
        .most_likely_solution(&params)?
        .filter(|&(_, p)| p > 0.0)
        .ok_or_else(|| Error::invariant("no factoring state carries probability"))?;
    let Candidate::Factors { p, q } = cert.decode(s) else {
        return Err(Error::invariant("factoring certificate decoded a non-factor candidate"));
    };
    if p <= 1 || q <= 1 || p.checked_mul(q) != Some(a.m) {
        return Err(Error::invariant(format!("recovered {p}·{q} ≠ {}", a.m)));
    }

    let mut report = json!({
        "m": a.m,
        "certificate": cert.name(),
        "phase_mode": mode_name,
        "layers": a.layers,
        "mixer": mixer,
        "init": match a.init { InitArg::Uniform => "uniform", InitArg::Reduced => "reduced" },
        "backend": backend,
        "qubits": width,
        "search_qubits": cert.search_width(),
        "seed": seed,
        "factors": [p.min(q), p.max(q)],
        "solution_probability": probability,
        "success_baseline": eval.success_baseline(),
        "optimization": optimization,
    });
    if let Init::Reduced(plan) = &init {
        report["plan"] = serde_json::to_value(plan).map_err(|e| Error::invariant(e.to_string()))?;
    }
    Ok(JsonReport(report))
}

fn widths(w: &WidthArgs) -> (usize, usize) {
    let (p, q) = default_widths(w.m);
    (w.n_p.unwrap_or(p), w.n_q.unwrap_or(q))
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::invariant(e.to_string()))
}

pub fn clauses(a: &ClausesArgs) -> Result<JsonReport> {
    let (n_p, n_q) = widths(&a.widths);
    let set = generate_clauses(a.widths.m, n_p, n_q)?;
    let (mut set, plan) = if a.preprocessed {
        let pre = preprocess(&set)?;
        (pre.clauses, Some(pre.plan))
    } else {
        (set, None)
    };
    if let Some(k) = a.max_vars {
        set.clauses.retain(|c| c.factor_vars().len() <= k);
    }
    let mut v = to_value(&set)?;
    if let Some(plan) = plan {
        v["plan"] = to_value(&plan)?;
    }
    Ok(JsonReport(v))
}

pub fn reduce(a: &ReduceArgs) -> Result<JsonReport> {
    let (n_p, n_q) = widths(&a.widths);
    let pre = preprocess(&generate_clauses(a.widths.m, n_p, n_q)?)?;
    let plan = detect_reductions(&pre, a.max_vars)?;
    let layout = RegisterLayout::packed(n_p, Some(n_q), 0, 0, false);
    let circuit = plan_to_init(&plan, &layout)?;
    Ok(JsonReport(json!({
        "m": a.widths.m,
        "n_p": n_p,
        "n_q": n_q,
        "max_vars": a.max_vars,
        "log2_support": plan.log2_support(),
        "plan": plan,
        "circuit": emit_circuit(&circuit),
    })))
}

pub fn compression(a: &CompressionArgs) -> Result<Table> {
    let several = a.m.len() > 1;
    let mut header = vec!["clause_id", "n_pq_vars", "log2_all", "log2_valid", "bits_removed"];
    if several {
        header.insert(0, "m");
    }
    let mut rows = Vec::new();
    for &m in &a.m {
        for r in compression_report(m, a.max_vars)? {
            let mut row = vec![r.clause_id as f64, r.n_pq_vars as f64, r.log2_all, r.log2_valid, r.bits_removed];
            if several {
                row.insert(0, m as f64);
            }
            rows.push(row);
        }
    }
    let mut extra = Map::new();
    extra.insert("max_vars".into(), json!(a.max_vars));
    Ok(Table { header, rows, extra })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn resource_circuit(kind: CircuitKind, n: usize) -> Result<(Circuit, usize)> {
    match kind {
        CircuitKind::Adder => Ok((build_adder(Register::new(0, n), Register::new(n, n), 2 * n)?, 1)),
        CircuitKind::Multiplier => Ok((build_multiplier(&RegisterLayout::packed(n, Some(n), 2 * n, 1, false))?, 1)),
    }
}

pub fn resources(a: &ResourcesArgs) -> Result<Table> {
    let header = vec!["bits", "qubits", "gates", "depth", "cnot_equivalent"];
    let mut rows = Vec::new();
    for n in a.bits.0..=a.bits.1 {
        let (c, anc) = resource_circuit(a.circuit, n)?;
        let r = resource_count(&c, true, anc);
        let cnots = r.cnot_equivalent.ok_or_else(|| Error::invariant("decomposed count lacks CNOTs"))?;
        rows.push(vec![n as f64, r.width as f64, r.total_gates as f64, r.depth as f64, cnots as f64]);
    }
    let bits: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let mut fit = Map::new();
    for (col, name) in [(2, "gates"), (3, "depth"), (4, "cnot_equivalent")] {
        let ys: Vec<f64> = rows.iter().map(|r| r[col]).collect();
        fit.insert(name.into(), loglog_slope(&bits, &ys).map_or(Value::Null, Value::from));
    }
    let mut extra = Map::new();
    extra.insert(
        "circuit".into(),
        json!(match a.circuit {
            CircuitKind::Adder => "adder",
            CircuitKind::Multiplier => "multiplier",
        }),
    );
    extra.insert("fit_exponent".into(), Value::Object(fit));
    Ok(Table { header, rows, extra })
}

pub fn simulate(a: &SimulateArgs, seed: u64) -> Result<JsonReport> {
    let text = std::fs::read_to_string(&a.circuit)
        .map_err(|e| Error::precondition(format!("cannot read `{}`: {e}", a.circuit.display())))?;
    let circuit = parse_circuit(&text)?;
    let mut state = State::new(circuit.width())?;
    state.apply_circuit(&circuit)?;
    let counts = state.sample(a.shots, seed)?;
    let by_bits: Map<String, Value> =
        counts.counts.iter().map(|(&k, &n)| (counts.bitstring(k), Value::from(n))).collect();
    Ok(JsonReport(json!({
        "qubits": circuit.width(),
        "shots": a.shots,
        "seed": seed,
        "counts": by_bits,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x * x).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[2.0], &[1.0]).is_none());
    }

    #[test]
    fn factor_inputs() {
        assert!(check_factor_input(16).is_err());
        assert!(check_factor_input(7).is_err());
        assert!(check_factor_input(13).is_err());
        assert!(check_factor_input(15).is_ok());
    }
}
