//! Classical outer loop: energy and success probability of the ansatz state,
//! grid search, Nelder–Mead and grid-seeded Nelder–Mead over the `2L` angles.
//!
//! Parameter domain: `θ^obj ∈ [0, 2π)`, `θ^mix ∈ [0, π)` for the X mixer and
//! `[0, 2π)` for the Grover mixer (see [`Mixer::period`]).

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::json;

use crate::ansatz::{x_mixer_layer, AnsatzConfig, Mixer};
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevec::State;

/// How the phase separator is simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Every gate of the compute–phase–uncompute circuit on the full register.
    Circuit,
    /// The separator as the diagonal `e^{−iθE(s)}` on the search register alone.
    /// Exact whenever the separator is diagonal and returns the work qubits to
    /// |0⟩, which the certificate tests establish.
    Compiled,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circuit" => Ok(Backend::Circuit),
            "compiled" => Ok(Backend::Compiled),
            other => Err(Error::precondition(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum EvalMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub energy: f64,
    pub success: f64,
}

/// Reusable simulator for one ansatz shape; parameters vary per call.
#[derive(Clone, Debug)]
pub struct Evaluator {
    config: AnsatzConfig,
    backend: Backend,
    mode: EvalMode,
    energy: Vec<f64>,
    solution: Vec<bool>,
    prep: Circuit,
    prep_inv: Circuit,
    initial: State,
    mix_qubits: Vec<usize>,
}

impl Evaluator {
    pub fn new(config: &AnsatzConfig, backend: Backend, mode: EvalMode) -> Result<Self> {
        config.validate()?;
        let cert = &config.certificate;
        let energy = cert.energy_table()?;
        let solution = (0..energy.len()).map(|s| cert.is_solution(s)).collect();
        let full_prep = config.prep()?;
        let prep = match backend {
            Backend::Circuit => full_prep,
            Backend::Compiled => narrow(&full_prep, cert.search_width())?,
        };
        let mut initial = State::new(prep.width())?;
        initial.apply_circuit(&prep)?;
        Ok(Self {
            config: config.clone(),
            backend,
            mode,
            energy,
            solution,
            prep_inv: prep.inverse()?,
            prep,
            initial,
            mix_qubits: config.mix_qubits(),
        })
    }

    /// Exact gate-level evaluator.
    pub fn exact(config: &AnsatzConfig) -> Result<Self> {
        Self::new(config, Backend::Circuit, EvalMode::Exact)
    }

    pub fn config(&self) -> &AnsatzConfig {
        &self.config
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn energy_table(&self) -> &[f64] {
        &self.energy
    }

    pub fn n_params(&self) -> usize {
        2 * self.config.layers
    }

    /// Final simulated state (full register for [`Backend::Circuit`], search
    /// register only for [`Backend::Compiled`]).
    pub fn final_state(&self, params: &[f64]) -> Result<State> {
        if params.len() != self.n_params() {
            return Err(Error::precondition(format!("expected {} parameters, got {}", self.n_params(), params.len())));
        }
        let cert = &self.config.certificate;
        let mask = (1usize << cert.search_width()) - 1;
        let width = self.prep.width();
        let mut s = self.initial.clone();
        for layer in params.chunks_exact(2) {
            let (theta, beta) = (layer[0], layer[1]);
            match self.backend {
                Backend::Circuit => s.apply_circuit(&cert.phase_layer(theta)?)?,
                Backend::Compiled => s.apply_diagonal(|k| -theta * self.energy[k & mask]),
            }
            match self.config.mixer {
                Mixer::X => s.apply_circuit(&x_mixer_layer(width, &self.mix_qubits, beta)?)?,
                Mixer::Grover => {
                    let Some(mcp) = Gate::phase_on_ones(&self.mix_qubits, -beta) else {
                        continue;
                    };
                    s.apply_circuit(&self.prep_inv)?;
                    for &q in &self.mix_qubits {
                        s.apply_gate(&Gate::X(q))?;
                    }
                    s.apply_gate(&mcp)?;
                    for &q in &self.mix_qubits {
                        s.apply_gate(&Gate::X(q))?;
                    }
                    s.apply_circuit(&self.prep)?;
                }
            }
        }
        Ok(s)
    }

    /// Marginal distribution over the search register.
    pub fn distribution(&self, params: &[f64]) -> Result<Vec<f64>> {
        let s = self.final_state(params)?;
        let mask = self.energy.len() - 1;
        let mut p = vec![0.0; self.energy.len()];
        for (k, a) in s.amplitudes().iter().enumerate() {
            p[k & mask] += a.norm_sqr();
        }
        Ok(p)
    }

    pub fn evaluate(&self, params: &[f64]) -> Result<Evaluation> {
        match self.mode {
            EvalMode::Exact => {
                let p = self.distribution(params)?;
                Ok(Evaluation {
                    energy: p.iter().zip(&self.energy).map(|(p, e)| p * e).sum(),
                    success: p.iter().zip(&self.solution).filter(|(_, &ok)| ok).map(|(p, _)| p).sum(),
                })
            }
            EvalMode::Sampled { shots, seed } => {
                let counts = self.final_state(params)?.sample(shots, seed)?;
                let mask = self.energy.len() - 1;
                let (mut e, mut ok) = (0.0, 0u64);
                for (&k, &n) in &counts.counts {
                    e += self.energy[k & mask] * n as f64;
                    if self.solution[k & mask] {
                        ok += n;
                    }
                }
                Ok(Evaluation { energy: e / shots as f64, success: ok as f64 / shots as f64 })
            }
        }
    }

    /// Most probable correct search index and its probability.
    pub fn most_likely_solution(&self, params: &[f64]) -> Result<Option<(usize, f64)>> {
        let p = self.distribution(params)?;
        Ok(p.iter().enumerate().filter(|(s, _)| self.solution[*s]).fold(None, |best: Option<(usize, f64)>, (s, &q)| {
            match best {
                Some((_, b)) if b >= q => best,
                _ => Some((s, q)),
            }
        }))
    }

    /// `#correct / #support` of the initial state.
    pub fn success_baseline(&self) -> f64 {
        let mask = self.energy.len() - 1;
        let support: Vec<usize> =
            (0..self.initial.dim()).filter(|&k| self.initial.amplitude(k).norm() > 1e-12).map(|k| k & mask).collect();
        if support.is_empty() {
            return 0.0;
        }
        support.iter().filter(|&&s| self.solution[s]).count() as f64 / support.len() as f64
    }
}

/// Re-declares a circuit that only touches qubits below `width` on `width` qubits.
fn narrow(c: &Circuit, width: usize) -> Result<Circuit> {
    if c.gates().iter().flat_map(Gate::wires).any(|q| q >= width) {
        return Err(Error::precondition("compiled backend needs an initial state on the search register"));
    }
    Circuit::from_gates(width, c.gates().to_vec())
}

/// Exact gate-level evaluation of `config` at `params`.
pub fn evaluate(config: &AnsatzConfig, params: &[f64]) -> Result<Evaluation> {
    Evaluator::exact(config)?.evaluate(params)
}

/// `#correct / #support` of the initial state of `config`.
pub fn success_baseline(config: &AnsatzConfig) -> Result<f64> {
    let init_only = AnsatzConfig { layers: 0, params: Vec::new(), ..config.clone() };
    Ok(Evaluator::exact(&init_only)?.success_baseline())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Strategy {
    /// `resolution^(2L)` evaluations on the regular grid.
    GridSearch { resolution: usize },
    /// Simplex searches from `restarts` seeded random starting points.
    NelderMead { restarts: usize, tol: f64, max_evals: usize },
    /// Grid search, then simplex refinement from the `restarts` best grid points.
    Hybrid { resolution: Option<usize>, restarts: usize, tol: f64, max_evals: usize },
}

impl Strategy {
    /// Grid (8 per parameter for one layer, 4 up to three, 3 beyond), five
    /// simplex restarts, tolerance `1e-6`.
    pub fn hybrid() -> Self {
        Strategy::Hybrid { resolution: None, restarts: 5, tol: 1e-6, max_evals: 2000 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::GridSearch { .. } => "grid",
            Strategy::NelderMead { .. } => "nelder-mead",
            Strategy::Hybrid { .. } => "hybrid",
        }
    }
}

pub fn default_resolution(layers: usize) -> usize {
    match layers {
        0 | 1 => 8,
        2 | 3 => 4,
        _ => 3,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub iter: usize,
    pub params: Vec<f64>,
    pub energy: f64,
    pub success: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_energy: f64,
    pub success_probability: f64,
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub certificate: String,
    pub layers: usize,
    pub mixer: Mixer,
}

impl OptResult {
    /// `{seed, strategy, certificate, layers, mixer, trace, best}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "seed": self.seed,
            "strategy": self.strategy,
            "certificate": self.certificate,
            "layers": self.layers,
            "mixer": self.mixer,
            "trace": self.trace,
            "best": {
                "params": self.best_params,
                "energy": self.best_energy,
                "success": self.success_probability,
            },
        })
    }
}

struct Recorder<'a> {
    eval: &'a Evaluator,
    trace: Vec<TracePoint>,
}

impl Recorder<'_> {
    fn call(&mut self, params: &[f64]) -> Result<f64> {
        let e = self.eval.evaluate(params)?;
        self.trace.push(TracePoint {
            iter: self.trace.len(),
            params: params.to_vec(),
            energy: e.energy,
            success: e.success,
        });
        Ok(e.energy)
    }
}

/// Exact gate-level optimization of `config`.
pub fn optimize(config: &AnsatzConfig, strategy: Strategy, seed: u64) -> Result<OptResult> {
    optimize_with(&Evaluator::exact(config)?, strategy, seed)
}

pub fn optimize_with(eval: &Evaluator, strategy: Strategy, seed: u64) -> Result<OptResult> {
    let cfg = eval.config();
    let n = eval.n_params();
    let span: Vec<f64> = (0..n).map(|k| if k % 2 == 0 { TAU } else { cfg.mixer.period() }).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rec = Recorder { eval, trace: Vec::new() };

    match strategy {
        Strategy::GridSearch { resolution } => {
            grid(&mut rec, &span, resolution)?;
        }
        Strategy::NelderMead { restarts, tol, max_evals } => {
            for _ in 0..restarts.max(1) {
                let x0: Vec<f64> = span.iter().map(|&s| rng.gen::<f64>() * s).collect();
                let step: Vec<f64> = span.iter().map(|s| s / 8.0).collect();
                nelder_mead(&mut rec, x0, &step, tol, max_evals)?;
            }
        }
        Strategy::Hybrid { resolution, restarts, tol, max_evals } => {
            let res = resolution.unwrap_or_else(|| default_resolution(cfg.layers));
            let mut ranked = grid(&mut rec, &span, res)?;
            ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let step: Vec<f64> = span.iter().map(|s| s / (2.0 * res as f64)).collect();
            for &(idx, _) in ranked.iter().take(restarts) {
                let x0: Vec<f64> = rec.trace[idx]
                    .params
                    .iter()
                    .zip(&step)
                    .map(|(x, s)| x + (rng.gen::<f64>() - 0.5) * 0.2 * s)
                    .collect();
                nelder_mead(&mut rec, x0, &step, tol, max_evals)?;
            }
        }
    }

    let trace = rec.trace;
    let best = trace
        .iter()
        .fold(None::<&TracePoint>, |b, t| match b {
            Some(b) if b.energy <= t.energy => Some(b),
            _ => Some(t),
        })
        .ok_or_else(|| Error::invariant("optimizer produced no evaluations"))?;
    Ok(OptResult {
        best_params: best.params.clone(),
        best_energy: best.energy,
        success_probability: best.success.clamp(0.0, 1.0),
        evaluations: trace.len(),
        seed,
        strategy,
        certificate: cfg.certificate.name().to_string(),
        layers: cfg.layers,
        mixer: cfg.mixer,
        trace,
    })
}

/// Evaluates the full grid; returns `(trace index, energy)` per point.
fn grid(rec: &mut Recorder<'_>, span: &[f64], res: usize) -> Result<Vec<(usize, f64)>> {
    if res == 0 {
        return Err(Error::precondition("grid resolution must be positive"));
    }
    let n = span.len();
    let total = res
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::resource(format!("grid of {res}^{n} points is too large")))?;
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let x: Vec<f64> = span
            .iter()
            .map(|s| {
                let k = rem % res;
                rem /= res;
                s * k as f64 / res as f64
            })
            .collect();
        let e = rec.call(&x)?;
        out.push((rec.trace.len() - 1, e));
    }
    Ok(out)
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
/// Stops when both the value spread and the vertex spread fall below `tol`
/// or after `max_evals` evaluations.
fn nelder_mead(rec: &mut Recorder<'_>, x0: Vec<f64>, step: &[f64], tol: f64, max_evals: usize) -> Result<()> {
    let n = x0.len();
    if n == 0 {
        rec.call(&x0)?;
        return Ok(());
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = rec.call(&x0)?;
    simplex.push((x0.clone(), f0));
    for k in 0..n {
        let mut x = x0.clone();
        x[k] += step[k];
        let f = rec.call(&x)?;
        simplex.push((x, f));
    }
    let mut evals = n + 1;
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_spread = simplex[n].1 - simplex[0].1;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= tol && x_spread <= tol {
            break;
        }
        let centroid: Vec<f64> =
            (0..n).map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let xr = lerp(&centroid, &worst.0, -1.0);
        let fr = rec.call(&xr)?;
        evals += 1;
        if fr < simplex[0].1 {
            let xe = lerp(&centroid, &worst.0, -2.0);
            let fe = rec.call(&xe)?;
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = lerp(&centroid, &xr, 0.5);
                let fc = rec.call(&xc)?;
                (xc, fc)
            } else {
                let xc = lerp(&centroid, &worst.0, 0.5);
                let fc = rec.call(&xc)?;
                (xc, fc)
            };
            evals += 1;
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    v.0 = lerp(&best, &v.0, 0.5);
                    v.1 = rec.call(&v.0)?;
                    evals += 1;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_ansatz, Init};
    use crate::certificates::{Certificate, PhaseMode};

    fn modulo_cfg(m: u64, layers: usize) -> AnsatzConfig {
        let cert = Certificate::modulo(m, PhaseMode::HammingDistance).unwrap();
        AnsatzConfig::new(cert, layers, Mixer::Grover, Init::UniformHadamard).unwrap()
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(success_baseline(&modulo_cfg(15, 1)).unwrap(), 0.5);
        assert_eq!(success_baseline(&modulo_cfg(77, 2)).unwrap(), 0.25);
        let cert = Certificate::multiplication(77, PhaseMode::HammingDistance).unwrap();
        let cfg = AnsatzConfig::new(cert, 1, Mixer::X, Init::UniformHadamard).unwrap();
        // p ∈ {1,3,5,7}, q < 64: only (7, 11)
        assert_eq!(success_baseline(&cfg).unwrap(), 1.0 / 256.0);
    }

    #[test]
    fn zero_layers_keep_baseline() {
        let cfg = modulo_cfg(35, 0);
        let e = evaluate(&cfg, &[]).unwrap();
        assert!((e.success - 0.5).abs() < 1e-12);
    }

    #[test]
    fn backends_agree_and_match_direct_sum() {
        let cert = Certificate::multiplication(15, PhaseMode::HammingDistance).unwrap();
        for mixer in [Mixer::X, Mixer::Grover] {
            let cfg = AnsatzConfig::new(cert.clone(), 2, mixer, Init::UniformHadamard).unwrap();
            let params = [0.3, 1.1, 2.2, 0.4];
            let a = Evaluator::new(&cfg, Backend::Circuit, EvalMode::Exact).unwrap();
            let b = Evaluator::new(&cfg, Backend::Compiled, EvalMode::Exact).unwrap();
            let (ea, eb) = (a.evaluate(&params).unwrap(), b.evaluate(&params).unwrap());
            assert!((ea.energy - eb.energy).abs() < 1e-10);
            assert!((ea.success - eb.success).abs() < 1e-10);

            let mut s = State::new(cfg.width()).unwrap();
            s.apply_circuit(&build_ansatz(&cfg.clone().with_params(&params).unwrap()).unwrap()).unwrap();
            let table = cert.energy_table().unwrap();
            let direct = s.expectation_diagonal(|k| table[cert.layout.search_index(k)]);
            assert!((direct - ea.energy).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_energy_within_three_sigma() {
        let cfg = modulo_cfg(35, 1);
        let params = [0.7, 1.9];
        let exact = evaluate(&cfg, &params).unwrap();
        let shots = 100_000;
        let sampled = Evaluator::new(&cfg, Backend::Circuit, EvalMode::Sampled { shots, seed: 7 })
            .unwrap()
            .evaluate(&params)
            .unwrap();
        let p = Evaluator::exact(&cfg).unwrap().distribution(&params).unwrap();
        let table = cfg.certificate.energy_table().unwrap();
        let var: f64 = p.iter().zip(&table).map(|(p, e)| p * (e - exact.energy).powi(2)).sum();
        assert!((sampled.energy - exact.energy).abs() <= 3.0 * (var / shots as f64).sqrt());
    }

    #[test]
    fn grid_counts_and_determinism() {
        let cfg = modulo_cfg(15, 1);
        let r = optimize(&cfg, Strategy::GridSearch { resolution: 5 }, 1).unwrap();
        assert_eq!(r.evaluations, 25);
        let a = optimize(&cfg, Strategy::hybrid(), 3).unwrap();
        let b = optimize(&cfg, Strategy::hybrid(), 3).unwrap();
        assert_eq!(a, b);
        assert!(a.success_probability >= 0.5 - 1e-12);
        assert!(a.trace.iter().all(|t| t.energy >= a.best_energy));
        let j = a.to_json();
        assert_eq!(j["strategy"]["name"], "hybrid");
        assert!(j["trace"][0]["params"].is_array());
    }

    #[test]
    fn nelder_mead_minimizes_a_quadratic() {
        // one layer on m = 15: E = 5·(1 − success), minimum 0
        let cfg = modulo_cfg(15, 1);
        let r = optimize(&cfg, Strategy::NelderMead { restarts: 4, tol: 1e-10, max_evals: 4000 }, 11).unwrap();
        assert!(r.best_energy < 1e-8, "{}", r.best_energy);
    }
}
