//! Initial states, mixers and the layered Func-QAOA circuit.
//!
//! Conventions: the X mixer is `H·RZ(−2β)·H = exp(iβX)` per qubit; the Grover
//! mixer is `prep · (I + (e^{−iβ} − 1)|0⟩⟨0|) · prep†`, i.e.
//! `exp(−iβ|ψ₀⟩⟨ψ₀|)` on the mixed qubits, with no global phase elsewhere.

use serde::Serialize;

use crate::certificates::Certificate;
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::vqf::{plan_to_init, ReductionPlan, VarMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mixer {
    X,
    Grover,
}

impl Mixer {
    /// Length of the `β` interval that covers every distinct mixer.
    pub fn period(&self) -> f64 {
        match self {
            Mixer::X => std::f64::consts::PI,
            Mixer::Grover => 2.0 * std::f64::consts::PI,
        }
    }
}

impl std::str::FromStr for Mixer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Mixer::X),
            "grover" => Ok(Mixer::Grover),
            other => Err(Error::precondition(format!("unknown mixer `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    UniformHadamard,
    Reduced(ReductionPlan),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnsatzConfig {
    pub certificate: Certificate,
    pub layers: usize,
    pub mixer: Mixer,
    pub init: Init,
    /// `θ₁^obj, θ₁^mix, θ₂^obj, …`
    pub params: Vec<f64>,
}

impl AnsatzConfig {
    /// All parameters start at 0.
    pub fn new(certificate: Certificate, layers: usize, mixer: Mixer, init: Init) -> Result<Self> {
        let cfg = Self { certificate, layers, mixer, init, params: vec![0.0; 2 * layers] };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_params(mut self, params: &[f64]) -> Result<Self> {
        self.set_params(params)?;
        Ok(self)
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != 2 * self.layers {
            return Err(Error::precondition(format!(
                "{} layers take {} parameters, got {}",
                self.layers,
                2 * self.layers,
                params.len()
            )));
        }
        self.params = params.to_vec();
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.len() != 2 * self.layers {
            return Err(Error::precondition("parameter count must be twice the layer count"));
        }
        self.certificate.layout.validate()?;
        if let Init::Reduced(plan) = &self.init {
            plan.validate()?;
            let map = VarMap::from_layout(&self.certificate.layout);
            for v in plan.vars() {
                map.qubit(v)?;
            }
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.certificate.layout.total_width
    }

    /// State preparation `|0…0⟩ ↦ |ψ₀⟩`.
    pub fn prep(&self) -> Result<Circuit> {
        match &self.init {
            Init::UniformHadamard => init_uniform(&self.certificate),
            Init::Reduced(plan) => plan_to_init(plan, &self.certificate.layout),
        }
    }

    /// Search qubits that vary over the initial support.
    pub fn mix_qubits(&self) -> Vec<usize> {
        let layout = &self.certificate.layout;
        match &self.init {
            Init::UniformHadamard => {
                let fixed: Vec<usize> = self.certificate.fixed_search_bits().iter().map(|&(q, _)| q).collect();
                layout.search_qubits().into_iter().filter(|q| !fixed.contains(q)).collect()
            }
            Init::Reduced(plan) => {
                let map = VarMap::from_layout(layout);
                let mut qs: Vec<usize> = plan.free_vars().into_iter().filter_map(|v| map.qubit(v).ok()).collect();
                qs.sort_unstable();
                qs
            }
        }
    }

    pub fn mixer_layer(&self, prep: &Circuit, beta: f64) -> Result<Circuit> {
        let qubits = self.mix_qubits();
        match self.mixer {
            Mixer::X => x_mixer_layer(self.width(), &qubits, beta),
            Mixer::Grover => grover_mixer_layer(prep, &qubits, beta),
        }
    }
}

/// H on every free search qubit and X on search bits the certificate fixes to 1.
pub fn init_uniform(cert: &Certificate) -> Result<Circuit> {
    let layout = &cert.layout;
    let fixed = cert.fixed_search_bits();
    let mut c = Circuit::new(layout.total_width);
    for q in layout.search_qubits() {
        match fixed.iter().find(|&&(f, _)| f == q) {
            Some(&(_, true)) => c.push(Gate::X(q))?,
            Some(&(_, false)) => {}
            None => c.push(Gate::H(q))?,
        }
    }
    Ok(c)
}

/// `exp(iβX)` on each of `qubits`.
pub fn x_mixer_layer(width: usize, qubits: &[usize], beta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(width);
    for &q in qubits {
        c.push(Gate::H(q))?;
        c.push(Gate::Rz { theta: -2.0 * beta, target: q })?;
        c.push(Gate::H(q))?;
    }
    Ok(c)
}

/// `prep† · X(qubits) · MCP(−β) · X(qubits) · prep`. With no qubits to mix the
/// layer is empty.
pub fn grover_mixer_layer(prep: &Circuit, qubits: &[usize], beta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(prep.width());
    let Some(mcp) = Gate::phase_on_ones(qubits, -beta) else {
        return Ok(c);
    };
    c.append(&prep.inverse()?)?;
    for &q in qubits {
        c.push(Gate::X(q))?;
    }
    c.push(mcp)?;
    for &q in qubits {
        c.push(Gate::X(q))?;
    }
    c.append(prep)?;
    Ok(c)
}

/// `prep`, then `layers × (phase(θᵢ^obj), mixer(θᵢ^mix))`.
pub fn build_ansatz(config: &AnsatzConfig) -> Result<Circuit> {
    config.validate()?;
    let prep = config.prep()?;
    let mut c = prep.clone();
    for layer in config.params.chunks_exact(2) {
        c.append(&config.certificate.phase_layer(layer[0])?)?;
        c.append(&config.mixer_layer(&prep, layer[1])?)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::PhaseMode;
    use crate::statevec::State;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn run(c: &Circuit) -> State {
        let mut s = State::new(c.width()).unwrap();
        s.apply_circuit(c).unwrap();
        s
    }

    fn support(s: &State) -> Vec<usize> {
        (0..s.dim()).filter(|&i| s.amplitude(i).norm() > 1e-12).collect()
    }

    #[test]
    fn uniform_init_for_15() {
        let cert = Certificate::multiplication(15, PhaseMode::HammingDistance).unwrap();
        let s = run(&init_uniform(&cert).unwrap());
        let l = &cert.layout;
        let mut want: Vec<usize> = Vec::new();
        for p in [1usize, 3] {
            for q in 0..8 {
                want.push(l.p.place(p) | l.q.unwrap().place(q));
            }
        }
        want.sort_unstable();
        assert_eq!(support(&s), want);
        assert!(want.iter().all(|&i| (s.amplitude(i).norm_sqr() - 1.0 / 16.0).abs() < 1e-12));
    }

    #[test]
    fn x_mixer_quarter_turn() {
        let s = run(&x_mixer_layer(1, &[0], std::f64::consts::FRAC_PI_2).unwrap());
        assert!((s.amplitude(1) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let s = run(&x_mixer_layer(2, &[0], 0.0).unwrap());
        assert!((s.amplitude(0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grover_fixes_orthogonal_states() {
        let mut prep = Circuit::new(3);
        for q in 0..3 {
            prep.push(Gate::H(q)).unwrap();
        }
        let mix = grover_mixer_layer(&prep, &[0, 1, 2], 1.1).unwrap();
        // |000⟩ − |111⟩ is orthogonal to the uniform state
        let h = 0.5f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = Complex64::new(h, 0.0);
        amps[7] = Complex64::new(-h, 0.0);
        let mut s = State::from_amplitudes(amps.clone()).unwrap();
        s.apply_circuit(&mix).unwrap();
        for (a, b) in s.amplitudes().iter().zip(&amps) {
            assert!((a - b).norm() < 1e-10);
        }
        // ψ₀ itself picks up e^{−iβ}
        let mut s = run(&prep);
        s.apply_circuit(&mix).unwrap();
        let phase = Complex64::from_polar(1.0, -1.1) * (1.0 / 8f64.sqrt());
        assert!(s.amplitudes().iter().all(|a| (a - phase).norm() < 1e-10));
    }

    #[test]
    fn zero_layers_is_prep() {
        let cert = Certificate::modulo(15, PhaseMode::HammingDistance).unwrap();
        let cfg = AnsatzConfig::new(cert.clone(), 0, Mixer::Grover, Init::UniformHadamard).unwrap();
        assert_eq!(build_ansatz(&cfg).unwrap(), init_uniform(&cert).unwrap());
        assert!(cfg.clone().with_params(&[1.0]).is_err());
    }

    #[test]
    fn zero_objective_keeps_success() {
        let cert = Certificate::modulo(35, PhaseMode::HammingDistance).unwrap();
        let cfg = AnsatzConfig::new(cert.clone(), 1, Mixer::Grover, Init::UniformHadamard)
            .unwrap()
            .with_params(&[0.0, 0.8])
            .unwrap();
        let s = run(&build_ansatz(&cfg).unwrap());
        let success: f64 = (0..s.dim())
            .filter(|&i| cert.is_solution(cert.layout.search_index(i)))
            .map(|i| s.amplitude(i).norm_sqr())
            .sum();
        assert!((success - 0.5).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ansatz_is_normalized_and_grover_stays_in_support(
            params in proptest::collection::vec(0.0..6.3f64, 4),
            grover in any::<bool>(),
        ) {
            let cert = Certificate::modulo(35, PhaseMode::HammingDistance).unwrap();
            let mixer = if grover { Mixer::Grover } else { Mixer::X };
            let cfg = AnsatzConfig::new(cert, 2, mixer, Init::UniformHadamard).unwrap().with_params(&params).unwrap();
            let s = run(&build_ansatz(&cfg).unwrap());
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            if grover {
                let outside: f64 = (0..s.dim()).filter(|&i| i & 1 == 0 || i >> 3 != 0).map(|i| s.amplitude(i).norm_sqr()).sum();
                prop_assert!(outside < 1e-10);
            }
        }

        #[test]
        fn zero_params_give_initial_state(layers in 0usize..4) {
            let cert = Certificate::multiplication(15, PhaseMode::HammingDistance).unwrap();
            let cfg = AnsatzConfig::new(cert.clone(), layers, Mixer::Grover, Init::UniformHadamard).unwrap();
            let a = run(&build_ansatz(&cfg).unwrap());
            let b = run(&init_uniform(&cert).unwrap());
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
