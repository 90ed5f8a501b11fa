//! Deterministic, seeded generators for the reference signals used to
//! validate the pipeline: the Lorenz x-component, Gaussian white noise, a
//! super-positioned harmonic oscillation, a drifting logistic map and a
//! scaled Brownian motion.
//!
//! Everything here is a pure function of its parameters and seed; calling a
//! generator twice with the same arguments yields bit-identical output.
//!
//! Randomness comes from [`SplitMix64`], chosen because the algorithm is
//! tiny enough to specify exactly (see the type docs and its test vectors),
//! so every derived expectation in the test suite is reproducible from the
//! seed alone. Normal deviates are produced from it with the Box-Muller
//! transform.

use crate::{Error, Result, TimeSeries};

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood's `splitmix64`).
///
/// State update: `state += 0x9E3779B97F4A7C15`; output mixing:
/// `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
/// z *= 0x94D049BB133111EB; z ^= z >> 31`.
///
/// Uniform doubles take the top 53 bits: `(next_u64() >> 11) * 2^-53`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard normal deviates via the Box-Muller transform.
///
/// Each pair of uniforms (u1, u2) yields `r·cos(2πu2)` and `r·sin(2πu2)`
/// with `r = sqrt(-2 ln u1)`; u1 is shifted into (0, 1] so the log is
/// always finite. Deviates are emitted in that order.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::new(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.rng.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Lorenz system parameters and integration settings.
///
/// The vector field is the standard one: ẋ = σ(y−x), ẏ = x(ρ−z) − y,
/// ż = xy − βz, integrated with fixed-step RK4.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzParams {
    pub rho: f64,
    pub sigma: f64,
    pub beta: f64,
    /// Integration step in seconds; the output sample rate is `1/dt`.
    pub dt: f64,
    /// Steps integrated and discarded before sampling starts.
    pub transient_steps: usize,
    pub initial_state: [f64; 3],
}

impl LorenzParams {
    /// ρ=28, σ=10, β=8/3, dt=0.01, 1000-step transient, start (1, 1, 1).
    pub fn chaotic() -> Self {
        Self {
            rho: 28.0,
            sigma: 10.0,
            beta: 8.0 / 3.0,
            dt: 0.01,
            transient_steps: 1000,
            initial_state: [1.0, 1.0, 1.0],
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive and finite, got {}",
                self.dt
            )));
        }
        for (i, v) in [self.rho, self.sigma, self.beta].iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "Lorenz parameter {i} is not finite"
                )));
            }
        }
        Ok(())
    }
}

fn lorenz_derivative(p: &LorenzParams, s: [f64; 3]) -> [f64; 3] {
    [
        p.sigma * (s[1] - s[0]),
        s[0] * (p.rho - s[2]) - s[1],
        s[0] * s[1] - p.beta * s[2],
    ]
}

fn rk4_step(p: &LorenzParams, s: [f64; 3]) -> [f64; 3] {
    let h = p.dt;
    let k1 = lorenz_derivative(p, s);
    let k2 = lorenz_derivative(
        p,
        [
            s[0] + 0.5 * h * k1[0],
            s[1] + 0.5 * h * k1[1],
            s[2] + 0.5 * h * k1[2],
        ],
    );
    let k3 = lorenz_derivative(
        p,
        [
            s[0] + 0.5 * h * k2[0],
            s[1] + 0.5 * h * k2[1],
            s[2] + 0.5 * h * k2[2],
        ],
    );
    let k4 = lorenz_derivative(p, [s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]]);
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Integrate the Lorenz system and return `n_samples` full (x, y, z) states
/// taken every step after the transient. The first recorded state is the
/// one reached at the end of the transient.
pub fn gen_lorenz_states(params: &LorenzParams, n_samples: usize) -> Result<Vec<[f64; 3]>> {
    params.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let mut state = params.initial_state;
    let mut step = 0usize;
    let check = |s: [f64; 3], step: usize| -> Result<[f64; 3]> {
        if s.iter().all(|v| v.is_finite()) {
            Ok(s)
        } else {
            Err(Error::IntegrationDiverged { step })
        }
    };
    for _ in 0..params.transient_steps {
        state = check(rk4_step(params, state), step)?;
        step += 1;
    }
    let mut out = Vec::with_capacity(n_samples);
    out.push(state);
    for _ in 1..n_samples {
        state = check(rk4_step(params, state), step)?;
        step += 1;
        out.push(state);
    }
    Ok(out)
}

/// The x-component of the Lorenz trajectory as a time series
/// (sample rate `1/dt`).
pub fn gen_lorenz_x(params: &LorenzParams, n_samples: usize) -> Result<TimeSeries> {
    let states = gen_lorenz_states(params, n_samples)?;
    TimeSeries::new(
        states.iter().map(|s| s[0]).collect(),
        1.0 / params.dt,
        "lorenz_x",
    )
}

/// Seeded iid standard normal samples (zero mean, unit variance).
pub fn gen_gaussian_noise(seed: u64, n_samples: usize) -> Result<TimeSeries> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let mut source = GaussianSource::new(seed);
    let samples = (0..n_samples).map(|_| source.sample()).collect();
    TimeSeries::new(samples, 1.0, "gaussian_noise")
}

/// Super-positioned harmonic oscillation `sin(t/5) · sin(5t/100)` with the
/// sample index as t, starting at t = 0.
pub fn gen_harmonic(n_samples: usize) -> Result<TimeSeries> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let samples = (0..n_samples)
        .map(|i| {
            let t = i as f64;
            (t * (1.0 / 5.0)).sin() * (t * (5.0 / 100.0)).sin()
        })
        .collect();
    TimeSeries::new(samples, 1.0, "harmonic")
}

/// Logistic map `x_{i+1} = 4 x_i (1 − x_i)` corrupted with a linearly
/// increasing drift: the emitted value at index i is `x_i + 0.01·i`.
pub fn gen_logistic_drift(x0: f64, n_samples: usize) -> Result<TimeSeries> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "logistic x0 must lie strictly inside (0, 1), got {x0}"
        )));
    }
    let mut x = x0;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        samples.push(x + 0.01 * i as f64);
        x = 4.0 * x * (1.0 - x);
    }
    TimeSeries::new(samples, 1.0, "logistic_drift")
}

/// Brownian motion `x_{i+1} = x_i + 2·z_i` with seeded standard normal
/// increments z_i, starting from x_0 = 0.
pub fn gen_brownian(seed: u64, n_samples: usize) -> Result<TimeSeries> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let mut source = GaussianSource::new(seed);
    let mut x = 0.0;
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        samples.push(x);
        x += 2.0 * source.sample();
    }
    TimeSeries::new(samples, 1.0, "brownian")
}
