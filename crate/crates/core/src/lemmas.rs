//! Numerical checks of two one-dimensional lemmas used for the uniform
//! closeness of rescaled minimizers: a bound on a fractional derivative and
//! a comparison principle for integro-differential inequalities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlocal::check_s;
use crate::numeric::special::gamma;
use crate::numeric::{GaussLegendre, KahanSum};
use crate::parallel::map_slice;

const NODES: usize = 8;
/// Violations up to this many error bars are attributed to quadrature.
pub const ERROR_BARS: f64 = 3.0;

/// Closed registry of absolutely continuous monotone profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Zero,
    /// `e^{−αt}`, non-increasing.
    Exp { alpha: f64 },
    /// `max(0, 1 − t/T)^q`, non-increasing.
    Ramp { end: f64, power: f64 },
    /// `t^q`, non-decreasing from 0.
    Power { q: f64 },
    /// `1 − e^{−αt}`, non-decreasing from 0.
    Saturating { alpha: f64 },
    /// `min(1, t/T)`, non-decreasing from 0.
    RampUp { end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    NonIncreasing,
    NonDecreasing,
    /// The zero profile, which both cases accept.
    Both,
}

impl Profile {
    pub fn monotone(&self) -> Monotone {
        match self {
            Profile::Zero => Monotone::Both,
            Profile::Exp { .. } | Profile::Ramp { .. } => Monotone::NonIncreasing,
            _ => Monotone::NonDecreasing,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Exp { alpha } => (-alpha * t).exp(),
            Profile::Ramp { end, power } => (1.0 - t / end).max(0.0).powf(power),
            Profile::Power { q } => t.max(0.0).powf(q),
            Profile::Saturating { alpha } => 1.0 - (-alpha * t.max(0.0)).exp(),
            Profile::RampUp { end } => (t / end).clamp(0.0, 1.0),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Exp { alpha } => -alpha * (-alpha * t).exp(),
            Profile::Ramp { end, power } => {
                if t < end {
                    -power / end * (1.0 - t / end).powf(power - 1.0)
                } else {
                    0.0
                }
            }
            Profile::Power { q } => q * t.max(0.0).powf(q - 1.0),
            Profile::Saturating { alpha } => alpha * (-alpha * t).exp(),
            Profile::RampUp { end } => {
                if t < end {
                    1.0 / end
                } else {
                    0.0
                }
            }
        }
    }

    /// Points where the derivative may jump.
    fn kinks(&self) -> Vec<f64> {
        match *self {
            Profile::Ramp { end, .. } | Profile::RampUp { end } => vec![end],
            _ => Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Profile::Zero => true,
            Profile::Exp { alpha } | Profile::Saturating { alpha } => alpha.is_finite() && alpha > 0.0,
            Profile::Ramp { end, power } => end.is_finite() && end > 0.0 && power >= 1.0,
            Profile::Power { q } => q.is_finite() && q >= 1.0,
            Profile::RampUp { end } => end.is_finite() && end > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid profile parameters {self:?}")))
        }
    }

    /// Samples the profile on `[lo, hi]` and confirms the advertised
    /// monotonicity and sign.
    fn check_monotone(&self, lo: f64, hi: f64, want: Monotone) -> Result<()> {
        let n = 2000;
        let mut prev = self.value(lo);
        for i in 1..=n {
            let v = self.value(lo + (hi - lo) * i as f64 / n as f64);
            let bad = v < 0.0
                || match want {
                    Monotone::NonIncreasing => v > prev,
                    Monotone::NonDecreasing => v < prev,
                    Monotone::Both => false,
                };
            if bad {
                return Err(Error::Monotonicity(format!("{self:?} is not {want:?} on [{lo}, {hi}]")));
            }
            prev = v;
        }
        Ok(())
    }

    /// `∫_T^∞ f'(t)(t − r)^{−s} dt`, in closed form.
    fn tail(&self, r: f64, cut: f64, s: f64) -> f64 {
        match *self {
            Profile::Exp { alpha } => {
                let q = statrs::function::gamma::gamma_ur(1.0 - s, alpha * (cut - r));
                -alpha.powf(s) * (-alpha * r).exp() * gamma(1.0 - s) * q
            }
            _ => 0.0,
        }
    }

    /// Truncation point beyond which `f'` is zero or its tail is below
    /// `1e−12` and handled by [`Profile::tail`].
    fn cutoff(&self, r: f64) -> Option<f64> {
        match *self {
            Profile::Zero => None,
            Profile::Exp { alpha } => Some(r + 28.0 / alpha),
            Profile::Ramp { end, .. } => (end > r).then_some(end),
            _ => None,
        }
    }
}

/// Fractional-derivative bound probe on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaProbe {
    pub f: Profile,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    /// Composite panels per subinterval; the error bar compares with `4×`.
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Non-increasing profile on `[a, ∞)`, bound `(b−a)^{1−s} f(a)`.
    Decreasing,
    /// Non-decreasing profile on `[0, b]`, bound `(b−a)^{1−s} f(b)`.
    Increasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub case: Case,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub pass: bool,
}

fn composite(gl: &GaussLegendre, breaks: &[f64], panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = KahanSum::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            acc.add(gl.integrate_composite(w[0], w[1], panels, &f));
        }
    }
    acc.value()
}

fn breakpoints(lo: f64, hi: f64, inner: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v = vec![lo];
    v.extend(inner.into_iter().filter(|x| *x > lo && *x < hi));
    v.push(hi);
    v.sort_by(f64::total_cmp);
    v
}

/// `−(1−s)∫_a^b dr ∫_r^∞ f'(t)(t−r)^{−s} dt`, with `t = r + u^{1/(1−s)}`.
fn decreasing_lhs(f: &Profile, a: f64, b: f64, s: f64, panels: usize) -> f64 {
    let gl = GaussLegendre::new(NODES);
    let p = 1.0 / (1.0 - s);
    let inner = |r: f64| -> f64 {
        let Some(cut) = f.cutoff(r) else { return 0.0 };
        let kinks = f.kinks().into_iter().filter(|t| *t > r && *t < cut).map(|t| (t - r).powf(1.0 - s));
        let ub = (cut - r).powf(1.0 - s);
        let u = composite(&gl, &breakpoints(0.0, ub, kinks), panels, |u| f.derivative(r + u.powf(p)));
        u + (1.0 - s) * f.tail(r, cut, s)
    };
    -composite(&gl, &breakpoints(a, b, f.kinks()), panels, inner)
}

/// `(1−s)∫_a^b dr ∫_0^r f'(t)(r−t)^{−s} dt`, with `t = r − u^{1/(1−s)}`.
fn increasing_lhs(f: &Profile, a: f64, b: f64, s: f64, panels: usize) -> f64 {
    let gl = GaussLegendre::new(NODES);
    let p = 1.0 / (1.0 - s);
    let inner = |r: f64| -> f64 {
        let kinks = f.kinks().into_iter().filter(|t| *t < r && *t > 0.0).map(|t| (r - t).powf(1.0 - s));
        let ub = r.powf(1.0 - s);
        composite(&gl, &breakpoints(0.0, ub, kinks), panels, |u| f.derivative(r - u.powf(p)))
    };
    composite(&gl, &breakpoints(a, b, f.kinks()), panels, inner)
}

fn validate_interval(a: f64, b: f64, s: f64) -> Result<()> {
    check_s(s)?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("need a < b, got [{a}, {b}]")));
    }
    Ok(())
}

fn bound_check(probe: &LemmaProbe, case: Case) -> Result<BoundCheck> {
    let LemmaProbe { f, a, b, s, panels } = *probe;
    let panels = panels.max(1);
    let (coarse, fine, rhs) = match case {
        Case::Decreasing => {
            f.check_monotone(a, b.max(a + 1.0) + f.kinks().into_iter().fold(0.0, f64::max), Monotone::NonIncreasing)?;
            (
                decreasing_lhs(&f, a, b, s, panels),
                decreasing_lhs(&f, a, b, s, 4 * panels),
                (b - a).powf(1.0 - s) * f.value(a),
            )
        }
        Case::Increasing => {
            if a < 0.0 {
                return Err(Error::InvalidParameter(format!("increasing case lives on [0, b], got a = {a}")));
            }
            f.check_monotone(0.0, b, Monotone::NonDecreasing)?;
            if f.value(0.0) != 0.0 {
                return Err(Error::InvalidParameter("increasing profile must vanish at 0".into()));
            }
            (
                increasing_lhs(&f, a, b, s, panels),
                increasing_lhs(&f, a, b, s, 4 * panels),
                (b - a).powf(1.0 - s) * f.value(b),
            )
        }
    };
    let error = (fine - coarse).abs() + 64.0 * f64::EPSILON * fine.abs().max(rhs.abs());
    Ok(BoundCheck {
        case,
        lhs: fine,
        rhs,
        error,
        margin: rhs - fine,
        pass: fine - rhs <= ERROR_BARS * error,
    })
}

/// The fractional-derivative bound in whichever case the profile's
/// monotonicity selects; the zero profile is checked in both.
pub fn frac_derivative_bound_check(probe: &LemmaProbe) -> Result<Vec<BoundCheck>> {
    probe.f.validate()?;
    validate_interval(probe.a, probe.b, probe.s)?;
    match probe.f.monotone() {
        Monotone::NonIncreasing => Ok(vec![bound_check(probe, Case::Decreasing)?]),
        Monotone::NonDecreasing => Ok(vec![bound_check(probe, Case::Increasing)?]),
        Monotone::Both => Ok(vec![
            bound_check(probe, Case::Decreasing)?,
            bound_check(probe, Case::Increasing)?,
        ]),
    }
}

/// Cap profile `[A^{s/N} − k(s/N)(ρ − a)]_+^{N/s}`; it solves
/// `k∫_ρ^∞ h^{(N−s)/N} = h(ρ)` with `h(a) = A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub height: f64,
    pub rate: f64,
    pub a: f64,
    pub s: f64,
    pub dim: usize,
}

impl Cap {
    pub fn support_end(&self) -> f64 {
        let n = self.dim as f64;
        self.a + self.height.powf(self.s / n) * n / (self.s * self.rate)
    }

    pub fn value(&self, rho: f64) -> f64 {
        if rho <= self.a {
            return self.height;
        }
        let n = self.dim as f64;
        let base = self.height.powf(self.s / n) - self.rate * self.s / n * (rho - self.a);
        if base <= 0.0 {
            0.0
        } else {
            base.powf(n / self.s)
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("unsupported dimension {dim}")))
    }
}

/// `∫_lo^hi u^{(N−s)/N}` with breakpoint at the cap's support end, at
/// `panels` and `4·panels`.
fn cap_power_integral(u: &dyn Fn(f64) -> f64, lo: f64, hi: f64, end: f64, s: f64, dim: usize, panels: usize) -> (f64, f64) {
    let gl = GaussLegendre::new(NODES);
    let e = (dim as f64 - s) / dim as f64;
    let br = breakpoints(lo, hi, [end]);
    let f = |r: f64| u(r).powf(e);
    (composite(&gl, &br, panels, f), composite(&gl, &br, 4 * panels, f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxReport {
    /// `h(a) = 2u(a)` holds exactly.
    pub h_at_a_exact: bool,
    pub probes: usize,
    /// Largest `|c∫_ρ^b h^{(N−s)/N} − h(ρ)|` relative to `max(h(ρ), 1e−300)`.
    pub max_relative_error: f64,
    /// Largest absolute violation minus three error bars (pass when ≤ 0).
    pub worst_excess: f64,
    pub pass: bool,
}

/// Checks `c∫_ρ^b h^{(N−s)/N} dr = h(ρ)` for the auxiliary profile built
/// from `u(a)`, at 50 points spread over `[a, b]`.
pub fn aux_h_identity(u_a: f64, a: f64, b: f64, s: f64, c: f64, dim: usize) -> Result<AuxReport> {
    validate_interval(a, b, s)?;
    check_dim(dim)?;
    if !(u_a.is_finite() && u_a >= 0.0 && c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("need u(a) ≥ 0 and c > 0, got {u_a}, {c}")));
    }
    let h = Cap { height: 2.0 * u_a, rate: c, a, s, dim };
    let end = h.support_end();
    if end > b {
        return Err(Error::Support(format!("support ends at {end}, beyond b = {b}")));
    }
    let probes = 50;
    let rows: Vec<(f64, f64)> = map_slice(&(0..probes).collect::<Vec<_>>(), |&i| {
        let rho = a + (b - a) * i as f64 / (probes - 1) as f64;
        let (q1, q4) = cap_power_integral(&|r| h.value(r), rho, b, end, s, dim, 8);
        let lhs = c * q4;
        let target = h.value(rho);
        let err = c * (q4 - q1).abs() + 64.0 * f64::EPSILON * target;
        let diff = (lhs - target).abs();
        (diff / target.max(1e-300), diff - ERROR_BARS * err)
    });
    let max_relative_error = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_excess = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let h_at_a_exact = h.value(a) == 2.0 * u_a;
    Ok(AuxReport {
        h_at_a_exact,
        probes,
        max_relative_error,
        worst_excess,
        pass: h_at_a_exact && worst_excess <= 0.0,
    })
}

/// Comparison-lemma input: `θ` times a cap, on `[a, b]`, optionally
/// mirrored to a non-decreasing profile `w(ρ) = u(a + b − ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonProbe {
    pub theta: f64,
    pub cap: Cap,
    pub b: f64,
    pub c: f64,
    pub mirrored: bool,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonStatus {
    Pass,
    Fail,
    HypothesisNotSatisfied,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// `a + (2u(a))^{s/N} N/(sc)` (or its mirror image).
    pub predicted_zero: f64,
    pub value_at_prediction: f64,
    /// Largest `2c∫ u^{(N−s)/N} − u(ρ)` over the grid, with its error bar.
    pub hypothesis_excess: f64,
    pub hypothesis_error: f64,
    pub status: ComparisonStatus,
}

impl ComparisonProbe {
    fn eval(&self, rho: f64) -> f64 {
        let x = if self.mirrored { self.cap.a + self.b - rho } else { rho };
        self.theta * self.cap.value(x)
    }
}

/// Verifies the hypothesis `2c∫ u^{(N−s)/N} ≤ u(ρ)` on a grid and, when it
/// holds, that `u` vanishes at the predicted point.
pub fn comparison_lemma_check(probe: &ComparisonProbe, dim: usize) -> Result<ComparisonReport> {
    let ComparisonProbe { theta, cap, b, c, mirrored, panels } = *probe;
    let (a, s) = (cap.a, cap.s);
    validate_interval(a, b, s)?;
    check_dim(dim)?;
    if cap.dim != dim {
        return Err(Error::Incompatible(format!("cap built for N = {}, checked in N = {dim}", cap.dim)));
    }
    if !(theta >= 0.0 && c > 0.0 && cap.height >= 0.0 && cap.rate > 0.0) {
        return Err(Error::InvalidParameter("need θ ≥ 0, c > 0 and a non-negative cap".into()));
    }
    let n = dim as f64;
    let anchor = if mirrored { b } else { a };
    let reach = (2.0 * probe.eval(anchor)).powf(s / n) * n / (s * c);
    let predicted_zero = if mirrored { b - reach } else { a + reach };
    if !(a..=b).contains(&predicted_zero) {
        return Err(Error::Support(format!("predicted zero {predicted_zero} outside [{a}, {b}]")));
    }
    let end = if mirrored { a + b - cap.support_end() } else { cap.support_end() };
    let grid = 200;
    let rows: Vec<(f64, f64)> = map_slice(&(1..grid).collect::<Vec<_>>(), |&i| {
        let rho = a + (b - a) * i as f64 / grid as f64;
        let (lo, hi) = if mirrored { (a, rho) } else { (rho, b) };
        let (q1, q4) = cap_power_integral(&|r| probe.eval(r), lo, hi, end, s, dim, panels.max(1));
        let lhs = 2.0 * c * q4;
        let err = 2.0 * c * (q4 - q1).abs() + 64.0 * f64::EPSILON * lhs.abs().max(probe.eval(rho));
        (lhs - probe.eval(rho), err)
    });
    let (hypothesis_excess, hypothesis_error) = rows
        .iter()
        .cloned()
        .fold((f64::NEG_INFINITY, 0.0), |acc, r| if r.0 - ERROR_BARS * r.1 > acc.0 - ERROR_BARS * acc.1 { r } else { acc });
    let value_at_prediction = probe.eval(predicted_zero);
    let status = if hypothesis_excess > ERROR_BARS * hypothesis_error {
        ComparisonStatus::HypothesisNotSatisfied
    } else if value_at_prediction <= 1e-12 * probe.eval(anchor).max(1.0) {
        ComparisonStatus::Pass
    } else {
        ComparisonStatus::Fail
    };
    Ok(ComparisonReport {
        predicted_zero,
        value_at_prediction,
        hypothesis_excess,
        hypothesis_error,
        status,
    })
}

/// One row of the lemma suite table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub check: String,
    pub probe: String,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub status: String,
    /// Counts toward the suite verdict; probes whose hypothesis fails do not.
    pub asserted: bool,
    pub pass: bool,
}

/// Runs the registered probes of all three checks.
pub fn lemma_suite() -> Result<Vec<SuiteRow>> {
    let mut rows = Vec::new();
    let decreasing = [
        Profile::Zero,
        Profile::Exp { alpha: 1.0 },
        Profile::Exp { alpha: 3.0 },
        Profile::Ramp { end: 1.0, power: 1.0 },
        Profile::Ramp { end: 1.5, power: 2.0 },
    ];
    let increasing = [
        Profile::Power { q: 1.0 },
        Profile::Power { q: 2.0 },
        Profile::Saturating { alpha: 2.0 },
        Profile::RampUp { end: 0.75 },
    ];
    let mut probes = Vec::new();
    for s in [0.2, 0.5, 0.8] {
        for (a, b) in [(0.0, 1.0), (0.5, 2.0)] {
            for f in decreasing.iter().chain(&increasing) {
                probes.push(LemmaProbe { f: *f, a, b, s, panels: 16 });
            }
        }
    }
    for (probe, checks) in probes.iter().zip(map_slice(&probes, frac_derivative_bound_check)) {
        for ch in checks? {
            rows.push(SuiteRow {
                check: "frac_derivative_bound".into(),
                probe: format!("{:?} {:?} a={} b={} s={}", ch.case, probe.f, probe.a, probe.b, probe.s),
                lhs: ch.lhs,
                rhs: ch.rhs,
                error: ch.error,
                status: if ch.pass { "pass" } else { "fail" }.into(),
                asserted: true,
                pass: ch.pass,
            });
        }
    }

    for dim in [1, 2] {
        for s in [0.2, 0.5, 0.8] {
            for u_a in [0.1, 1.0] {
                let c = 1.0;
                let end = Cap { height: 2.0 * u_a, rate: c, a: 0.0, s, dim }.support_end();
                let r = aux_h_identity(u_a, 0.0, end + 0.5, s, c, dim)?;
                rows.push(SuiteRow {
                    check: "aux_h_identity".into(),
                    probe: format!("N={dim} s={s} u(a)={u_a} c={c}"),
                    lhs: r.max_relative_error,
                    rhs: 0.0,
                    error: r.worst_excess,
                    status: if r.pass { "pass" } else { "fail" }.into(),
                    asserted: true,
                    pass: r.pass,
                });
            }
        }
    }

    for dim in [1usize, 2] {
        for s in [0.2, 0.5, 0.8] {
            let c = 1.0;
            let n = dim as f64;
            let threshold = 2f64.powf(n / s);
            // (label, θ, cap rate, asserted)
            let families = [
                ("zero", 0.0, c, true),
                ("equality", 1.0, 2.0 * c, true),
                ("theta_min", threshold, c, true),
                ("theta_2min", 2.0 * threshold, c, true),
                ("h", 1.0, c, false),
                ("half_h", 0.5, c, false),
            ];
            for (label, theta, rate, asserted) in families {
                for mirrored in [false, true] {
                    let height = if label == "equality" { 0.3 } else { 0.3 / theta.max(1.0) };
                    let cap = Cap { height, rate, a: 0.0, s, dim };
                    let reach = (2.0 * theta * height).powf(s / n) * n / (s * c);
                    let b = reach.max(cap.support_end()) + 0.25;
                    let probe = ComparisonProbe { theta, cap, b, c, mirrored, panels: 16 };
                    let r = comparison_lemma_check(&probe, dim)?;
                    let status = match r.status {
                        ComparisonStatus::Pass => "pass",
                        ComparisonStatus::Fail => "fail",
                        ComparisonStatus::HypothesisNotSatisfied => "hypothesis not satisfied",
                    };
                    let pass = match r.status {
                        ComparisonStatus::Pass => true,
                        ComparisonStatus::Fail => false,
                        ComparisonStatus::HypothesisNotSatisfied => !asserted,
                    };
                    rows.push(SuiteRow {
                        check: "comparison_lemma".into(),
                        probe: format!("{label} N={dim} s={s} mirrored={mirrored}"),
                        lhs: r.value_at_prediction,
                        rhs: r.hypothesis_excess,
                        error: r.hypothesis_error,
                        status: status.into(),
                        asserted,
                        pass,
                    });
                }
            }
        }
    }
    Ok(rows)
}
