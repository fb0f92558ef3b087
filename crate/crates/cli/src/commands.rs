//! Implementations behind the subcommands. Each returns a [`Report`]
//! plus an exit disposition; rendering and I/O live in the crate root.

use macrocat_core::coherence::{self, EnvelopeModel, GridSpec, GridState};
use macrocat_core::game::{
    p_guess_cat, p_guess_tms, sigma_max_cat, sigma_max_cat_sign_binning, sigma_max_tms,
    sigma_max_tms_printed, simulate_cat_game, simulate_tms_game, GameParams, StateKind,
};
use macrocat_core::gaussian::GaussianState;
use macrocat_core::macroscopicity::{
    coherence_range, equivalent_cat_photon_number, n_eff_cat, n_eff_lower_bound_both,
    n_eff_pure_gaussian,
};
use macrocat_core::cavity;

use crate::fig1::{self, IngestOutcome};
use crate::report::{fmt_f64, Report};
use crate::{verify, CliError};

fn kv(key: &str, value: f64) -> (String, String) {
    (key.to_string(), fmt_f64(value))
}

fn state_section(report: &mut Report, title: &str, state: &GaussianState) -> Result<(), CliError> {
    let (v_x_sum, v_p_diff) = state
        .squeezed_pair_variances()
        .map_err(|e| CliError::Data(e.to_string()))?;
    let (v_x_diff, v_p_sum) = state
        .antisqueezed_pair_variances()
        .map_err(|e| CliError::Data(e.to_string()))?;
    let witness = state
        .duan_simon_value(1.0, 0.0, std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::FRAC_PI_2)
        .map_err(|e| CliError::Data(e.to_string()))?;
    report.push_key_values(
        title,
        vec![
            kv("mean_photon_number", state.mean_photon_number()),
            kv("v_x_sum", v_x_sum),
            kv("v_p_diff", v_p_diff),
            kv("v_x_diff", v_x_diff),
            kv("v_p_sum", v_p_sum),
            kv("duan_simon", witness),
        ],
    );
    Ok(())
}

/// `state`: two-mode squeezed statistics before and after optional
/// loss / quadrature noise.
pub fn cmd_state(g: f64, eta: Option<f64>, dh: Option<f64>) -> Result<Report, CliError> {
    let state =
        GaussianState::two_mode_squeezed_vacuum(g).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut report = Report::default();
    report.push_key_values("input", vec![kv("g", g)]);
    state_section(&mut report, "ideal state", &state)?;

    if eta.is_some() || dh.is_some() {
        let mut noisy = state;
        let mut rows = Vec::new();
        if let Some(eta) = eta {
            noisy = noisy
                .apply_loss(&[eta, eta])
                .map_err(|e| CliError::Usage(e.to_string()))?;
            rows.push(kv("eta", eta));
        }
        if let Some(dh) = dh {
            noisy = noisy
                .apply_quadrature_noise(0, 0.0, dh)
                .and_then(|s| s.apply_quadrature_noise(1, 0.0, dh))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            rows.push(kv("dh_per_mode", dh));
        }
        report.push_key_values("applied noise", rows);
        state_section(&mut report, "noisy state", &noisy)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GameKind {
    Tms,
    Cat,
}

/// `game`: analytic vs Monte Carlo guess probability, plus the
/// tolerable-noise table at the target probability. The run fails the
/// gate (exit 3) when the simulation strays beyond five standard
/// errors of the closed form.
#[allow(clippy::too_many_arguments)]
pub fn cmd_game(
    kind: GameKind,
    g: Option<f64>,
    alpha: Option<f64>,
    sigma: f64,
    samples: u64,
    p_target: f64,
    seed: u64,
) -> Result<Report, CliError> {
    let mut report = Report::default();
    let (analytic, empirical, rows) = match kind {
        GameKind::Tms => {
            let g = g.ok_or_else(|| CliError::Usage("tms game needs --g".into()))?;
            let params = GameParams::new(StateKind::Tms { g }, sigma, samples, seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let result = simulate_tms_game(&params).map_err(|e| CliError::Usage(e.to_string()))?;
            let analytic = p_guess_tms(g, sigma);
            let sigma_exact = sigma_max_tms(p_target, g)
                .map_err(|e| CliError::Data(format!("sigma_max at p_target {p_target}: {e}")))?;
            let mut rows = vec![
                kv("g", g),
                kv("sigma", sigma),
                kv("p_target", p_target),
                kv("sigma_max", sigma_exact),
                kv("p_round_trip", p_guess_tms(g, sigma_exact)),
            ];
            match sigma_max_tms_printed(p_target, g) {
                Some(v) => rows.push(kv("sigma_max_printed_form", v)),
                None => rows.push((
                    "sigma_max_printed_form".into(),
                    "negative radicand".into(),
                )),
            }
            (analytic, result, rows)
        }
        GameKind::Cat => {
            let alpha = alpha.ok_or_else(|| CliError::Usage("cat game needs --alpha".into()))?;
            let params = GameParams::new(StateKind::Cat { alpha }, sigma, samples, seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let result = simulate_cat_game(&params).map_err(|e| CliError::Usage(e.to_string()))?;
            let analytic = p_guess_cat(alpha, sigma);
            let printed = sigma_max_cat(p_target, alpha)
                .map_err(|e| CliError::Data(format!("sigma_max at p_target {p_target}: {e}")))?;
            let binning = sigma_max_cat_sign_binning(p_target, alpha)
                .map_err(|e| CliError::Data(format!("sigma_max at p_target {p_target}: {e}")))?;
            let rows = vec![
                kv("alpha", alpha),
                kv("sigma", sigma),
                kv("p_target", p_target),
                kv("sigma_max_printed_form", printed),
                kv("sigma_max_sign_binning", binning),
                kv("p_round_trip_sign_binning", p_guess_cat(alpha, binning)),
            ];
            (analytic, result, rows)
        }
    };

    report.push_key_values(
        "guess probability",
        vec![
            kv("analytic", analytic),
            kv("empirical", empirical.p_guess_empirical),
            kv("standard_error", empirical.standard_error),
            (
                "samples".into(),
                empirical.samples_used.to_string(),
            ),
        ],
    );
    report.push_key_values("tolerable noise", rows);

    let gate = 5.0 * empirical.standard_error;
    if (empirical.p_guess_empirical - analytic).abs() >= gate {
        return Err(CliError::Gate(format!(
            "empirical {} deviates from analytic {} by more than 5 standard errors ({})",
            fmt_f64(empirical.p_guess_empirical),
            fmt_f64(analytic),
            fmt_f64(gate)
        )));
    }
    Ok(report)
}

fn fig1_table(report: &mut Report, outcome: &IngestOutcome) {
    let rows = outcome
        .rows
        .iter()
        .map(|r| {
            vec![
                r.label.clone(),
                r.year.to_string(),
                fmt_f64(r.v_minus),
                fmt_f64(r.n_eff_as_printed),
                fmt_f64(r.n_eff_derivation_consistent),
                fmt_f64(r.equivalent_cat_n_as_printed),
                fmt_f64(r.equivalent_cat_n_derivation_consistent),
                fmt_f64(r.x_c),
            ]
        })
        .collect();
    report.push_table(
        "effective-size bounds",
        fig1::OUTPUT_HEADER.iter().map(|s| s.to_string()).collect(),
        rows,
    );
    if !outcome.skipped.is_empty() {
        let rows = outcome
            .skipped
            .iter()
            .map(|s| vec![s.line.to_string(), s.label.clone(), s.reason.clone()])
            .collect();
        report.push_table(
            "skipped records",
            vec!["line".into(), "label".into(), "reason".into()],
            rows,
        );
    }
}

/// `ingest`: experiment CSV in, per-record size table out (sorted by
/// year). With `recompute`, the input is a previously emitted table
/// whose derived columns are rebuilt from scratch.
pub fn cmd_ingest(path: &str, recompute: bool) -> Result<Report, CliError> {
    let (records, skipped) = if recompute {
        fig1::read_fig1_csv(path)?
    } else {
        fig1::read_experiment_csv(path)?
    };
    let outcome = fig1::ingest(records, skipped)?;
    let mut report = Report::default();
    fig1_table(&mut report, &outcome);
    Ok(report)
}

/// `cavity`: sweep of the squeezed/anti-squeezed variances with the
/// threshold classification and long-time limits.
pub fn cmd_cavity(chi: f64, lambda: f64, t_max: f64, steps: usize) -> Result<Report, CliError> {
    if steps == 0 {
        return Err(CliError::Usage("steps must be >= 1".into()));
    }
    if !(t_max > 0.0) {
        return Err(CliError::Usage("t-max must be positive".into()));
    }
    let threshold =
        cavity::threshold_report(chi, lambda).map_err(|e| CliError::Usage(e.to_string()))?;
    let class = match threshold.class {
        cavity::ThresholdClass::Below => "below",
        cavity::ThresholdClass::At => "at",
        cavity::ThresholdClass::Above => "above",
    };
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = t_max * i as f64 / steps as f64;
        let params =
            cavity::CavityParams::new(chi, lambda, t).map_err(|e| CliError::Usage(e.to_string()))?;
        let (minus, plus) = cavity::delta_variances(&params);
        rows.push(vec![
            fmt_f64(t),
            fmt_f64(minus),
            fmt_f64(plus),
            class.to_string(),
            fmt_f64(threshold.delta_minus_limit),
            threshold.delta_plus_limit.map_or_else(|| "unbounded".to_string(), fmt_f64),
        ]);
    }
    let mut report = Report::default();
    report.push_key_values("rates", vec![kv("chi", chi), kv("lambda", lambda)]);
    report.push_table(
        "variance sweep",
        vec![
            "t".into(),
            "delta_minus".into(),
            "delta_plus".into(),
            "threshold".into(),
            "delta_minus_limit".into(),
            "delta_plus_limit".into(),
        ],
        rows,
    );
    Ok(report)
}

/// `coherence`: build the squeezed grid state under the requested
/// envelope and print ideal vs decohered variances plus the certified
/// width.
pub fn cmd_coherence(
    g: f64,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
    epsilon: Option<f64>,
    points: usize,
    half_range: f64,
) -> Result<Report, CliError> {
    let envelope = match (gamma1, gamma2, epsilon) {
        (None, None, None) => EnvelopeModel::Unity,
        (Some(g1), Some(g2), None) => EnvelopeModel::Gaussian { gamma1: g1, gamma2: g2 },
        (None, None, Some(eps)) => EnvelopeModel::Step { epsilon: eps },
        _ => {
            return Err(CliError::Usage(
                "choose either --gamma1 with --gamma2, or --epsilon, or neither".into(),
            ))
        }
    };
    let spec = GridSpec::new(half_range, points).map_err(|e| CliError::Usage(e.to_string()))?;
    let state = GridState::gaussian_two_mode(spec, (-2.0 * g).exp(), (2.0 * g).exp(), envelope)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let ideal = coherence::momentum_moments_ideal(&state)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let both = coherence::momentum_moments_decohered(&state)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let x = coherence::position_moments(&state);
    let witness = coherence::duan_simon_value(&state)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let width = coherence::certified_coherence_width(both.direct.var_diff())
        .map_err(|e| CliError::Data(e.to_string()))?;

    let mut report = Report::default();
    let envelope_desc = match envelope {
        EnvelopeModel::Unity => "unity".to_string(),
        EnvelopeModel::Gaussian { gamma1, gamma2 } => {
            format!("gaussian({},{})", fmt_f64(gamma1), fmt_f64(gamma2))
        }
        EnvelopeModel::Step { epsilon } => format!("step({})", fmt_f64(epsilon)),
    };
    report.push_key_values(
        "configuration",
        vec![
            kv("g", g),
            ("envelope".into(), envelope_desc),
            ("points".into(), points.to_string()),
            kv("half_range", half_range),
        ],
    );
    report.push_key_values(
        "ideal moments",
        vec![
            kv("v_p_sum", ideal.var_sum()),
            kv("v_p_diff", ideal.var_diff()),
            kv("v_x_sum", x.var_sum()),
            kv("v_x_diff", x.var_diff()),
        ],
    );
    let mut rows = vec![
        kv("v_p_sum_direct", both.direct.var_sum()),
        kv("v_p_diff_direct", both.direct.var_diff()),
    ];
    match both.decomposition {
        Some(d) => {
            rows.push(kv("v_p_sum_decomposition", d.var_sum()));
            rows.push(kv("v_p_diff_decomposition", d.var_diff()));
        }
        None => rows.push((
            "decomposition".into(),
            "unsupported for this envelope".into(),
        )),
    }
    rows.push(kv("duan_simon", witness));
    rows.push(kv("certified_width", width));
    report.push_key_values("decohered moments", rows);
    Ok(report)
}

/// `neff`: effective-size evaluations for one of the three inputs.
pub fn cmd_neff(
    g: Option<f64>,
    v_minus: Option<f64>,
    alpha_sq: Option<f64>,
) -> Result<Report, CliError> {
    let mut report = Report::default();
    match (g, v_minus, alpha_sq) {
        (Some(g), None, None) => {
            let state = GaussianState::two_mode_squeezed_vacuum(g)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let exact = n_eff_pure_gaussian(&state).map_err(|e| CliError::Data(e.to_string()))?;
            let angles = exact.optimal_angles.clone().unwrap_or_default();
            report.push_key_values(
                "exact pure-state size",
                vec![
                    kv("g", g),
                    kv("n_eff", exact.n_eff),
                    (
                        "optimal_angles".into(),
                        angles.iter().map(|a| fmt_f64(*a)).collect::<Vec<_>>().join(";"),
                    ),
                ],
            );
            let v = state
                .conjugate_squeezed_variance()
                .map_err(|e| CliError::Data(e.to_string()))?;
            bound_section(&mut report, v)?;
        }
        (None, Some(v), None) => {
            report.push_key_values("input", vec![kv("v_minus", v)]);
            bound_section(&mut report, v)?;
        }
        (None, None, Some(a2)) => {
            if !(a2 >= 0.0) {
                return Err(CliError::Usage("alpha-sq must be >= 0".into()));
            }
            report.push_key_values(
                "cat effective size",
                vec![
                    kv("alpha_sq", a2),
                    kv("n_eff", n_eff_cat(a2)),
                    kv("photon_number", a2 * a2.tanh()),
                ],
            );
        }
        _ => {
            return Err(CliError::Usage(
                "choose exactly one of --g, --v-minus, --alpha-sq".into(),
            ))
        }
    }
    Ok(report)
}

fn bound_section(report: &mut Report, v_minus: f64) -> Result<(), CliError> {
    let (printed, consistent) =
        n_eff_lower_bound_both(v_minus).map_err(|e| CliError::Data(e.to_string()))?;
    let x_c = coherence_range(v_minus).map_err(|e| CliError::Data(e.to_string()))?;
    report.push_key_values(
        "variance lower bound",
        vec![
            kv("v_minus", v_minus),
            kv("n_eff_as_printed", printed),
            kv("n_eff_derivation_consistent", consistent),
            kv(
                "equivalent_cat_n_as_printed",
                equivalent_cat_photon_number(printed).map_err(|e| CliError::Data(e.to_string()))?,
            ),
            kv(
                "equivalent_cat_n_derivation_consistent",
                equivalent_cat_photon_number(consistent)
                    .map_err(|e| CliError::Data(e.to_string()))?,
            ),
            kv("x_c", x_c),
        ],
    );
    Ok(())
}

/// `verify`: the oracle-agreement gate.
pub fn cmd_verify(seed: u64) -> Result<Report, CliError> {
    let checks = verify::run_suite(seed);
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                format!("{:.3e}", c.max_deviation),
                format!("{:.3e}", c.tolerance),
                if c.passed() { "PASS".to_string() } else { "FAIL".to_string() },
            ]
        })
        .collect();
    let mut report = Report::default();
    report.push_table(
        "oracle agreement",
        vec!["check".into(), "max_deviation".into(), "tolerance".into(), "status".into()],
        rows,
    );
    let failures: Vec<&str> =
        checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if !failures.is_empty() {
        // The report still prints before the gate fires.
        return Err(CliError::GateWithReport(
            report,
            format!("verification gate failed: {}", failures.join(", ")),
        ));
    }
    Ok(report)
}
