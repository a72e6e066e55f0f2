//! One function per subcommand; each returns the metrics object for the run
//! report and records every file it reads or writes.

use std::fmt::Write as _;
use std::fs;

use anamorph_core::{
    dcm_exact, dom_decrypt, encrypt_dilation, encrypt_direct, encrypt_original, eoc_extract,
    keygen, AnamorphicKey, Ciphertext, SecurityConfig,
};
use mat_core::{Complex64, ComplexMatrix, DensityMatrix};
use probe_tomography::{dcm_finite, plan_shots, Design, ShotRecord};
use qop_kit::{pad_embed, pad_projector, qotp_encrypt, PauliString};
use qass_compiler::{
    cheat_simulate, qass_reconstruct, qass_share, share_size_report, EncodedQuantumState,
    EtaDomain, ShareBundle,
};
use security_metrics::{
    entropy_report, expected_state_distance, indistinguishability_report, qcpa_average_exact,
    qcpa_average_sampled, trace_distance, twirl_expectation,
};
use seedstream::Stream;
use serde_json::{json, Value};

use crate::report::{parse_u64_list, resolve_seed, CliError, Run};
use crate::{
    AnalyzeArgs, CheatSimArgs, Command, DcmArgs, DcmModeArg, DomArgs, EncryptArgs,
    EncryptOriginalArgs, EntropyArgs, EocArgs, EtaModeArg, QcpaCheckArgs, ReconstructArgs,
    RouteArg, ShareArgs, TpdsArgs, TwirlCheckArgs,
};

pub fn dispatch(command: Command, run: &mut Run) -> Result<Value, CliError> {
    match command {
        Command::Encrypt(args) => encrypt(args, run),
        Command::EncryptOriginal(args) => encrypt_only_original(args, run),
        Command::Dom(args) => dom(args, run),
        Command::Dcm(args) => dcm(args, run),
        Command::Eoc(args) => eoc(args, run),
        Command::Analyze(args) => analyze(args, run),
        Command::Entropy(args) => entropy(args, run),
        Command::TwirlCheck(args) => twirl_check(args, run),
        Command::QcpaCheck(args) => qcpa_check(args, run),
        Command::Share(args) => share(args, run),
        Command::Reconstruct(args) => reconstruct(args, run),
        Command::CheatSim(args) => cheat_sim(args, run),
        Command::Tpds(args) => tpds(args, run),
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report structs serialize")
}

fn encrypt(args: EncryptArgs, run: &mut Run) -> Result<Value, CliError> {
    let mo: DensityMatrix = run.load(&args.original)?;
    let mc: DensityMatrix = run.load(&args.covert)?;
    let seed = resolve_seed(args.seed)?;
    let cfg = SecurityConfig {
        security_bits: args.security_bits,
        ..SecurityConfig::default()
    };
    let mut rng = Stream::root(seed).substream("keygen", 0);
    let key = keygen(&mo, &mc, &cfg, args.eta_mode.into(), &mut rng)?;
    let (ct, dilation) = match args.route {
        RouteArg::Direct => (encrypt_direct(&mo, &mc, &key)?, None),
        RouteArg::Dilation => {
            let (ct, trace) = encrypt_dilation(&mo, &mc, &key)?;
            (ct, Some(trace))
        }
    };
    run.write(&args.key_out, &key)?;
    run.write(&args.out, &ct)?;
    let mut metrics = json!({
        "seed": seed,
        "d1": key.d1,
        "d2": key.d2,
        "eta": key.eta,
        "eta_mode": match args.eta_mode { EtaModeArg::Strict => "strict", EtaModeArg::Weak => "weak" },
        "route": match args.route { RouteArg::Direct => "direct", RouteArg::Dilation => "dilation" },
        "cipher_dim": ct.dim(),
    });
    if let Some(trace) = dilation {
        metrics["kappa"] = json!(trace.kappa);
        metrics["kappa_max"] = json!(trace.kappa_max);
        metrics["lambda"] = json!(trace.lambda);
    }
    Ok(metrics)
}

fn encrypt_only_original(args: EncryptOriginalArgs, run: &mut Run) -> Result<Value, CliError> {
    let mo: DensityMatrix = run.load(&args.original)?;
    let key: AnamorphicKey = run.load(&args.key)?;
    let ct = encrypt_original(&mo, &key)?;
    run.write(&args.out, &ct)?;
    Ok(json!({
        "d1": key.d1,
        "eta": key.eta,
        "cipher_dim": ct.dim(),
    }))
}

fn dom(args: DomArgs, run: &mut Run) -> Result<Value, CliError> {
    let ct: Ciphertext = run.load(&args.ct)?;
    let key: AnamorphicKey = run.load(&args.key)?;
    let mo = dom_decrypt(&ct, &key)?;
    if let Some(out) = &args.out {
        run.write(out, &mo)?;
    }
    Ok(json!({
        "dim": mo.dim(),
        "trace": mo.mat().trace().re,
        "hermitian_residual": mo.mat().hermitian_residual(),
    }))
}

fn shot_log_csv(trials: &[Vec<ShotRecord>], d1: u32) -> String {
    let symbols: Vec<String> = PauliString::enumerate_nonidentity(d1 as usize)
        .iter()
        .map(PauliString::symbol)
        .collect();
    let mut csv = String::from("trial,t,branch,pauli,outcome\n");
    for (trial, shots) in trials.iter().enumerate() {
        for (t, shot) in shots.iter().enumerate() {
            writeln!(
                csv,
                "{trial},{t},{},{},{}",
                shot.branch, symbols[shot.pauli], shot.outcome
            )
            .expect("string write");
        }
    }
    csv
}

fn dcm(args: DcmArgs, run: &mut Run) -> Result<Value, CliError> {
    let ct: Ciphertext = run.load(&args.ct)?;
    let key: AnamorphicKey = run.load(&args.key)?;
    match args.mode {
        DcmModeArg::Exact => {
            let mc = dcm_exact(&ct, &key)?;
            if let Some(out) = &args.out {
                run.write(out, &mc)?;
            }
            Ok(json!({
                "mode": "exact",
                "dim": mc.dim(),
                "trace": mc.mat().trace().re,
            }))
        }
        DcmModeArg::Sampled => {
            if args.trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let seed = resolve_seed(args.seed)?;
            let plan = plan_shots(key.d1, args.eps, args.delta, Design::FramesD2)?;
            let root = Stream::root(seed);
            let mut errors = Vec::new();
            let mut bounds = Vec::new();
            let mut shot_trials = Vec::new();
            let mut first_estimate = None;
            for trial in 0..args.trials {
                let mut rng = root.substream("dcm-trial", trial);
                let (report, shots) = dcm_finite(&ct, &key, &plan, &mut rng)?;
                errors.push(report.b_error_l2);
                bounds.push(report.b_error_trace_bound);
                shot_trials.push(shots);
                if first_estimate.is_none() {
                    first_estimate = Some(report.mc_hat);
                }
            }
            if let Some(out) = &args.out {
                run.write(out, first_estimate.as_ref().expect("at least one trial"))?;
            }
            if let Some(log) = &args.shot_log {
                run.write_text(log, &shot_log_csv(&shot_trials, key.d1))?;
            }
            let failures = errors.iter().filter(|&&e| e > args.eps).count();
            Ok(json!({
                "mode": "sampled",
                "seed": seed,
                "eps": args.eps,
                "delta": args.delta,
                "n_shots": plan.n_shots,
                "allocation": plan.allocation,
                "trials": args.trials,
                "b_error_l2": errors,
                "b_error_trace_bound": bounds,
                "failures": failures,
                "failure_rate": failures as f64 / args.trials as f64,
            }))
        }
    }
}

fn eoc(args: EocArgs, run: &mut Run) -> Result<Value, CliError> {
    let ct: Ciphertext = run.load(&args.ct)?;
    let key: AnamorphicKey = run.load(&args.key)?;
    let honest = eoc_extract(&ct, &key)?;
    run.write(&args.out, &honest)?;
    Ok(json!({
        "dim": honest.dim(),
        "trace": honest.dm.mat().trace().re,
    }))
}

fn analyze(args: AnalyzeArgs, run: &mut Run) -> Result<Value, CliError> {
    let ct0: Ciphertext = run.load(&args.ct0)?;
    let ct1: Ciphertext = run.load(&args.ct1)?;
    if ct0.d1 != ct1.d1 {
        return Err(CliError::Schema(format!(
            "ciphertexts carry different message sizes: {} vs {}",
            ct0.d1, ct1.d1
        )));
    }
    let report = indistinguishability_report(&ct0, &ct1, args.eta)?;
    let mut metrics = to_value(&report);
    metrics["expected_distance"] = json!(1.0 / args.eta as f64);
    Ok(metrics)
}

fn entropy(args: EntropyArgs, run: &mut Run) -> Result<Value, CliError> {
    let mo: DensityMatrix = run.load(&args.original)?;
    let mc: DensityMatrix = run.load(&args.covert)?;
    let key: AnamorphicKey = run.load(&args.key)?;
    let mo_enc = qotp_encrypt(&mo, &key.k)?;
    let mc_enc = qotp_encrypt(&mc, &key.k_prime)?;
    let mc_padded = DensityMatrix::new(pad_embed(mc_enc.mat(), key.d1)?)?;
    let report = entropy_report(&mo_enc, &mc_padded, key.eta)?;
    let mut metrics = to_value(&report);
    metrics["eta"] = json!(key.eta);
    Ok(metrics)
}

/// The two key-averaged cipher states: honest encryption averages to the
/// maximally mixed state; anamorphic encryption additionally carries the
/// padding projector in its off-diagonal quadrants, scaled by the coupling.
fn averaged_block_states(d1: u32, d2: u32, eta: u64) -> (ComplexMatrix, ComplexMatrix) {
    let d = 1usize << d1;
    let n = 2 * d;
    let honest = ComplexMatrix::identity(n).scaled(1.0 / n as f64);
    let proj = pad_projector(d1, d2);
    let off = 1.0 / (eta as f64 * (1u64 << d2) as f64);
    let half = Complex64::new(0.5 / d as f64, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let stego = ComplexMatrix::from_fn(n, n, |r, c| {
        let same_quadrant = (r / d) == (c / d);
        if same_quadrant {
            if r % d == c % d {
                half
            } else {
                zero
            }
        } else {
            proj[(r % d, c % d)].scale(off)
        }
    });
    (honest, stego)
}

fn twirl_check(args: TwirlCheckArgs, run: &mut Run) -> Result<Value, CliError> {
    let _ = run;
    if args.d2 > args.d1 {
        return Err(CliError::Usage(format!(
            "--d2 {} exceeds --d1 {}",
            args.d2, args.d1
        )));
    }
    if args.eta < 2 {
        return Err(CliError::Usage("--eta must be at least 2".into()));
    }
    let (honest, stego) = averaged_block_states(args.d1, args.d2, args.eta);
    let t_honest = twirl_expectation(&honest, args.brute_force)?;
    let t_stego = twirl_expectation(&stego, args.brute_force)?;

    let honest_residual = t_honest.formula_state.max_abs_diff(&honest);
    let distance = trace_distance(
        &DensityMatrix::new(t_honest.formula_state.clone())?,
        &DensityMatrix::new(t_stego.formula_state.clone())?,
    )?;
    let expected = expected_state_distance(args.d1, args.eta);
    let gap = (distance - expected).abs();
    let brute_gap = match (&t_honest.brute_force_state, &t_stego.brute_force_state) {
        (Some(bh), Some(bs)) => Some(
            bh.max_abs_diff(&t_honest.formula_state)
                .max(bs.max_abs_diff(&t_stego.formula_state)),
        ),
        _ => None,
    };

    if honest_residual > 1e-12 {
        return Err(CliError::Failure(format!(
            "honest average deviates from the mixed state by {honest_residual:e}"
        )));
    }
    if gap > 1e-12 {
        return Err(CliError::Failure(format!(
            "twirled distance {distance} misses the closed form {expected} by {gap:e}"
        )));
    }
    if let Some(bg) = brute_gap {
        if bg > 1e-12 {
            return Err(CliError::Failure(format!(
                "brute-force average deviates from the formula by {bg:e}"
            )));
        }
    }
    Ok(json!({
        "n": t_stego.n,
        "eta": args.eta,
        "alpha": t_stego.alpha,
        "beta": t_stego.beta,
        "honest_residual": honest_residual,
        "distance": distance,
        "expected_distance": expected,
        "gap": gap,
        "brute_force_gap": brute_gap,
    }))
}

fn qcpa_check(args: QcpaCheckArgs, run: &mut Run) -> Result<Value, CliError> {
    let _ = run;
    if args.d1 == 1 && args.d2 == 1 {
        let mo = DensityMatrix::maximally_mixed(2);
        let mc_basis = DensityMatrix::basis_state(2, 0);
        let one = Complex64::new(1.0, 0.0);
        let mc_plus = DensityMatrix::pure_state(&[one, one]);
        let first = qcpa_average_exact(&mo, &mc_basis, args.eta)?;
        let second = qcpa_average_exact(&mo, &mc_plus, args.eta)?;
        let inter = trace_distance(&first.avg_state, &second.avg_state)?;
        let worst = first.distance.max(second.distance);
        if inter > 1e-12 || worst > 1e-12 {
            return Err(CliError::Failure(format!(
                "coin average is not constant: inter-pair {inter:e}, formula gap {worst:e}"
            )));
        }
        Ok(json!({
            "mode": "exact",
            "eta": args.eta,
            "coin_count": 384,
            "inter_distance": inter,
            "xi_distance_basis": first.distance,
            "xi_distance_plus": second.distance,
        }))
    } else {
        let seed = resolve_seed(args.seed)?;
        let mo = DensityMatrix::maximally_mixed(1 << args.d1);
        let mc = DensityMatrix::maximally_mixed(1 << args.d2);
        let mut rng = Stream::root(seed).substream("qcpa", 0);
        let report = qcpa_average_sampled(&mo, &mc, args.eta, args.samples, &mut rng)?;
        Ok(json!({
            "mode": "sampled",
            "seed": seed,
            "eta": args.eta,
            "samples": args.samples,
            "distance": report.distance,
            "std_error": report.std_error,
        }))
    }
}

fn share(args: ShareArgs, run: &mut Run) -> Result<Value, CliError> {
    let domain = EtaDomain::new(parse_u64_list(&args.eta_domain)?)?;
    let mo: DensityMatrix = run.load(&args.original)?;
    let mc: DensityMatrix = run.load(&args.covert)?;
    let seed = resolve_seed(args.seed)?;
    let cfg = SecurityConfig {
        security_bits: args.security_bits,
        ..SecurityConfig::default()
    };
    let mut rng = Stream::root(seed).substream("share", 0);
    let shares = qass_share(&mo, &mc, &domain, &cfg, &mut rng)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out_dir.display())))?;
    for bundle in &shares.bundles {
        run.write(
            &args.out_dir.join(format!("bundle-{}.json", bundle.player)),
            bundle,
        )?;
    }
    run.write(&args.out_dir.join("encoded.json"), &shares.enc)?;
    run.write(&args.out_dir.join("dictator.json"), &shares.dictator_view)?;
    let size = share_size_report(1, 1, &[], &domain);
    Ok(json!({
        "seed": seed,
        "q": shares.enc.q,
        "eta_domain": domain.values(),
        "quantum_bits": size.quantum_bits,
        "share_bits": size.anamorphic_bits,
        "share_bits_difference": size.difference,
    }))
}

fn reconstruct(args: ReconstructArgs, run: &mut Run) -> Result<Value, CliError> {
    let domain = EtaDomain::new(parse_u64_list(&args.eta_domain)?)?;
    let players = parse_u64_list(&args.players)?;
    let [a, b] = players[..] else {
        return Err(CliError::Usage(format!(
            "--players wants two entries, got {:?}",
            args.players
        )));
    };
    if a == b || !(1..=3).contains(&a) || !(1..=3).contains(&b) {
        return Err(CliError::Usage(format!(
            "--players must name two distinct players in 1..=3, got {a},{b}"
        )));
    }
    let mut bundles = Vec::new();
    for player in [a, b] {
        let bundle: ShareBundle = run.load(&args.dir.join(format!("bundle-{player}.json")))?;
        bundles.push(if args.original_only {
            bundle.original_only()
        } else {
            bundle
        });
    }
    let enc: EncodedQuantumState = run.load(&args.dir.join("encoded.json"))?;
    let rec = qass_reconstruct(&bundles, &enc, &domain)?;
    if let Some(out) = &args.out_original {
        run.write(out, &rec.mo_rec)?;
    }
    if let Some(out) = &args.out_covert {
        run.write(out, rec.covert()?)?;
    }
    Ok(json!({
        "players": [a, b],
        "covert_present": rec.mc_rec.is_some(),
        "components": rec.components,
    }))
}

fn cheat_sim(args: CheatSimArgs, run: &mut Run) -> Result<Value, CliError> {
    let _ = run;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if args.domain_size == 0 {
        return Err(CliError::Usage("--domain-size must be at least 1".into()));
    }
    let seed = resolve_seed(args.seed)?;
    let report = cheat_simulate(
        args.d1,
        args.d2,
        args.domain_size,
        args.trials,
        &Stream::root(seed),
    );
    let p = report.formula;
    let sigma = (p * (1.0 - p) / args.trials as f64).sqrt();
    let within = (report.empirical_success - p).abs() <= 3.0 * sigma;
    let metrics = json!({
        "seed": seed,
        "trials": report.trials,
        "successes": report.successes,
        "empirical_success": report.empirical_success,
        "formula": report.formula,
        "sigma": sigma,
        "within_three_sigma": within,
    });
    if !within {
        return Err(CliError::Failure(format!(
            "empirical success {} outside 3 sigma of {}",
            report.empirical_success, report.formula
        )));
    }
    Ok(metrics)
}

fn tpds(args: TpdsArgs, run: &mut Run) -> Result<Value, CliError> {
    let mo: DensityMatrix = run.load(&args.original)?;
    let mc: DensityMatrix = run.load(&args.covert)?;
    let seed = resolve_seed(args.seed)?;
    let cfg = SecurityConfig {
        security_bits: args.security_bits,
        ..SecurityConfig::default()
    };
    let mut rng = Stream::root(seed).substream("keygen", 0);
    let key = keygen(&mo, &mc, &cfg, anamorph_core::EtaMode::Weak, &mut rng)?;
    let ct = encrypt_direct(&mo, &mc, &key)?;

    // The supervisor decrypts the transmitted ciphertext directly; the same
    // decryption applied to its extracted honest counterpart must agree
    // entry for entry, or the supervision story falls apart.
    let direct = dom_decrypt(&ct, &key)?;
    let honest = eoc_extract(&ct, &key)?;
    let via_honest = dom_decrypt(&honest, &key)?;
    let supervision_gap = direct.mat().max_abs_diff(via_honest.mat());

    let original_roundtrip = trace_distance(&direct, &mo)?;
    let covert_roundtrip = trace_distance(&dcm_exact(&ct, &key)?, &mc)?;

    let metrics = json!({
        "seed": seed,
        "eta": key.eta,
        "supervision_gap": supervision_gap,
        "original_roundtrip": original_roundtrip,
        "covert_roundtrip": covert_roundtrip,
    });
    if supervision_gap > 1e-12 {
        return Err(CliError::Failure(format!(
            "supervised decryptions differ by {supervision_gap:e}"
        )));
    }
    if original_roundtrip > 1e-9 || covert_roundtrip > 1e-9 {
        return Err(CliError::Failure(format!(
            "round-trip error too large: original {original_roundtrip:e}, covert {covert_roundtrip:e}"
        )));
    }
    Ok(metrics)
}
