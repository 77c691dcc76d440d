#include <cmath>

#include "commands.hpp"

#include "qpinem/qpinem.hpp"

namespace qpinem::cli {

Regime parse_regime(const std::string& name) {
  if (name == "auto") return Regime::automatic;
  if (name == "exact") return Regime::exact;
  if (name == "weak") return Regime::weak;
  throw ValidationError("regime must be auto, exact or weak");
}

io::CsvTable spectrum_matrix(const std::string& label, const std::vector<double>& columns,
                             const std::vector<ElectronSpectrum>& spectra) {
  io::CsvTable t;
  t.header.push_back("k");
  for (double c : columns) t.header.push_back(label + "=" + io::format_double(c));
  int K = 0;
  for (const auto& s : spectra) K = std::max(K, s.k_max);
  for (int k = -K; k <= K; ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (const auto& s : spectra) row.push_back(s.at(k));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::vector<ParamSpec> light_params() {
  return {
      {"state", Kind::text, "coherent", "coherent | thermal | fock | amplifier"},
      {"mean", Kind::number, "100", "mean photon number (Fock: photon number)"},
      {"alpha", Kind::number, "", "amplifier seed amplitude |alpha| (default: chosen to reach mean)"},
      {"gain_db", Kind::number, "20", "amplifier gain in dB"},
      {"tail_tol", Kind::number, "1e-8", "truncation tail tolerance"},
  };
}

AmplifierParams amplifier_of(const Settings& s) {
  double gain = std::pow(10.0, s.number("gain_db") / 10.0);
  if (s.has("alpha")) return {cplx(s.number("alpha"), 0.0), gain};
  return params_for_output_mean(gain, s.number("mean"));
}

PhotonStatistics statistics_of(const Settings& s) {
  const std::string state = s.text("state");
  const double tol = s.number("tail_tol");
  if (state == "coherent") return coherent_statistics(s.number("mean"), {}, tol);
  if (state == "thermal") return thermal_statistics(s.number("mean"), {}, tol);
  if (state == "fock") {
    double n = s.number("mean");
    if (n < 0.0 || n != std::floor(n)) throw ValidationError("fock state needs an integer photon number");
    return fock_statistics(static_cast<int>(n));
  }
  if (state == "amplifier") return amplifier_statistics(amplifier_of(s), {}, tol);
  throw ValidationError("state must be coherent, thermal, fock or amplifier");
}

ZlpKernel zlp_of(const Settings& s) {
  if (s.has("zlp_file")) return io::read_zlp(s.text("zlp_file"));
  return gaussian_zlp(s.number("zlp_fwhm"), s.number("zlp_step"));
}

void run_spectrum(const Settings& s, Context& ctx) {
  PhotonStatistics stats = statistics_of(s);
  const double mean = mean_photon_number(stats);
  CouplingParams c;
  c.g_mag = s.number("g_q");
  c.g_phase = s.number("g_phase");
  c.hbar_omega = s.number("hbar_omega");
  c.k_max = s.has("k_max") ? s.integer("k_max") : default_k_max(c.g_mag * std::sqrt(mean));
  c.validate();
  const Regime regime = parse_regime(s.text("regime"));

  ElectronSpectrum spec = electron_spectrum(stats, c, regime);
  if (spec.lost_mass > s.number("tail_tol")) {
    ctx.log() << "warning: " << io::format_double(spec.lost_mass) << " of the spectrum lies outside |k| <= " << c.k_max
              << "\n";
  }
  ZlpKernel zlp = zlp_of(s);
  io::write_statistics(ctx.output("photon_statistics.csv"), stats);
  io::write_spectrum(ctx.output("spectrum_discrete.csv"), spec);
  io::write_continuous(ctx.output("spectrum_continuous.csv"), convolve_with_zlp(spec, zlp, c.hbar_omega));
  io::write_continuous(ctx.output("zlp.csv"), ContinuousSpectrum{zlp.energy, zlp.density});

  nlohmann::json summary;
  summary["mean_photons"] = mean;
  summary["g2"] = mean > 0.0 ? nlohmann::json(g2(stats)) : nlohmann::json(nullptr);
  summary["g_classical"] = c.g_mag * std::sqrt(mean);
  summary["k_max"] = c.k_max;
  summary["lost_mass"] = spec.lost_mass;
  summary["tail_mass"] = stats.tail_mass;
  if (s.text("state") == "amplifier") {
    AmplifierParams p = amplifier_of(s);
    const double g2c = c.g_mag * c.g_mag;
    summary["alpha"] = std::abs(p.alpha);
    summary["gain"] = p.gain;
    summary["thermality"] = thermality(p);
    // strengths of the two-parameter fit model for this state
    summary["a"] = g2c * (p.gain - 1.0);
    summary["b"] = g2c * p.gain * std::norm(p.alpha);
    // vacuum fluctuations add g_q^2 / 2 to the thermal strength seen in the spectrum
    summary["a_observed"] = g2c * (p.gain - 0.5);
  }
  ctx.write_json("spectrum_summary.json", summary);

  if (s.has("g_sweep")) {
    // classical |g| columns at fixed photon statistics
    std::vector<double> gs = s.list("g_sweep");
    if (!(mean > 0.0)) throw ValidationError("g_sweep needs a state with nonzero mean");
    int K = c.k_max;
    for (double g : gs) {
      if (!(g >= 0.0)) throw ValidationError("g_sweep values must be >= 0");
      if (!s.has("k_max")) K = std::max(K, default_k_max(g));
    }
    std::vector<ElectronSpectrum> cols(gs.size());
    parallel_for(static_cast<int>(gs.size()), ctx.threads(), [&](int i) {
      CouplingParams ci = c;
      ci.g_mag = gs[i] / std::sqrt(mean);
      ci.k_max = K;
      cols[i] = electron_spectrum(stats, ci, regime);
    });
    ctx.write_csv("spectrum_map.csv", spectrum_matrix("g", gs, cols));
  }
}

void run_walk(const Settings& s, Context& ctx) {
  const double beta = s.number("beta");
  const double n = s.number("mean");
  const int K = s.integer("k_max");
  std::vector<double> rths = s.list("r_th");
  if (rths.empty()) throw ValidationError("r_th grid is empty");
  std::vector<ElectronSpectrum> walks(rths.size()), amps(rths.size());
  parallel_for(static_cast<int>(rths.size()), ctx.threads(), [&](int i) {
    MixedWalkConfig m;
    m.steps = s.integer("steps");
    m.beta = beta;
    m.r_th = rths[i];
    m.k_max = K;
    walks[i] = mixed_walk(m);
    // amplifier with the same thermality and total |g|^2 = beta^2
    double G = 1.0 + rths[i] * n;
    AmplifierParams p{cplx(std::sqrt((1.0 - rths[i]) * n / G), 0.0), G};
    CouplingParams c;
    c.g_mag = beta / std::sqrt(n);
    c.k_max = K;
    amps[i] = amplified_light_spectrum(p, c, parse_regime(s.text("regime")));
  });
  ctx.write_csv("walk_spectra.csv", spectrum_matrix("r_th", rths, walks));
  ctx.write_csv("walk_amplifier.csv", spectrum_matrix("r_th", rths, amps));
  io::CsvTable cmp{{"r_th", "total_variation"}, {}};
  for (size_t i = 0; i < rths.size(); ++i) {
    double tv = 0.0;
    for (int k = -K; k <= K; ++k) tv += std::abs(walks[i].at(k) - amps[i].at(k));
    cmp.rows.push_back({rths[i], 0.5 * tv});
  }
  ctx.write_csv("walk_comparison.csv", cmp);
}

void run_fidelity(const Settings& s, Context& ctx) {
  const double mean = s.number("mean");
  CouplingParams c;
  c.g_mag = s.number("g_q");
  c.hbar_omega = s.number("hbar_omega");
  c.validate();
  const int k_lo = s.integer("k_min"), k_hi = s.integer("k_max");
  const Regime regime = parse_regime(s.text("regime"));
  const double tol = s.number("tail_tol");
  if (mean != std::floor(mean)) throw ValidationError("fidelity: mean must be an integer for the Fock curve");
  const std::vector<std::string> names{"coherent", "thermal", "fock"};
  std::vector<std::vector<FidelityPoint>> prof(names.size());
  parallel_for(3, ctx.threads(), [&](int i) {
    PhotonState st = i == 0   ? coherent_state(cplx(std::sqrt(mean), 0.0), {}, tol)
                     : i == 1 ? thermal_state(mean, {}, tol)
                              : fock_state(static_cast<int>(mean));
    prof[i] = fidelity_profile(st, c, k_lo, k_hi, regime);
  });
  io::CsvTable t{{"k", "coherent", "thermal", "fock"}, {}};
  for (size_t j = 0; j < prof[0].size(); ++j) {
    t.rows.push_back({static_cast<double>(prof[0][j].k), prof[0][j].fidelity, prof[1][j].fidelity, prof[2][j].fidelity});
  }
  ctx.write_csv("fidelity_profile.csv", t);
  for (size_t i = 0; i < names.size(); ++i) io::write_fidelity_profile(ctx.output("fidelity_" + names[i] + ".csv"), prof[i]);

  if (s.has("purity_g")) {
    std::vector<double> gs = s.list("purity_g");
    io::CsvTable p{{"g", "coherent", "thermal"}, {}};
    p.rows.assign(gs.size(), {});
    parallel_for(static_cast<int>(gs.size()), ctx.threads(), [&](int i) {
      CouplingParams ci = c;
      ci.g_mag = gs[i] / std::sqrt(mean);
      ci.k_max = default_k_max(gs[i]);
      double pc = purity(electron_density_matrix(coherent_state(cplx(std::sqrt(mean), 0.0), {}, tol), ci));
      // thermal electron state is diagonal: purity = sum P_k^2
      ElectronSpectrum th = electron_spectrum(thermal_statistics(mean, {}, tol), ci);
      double pt = 0.0;
      for (double v : th.p) pt += v * v;
      p.rows[i] = {gs[i], pc, pt};
    });
    ctx.write_csv("purity_vs_coupling.csv", p);
  }
}

void run_amplifier(const Settings& s, Context& ctx) {
  const double mean = s.number("mean");
  CouplingParams c;
  c.g_mag = s.number("g_q");
  c.hbar_omega = s.number("hbar_omega");
  c.k_max = s.has("k_max") ? s.integer("k_max") : default_k_max(c.g_mag * std::sqrt(mean));
  c.validate();
  const double tol = s.number("tail_tol");

  std::vector<double> gains = s.list("gain_db");
  const double n_sat = s.number("saturated_mean");
  if (!(n_sat >= mean)) throw ValidationError("saturated_mean must be >= mean");
  for (double db : gains) {
    if (std::pow(10.0, db / 10.0) - 1.0 > n_sat) {
      throw ValidationError("gain " + io::format_double(db) + " dB exceeds what saturated_mean allows");
    }
  }
  io::CsvTable sweep{{"gain_db", "seed_photons", "gain", "alpha", "gain_effective", "thermality", "mean", "g2_theory", "g2_statistics", "purity",
                      "correlations"},
                     {}};
  sweep.rows.assign(gains.size(), {});
  parallel_for(static_cast<int>(gains.size()), ctx.threads(), [&](int i) {
    // saturated output: the seed shrinks as the gain grows, then a loss channel brings the mean down
    const double G = std::pow(10.0, gains[i] / 10.0);
    const double n_in = std::max(0.0, (n_sat + 1.0) / G - 1.0);
    AmplifierParams p = attenuate({cplx(std::sqrt(n_in), 0.0), G}, mean / n_sat);
    AmplifierMoments m = amplifier_mean_and_g2(p);
    PhotonStatistics st = amplifier_statistics(p, {}, tol);
    double pur = purity(electron_density_matrix(amplifier_density_matrix(p, {}, tol), c));
    double cor = correlations(joint_distribution(st, c));
    sweep.rows[i] = {gains[i], n_in, G, std::abs(p.alpha), p.gain, thermality(p), m.mean, m.g2, g2(st), pur, cor};
  });
  ctx.write_csv("amplifier_sweep.csv", sweep);

  if (s.has("seeds")) {
    std::vector<double> seeds = s.list("seeds");
    std::vector<std::pair<double, double>> table;  // (n_in, gain_db), sorted
    if (s.has("gain_table")) {
      io::CsvTable gt = io::read_csv(s.text("gain_table"));
      int cn = gt.column("n_in"), cg = gt.column("gain_db");
      if (cn < 0 || cg < 0) throw IoError(s.text("gain_table") + ": needs columns n_in,gain_db");
      for (const auto& r : gt.rows) table.emplace_back(r[cn], r[cg]);
      std::sort(table.begin(), table.end());
      if (table.empty()) throw ValidationError("gain table is empty");
    }
    const double fixed_db = s.number("transition_gain_db");
    auto gain_of_seed = [&](double n_in) {
      if (table.empty()) return std::pow(10.0, fixed_db / 10.0);
      if (n_in < table.front().first || n_in > table.back().first) {
        throw ValidationError("gain table does not cover seed " + io::format_double(n_in));
      }
      auto hi = std::lower_bound(table.begin(), table.end(), std::make_pair(n_in, -1e300));
      if (hi == table.begin()) return std::pow(10.0, hi->second / 10.0);
      auto lo = hi - 1;
      double t = (n_in - lo->first) / (hi->first - lo->first);
      return std::pow(10.0, (lo->second + t * (hi->second - lo->second)) / 10.0);
    };
    ReconstructionOptions opt;
    opt.reg_lambda = s.number("reg_lambda");
    std::optional<double> probe;
    if (s.number("probe_mean") > 0.0) probe = s.number("probe_mean");
    std::vector<TransitionRow> rows(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), ctx.threads(), [&](int i) {
      rows[i] = g2_transition_curve({seeds[i]}, gain_of_seed, c, probe, opt).front();
    });
    io::CsvTable t{{"n_in", "gain", "n_out", "n_probe", "g2_theory", "g2_reconstructed"}, {}};
    for (const auto& r : rows) t.rows.push_back({r.n_in, r.gain, r.n_out, r.n_probe, r.g2_theory, r.g2_reconstructed});
    ctx.write_csv("g2_transition.csv", t);
  }
}

}  // namespace

Command spectrum_command() {
  std::vector<ParamSpec> p = light_params();
  p.insert(p.end(), {
                        {"g_q", Kind::number, "0.1", "single-photon coupling |g_q|"},
                        {"g_phase", Kind::number, "0", "coupling phase (rad)"},
                        {"k_max", Kind::integer, "", "ladder half-width (default from |g|)"},
                        {"regime", Kind::text, "auto", "auto | exact | weak"},
                        {"hbar_omega", Kind::number, io::format_double(kDefaultHbarOmega), "photon energy (eV)"},
                        {"zlp_fwhm", Kind::number, "0.6", "Gaussian ZLP FWHM (eV)"},
                        {"zlp_step", Kind::number, "0.01", "energy grid step (eV)"},
                        {"zlp_file", Kind::text, "", "measured ZLP CSV (energy_eV,density)"},
                        {"g_sweep", Kind::list, "", "classical |g| values for spectrum_map.csv"},
                    });
  return {"spectrum", "Electron energy spectra after a quantum light interaction", p, run_spectrum};
}

Command walk_command() {
  return {"walk",
          "Mixed quantum/random walk spectra against amplified light",
          {
              {"beta", Kind::number, "1", "total coupling strength |beta|"},
              {"steps", Kind::integer, "10000", "number of walk steps"},
              {"r_th", Kind::list, "0,0.25,0.5,0.75,1", "thermality grid"},
              {"mean", Kind::number, "10000", "photon number of the amplifier comparison"},
              {"k_max", Kind::integer, "10", "ladder half-width"},
              {"regime", Kind::text, "auto", "auto | exact | weak"},
          },
          run_walk};
}

Command fidelity_command() {
  return {"fidelity",
          "Photon-state fidelity after electron detection at each ladder peak",
          {
              {"mean", Kind::number, "100", "mean photon number"},
              {"g_q", Kind::number, "0.1", "single-photon coupling"},
              {"k_min", Kind::integer, "-10", "first ladder index"},
              {"k_max", Kind::integer, "10", "last ladder index"},
              {"regime", Kind::text, "weak", "auto | exact | weak"},
              {"tail_tol", Kind::number, "1e-8", "truncation tail tolerance"},
              {"hbar_omega", Kind::number, io::format_double(kDefaultHbarOmega), "photon energy (eV)"},
              {"purity_g", Kind::list, "", "classical |g| grid for purity_vs_coupling.csv"},
          },
          run_fidelity};
}

Command amplifier_command() {
  return {"amplifier",
          "Amplifier gain sweep and g2 transition curve",
          {
              {"mean", Kind::number, "100", "output mean photon number for the gain sweep"},
              {"g_q", Kind::number, "0.1", "single-photon coupling"},
              {"k_max", Kind::integer, "", "ladder half-width"},
              {"hbar_omega", Kind::number, io::format_double(kDefaultHbarOmega), "photon energy (eV)"},
              {"gain_db", Kind::list, "0:40:11", "gain grid (dB)"},
              {"saturated_mean", Kind::number, "10000", "amplifier output mean at saturation, before attenuation"},
              {"tail_tol", Kind::number, "1e-8", "truncation tail tolerance"},
              {"seeds", Kind::list, "0,0.01,0.1,1,10,100,1000", "seed photon numbers for g2_transition.csv"},
              {"transition_gain_db", Kind::number, "30", "gain used when no gain table is given"},
              {"gain_table", Kind::text, "", "CSV with columns n_in,gain_db"},
              {"probe_mean", Kind::number, "100", "attenuate to this mean before probing (<= 0: no attenuation)"},
              {"reg_lambda", Kind::number, "1e-3", "reconstruction regularisation"},
          },
          run_amplifier};
}

}  // namespace qpinem::cli
