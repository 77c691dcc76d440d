#include <cmath>
#include <numbers>

#include "commands.hpp"

#include "qpinem/qpinem.hpp"

namespace qpinem::cli {

namespace {

StructureParams structure_of(const Settings& s) {
  StructureParams st;
  st.period_nm = s.number("period_nm");
  st.wavelength_nm = s.number("wavelength_nm");
  st.theta_rad = s.number("theta_deg") * std::numbers::pi / 180.0;
  st.length_um = s.number("length_um");
  st.order = s.integer("order");
  if (s.has("field_amplitude")) st.field_amplitude = s.number("field_amplitude");
  st.validate();
  return st;
}

void run_phasematch(const Settings& s, Context& ctx) {
  StructureParams st = structure_of(s);
  std::vector<double> energies = s.list("energy_kev");
  std::vector<double> lams = s.list("wavelengths_nm");
  if (energies.size() < 3) throw ValidationError("energy_kev grid needs at least 3 points");

  io::CsvTable line{{"energy_keV", "g"}, {}};
  for (double e : energies) line.rows.push_back({e, coupling_vs_energy(st, e)});
  ctx.write_csv("coupling_vs_energy.csv", line);
  if (!lams.empty()) {
    io::write_matrix(ctx.output("coupling_map.csv"), "energy_keV", energies, lams, coupling_map(st, energies, lams));
  }

  const double analytic = phase_matched_kinetic_energy(st);
  nlohmann::json summary;
  summary["phase_matched_beta"] = phase_matched_beta(st);
  summary["phase_matched_energy_keV"] = analytic;
  summary["peak_energy_keV"] = peak_kinetic_energy(st, energies.front(), energies.back());
  summary["ridge_fwhm_nm"] = wavelength_ridge_fwhm(st, analytic);
  ctx.write_json("phasematch_summary.json", summary);

  if (s.has("segments")) {
    std::vector<double> segs = s.list("segments");
    const double g = s.number("g_total");
    const long samples = s.integer("samples");
    std::vector<EnsembleSummary> ens(segs.size());
    std::vector<double> cols;
    for (double n : segs) {
      if (n < 1 || n != std::floor(n)) throw ValidationError("segments must be positive integers");
      cols.push_back(n);
    }
    // the same seed for every N keeps each ensemble reproducible on its own
    parallel_for(static_cast<int>(segs.size()), ctx.threads(), [&](int i) {
      ens[i] = partial_coherence_ensemble(g, static_cast<int>(segs[i]), samples, ctx.seed());
    });
    nlohmann::json arr = nlohmann::json::array();
    std::vector<ElectronSpectrum> spectra;
    for (const auto& e : ens) {
      arr.push_back({{"n_segments", e.n_segments},
                     {"mean_g2_eff", e.mean_g2_eff},
                     {"stderr", e.stderr_g2_eff},
                     {"seed", e.seed},
                     {"samples", e.samples},
                     {"energy_spread", e.energy_spread}});
      spectra.push_back(e.spectrum);
    }
    ctx.write_json("partial_coherence.json", arr);
    ctx.write_csv("partial_coherence_spectra.csv", spectrum_matrix("N", cols, spectra));
  }
}

double tv(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc * h;
}

void run_classical(const Settings& s, Context& ctx) {
  const double g = s.number("g");
  const double hw = s.number("hbar_omega");
  if (!(g > 0.0) || !(hw > 0.0)) throw ValidationError("classical: g and hbar_omega must be > 0");
  const int K = s.has("k_max") ? s.integer("k_max") : default_k_max(g) + 4;
  ZlpKernel z = gaussian_zlp(s.number("kernel_fraction") * hw, s.number("step"));

  ContinuousSpectrum qc = convolve_with_zlp(closed_form_coherent_spectrum(g, K), z, hw);
  std::vector<double> cc = classical_coherent_spectrum(g, hw, qc.energy);
  ContinuousSpectrum qt = convolve_with_zlp(closed_form_thermal_spectrum(g, K), z, hw);
  std::vector<double> ct = classical_thermal_spectrum(g, hw, qt.energy);
  std::vector<double> mc = glauber_averaged_classical_spectrum(g, hw, qt.energy, s.integer("samples"), ctx.seed());

  io::CsvTable a{{"energy_eV", "classical", "quantum"}, {}};
  for (size_t i = 0; i < qc.energy.size(); ++i) a.rows.push_back({qc.energy[i], cc[i], qc.density[i]});
  ctx.write_csv("classical_coherent.csv", a);
  io::CsvTable b{{"energy_eV", "classical", "quantum", "glauber_mc"}, {}};
  for (size_t i = 0; i < qt.energy.size(); ++i) b.rows.push_back({qt.energy[i], ct[i], qt.density[i], mc[i]});
  ctx.write_csv("classical_thermal.csv", b);

  const double h = z.step;
  double nc = 0.0, nt = 0.0;
  for (double v : cc) nc += v * h;
  for (double v : ct) nt += v * h;
  nlohmann::json summary;
  summary["tv_coherent"] = tv(cc, qc.density, h);
  summary["tv_thermal"] = tv(ct, qt.density, h);
  summary["tv_glauber_vs_gaussian"] = tv(mc, ct, h);
  summary["norm_classical_coherent"] = nc;
  summary["norm_classical_thermal"] = nt;
  ctx.write_json("classical_summary.json", summary);
}

}  // namespace

Command phasematch_command() {
  return {"phasematch",
          "Grating phase matching, coupling maps and partial coherence",
          {
              {"period_nm", Kind::number, "733", "grating period"},
              {"wavelength_nm", Kind::number, "1064", "drive wavelength"},
              {"theta_deg", Kind::number, "90", "incidence angle"},
              {"length_um", Kind::number, "56", "interaction length"},
              {"order", Kind::integer, "1", "diffraction order"},
              {"field_amplitude", Kind::number, "", "field amplitude (V/m) for absolute |g|"},
              {"energy_kev", Kind::list, "150:250:1001", "electron kinetic energy grid"},
              {"wavelengths_nm", Kind::list, "1000:1130:261", "wavelength grid for coupling_map.csv"},
              {"segments", Kind::list, "1,2,4,16", "segment counts for partial_coherence.json"},
              {"samples", Kind::integer, "100000", "ensemble size per segment count"},
              {"g_total", Kind::number, "1", "coupling of a fully coherent structure"},
          },
          run_phasematch};
}

Command classical_command() {
  return {"classical",
          "Classical point-particle spectra against the quantum comb",
          {
              {"g", Kind::number, "1", "classical coupling |g|"},
              {"hbar_omega", Kind::number, io::format_double(kDefaultHbarOmega), "photon energy (eV)"},
              {"kernel_fraction", Kind::number, "0.3", "instrument FWHM in units of hbar_omega"},
              {"step", Kind::number, "0.01", "energy grid step (eV)"},
              {"k_max", Kind::integer, "", "ladder half-width"},
              {"samples", Kind::integer, "1000000", "Monte-Carlo samples for the Glauber average"},
          },
          run_classical};
}

}  // namespace qpinem::cli
