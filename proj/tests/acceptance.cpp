// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// only when a check cannot be evaluated at all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace qpinem;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  body(o);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0) o.check(secs < limit_s, "runtime");
  if (!o.pass) ++failures;
  std::printf("%s %2d %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

CouplingParams coupling(double g, int k_max) {
  CouplingParams c;
  c.g_mag = g;
  c.k_max = k_max;
  return c;
}

double tv(const ElectronSpectrum& a, const std::vector<double>& b) { return oracle::total_variation(a.p, b); }

}  // namespace

int main() {
  std::cout.precision(6);

  criterion(1, "exact ladder coefficients vs dense matrix exponential", 30.0, [](Outcome& o) {
    double worst = 0.0;
    for (double g : {0.05, 0.2, 0.5}) {
      for (int n = 0; n <= 30; ++n) {
        std::vector<cplx> ref = oracle::expm_coefficients(g, 0.0, n, 15);
        for (int p = -15; p <= 15; ++p) {
          worst = std::max(worst, std::abs(exact_coefficient(n, p, coupling(g, 15)) - ref[p + 15]));
        }
      }
    }
    o.detail << " max abs error " << worst;
    o.check(worst < 1e-7, "max error < 1e-7");
  });

  criterion(2, "coherent and thermal spectra vs strong-field closed forms", 5.0, [](Outcome& o) {
    const double n = 1e4;
    PhotonStatistics coh = coherent_statistics(n), th = thermal_statistics(n);
    for (double g : {0.5, 1.0, 2.0}) {
      CouplingParams c = coupling(g / std::sqrt(n), default_k_max(g));
      std::vector<double> bessel, skellam;
      for (int k = -c.k_max; k <= c.k_max; ++k) {
        double j = std::cyl_bessel_j(std::abs(k), 2.0 * g);
        bessel.push_back(j * j);
        skellam.push_back(std::exp(-2.0 * g * g) * std::cyl_bessel_i(std::abs(k), 2.0 * g * g));
      }
      double tc = tv(electron_spectrum(coh, c), bessel), tt = tv(electron_spectrum(th, c), skellam);
      o.detail << " |g|=" << g << " TV " << tc << "/" << tt;
      o.check(tc < 1e-3 && tt < 1e-3, "TV < 1e-3 at |g|=" + std::to_string(g));
    }
  });

  criterion(3, "mixed walk vs amplified-light spectrum", 30.0, [](Outcome& o) {
    const double beta = 1.0, n = 1e4;
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      MixedWalkConfig m;
      m.beta = beta;
      m.r_th = r;
      m.steps = 10000;
      m.k_max = 12;
      ElectronSpectrum w = mixed_walk(m);
      const double G = 1.0 + r * n;
      AmplifierParams p{cplx(std::sqrt((1.0 - r) * n / G), 0.0), G};
      ElectronSpectrum a = amplified_light_spectrum(p, coupling(beta / std::sqrt(n), 12));
      double t = oracle::tv(w, a);
      o.detail << " r_th=" << r << " TV " << t;
      o.check(t < 1e-3, "TV < 1e-3 at r_th=" + std::to_string(r));
    }
  });

  criterion(4, "amplifier mean and g2 vs closed forms", 0.0, [](Outcome& o) {
    double worst = 0.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      for (double G : {1.5, 2.0, 5.0, 10.0, 40.0}) {
        PhotonStatistics s = amplifier_statistics({cplx(alpha, 0.0), G});
        double coh = G * alpha * alpha, mean = coh + G - 1.0;
        double g2_ref = 2.0 - coh * coh / (mean * mean);
        worst = std::max({worst, std::abs(mean_photon_number(s) - mean) / mean, std::abs(g2(s) - g2_ref) / g2_ref});
      }
    }
    o.detail << " worst relative error " << worst;
    o.check(worst < 1e-4, "relative error < 1e-4");
    double g2_ase = g2(amplifier_statistics({cplx(0.0, 0.0), 100.0}));
    double g2_seeded = g2(amplifier_statistics({cplx(1e3, 0.0), 10.0}));
    o.detail << "; g2(alpha=0) " << g2_ase << ", g2(|alpha|^2=1e6) " << g2_seeded;
    o.check(std::abs(g2_ase - 2.0) < 1e-3, "g2 = 2 at alpha = 0");
    o.check(std::abs(g2_seeded - 1.0) < 1e-3, "g2 = 1 at |alpha|^2 = 1e6");
  });

  criterion(5, "purity and correlations ordering", 60.0, [](Outcome& o) {
    const double n = 100.0;
    CouplingParams c = coupling(0.1, default_k_max(1.0));
    double pc = purity(electron_density_matrix(coherent_state(cplx(std::sqrt(n), 0.0)), c));
    double pt = purity(electron_density_matrix(thermal_state(n), c));
    double cc = correlations(joint_distribution(coherent_statistics(n), c));
    double ct = correlations(joint_distribution(thermal_statistics(n), c));
    o.detail << " purity coherent " << pc << ", thermal " << pt << "; correlations coherent " << cc << ", thermal "
             << ct;
    o.check(pc > 0.99, "purity(coherent) > 0.99");
    o.check(pt < pc, "purity(thermal) < purity(coherent)");
    o.check(ct > cc, "correlations(thermal) > correlations(coherent)");

    // saturated amplifier: output mean fixed at n_sat, seed shrinks with gain,
    // then a loss channel brings the mean to n
    const double n_sat = 1e4;
    std::vector<double> sweep;
    for (int i = 0; i <= 10; ++i) {
      double G = std::pow(10.0, 0.4 * i);
      double n_in = std::max(0.0, (n_sat + 1.0) / G - 1.0);
      AmplifierParams p = attenuate({cplx(std::sqrt(n_in), 0.0), G}, n / n_sat);
      sweep.push_back(purity(electron_density_matrix(amplifier_density_matrix(p), c)));
    }
    bool monotone = true;
    for (size_t i = 1; i < sweep.size(); ++i) monotone = monotone && sweep[i] <= sweep[i - 1] + 1e-12;
    o.detail << "; gain sweep purity " << sweep.front() << " -> " << sweep.back();
    o.check(monotone, "purity non-increasing over 0-40 dB");
  });

  criterion(6, "fidelity after detection at each ladder peak", 0.0, [](Outcome& o) {
    CouplingParams c = coupling(0.1, 10);
    auto fock = fidelity_profile(fock_state(100), c, -10, 10);
    double off = 0.0, f0 = 0.0;
    for (const auto& pt : fock) {
      if (pt.k == 0) f0 = pt.fidelity;
      else off = std::max(off, std::abs(pt.fidelity));
    }
    o.detail << " Fock F_0 " << f0 << ", max |F_k|, k!=0 " << off;
    o.check(off < 1e-10, "Fock F_k = 0 for k != 0");
    o.check(std::abs(f0 - 1.0) < 1e-10, "Fock F_0 = 1");
    auto coh = fidelity_profile(coherent_state(cplx(10.0, 0.0)), c, -2, 2);
    auto th = fidelity_profile(thermal_state(100.0), c, 0, 0);
    double asym = std::abs(coh[4].fidelity - coh[0].fidelity);
    o.detail << "; coherent F_0 " << coh[2].fidelity << ", thermal F_0 " << th[0].fidelity << ", |F_2 - F_-2| "
             << asym;
    o.check(coh[2].fidelity > th[0].fidelity, "coherent F_0 > thermal F_0");
    o.check(asym > 1e-3, "coherent profile asymmetric");
  });

  criterion(7, "grating phase matching", 0.0, [](Outcome& o) {
    StructureParams s;
    const double beta = s.order * s.period_nm / s.wavelength_nm;
    const double analytic = kElectronRestKeV * (1.0 / std::sqrt(1.0 - beta * beta) - 1.0);
    double peak = peak_kinetic_energy(s, 150.0, 250.0);
    o.detail << " peak " << peak << " keV, analytic " << analytic << " keV";
    o.check(std::abs(peak - 189.0) <= 6.0, "peak within 6 keV of 189 keV");
    o.check(std::abs(peak - analytic) <= 0.5, "peak within 0.5 keV of the analytic optimum");
    StructureParams longer = s;
    longer.length_um *= 5.0;
    double ratio = wavelength_ridge_fwhm(s, analytic) / wavelength_ridge_fwhm(longer, analytic);
    o.detail << "; ridge FWHM ratio " << ratio;
    o.check(std::abs(ratio - 5.0) <= 0.5, "5x longer structure narrows the ridge 5x +- 10%");
  });

  criterion(8, "classical spectra vs quantum comb", 0.0, [](Outcome& o) {
    const double g = 1.0, hw = kDefaultHbarOmega;
    ZlpKernel z = gaussian_zlp(0.3 * hw, 0.01);
    ElectronSpectrum bessel, skellam;
    bessel.k_max = skellam.k_max = default_k_max(g) + 4;
    for (int k = -bessel.k_max; k <= bessel.k_max; ++k) {
      double j = std::cyl_bessel_j(std::abs(k), 2.0 * g);
      bessel.p.push_back(j * j);
      skellam.p.push_back(std::exp(-2.0 * g * g) * std::cyl_bessel_i(std::abs(k), 2.0 * g * g));
    }
    ContinuousSpectrum qc = convolve_with_zlp(bessel, z, hw), qt = convolve_with_zlp(skellam, z, hw);
    std::vector<double> cc = classical_coherent_spectrum(g, hw, qc.energy);
    std::vector<double> ct = classical_thermal_spectrum(g, hw, qt.energy);
    std::vector<double> mc = glauber_averaged_classical_spectrum(g, hw, qt.energy, 1000000, 1);
    double nc = 0.0, nt = 0.0;
    for (double v : cc) nc += v * z.step;
    for (double v : ct) nt += v * z.step;
    double tc = oracle::total_variation(cc, qc.density, z.step), tt = oracle::total_variation(ct, qt.density, z.step);
    double tm = oracle::total_variation(mc, ct, z.step);
    o.detail << " TV arcsine/comb " << tc << ", Gaussian/comb " << tt << "; norms " << nc << ", " << nt
             << "; TV Glauber MC/Gaussian " << tm;
    o.check(tc > 0.05 && tt > 0.05, "classical and quantum spectra differ by TV > 0.05");
    o.check(std::abs(nc - 1.0) < 1e-8 && std::abs(nt - 1.0) < 1e-8, "classical densities normalised within 1e-8");
    o.check(tm < 1e-2, "Glauber average within TV 1e-2");
  });

  criterion(9, "partial coherence over independent segments", 0.0, [](Outcome& o) {
    const double g = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int N : {1, 2, 4, 16}) {
      EnsembleSummary e = partial_coherence_ensemble(g, N, 100000, 7);
      double z = std::abs(e.mean_g2_eff - g * g / N) / e.stderr_g2_eff;
      o.detail << " N=" << N << " <|g_eff|^2> " << e.mean_g2_eff;
      if (N > 1) {
        o.detail << " (" << z << " se)";
        o.check(z < 3.0, "mean within 3 standard errors at N=" + std::to_string(N));
      }
      o.detail << ", spread " << e.energy_spread;
      o.check(e.energy_spread < prev, "spread decreasing at N=" + std::to_string(N));
      prev = e.energy_spread;
    }
  });

  criterion(10, "inverse problems round trip", 120.0, [](Outcome& o) {
    const double a = 2.56e-4, b = 0.9, gq = 0.016, hw = kDefaultHbarOmega;
    ZlpKernel z = gaussian_zlp(0.6, 0.01);
    ContinuousSpectrum m;
    for (int i = -600; i <= 600; ++i) m.energy.push_back(i * z.step);
    m.density = amplifier_model_trace(a, b, z, hw, m.energy);
    FitResult f = fit_amplifier_spectrum(m, z, coupling(gq, 10));
    o.detail << " fit a " << f.a << " b " << f.b;
    o.check(f.converged, "fit converged");
    o.check(std::abs(f.a - a) < 0.01 * a && std::abs(f.b - b) < 0.01 * b, "fit within 1%");

    // through the quantum forward model the vacuum term adds g_q^2 / 2 to a
    AmplifierParams truth = amplifier_from_fit(a, b, gq);
    ElectronSpectrum forward = amplified_light_spectrum(truth, coupling(gq, default_k_max(std::sqrt(a + b)) + 4));
    m.density = convolve_on_grid(forward, z, hw, m.energy);
    FitResult q = fit_amplifier_spectrum(m, z, coupling(gq, 10));
    const double a_obs = a + 0.5 * gq * gq;
    o.detail << "; quantum trace a " << q.a << " (expected " << a_obs << ") b " << q.b;
    o.check(std::abs(q.a - a_obs) < 0.01 * a_obs && std::abs(q.b - b) < 0.01 * b, "quantum trace fit within 1%");

    CouplingParams c = coupling(0.1, default_k_max(1.0) + 6);
    struct Case {
      const char* name;
      PhotonStatistics stats;
    };
    std::vector<Case> cases{{"coherent", coherent_statistics(100.0)},
                            {"thermal", thermal_statistics(100.0)},
                            {"mixed", amplifier_statistics(params_for_output_mean(51.0, 100.0))}};
    for (const auto& cs : cases) {
      ReconstructionResult r = reconstruct_photon_statistics(electron_spectrum(cs.stats, c, Regime::exact), c);
      double err = std::abs(g2(r.stats) - g2(cs.stats));
      o.detail << "; " << cs.name << " g2 " << g2(r.stats) << " (true " << g2(cs.stats) << ")";
      o.check(err < 0.1, std::string("reconstructed g2 within 0.1 for ") + cs.name);
    }

    auto rows = g2_transition_curve({0.0, 1000.0}, [](double) { return 1000.0; }, c, 100.0);
    o.detail << "; transition g2 " << rows[0].g2_reconstructed << " at zero seed, " << rows[1].g2_reconstructed
             << " at 1e3";
    o.check(std::abs(rows[0].g2_reconstructed - 2.0) < 0.1, "g2 = 2 at zero seed");
    o.check(rows[1].g2_reconstructed < 1.02, "g2 < 1.02 at n_in = 1e3");
  });

#ifdef QPINEM_CLI_PATH
  criterion(11, "CLI reruns are byte-identical", 0.0, [](Outcome& o) {
    fs::path root = fs::temp_directory_path() / "qpinem_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cli = QPINEM_CLI_PATH;
    auto run = [&](const std::string& out, const std::string& args) {
      std::string cmd = "\"" + cli + "\" --seed 5 --out \"" + (root / out).string() + "\" " + args + " > /dev/null";
      return std::system(cmd.c_str());
    };
    const std::string sp = (root / "input").string();
    o.check(run("input", "spectrum --state amplifier --mean 1000 --g-q 0.03") == 0, "input spectrum");
    const std::vector<std::pair<std::string, std::string>> commands{
        {"spectrum", "spectrum --state thermal --g-sweep 0:2:9"},
        {"walk", "walk"},
        {"fidelity", "fidelity"},
        {"amplifier", "amplifier"},
        {"phasematch", "phasematch"},
        {"classical", "classical"},
        {"fit", "fit --spectrum \"" + sp + "/spectrum_continuous.csv\" --zlp \"" + sp + "/zlp.csv\" --g-q 0.03"},
    };
    for (const auto& [name, args] : commands) {
      int files = 0, differ = 0;
      o.check(run(name + "_1", args) == 0 && run(name + "_2", args) == 0, name + " ran");
      for (const auto& e : fs::directory_iterator(root / (name + "_1"))) {
        ++files;
        fs::path other = root / (name + "_2") / e.path().filename();
        if (!fs::exists(other) || io::read_text(e.path()) != io::read_text(other)) ++differ;
      }
      o.detail << " " << name << " " << files - differ << "/" << files;
      o.check(files > 0 && differ == 0, name + " byte-identical");
    }
    fs::remove_all(root);
  });
#else
  std::printf("FAIL 11 CLI reruns are byte-identical: built without the CLI\n");
#endif

  std::printf("%d of 11 criteria failed\n", failures);
  return 0;
}
