#include "qpinem/recon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qpinem/errors.hpp"
#include "qpinem/nnls.hpp"

namespace qpinem {

namespace {

// Ladder half-width that still lands on the measured grid.
int model_k_max(double a, double b, const ZlpKernel& zlp, double hbar_omega, const std::vector<double>& energy) {
  int need = default_k_max(std::sqrt(a) + std::sqrt(b)) + static_cast<int>(std::ceil(6.0 * std::sqrt(a)));
  double reach = std::max(std::abs(energy.front()), std::abs(energy.back())) +
                 std::max(std::abs(zlp.energy.front()), std::abs(zlp.energy.back()));
  int on_grid = static_cast<int>(std::ceil(reach / hbar_omega)) + 1;
  return std::max(1, std::min(need, on_grid));
}

struct Objective {
  const std::vector<double>& energy;
  const std::vector<double>& target;
  const ZlpKernel& zlp;
  double hbar_omega;
  bool poisson;
  double floor;
  double step;

  double operator()(double u, double v) const {
    std::vector<double> m = amplifier_model_trace(u * u, v * v, zlp, hbar_omega, energy);
    // same on-grid normalisation as the target, so mass outside the window does not bias the fit
    double area = 0.0;
    for (double d : m) area += d;
    area *= step;
    if (area > 0.0) {
      for (double& d : m) d /= area;
    }
    double acc = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
      double r = m[i] - target[i];
      acc += poisson ? r * r / std::max(m[i], floor) : r * r;
    }
    return acc;
  }
};

struct NelderMeadResult {
  std::array<double, 2> x{};
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const Objective& obj, std::array<double, 2> x0, int max_it, double rel_tol) {
  std::array<std::array<double, 2>, 3> s;
  std::array<double, 3> f;
  s[0] = x0;
  for (int d = 0; d < 2; ++d) {
    s[d + 1] = x0;
    s[d + 1][d] += std::max(0.1 * std::abs(x0[d]), 1e-3);
  }
  for (int i = 0; i < 3; ++i) f[i] = obj(s[i][0], s[i][1]);
  NelderMeadResult r;
  const double abs_floor = 1e-12;
  for (int it = 0; it < max_it; ++it) {
    r.iterations = it + 1;
    std::array<int, 3> o{0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int i, int j) { return f[i] < f[j]; });
    auto& best = s[o[0]];
    double spread = 0.0;
    for (int i = 1; i < 3; ++i) {
      for (int d = 0; d < 2; ++d) {
        double scale = std::max(std::abs(best[d]), abs_floor);
        spread = std::max(spread, std::abs(s[o[i]][d] - best[d]) / scale);
      }
    }
    if (spread < rel_tol) {
      r.converged = true;
      break;
    }
    std::array<double, 2> c{};
    for (int d = 0; d < 2; ++d) c[d] = 0.5 * (s[o[0]][d] + s[o[1]][d]);
    auto at = [&](double t) {
      std::array<double, 2> p{};
      for (int d = 0; d < 2; ++d) p[d] = c[d] + t * (s[o[2]][d] - c[d]);
      return p;
    };
    std::array<double, 2> xr = at(-1.0);
    double fr = obj(xr[0], xr[1]);
    if (fr < f[o[0]]) {
      std::array<double, 2> xe = at(-2.0);
      double fe = obj(xe[0], xe[1]);
      if (fe < fr) {
        s[o[2]] = xe;
        f[o[2]] = fe;
      } else {
        s[o[2]] = xr;
        f[o[2]] = fr;
      }
    } else if (fr < f[o[1]]) {
      s[o[2]] = xr;
      f[o[2]] = fr;
    } else {
      bool outside = fr < f[o[2]];
      std::array<double, 2> xc = at(outside ? -0.5 : 0.5);
      double fc = obj(xc[0], xc[1]);
      if (fc < (outside ? fr : f[o[2]])) {
        s[o[2]] = xc;
        f[o[2]] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          for (int d = 0; d < 2; ++d) s[o[i]][d] = s[o[0]][d] + 0.5 * (s[o[i]][d] - s[o[0]][d]);
          f[o[i]] = obj(s[o[i]][0], s[o[i]][1]);
        }
      }
    }
  }
  int bi = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  r.x = s[bi];
  r.f = f[bi];
  return r;
}

}  // namespace

std::vector<double> amplifier_model_trace(double a, double b, const ZlpKernel& zlp, double hbar_omega,
                                          const std::vector<double>& energy) {
  int K = model_k_max(a, b, zlp, hbar_omega, energy);
  ElectronSpectrum s = closed_form_mixed_spectrum(b, a, K);
  return convolve_on_grid(s, zlp, hbar_omega, energy);
}

AmplifierParams amplifier_from_fit(double a, double b, double g_eff) {
  if (!(g_eff > 0.0)) throw ValidationError("amplifier_from_fit: effective coupling must be > 0");
  if (!(a >= 0.0) || !(b >= 0.0)) throw ValidationError("amplifier_from_fit: strengths must be >= 0");
  double g2 = g_eff * g_eff;
  double G = 1.0 + a / g2;
  double alpha2 = b / (g2 * G);
  return {cplx(std::sqrt(alpha2), 0.0), G};
}

FitResult fit_amplifier_spectrum(const ContinuousSpectrum& measured, const ZlpKernel& zlp,
                                 const CouplingParams& coupling, const FitOptions& opt) {
  coupling.validate();
  if (measured.energy.size() != measured.density.size()) throw ValidationError("fit: energy and density lengths differ");
  double h = uniform_step(measured.energy, "fit");
  if (std::abs(h - zlp.step) > 1e-6 * zlp.step) {
    throw ValidationError("fit: measured grid step is incommensurate with the ZLP kernel step");
  }
  double area = 0.0;
  for (double d : measured.density) {
    if (!std::isfinite(d)) throw ValidationError("fit: measured density must be finite");
    area += d;
  }
  area *= h;
  if (!(area > 0.0)) throw ValidationError("fit: measured trace has zero area");
  std::vector<double> target(measured.density.size());
  double peak = 0.0;
  for (size_t i = 0; i < target.size(); ++i) {
    target[i] = measured.density[i] / area;
    peak = std::max(peak, target[i]);
  }
  Objective obj{measured.energy, target, zlp, coupling.hbar_omega, opt.poisson_weighting, 1e-6 * peak, h};

  std::array<double, 2> x0{};
  if (opt.init) {
    x0 = {std::sqrt(std::max(0.0, opt.init->first)), std::sqrt(std::max(0.0, opt.init->second))};
  } else {
    // Coarse log grid in (a, b), zero included.
    std::vector<double> levels{0.0};
    for (int i = 0; i <= 32; ++i) levels.push_back(std::pow(10.0, -6.0 + 0.25 * i));
    double best = std::numeric_limits<double>::infinity();
    for (double a : levels) {
      for (double b : levels) {
        double v = obj(std::sqrt(a), std::sqrt(b));
        if (v < best) {
          best = v;
          x0 = {std::sqrt(a), std::sqrt(b)};
        }
      }
    }
  }

  NelderMeadResult nm = nelder_mead(obj, x0, opt.max_iterations, opt.rel_tol);
  int used = nm.iterations;
  if (nm.converged && used < opt.max_iterations) {
    // Restart from the optimum to guard against a collapsed simplex.
    NelderMeadResult again = nelder_mead(obj, nm.x, opt.max_iterations - used, opt.rel_tol);
    used += again.iterations;
    if (again.f <= nm.f) nm = {again.x, again.f, again.iterations, again.converged};
  }

  FitResult r;
  r.a = nm.x[0] * nm.x[0];
  r.b = nm.x[1] * nm.x[1];
  r.residual = nm.f;
  r.iterations = used;
  r.converged = nm.converged;
  r.degenerate = (r.a + r.b) < 1e-8;
  r.g2 = (r.a + r.b) > 0.0 ? 2.0 - std::pow(r.b / (r.a + r.b), 2) : 2.0;
  r.n_in = r.a > 0.0 ? r.b / r.a : std::numeric_limits<double>::infinity();
  if (coupling.g_mag > 0.0) r.n_mean = (r.a + r.b) / (coupling.g_mag * coupling.g_mag);
  return r;
}

double estimate_mean_photons(const ElectronSpectrum& s, double g_mag) {
  if (!(g_mag > 0.0)) throw ValidationError("estimate_mean_photons: coupling must be > 0");
  double m2 = 0.0, tot = 0.0;
  for (int k = -s.k_max; k <= s.k_max; ++k) {
    m2 += static_cast<double>(k) * k * s.at(k);
    tot += s.at(k);
  }
  if (!(tot > 0.0)) throw ValidationError("estimate_mean_photons: empty spectrum");
  return std::max(0.0, 0.5 * (m2 / tot / (g_mag * g_mag) - 1.0));
}

ReconstructionResult reconstruct_photon_statistics(const ElectronSpectrum& spectrum, const CouplingParams& coupling,
                                                   const ReconstructionOptions& opt) {
  coupling.validate();
  if (!(coupling.g_mag > 0.0)) throw ValidationError("reconstruct: coupling must be > 0");
  if (!(opt.reg_lambda >= 0.0)) throw ValidationError("reconstruct: regularisation weight must be >= 0");
  if (spectrum.p.size() != static_cast<size_t>(2 * spectrum.k_max + 1)) throw ValidationError("reconstruct: malformed spectrum");
  double mean = estimate_mean_photons(spectrum, coupling.g_mag);
  int N = opt.n_max ? *opt.n_max : std::max(20, static_cast<int>(std::ceil(10.0 * (mean + 1.0))));
  if (N < 1) throw ValidationError("reconstruct: n_max must be >= 1");

  CouplingParams c = coupling;
  c.k_max = spectrum.k_max;
  Regime regime = resolve_regime(opt.regime, c.g_mag, mean, c.k_max);
  Eigen::MatrixXd A = transition_weights(c, N, regime).transpose();  // (2K+1) x (N+1)
  Eigen::VectorXd P = Eigen::Map<const Eigen::VectorXd>(spectrum.p.data(), spectrum.p.size());

  Eigen::MatrixXd H = A.transpose() * A;
  if (opt.reg_lambda > 0.0 && N >= 2) {
    // lambda * D2' D2 for second differences, added band by band
    const double l = opt.reg_lambda;
    for (int r = 0; r + 2 <= N; ++r) {
      const double d[3] = {1.0, -2.0, 1.0};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) H(r + i, r + j) += l * d[i] * d[j];
      }
    }
  }
  Eigen::VectorXd f = A.transpose() * P;
  NnlsResult sol = nnls_normal_equations(H, f);

  ReconstructionResult out;
  out.raw = sol.x;
  out.iterations = sol.iterations;
  out.residual = (A * sol.x - P).norm();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  out.kernel_condition = sv.size() > 0 && sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                                                  : std::numeric_limits<double>::infinity();
  double total = sol.x.cwiseMax(0.0).sum();
  out.stats.p.assign(N + 1, 0.0);
  if (!(total > 0.0)) {
    out.infeasible = true;
    return out;
  }
  for (int n = 0; n <= N; ++n) out.stats.p[n] = std::max(0.0, sol.x[n]) / total;
  out.stats.tail_mass = 0.0;
  if (!sol.converged) throw ConvergenceError("reconstruct: NNLS iteration cap reached");
  return out;
}

std::vector<TransitionRow> g2_transition_curve(const std::vector<double>& seeds,
                                               const std::function<double(double)>& gain_of_seed,
                                               const CouplingParams& coupling, std::optional<double> probe_mean,
                                               const ReconstructionOptions& opt) {
  if (!gain_of_seed) throw ValidationError("g2_transition_curve: missing gain table");
  std::vector<TransitionRow> rows;
  for (double n_in : seeds) {
    if (!(n_in >= 0.0)) throw ValidationError("g2_transition_curve: seed photon number must be >= 0");
    TransitionRow r;
    r.n_in = n_in;
    r.gain = gain_of_seed(n_in);
    AmplifierParams prm{cplx(std::sqrt(n_in), 0.0), r.gain};
    prm.validate();
    AmplifierMoments m = amplifier_mean_and_g2(prm);
    r.n_out = m.mean;
    r.g2_theory = m.g2;
    AmplifierParams probe = prm;
    if (probe_mean && *probe_mean < m.mean) probe = attenuate(prm, *probe_mean / m.mean);
    r.n_probe = amplifier_mean_and_g2(probe).mean;
    PhotonStatistics st = amplifier_statistics(probe);
    CouplingParams c = coupling;
    ElectronSpectrum s = electron_spectrum(st, c, Regime::automatic);
    ReconstructionResult rec = reconstruct_photon_statistics(s, c, opt);
    r.g2_reconstructed = rec.infeasible ? std::numeric_limits<double>::quiet_NaN() : g2(rec.stats);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qpinem
