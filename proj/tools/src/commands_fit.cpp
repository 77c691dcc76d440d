#include <cmath>
#include <filesystem>

#include "commands.hpp"

#include "qpinem/qpinem.hpp"

namespace qpinem::cli {

namespace {

namespace fs = std::filesystem;

struct FitJob {
  fs::path spectrum;
  fs::path zlp;
};

nlohmann::json report_json(const FitResult& r) {
  nlohmann::json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["residual"] = r.residual;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["g2"] = r.g2;
  j["n_mean"] = r.n_mean ? nlohmann::json(*r.n_mean) : nlohmann::json(nullptr);
  j["n_in"] = std::isfinite(r.n_in) ? nlohmann::json(r.n_in) : nlohmann::json(nullptr);
  j["degenerate"] = r.degenerate;
  return j;
}

// Fits one spectrum and writes <prefix>report.json, overlay and statistics.
FitResult fit_one(const FitJob& job, const Settings& s, Context& ctx, const std::string& prefix) {
  ContinuousSpectrum measured = io::read_continuous(job.spectrum);
  ZlpKernel zlp = io::read_zlp(job.zlp);
  CouplingParams c;
  c.g_mag = s.number("g_q");
  c.hbar_omega = s.number("hbar_omega");
  FitOptions opt;
  opt.poisson_weighting = s.boolean("poisson");
  opt.max_iterations = s.integer("max_iterations");
  if (s.has("init_a") != s.has("init_b")) throw ValidationError("fit: give both init_a and init_b or neither");
  if (s.has("init_a")) opt.init = std::make_pair(s.number("init_a"), s.number("init_b"));

  FitResult r = fit_amplifier_spectrum(measured, zlp, c, opt);
  ctx.write_json(prefix + "report.json", report_json(r));

  std::vector<double> model = amplifier_model_trace(r.a, r.b, zlp, c.hbar_omega, measured.energy);
  double area_m = 0.0, area_f = 0.0;
  for (size_t i = 0; i < model.size(); ++i) {
    area_m += measured.density[i];
    area_f += model[i];
  }
  io::CsvTable overlay{{"energy_eV", "measured", "model"}, {}};
  for (size_t i = 0; i < model.size(); ++i) {
    overlay.rows.push_back({measured.energy[i], area_m > 0.0 ? measured.density[i] / (area_m * zlp.step) : 0.0,
                            area_f > 0.0 ? model[i] / (area_f * zlp.step) : 0.0});
  }
  ctx.write_csv(prefix + "overlay.csv", overlay);
  if (c.g_mag > 0.0) {
    io::write_statistics(ctx.output(prefix + "statistics.csv"),
                         amplifier_statistics(amplifier_from_fit(r.a, r.b, c.g_mag), {}, s.number("tail_tol")));
  }
  return r;
}

void run_fit(const Settings& s, Context& ctx) {
  std::vector<FitJob> jobs;
  const bool batch = s.has("batch");
  if (batch) {
    if (s.has("spectrum") || s.has("zlp")) throw ValidationError("fit: use either batch or spectrum/zlp");
    fs::path manifest = s.text("batch");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_text(manifest));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(manifest.string() + ": " + e.what());
    }
    if (!j.contains("spectra") || !j["spectra"].is_array()) throw IoError(manifest.string() + ": needs a \"spectra\" array");
    fs::path base = manifest.parent_path();
    for (const auto& e : j["spectra"]) {
      if (!e.is_object() || !e.contains("spectrum") || !e.contains("zlp") || !e["spectrum"].is_string() ||
          !e["zlp"].is_string()) {
        throw IoError(manifest.string() + ": each entry needs \"spectrum\" and \"zlp\" paths");
      }
      auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
      jobs.push_back({resolve(e["spectrum"]), resolve(e["zlp"])});
    }
  } else {
    jobs.push_back({s.text("spectrum"), s.text("zlp")});
  }

  bool all_converged = true;
  if (!batch) {
    all_converged = fit_one(jobs.front(), s, ctx, "fit_").converged;
  } else {
    io::CsvTable summary{{"index", "a", "b", "residual", "converged", "g2", "n_in", "n_mean"}, {}};
    for (size_t i = 0; i < jobs.size(); ++i) {
      FitResult r = fit_one(jobs[i], s, ctx, "fit_" + std::to_string(i) + "_");
      all_converged = all_converged && r.converged;
      summary.rows.push_back({static_cast<double>(i), r.a, r.b, r.residual, r.converged ? 1.0 : 0.0, r.g2,
                              std::isfinite(r.n_in) ? r.n_in : std::nan(""),
                              r.n_mean ? *r.n_mean : std::nan("")});
    }
    ctx.write_csv("fit_summary.csv", summary);
  }
  if (!all_converged) throw ConvergenceError("fit: simplex did not converge within the iteration cap");
}

}  // namespace

Command fit_command() {
  return {"fit",
          "Fit measured spectra to the amplified-light model",
          {
              {"spectrum", Kind::text, "", "measured spectrum CSV (energy_eV,density)"},
              {"zlp", Kind::text, "", "zero-loss peak CSV (energy_eV,density)"},
              {"batch", Kind::text, "", "JSON manifest {\"spectra\": [{\"spectrum\": ..., \"zlp\": ...}]}"},
              {"g_q", Kind::number, "0.016", "effective single-photon coupling used for n_mean and statistics"},
              {"hbar_omega", Kind::number, io::format_double(kDefaultHbarOmega), "photon energy (eV)"},
              {"init_a", Kind::number, "", "initial thermal strength (skips the grid search)"},
              {"init_b", Kind::number, "", "initial coherent strength"},
              {"poisson", Kind::boolean, "false", "Poisson-weighted residuals"},
              {"max_iterations", Kind::integer, "10000", "simplex iteration cap"},
              {"tail_tol", Kind::number, "1e-8", "truncation tail tolerance for the statistics"},
          },
          run_fit};
}

}  // namespace qpinem::cli
