#pragma once

#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "settings.hpp"

#include "qpinem/scattering.hpp"

namespace qpinem::cli {

struct Command {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  void (*run)(const Settings&, Context&);
};

Command spectrum_command();
Command walk_command();
Command fidelity_command();
Command amplifier_command();
Command phasematch_command();
Command classical_command();
Command fit_command();

// Runs f(0..n-1) on up to `threads` workers. Results must be written by index;
// the lowest-index exception is rethrown so failures are reproducible.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::max(1, std::min(threads, n));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(std::max(n, 0)));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shared by several commands.
Regime parse_regime(const std::string& name);
io::CsvTable spectrum_matrix(const std::string& label, const std::vector<double>& columns,
                             const std::vector<ElectronSpectrum>& spectra);

}  // namespace qpinem::cli
