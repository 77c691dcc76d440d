#include "qpinem_cli/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"

#include "qpinem/errors.hpp"
#include "qpinem/version.hpp"

namespace qpinem::cli {

namespace {

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::string text = io::read_text(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config " + path + ": top level must be an object");
  return j;
}

struct Bound {
  std::string key;
  CLI::Option* option = nullptr;
  std::string value;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Electron energy spectra and photon statistics for free-electron quantum-light interactions", "qpinem"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;
  CLI::Option* out_opt = app.add_option("--out", out_dir, "output directory");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "random seed");
  CLI::Option* threads_opt = app.add_option("--threads", threads, "worker threads (0: all cores)");
  app.add_option("--config", config_path, "JSON parameter file; flags override it");
  app.require_subcommand(1);

  const std::vector<Command> commands{spectrum_command(),   walk_command(),      fidelity_command(), amplifier_command(),
                                      phasematch_command(), classical_command(), fit_command()};
  std::vector<std::vector<std::unique_ptr<Bound>>> bound(commands.size());
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].description);
    sub->fallthrough();
    for (const ParamSpec& p : commands[i].params) {
      auto b = std::make_unique<Bound>();
      b->key = p.key;
      std::string help = p.help + (p.fallback.empty() ? "" : " [" + p.fallback + "]");
      b->option = sub->add_option("--" + dashed(p.key), b->value, help);
      bound[i].push_back(std::move(b));
    }
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  size_t which = 0;
  while (which < subs.size() && !subs[which]->parsed()) ++which;
  const Command& cmd = commands[which];

  nlohmann::json manifest;
  std::unique_ptr<Context> ctx;
  try {
    nlohmann::json config = load_config(config_path);
    // run-level keys may also come from the config file; flags win
    auto take = [&](const char* key, CLI::Option* flag, auto& target) {
      if (!config.contains(key)) return;
      if (flag->count() == 0) {
        try {
          target = config.at(key).get<std::decay_t<decltype(target)>>();
        } catch (const nlohmann::json::exception&) {
          throw ValidationError(std::string("config '") + key + "' has the wrong type");
        }
      }
      config.erase(key);
    };
    take("out", out_opt, out_dir);
    take("seed", seed_opt, seed);
    take("threads", threads_opt, threads);

    std::map<std::string, std::string> flags;
    for (const auto& b : bound[which]) {
      if (b->option->count() > 0) flags[b->key] = b->value;
    }
    Settings settings(cmd.params, config, flags);
    ctx = std::make_unique<Context>(out_dir, seed, threads, out);
    manifest["command"] = cmd.name;
    manifest["version"] = std::string(kVersion);
    manifest["seed"] = seed;
    manifest["threads"] = threads;
    manifest["parameters"] = settings.resolved();
    cmd.run(settings, *ctx);
    manifest["status"] = "ok";
    manifest["outputs"] = ctx->outputs();
    io::write_text(ctx->dir() / "manifest.json", manifest.dump(2) + "\n");
    out << cmd.name << ": wrote " << ctx->outputs().size() + 1 << " files to " << ctx->dir().string() << "\n";
    return 0;
  } catch (const Error& e) {
    int code = dynamic_cast<const ValidationError*>(&e) ? 1 : dynamic_cast<const IoError*>(&e) ? 3 : 2;
    err << "qpinem " << cmd.name << ": " << e.what() << "\n";
    if (ctx) {
      // keep whatever diagnostics were written
      manifest["status"] = std::string("error: ") + e.what();
      manifest["outputs"] = ctx->outputs();
      try {
        io::write_text(ctx->dir() / "manifest.json", manifest.dump(2) + "\n");
      } catch (const Error&) {
      }
    }
    return code;
  } catch (const std::exception& e) {
    err << "qpinem " << cmd.name << ": internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qpinem::cli
