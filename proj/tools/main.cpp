// smalldev command-line front end.
//
// Every run writes its result and a manifest (<out>.manifest.json) holding the
// effective arguments; `smalldev replay <manifest>` reruns it.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "smalldev/errors.hpp"
#include "smalldev/parallel.hpp"
#include "smalldev/rng.hpp"

namespace smalldev::cli {
namespace {

// Global options taking a value; replay re-adds seed and format explicitly.
const std::set<std::string> kGlobalWithValue = {"--seed", "--out", "--format", "--threads", "--manifest", "--config"};

struct Prepared {
  std::vector<std::string> args;  ///< without program name, config merged
  std::string subcommand;
};

// Splits --key=value, pulls --config out and splices its entries after the subcommand.
Prepared prepare(const std::vector<std::string>& raw, const std::set<std::string>& subcommands,
                 const CLI::App& app) {
  std::vector<std::string> args;
  for (const auto& a : raw) {
    const auto eq = a.find('=');
    if (a.rfind("--", 0) == 0 && eq != std::string::npos) {
      args.push_back(a.substr(0, eq));
      args.push_back(a.substr(eq + 1));
    } else {
      args.push_back(a);
    }
  }
  std::string config;
  std::vector<std::string> kept;
  std::ptrdiff_t sub_at = -1;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config = args[++i];
      continue;
    }
    kept.push_back(args[i]);
    if (sub_at < 0 && kGlobalWithValue.count(args[i]) && i + 1 < args.size()) {
      kept.push_back(args[++i]);
      continue;
    }
    if (sub_at < 0 && subcommands.count(args[i])) sub_at = static_cast<std::ptrdiff_t>(kept.size()) - 1;
  }
  Prepared p;
  if (sub_at >= 0) p.subcommand = kept[static_cast<std::size_t>(sub_at)];
  if (!config.empty()) {
    if (sub_at < 0) throw UsageError("--config needs a subcommand");
    const CLI::App* sub = app.get_subcommand_no_throw(p.subcommand);
    std::vector<std::string> injected;
    for (const auto& [key, value] : read_config(config)) {
      const std::string flag = "--" + key;
      const CLI::Option* opt = sub->get_option_no_throw(flag);
      if (opt == nullptr) opt = app.get_option_no_throw(flag);
      if (opt == nullptr) throw UsageError("unknown config key '" + key + "'");
      if (opt->get_type_size() == 0) {
        if (value == "true" || value == "1") injected.push_back(flag);
        continue;
      }
      injected.push_back(flag);
      injected.push_back(value);
    }
    kept.insert(kept.begin() + sub_at + 1, injected.begin(), injected.end());
  }
  p.args = std::move(kept);
  return p;
}

// Effective arguments minus run-local options, with seed and format pinned.
std::vector<std::string> replay_args(const std::vector<std::string>& args, const Globals& g,
                                     const std::string& subcommand) {
  std::vector<std::string> out{subcommand};
  bool seen_sub = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (!seen_sub && a == subcommand) {
      seen_sub = true;
      continue;
    }
    if (kGlobalWithValue.count(a)) {
      ++i;
      continue;
    }
    if (seen_sub) out.push_back(a);
  }
  out.insert(out.end(), {"--seed", std::to_string(g.seed), "--format", g.format});
  return out;
}

Json resolved_options(const CLI::App& sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      j[name] = opt->get_type_size() == 0 ? "true" : opt->results().back();
    } else {
      j[name] = opt->get_type_size() == 0 ? "false" : opt->get_default_str();
    }
  }
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot write '" + path + "'");
  os << content;
}

int run(const std::vector<std::string>& raw);

int replay(const std::string& manifest_path, const std::string& out, const std::string& threads) {
  std::ifstream in(manifest_path);
  if (!in) throw UsageError("cannot open manifest '" + manifest_path + "'");
  Json m;
  try {
    m = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed manifest: " + std::string(e.what()));
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw UsageError("manifest has no argv");
  std::vector<std::string> args;
  for (const auto& a : m["argv"]) args.push_back(a.get<std::string>());
  args.push_back("--out");
  args.push_back(out.empty() ? m.value("output", std::string("-")) : out);
  if (!threads.empty()) args.insert(args.end(), {"--threads", threads});
  return run(args);
}

int run(const std::vector<std::string>& raw) {
  CLI::App app{"Small deviations of stationary Gaussian processes", "smalldev"};
  app.set_version_flag("--version", std::string(SMALLDEV_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  Globals g;
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Random seed (default: SMALLDEV_SEED or a fixed constant)");
  app.add_option("--out", g.out, "Result file; '-' for stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads (0: hardware)");
  app.add_option("--manifest", g.manifest, "Manifest path (default: <out>.manifest.json)");
  app.add_option("--config", "Flat key=value file; flags override it");

  std::map<std::string, Runner> runners;
  register_commands(app, runners);

  std::string replay_manifest;
  auto* rep = app.add_subcommand("replay", "Rerun a manifest");
  rep->add_option("manifest", replay_manifest, "Manifest file")->required();

  std::set<std::string> names{"replay"};
  for (const auto& [name, _] : runners) names.insert(name);

  Prepared prep;
  try {
    prep = prepare(raw, names, app);
    std::vector<std::string> rev(prep.args.rbegin(), prep.args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (prep.subcommand == "replay") return replay(replay_manifest, g.out, g.threads ? std::to_string(g.threads) : "");

  g.seed = seed.value_or(default_seed());
  if (g.out.empty()) g.out = prep.subcommand + (g.format == "json" ? ".json" : ".csv");
  if (g.manifest.empty()) g.manifest = (g.out == "-" ? prep.subcommand : g.out) + ".manifest.json";
  set_default_thread_count(g.threads);

  Json manifest;
  manifest["tool"] = "smalldev";
  manifest["version"] = SMALLDEV_VERSION;
  manifest["subcommand"] = prep.subcommand;
  manifest["argv"] = replay_args(prep.args, g, prep.subcommand);
  manifest["options"] = resolved_options(*app.get_subcommand(prep.subcommand));
  manifest["seed"] = g.seed;
  manifest["format"] = g.format;
  manifest["output"] = g.out;

  int code = 0;
  try {
    const Output out = runners.at(prep.subcommand)(g);
    std::ostringstream os;
    const Format f = parse_format(g.format);
    if (out.table) write_table(os, *out.table, f);
    if (out.json) write_json(os, *out.json, f);
    write_file(g.out, os.str());
    manifest["status"] = "ok";
  } catch (const UsageError& e) {
    std::cerr << "smalldev: " << e.what() << '\n';
    manifest["status"] = "usage-error";
    manifest["error"] = e.what();
    code = 2;
  } catch (const PreconditionError& e) {
    std::cerr << "smalldev: " << e.what() << '\n';
    manifest["status"] = "usage-error";
    manifest["error"] = e.what();
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "smalldev: " << e.what() << '\n';
    manifest["status"] = "error";
    manifest["error"] = e.what();
    code = 1;
  }
  manifest["exit_code"] = code;
  write_file(g.manifest, manifest.dump(2) + "\n");
  return code;
}

}  // namespace
}  // namespace smalldev::cli

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return smalldev::cli::run(args);
  } catch (const smalldev::cli::UsageError& e) {
    std::cerr << "smalldev: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "smalldev: " << e.what() << '\n';
    return 1;
  }
}
