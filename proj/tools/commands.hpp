#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli_support.hpp"

namespace smalldev::cli {

/// A subcommand produces either a table or a JSON document.
struct Output {
  std::optional<Table> table;
  std::optional<Json> json;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  std::string manifest;
};

using Runner = std::function<Output(const Globals&)>;

/// Adds every subcommand to app; runners are keyed by subcommand name.
void register_commands(CLI::App& app, std::map<std::string, Runner>& runners);

}  // namespace smalldev::cli
