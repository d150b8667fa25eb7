#pragma once

#include "momentkit/completion.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>

namespace momentkit::cli {

using nlohmann::json;

struct CliOptions {
  std::optional<Arith> mode;  // overrides the file's "arithmetic"
  std::optional<double> tolerance;
  std::optional<int> depth;
  std::optional<int> grid_q;
  std::uint64_t seed = 1;
  bool pretty = false;
};

struct CliResult {
  int exit_code = 0;  // 0 positive/feasible/valid, 1 negative, 2 unknown, 3 input error
  json body;
};

CliResult run_problem(const json& problem, const CliOptions& opt = {});
CliResult run_text(const std::string& text, const CliOptions& opt = {});

json certificate_to_json(const CompletionCertificate& cert);
CompletionCertificate certificate_from_json(const json& j);

// One <name>.result.json per <name>.json in dir; returns the worst exit code.
int run_batch(const std::string& dir, const CliOptions& opt, unsigned threads, std::ostream& log);

int main(int argc, char** argv);

}  // namespace momentkit::cli
