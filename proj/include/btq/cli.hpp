#ifndef BTQ_CLI_HPP
#define BTQ_CLI_HPP

// Batch front-end: JSON config -> deterministic CSV/JSON artifacts.
// Exit codes: 0 all checks pass, 1 usage/config error, 2 check failure.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "btq/quantize.hpp"

namespace btq {

// Parses the function expression mini-language: generators u, v, w,
// operators + - * ^, rational constants (7, 3/2), parentheses.
SpherePolynomial parse_polynomial_expr(const std::string& text);

struct RunConfig {
  std::string command;
  std::vector<int> levels{8, 16, 32, 64};
  int k0 = 0;
  int truncation = 6;  // K
  std::map<std::string, SpherePolynomial> functions;
  std::optional<std::vector<SpherePolynomial>> phis;
  std::vector<std::string> idempotents;  // trivial-1, trivial-2, bott+1, bott-1
  MapKind map_kind = MapKind::toeplitz;
  std::string output_dir = "btq-out";
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

// Validates and fills defaults; rejects unknown commands and keys.
RunConfig parse_config(const std::string& json_text);

// Executes the configured command, writing artifacts under output_dir.
// Returns the process exit code.
int run(const RunConfig& config);

// Thread cap for per-level fan-out (BTQ_THREADS, default 1).
int thread_cap();

}  // namespace btq

#endif
