// btq <command> [--config file.json] [--out dir]
//
// Commands: gram, toeplitz, commutator-scan, star-defect, phi1-probe,
// norm-scan, moyal-check, index-check, beta-check, theta.
// Exit codes: 0 all checks pass, 1 usage/config error, 2 check failure.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "btq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Berezin-Toeplitz quantization lab"};
  std::string command, config_path, out_dir;
  app.add_option("command", command,
                 "gram | toeplitz | commutator-scan | star-defect | phi1-probe | norm-scan | "
                 "moyal-check | index-check | beta-check | theta")
      ->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory (overrides config output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 1;
  }

  try {
    std::string config_text = "{}";
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        std::fprintf(stderr, "error: cannot read config file '%s'\n", config_path.c_str());
        return 1;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      config_text = ss.str();
    }
    btq::RunConfig config = btq::parse_config(config_text);
    if (config.command.empty())
      config.command = command;
    else if (config.command != command) {
      std::fprintf(stderr, "error: CLI command '%s' does not match config command '%s'\n",
                   command.c_str(), config.command.c_str());
      return 1;
    }
    // Re-validate the CLI-provided command name.
    config = [&] {
      btq::RunConfig c = config;
      if (c.command != "gram" && c.command != "toeplitz" && c.command != "commutator-scan" &&
          c.command != "star-defect" && c.command != "phi1-probe" && c.command != "norm-scan" &&
          c.command != "moyal-check" && c.command != "index-check" && c.command != "beta-check" &&
          c.command != "theta")
        throw btq::config_error("unknown command '" + c.command + "'");
      return c;
    }();
    if (!out_dir.empty()) config.output_dir = out_dir;
    return btq::run(config);
  } catch (const btq::config_error& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
