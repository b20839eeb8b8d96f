#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "uniwkb/cli/commands.hpp"

namespace {

using namespace uniwkb::cli;

std::filesystem::path resolve_out(const std::string& out, const std::string& command, const std::string& format) {
  const char* dir = std::getenv("OUTPUT_DIR");
  std::filesystem::path p = out.empty() ? std::filesystem::path(command + "." + format) : std::filesystem::path(out);
  if (dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw uniwkb::ConfigError("cannot write '" + p.string() + "'");
  f << text;
}

int emit(const Report& r, const std::string& command, const std::string& out, const std::string& format) {
  const std::string body = format == "json" ? to_json(r).dump(2) + "\n" : to_csv(r);
  const bool to_file = !out.empty() || std::getenv("OUTPUT_DIR");
  if (!to_file) {
    std::cout << body;
  } else {
    const auto path = resolve_out(out, command, format);
    write_file(path, body);
    if (format == "csv") write_file(path.string() + ".json", r.meta.dump(2) + "\n");
    std::cerr << "wrote " << path.string() << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform WKB expansions by the method of comparison equations"};
  app.require_subcommand(1);
  std::string config, out, format = "csv";
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "problem file (key = value lines)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output path (relative paths go under $OUTPUT_DIR when set)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* expand = app.add_subcommand("expand", "compute y0..yN, sigma and the residual on a grid");
  auto* verify = app.add_subcommand("verify", "compare the assembled u with the oracle integration");
  auto* dingle = app.add_subcommand("dingle", "exact turning-point coefficients");
  auto* sweep = app.add_subcommand("sweep", "residual norms over eps_list and the fitted slope");
  add_common(expand, true);
  add_common(verify, true);
  add_common(dingle, false);
  add_common(sweep, true);
  std::string gamma;
  dingle->add_option("--gamma", gamma, "g1,g2,g3,g4 or 'symbolic' (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    ProblemConfig c;
    if (!config.empty()) c = load_config(config);
    if (expand->parsed()) return emit(run_expand(c), "expand", out, format);
    if (verify->parsed()) return emit(run_verify(c), "verify", out, format);
    if (sweep->parsed()) return emit(run_sweep(c), "sweep", out, format);
    if (!gamma.empty()) {
      std::istringstream in("gamma = " + gamma);
      c.gamma = parse_config(in).gamma;
    }
    return emit(run_dingle(c), "dingle", out, format);
  } catch (const uniwkb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category() == uniwkb::ErrorCategory::config ? exit_config : exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }
}
