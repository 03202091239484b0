#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "extremal/extremal.h"

namespace {

struct ParamFlag {
  std::string flag;   // without the leading dashes
  std::string key;    // params key
  bool file = false;  // the flag names a file whose contents become the value
  bool boolean = false;
};

const std::map<std::string, std::vector<ParamFlag>>& command_flags() {
  static const std::map<std::string, std::vector<ParamFlag>> flags = {
      {"exponent",
       {{"kind", "kind"}, {"A", "A", true}, {"A-rows", "A"}, {"y", "y"}, {"Q", "Q"}, {"mode", "mode"},
        {"digits", "digits"}, {"v-max", "v_max"}, {"inject", "inject"}}},
      {"flow", {{"y", "y"}, {"t-max", "t_max"}, {"digits", "digits"}}},
      {"criterion",
       {{"n", "n"}, {"s", "s"}, {"j", "j"}, {"bound", "bound"}, {"A", "A", true}, {"A-rows", "A"}, {"v", "v"},
        {"N", "N"}, {"source", "source"}, {"check", "check"}, {"Q", "Q"}, {"digits", "digits"}}},
      {"hyperplane", {{"a", "a"}, {"Q", "Q"}, {"v", "v"}, {"N", "N"}, {"inject", "inject"}, {"digits", "digits"}}},
      {"line", {{"b", "b"}, {"Q", "Q"}, {"v", "v"}, {"N", "N"}, {"inject", "inject"}, {"digits", "digits"}}},
      {"measure48", {{"b", "b"}, {"v", "v"}, {"Qs", "Qs"}, {"samples", "samples"}, {"digits", "digits"}}},
      {"strong", {{"a", "a"}, {"Q", "Q"}, {"v", "v"}, {"K", "K"}, {"inject", "inject"}, {"digits", "digits"}}},
      {"goodness",
       {{"f", "f"}, {"alpha", "alpha"}, {"balls", "balls"}, {"eps", "eps"}, {"x0", "x0"}, {"alphas", "alphas"},
        {"r0", "r0"}, {"halvings", "halvings"}, {"side", "side"}}},
      {"lemmas",
       {{"which", "which"}, {"reduced", "reduced", false, true}, {"ns", "ns"}, {"bound_rankn", "bound_rankn"},
        {"bound_column", "bound_column"}, {"matrices", "matrices"}}},
      {"selftest", {{"reduced", "reduced", false, true}, {"mutate", "mutate"}}},
  };
  return flags;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremality experiments: Diophantine exponents, lattice flows, criteria and goodness checks"};
  app.require_subcommand(0, 1);
  std::string config_path, output_path, format;
  std::optional<unsigned long long> seed;
  std::optional<int> workers;
  std::optional<unsigned> precision;
  app.add_option("--config", config_path, "JSON config file; command-line flags override its params");
  app.add_option("--workers", workers, "internal parallelism (results do not depend on it)");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--output", output_path, "write the data here instead of standard output");
  app.add_option("--format", format, "csv | json | text (command dependent)");
  app.add_option("--precision", precision, "MPFR precision in bits (default from EXTREMAL_PRECISION_BITS, else 166)");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, bool> switches;
  for (const auto& [command, flags] : command_flags()) {
    CLI::App* sub = app.add_subcommand(command, exl_command_help(command.c_str()));
    sub->footer(exl_command_help(command.c_str()));
    for (const auto& f : flags) {
      if (f.boolean) {
        sub->add_flag_callback("--" + f.flag, [&values, command, f] { values[command][f.flag] = "true"; },
                               "params." + f.key);
      } else {
        sub->add_option_function<std::string>(
            "--" + f.flag, [&values, command, f](const std::string& v) { values[command][f.flag] = v; },
            f.file ? "file with params." + f.key : "params." + f.key);
      }
    }
  }
  CLI11_PARSE(app, argc, argv);

  nlohmann::json config = nlohmann::json::object();
  try {
    if (!config_path.empty()) config = nlohmann::json::parse(read_file(config_path));
    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    if (!command.empty()) {
      if (config.contains("command") && config["command"] != command) config["params"] = nlohmann::json::object();
      config["command"] = command;
      if (!config.contains("params")) config["params"] = nlohmann::json::object();
      for (const auto& f : command_flags().at(command)) {
        auto it = values[command].find(f.flag);
        if (it == values[command].end()) continue;
        config["params"][f.key] = f.file ? read_file(it->second) : it->second;
      }
    }
    if (!config.contains("command")) {
      std::cerr << app.help();
      return 1;
    }
    if (seed) config["seed"] = *seed;
    if (workers) config["workers"] = *workers;
    if (precision) config["precision"] = *precision;
    if (!format.empty()) config["format"] = format;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  exl_context* ctx = nullptr;
  if (exl_context_create(&ctx) != EXL_OK) {
    std::cerr << "error: cannot create context\n";
    return 1;
  }
  exl_result* result = nullptr;
  const exl_status status = exl_run(ctx, config.dump().c_str(), &result);
  int code = 1;
  if (status == EXL_OK || status == EXL_VIOLATION) {
    code = exl_result_exit_code(result);
    if (output_path.empty()) {
      std::fwrite(exl_result_data(result), 1, exl_result_size(result), stdout);
    } else {
      std::ofstream out(output_path, std::ios::binary);
      out.write(exl_result_data(result), static_cast<std::streamsize>(exl_result_size(result)));
      if (!out) {
        std::cerr << "error: cannot write " << output_path << "\n";
        code = 1;
      }
    }
    if (code == 2) std::cerr << "VIOLATION: criterion violation found\n";
    if (code == 1) std::cerr << "FAILED\n";
    exl_result_destroy(result);
  } else {
    std::cerr << "error: " << exl_status_name(status) << ": " << exl_last_error(ctx) << "\n";
  }
  exl_context_destroy(ctx);
  return code;
}
