// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "billzeta/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace billzeta {

namespace {

struct Flags {
  std::string config;
  std::string s;
  std::string lambda;
  std::string route;
  bool resummed = false;
  bool deterministic = false;
  std::string cache_dir;
  std::string out;
  std::string format;
  std::optional<int> modes;
  std::optional<int> root_order;
  std::optional<int> max_order;
  std::optional<double> threshold;
  bool first_order_only = false;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--out", f.out, "output file (directory for coeffs)");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--cache-dir", f.cache_dir, "sigma-table cache directory");
  cmd->add_option("--modes", f.modes, "number of retained modes M");
  cmd->add_flag("--deterministic", f.deterministic, "reproducible reduction order");
}

nlohmann::json base_document(const Flags& f) {
  if (f.config.empty()) return nlohmann::json{{"version", RunConfig::kVersion}};
  std::ifstream in(f.config);
  if (!in) throw ValidationError("cannot read config file '" + f.config + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON config: ") + e.what());
  }
}

// Command-line values take precedence over the file.
nlohmann::json overlay(nlohmann::json doc, const Flags& f, std::string_view command) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  auto section = [&](const char* key) -> nlohmann::json& {
    if (!doc.contains(key) || !doc[key].is_object()) doc[key] = nlohmann::json::object();
    return doc[key];
  };
  if (!f.s.empty()) {
    const auto parts = split(f.s);
    doc["order"] = parts.size() == 1 ? nlohmann::json(parts.front()) : nlohmann::json(parts);
  }
  if (!f.lambda.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : split(f.lambda)) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(p, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != p.size()) throw ValidationError("--lambda: '" + p + "' is not a number");
      list.push_back(v);
    }
    doc["lambda"] = list;
  } else if (command == "verify" && !doc.contains("lambda")) {
    doc["lambda"] = {0.02, 0.04, 0.08, 0.16};
  }
  if (!f.route.empty()) doc["route"] = f.route;
  if (f.resummed) doc["diagonal_mode"] = "resummed";
  if (f.deterministic) doc["deterministic"] = true;
  if (!f.cache_dir.empty()) doc["cache_dir"] = f.cache_dir;
  if (!f.out.empty()) section("output")["path"] = f.out;
  if (!f.format.empty()) section("output")["format"] = f.format;
  if (f.modes) section("truncation")["modes"] = *f.modes;
  if (f.root_order) section("coefficients")["root_order"] = *f.root_order;
  if (f.max_order) section("coefficients")["max_order"] = *f.max_order;
  if (f.threshold) section("verify")["threshold"] = *f.threshold;
  if (f.first_order_only) section("verify")["first_order_only"] = true;
  return doc;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral zeta functions of heterogeneous Helmholtz problems", "billzeta"};
  app.require_subcommand(1);
  Flags f;

  auto* sumrule = app.add_subcommand("sumrule", "compute Z(s) by the closed form, trace routes or oracle");
  add_common(sumrule, f);
  sumrule->add_option("--s", f.s, "order: 3/2, 1+1/4, 1/2+1/3 (comma-separated list allowed)");
  sumrule->add_option("--lambda", f.lambda, "density strength, comma-separated list allowed");
  sumrule->add_option("--route", f.route, "closed, trace1, trace2, oracle or all");
  sumrule->add_flag("--resummed", f.resummed, "resum the diagonal series");

  auto* coeffs = app.add_subcommand("coeffs", "dump q^(k) and Q^(k) matrices with convolution residuals");
  add_common(coeffs, f);
  coeffs->add_option("--root-order", f.root_order, "N of the order-1/N Green's function");
  coeffs->add_option("--max-order", f.max_order, "highest perturbative order k");

  auto* verify = app.add_subcommand("verify", "fit the error order of Z against the oracle");
  add_common(verify, f);
  verify->add_option("--s", f.s, "order");
  verify->add_option("--lambda", f.lambda, "at least three density strengths");
  verify->add_option("--threshold", f.threshold, "minimum accepted slope");
  verify->add_flag("--first-order-only", f.first_order_only, "drop Z2 from the perturbative value");

  auto* spectrum = app.add_subcommand("spectrum", "export the oracle spectrum");
  add_common(spectrum, f);
  spectrum->add_option("--lambda", f.lambda, "density strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "cli", "validation", e.what());
    return kExitValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  if (chosen->get_help_ptr() && chosen->get_help_ptr()->count() > 0) {
    out << chosen->help();
    return kExitOk;
  }

  if (!f.config.empty() && !std::ifstream(f.config)) {
    report_error(err, command, "io", "cannot read config file '" + f.config + "'");
    return kExitIo;
  }
  RunConfig config;
  try {
    config = parse_config(overlay(base_document(f), f, command), command);
  } catch (const ValidationError& e) {
    report_error(err, command, "validation", e.what());
    return kExitValidation;
  }

  if (command == "sumrule") return cmd_sumrule(config, out, err);
  if (command == "coeffs") return cmd_coeffs(config, out, err);
  if (command == "verify") return cmd_verify(config, out, err);
  return cmd_spectrum(config, out, err);
}

}  // namespace billzeta
