// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/config.hpp"

#include <set>

namespace billzeta {

using nlohmann::json;

namespace {

class Issues {
 public:
  void add(std::string message) { list_.push_back(std::move(message)); }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() const {
    std::string text = list_.size() == 1 ? "" : std::to_string(list_.size()) + " problems: ";
    for (std::size_t i = 0; i < list_.size(); ++i) text += (i ? "; " : "") + list_[i];
    throw ValidationError(text);
  }

 private:
  std::vector<std::string> list_;
};

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                    Issues& issues) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!keys.count(item.key())) issues.add("unknown key '" + where + item.key() + "'");
}

bool require_object(const json& v, const std::string& where, Issues& issues) {
  if (v.is_object()) return true;
  issues.add("'" + where + "' must be an object");
  return false;
}

template <typename T>
void read_number(const json& obj, const char* key, const std::string& where, T& target, Issues& issues) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      issues.add("'" + where + key + "' must be an integer");
      return;
    }
  } else if (!v.is_number()) {
    issues.add("'" + where + key + "' must be a number");
    return;
  }
  target = v.get<T>();
}

void read_bool(const json& obj, const char* key, const std::string& where, bool& target, Issues& issues) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_boolean()) {
    issues.add("'" + where + key + "' must be true or false");
    return;
  }
  target = obj.at(key).get<bool>();
}

void read_string(const json& obj, const char* key, const std::string& where, std::string& target, Issues& issues) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_string()) {
    issues.add("'" + where + key + "' must be a string");
    return;
  }
  target = obj.at(key).get<std::string>();
}

std::vector<double> read_numbers(const json& v, const std::string& where, Issues& issues) {
  std::vector<double> out;
  if (!v.is_array()) {
    issues.add("'" + where + "' must be an array of numbers");
    return out;
  }
  for (const auto& x : v) {
    if (!x.is_number()) {
      issues.add("'" + where + "' must contain only numbers");
      return {};
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<Profile1D> parse_profile_1d(const json& v, const std::string& where, Issues& issues) {
  if (!require_object(v, where, issues)) return std::nullopt;
  std::string type;
  read_string(v, "type", where + ".", type, issues);
  if (type == "fourier_cosine" || type == "polynomial") {
    reject_unknown(v, where + ".", {"type", "coefficients"}, issues);
    if (!v.contains("coefficients")) {
      issues.add("'" + where + ".coefficients' is required");
      return std::nullopt;
    }
    auto c = read_numbers(v.at("coefficients"), where + ".coefficients", issues);
    if (type == "fourier_cosine") return Profile1D{FourierCosine{std::move(c)}};
    return Profile1D{Polynomial{std::move(c)}};
  }
  if (type == "tabulated") {
    reject_unknown(v, where + ".", {"type", "nodes", "values"}, issues);
    if (!v.contains("nodes") || !v.contains("values")) {
      issues.add("'" + where + "' tabulated profile needs nodes and values");
      return std::nullopt;
    }
    Tabulated t{read_numbers(v.at("nodes"), where + ".nodes", issues),
                read_numbers(v.at("values"), where + ".values", issues)};
    if (t.nodes.size() != t.values.size()) issues.add("'" + where + "' nodes and values differ in length");
    if (t.nodes.size() < 2) issues.add("'" + where + "' needs at least two nodes");
    for (std::size_t i = 1; i < t.nodes.size(); ++i)
      if (!(t.nodes[i] > t.nodes[i - 1])) {
        issues.add("'" + where + ".nodes' must be strictly increasing");
        break;
      }
    return Profile1D{std::move(t)};
  }
  issues.add("'" + where + ".type' must be fourier_cosine, polynomial or tabulated" +
             (type.empty() ? std::string() : ", got '" + type + "'"));
  return std::nullopt;
}

std::optional<DensityProfile> parse_density(const json& v, Issues& issues) {
  if (!require_object(v, "density", issues)) return std::nullopt;
  if (v.value("type", json()).is_string() && v.at("type") == "separable") {
    reject_unknown(v, "density.", {"type", "combine", "x", "y"}, issues);
    SeparableProfile sep;
    std::string combine = "product";
    read_string(v, "combine", "density.", combine, issues);
    if (combine == "product")
      sep.combine = Combine::Product;
    else if (combine == "sum")
      sep.combine = Combine::Sum;
    else
      issues.add("'density.combine' must be product or sum");
    if (!v.contains("x") || !v.contains("y")) {
      issues.add("separable density needs x and y profiles");
      return std::nullopt;
    }
    auto x = parse_profile_1d(v.at("x"), "density.x", issues);
    auto y = parse_profile_1d(v.at("y"), "density.y", issues);
    if (!x || !y) return std::nullopt;
    sep.x = std::move(*x);
    sep.y = std::move(*y);
    return DensityProfile{std::move(sep)};
  }
  auto p = parse_profile_1d(v, "density", issues);
  if (!p) return std::nullopt;
  return DensityProfile{std::move(*p)};
}

json profile_json(const Profile1D& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FourierCosine>)
          return {{"type", "fourier_cosine"}, {"coefficients", v.coefficients}};
        else if constexpr (std::is_same_v<T, Polynomial>)
          return {{"type", "polynomial"}, {"coefficients", v.coefficients}};
        else
          return {{"type", "tabulated"}, {"nodes", v.nodes}, {"values", v.values}};
      },
      p);
}

}  // namespace

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

std::string_view to_string(RouteSelection route) {
  switch (route) {
    case RouteSelection::Closed:
      return "closed";
    case RouteSelection::Trace1:
      return "trace1";
    case RouteSelection::Trace2:
      return "trace2";
    case RouteSelection::Oracle:
      return "oracle";
    case RouteSelection::All:
      return "all";
  }
  return "closed";
}

ModeBasis RunConfig::basis() const {
  return basis_kind == BasisKind::String1D ? ModeBasis::string(length_a, modes)
                                           : ModeBasis::rectangle(length_a, length_b, modes);
}

QuadratureSettings RunConfig::quadrature() const {
  QuadratureSettings q;
  q.nodes = quadrature_nodes;
  return q;
}

namespace {

RunConfig parse_into(const json& doc, Issues& issues) {
  RunConfig c;
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(doc, "",
                 {"version", "basis", "density", "truncation", "order", "lambda", "route", "diagonal_mode", "output",
                  "cache_dir", "deterministic", "coefficients", "verify"},
                 issues);

  if (!doc.contains("version"))
    issues.add("'version' is required");
  else if (!doc.at("version").is_number_integer() || doc.at("version").get<int>() != RunConfig::kVersion)
    issues.add("'version' must be " + std::to_string(RunConfig::kVersion));

  if (doc.contains("basis") && require_object(doc.at("basis"), "basis", issues)) {
    const json& b = doc.at("basis");
    std::string kind = "string";
    read_string(b, "kind", "basis.", kind, issues);
    if (kind == "string") {
      c.basis_kind = BasisKind::String1D;
      reject_unknown(b, "basis.", {"kind", "length"}, issues);
      read_number(b, "length", "basis.", c.length_a, issues);
    } else if (kind == "rectangle") {
      c.basis_kind = BasisKind::Rectangle2D;
      reject_unknown(b, "basis.", {"kind", "a", "b"}, issues);
      read_number(b, "a", "basis.", c.length_a, issues);
      read_number(b, "b", "basis.", c.length_b, issues);
    } else {
      issues.add("'basis.kind' must be string or rectangle");
    }
  }
  if (!(c.length_a > 0.0) || !(c.length_b > 0.0)) issues.add("basis lengths must be positive");

  if (doc.contains("density"))
    if (auto d = parse_density(doc.at("density"), issues)) c.density = std::move(*d);
  const bool separable = std::holds_alternative<SeparableProfile>(c.density);
  if (separable && c.basis_kind == BasisKind::String1D) issues.add("separable density needs a rectangle basis");
  if (!separable && c.basis_kind == BasisKind::Rectangle2D) issues.add("rectangle basis needs a separable density");

  if (doc.contains("truncation") && require_object(doc.at("truncation"), "truncation", issues)) {
    const json& t = doc.at("truncation");
    reject_unknown(t, "truncation.", {"modes", "quadrature_nodes", "inner_discard", "top_discard_fraction", "max_power"},
                   issues);
    read_number(t, "modes", "truncation.", c.modes, issues);
    read_number(t, "quadrature_nodes", "truncation.", c.quadrature_nodes, issues);
    read_number(t, "inner_discard", "truncation.", c.inner_discard, issues);
    read_number(t, "top_discard_fraction", "truncation.", c.top_discard_fraction, issues);
    read_number(t, "max_power", "truncation.", c.max_power, issues);
  }
  if (c.modes < 1 || c.modes > 20000) issues.add("'truncation.modes' must lie in 1..20000");
  if (c.quadrature_nodes < 0) issues.add("'truncation.quadrature_nodes' must be >= 0");
  if (c.inner_discard < -1 || c.inner_discard >= c.modes) issues.add("'truncation.inner_discard' must lie in -1..M-1");
  if (!(c.top_discard_fraction >= 0.0 && c.top_discard_fraction < 1.0))
    issues.add("'truncation.top_discard_fraction' must lie in [0, 1)");
  if (c.max_power < 0) issues.add("'truncation.max_power' must be >= 0");

  if (doc.contains("order")) {
    const json& o = doc.at("order");
    std::vector<json> items = o.is_array() ? o.get<std::vector<json>>() : std::vector<json>{o};
    c.orders.clear();
    for (const auto& item : items) {
      try {
        if (item.is_string())
          c.orders.push_back(RationalOrder::parse(item.get<std::string>()));
        else if (item.is_number())
          c.orders.push_back(RationalOrder::parse(item.dump()));
        else
          issues.add("'order' entries must be strings like \"3/2\" or \"1/2+1/3\"");
      } catch (const ValidationError& e) {
        issues.add(std::string("order: ") + e.what());
      }
    }
    if (items.empty()) issues.add("'order' must not be empty");
  }

  if (doc.contains("lambda")) {
    const json& l = doc.at("lambda");
    if (l.is_number())
      c.lambdas = {l.get<double>()};
    else
      c.lambdas = read_numbers(l, "lambda", issues);
    if (c.lambdas.empty()) issues.add("'lambda' must not be empty");
  }
  for (double l : c.lambdas)
    if (!std::isfinite(l)) issues.add("'lambda' values must be finite");

  std::string route = "closed";
  read_string(doc, "route", "", route, issues);
  if (route == "closed")
    c.route = RouteSelection::Closed;
  else if (route == "trace1")
    c.route = RouteSelection::Trace1;
  else if (route == "trace2")
    c.route = RouteSelection::Trace2;
  else if (route == "oracle")
    c.route = RouteSelection::Oracle;
  else if (route == "all")
    c.route = RouteSelection::All;
  else
    issues.add("'route' must be closed, trace1, trace2, oracle or all");

  std::string diagonal = "truncated";
  read_string(doc, "diagonal_mode", "", diagonal, issues);
  if (diagonal == "truncated")
    c.diagonal_mode = DiagonalMode::Truncated;
  else if (diagonal == "resummed")
    c.diagonal_mode = DiagonalMode::Resummed;
  else
    issues.add("'diagonal_mode' must be truncated or resummed");

  if (doc.contains("output") && require_object(doc.at("output"), "output", issues)) {
    const json& o = doc.at("output");
    reject_unknown(o, "output.", {"format", "path"}, issues);
    std::string format = "csv";
    read_string(o, "format", "output.", format, issues);
    if (format == "csv")
      c.format = OutputFormat::Csv;
    else if (format == "json")
      c.format = OutputFormat::Json;
    else
      issues.add("'output.format' must be csv or json");
    read_string(o, "path", "output.", c.output_path, issues);
  }
  read_string(doc, "cache_dir", "", c.cache_dir, issues);
  read_bool(doc, "deterministic", "", c.deterministic, issues);

  if (doc.contains("coefficients") && require_object(doc.at("coefficients"), "coefficients", issues)) {
    const json& q = doc.at("coefficients");
    reject_unknown(q, "coefficients.", {"root_order", "max_order"}, issues);
    read_number(q, "root_order", "coefficients.", c.root_order, issues);
    read_number(q, "max_order", "coefficients.", c.max_order, issues);
  }
  if (c.root_order < 1 || c.root_order > RootOrder::kMax)
    issues.add("'coefficients.root_order' must lie in 1.." + std::to_string(RootOrder::kMax));
  if (c.max_order < 0 || c.max_order > 16) issues.add("'coefficients.max_order' must lie in 0..16");

  if (doc.contains("verify") && require_object(doc.at("verify"), "verify", issues)) {
    const json& v = doc.at("verify");
    reject_unknown(v, "verify.", {"threshold", "first_order_only"}, issues);
    read_number(v, "threshold", "verify.", c.slope_threshold, issues);
    read_bool(v, "first_order_only", "verify.", c.first_order_only, issues);
  }
  return c;
}

void validate_into(const RunConfig& c, std::string_view command, Issues& issues) {
  const int dim = c.basis_kind == BasisKind::String1D ? 1 : 2;
  const double threshold = dim == 1 ? 0.5 : 1.0;

  double sup = 0.0;
  try {
    sup = profile_sup(c.basis(), c.density);
  } catch (const std::exception& e) {
    issues.add(std::string("density: ") + e.what());
  }
  for (double l : c.lambdas)
    if (!(std::abs(l) * sup < 1.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda = %.17g violates sup|lambda sigma| < 1 (sup|sigma| = %.17g)", l, sup);
      issues.add(buf);
    }

  const bool needs_orders = command == "sumrule" || command == "verify";
  if (needs_orders)
    for (const auto& o : c.orders) {
      if (!(o.s() > threshold))
        issues.add("order " + o.label() + " diverges for a " + std::to_string(dim) + "D basis (need s > " +
                   (dim == 1 ? "1/2" : "1") + ")");
      if (command == "sumrule" && c.route == RouteSelection::Trace1 && o.kind() != RationalOrder::Kind::OnePlusInv)
        issues.add("route trace1 needs s = 1+1/N, got " + o.label());
      if (command == "sumrule" && c.route == RouteSelection::Trace2 && o.kind() != RationalOrder::Kind::InvSum)
        issues.add("route trace2 needs s = 1/N+1/N', got " + o.label());
    }
  if (command == "sumrule" && c.route != RouteSelection::Closed && c.route != RouteSelection::All &&
      c.diagonal_mode == DiagonalMode::Resummed)
    issues.add("diagonal resummation applies to the closed-form route only");
  if (command == "coeffs" && c.max_power > 0 && c.max_power < c.max_order)
    issues.add("'coefficients.max_order' exceeds 'truncation.max_power'");
  if (command == "spectrum" && c.lambdas.size() != 1) issues.add("spectrum takes exactly one lambda value");
  if (command == "verify") {
    if (c.lambdas.size() < 3) issues.add("verify needs at least 3 lambda values");
    for (double l : c.lambdas)
      if (!(l > 0.0)) issues.add("verify needs positive lambda values");
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Issues issues;
  RunConfig c = parse_into(doc, issues);
  if (!issues.empty()) issues.raise();
  return c;
}

RunConfig parse_config(const json& doc, std::string_view command) {
  Issues issues;
  RunConfig c = parse_into(doc, issues);
  validate_into(c, command, issues);
  if (!issues.empty()) issues.raise();
  return c;
}

void validate_for(const RunConfig& c, std::string_view command) {
  Issues issues;
  validate_into(c, command, issues);
  if (!issues.empty()) issues.raise();
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON config: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const DensityProfile& profile) {
  if (const auto* sep = std::get_if<SeparableProfile>(&profile))
    return {{"type", "separable"},
            {"combine", sep->combine == Combine::Product ? "product" : "sum"},
            {"x", profile_json(sep->x)},
            {"y", profile_json(sep->y)}};
  return profile_json(std::get<Profile1D>(profile));
}

json to_json(const RunConfig& c) {
  json doc;
  doc["version"] = RunConfig::kVersion;
  if (c.basis_kind == BasisKind::String1D)
    doc["basis"] = {{"kind", "string"}, {"length", c.length_a}};
  else
    doc["basis"] = {{"kind", "rectangle"}, {"a", c.length_a}, {"b", c.length_b}};
  doc["density"] = to_json(c.density);
  doc["truncation"] = {{"modes", c.modes},
                       {"quadrature_nodes", c.quadrature_nodes},
                       {"inner_discard", c.inner_discard},
                       {"top_discard_fraction", c.top_discard_fraction},
                       {"max_power", c.max_power}};
  json orders = json::array();
  for (const auto& o : c.orders) orders.push_back(o.label());
  doc["order"] = orders;
  doc["lambda"] = c.lambdas;
  doc["route"] = std::string(to_string(c.route));
  doc["diagonal_mode"] = std::string(to_string(c.diagonal_mode));
  doc["output"] = {{"format", std::string(to_string(c.format))}, {"path", c.output_path}};
  doc["cache_dir"] = c.cache_dir;
  doc["deterministic"] = c.deterministic;
  doc["coefficients"] = {{"root_order", c.root_order}, {"max_order", c.max_order}};
  doc["verify"] = {{"threshold", c.slope_threshold}, {"first_order_only", c.first_order_only}};
  return doc;
}

}  // namespace billzeta
