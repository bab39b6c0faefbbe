// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/commands.hpp"

#include "billzeta/cache.hpp"
#include "billzeta/green.hpp"
#include "billzeta/io.hpp"
#include "billzeta/oracle.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace billzeta {

namespace {

SigmaPowerTable load_table(const RunConfig& config, const ModeBasis& basis, int max_power) {
  const TableCache cache(resolve_cache_dir(config.cache_dir.empty() ? std::nullopt
                                                                    : std::optional<std::string>(config.cache_dir)));
  return cache.get_or_build(basis, config.density, max_power, config.quadrature());
}

int guarded(std::string_view command, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    report_error(err, command, "validation", e.what());
    return kExitValidation;
  } catch (const NumericalError& e) {
    report_error(err, command, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, command, "io", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    report_error(err, command, "internal", e.what());
    return kExitIo;
  }
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output_path.empty())
    out << text;
  else
    write_file(config.output_path, text);
}

SumRuleResult oracle_result(const RationalOrder& order, double lambda, const VectorXd& eigenvalues,
                            const ModeBasis& basis, double scale, double discard) {
  SumRuleResult r;
  r.s = order.s();
  r.label = order.label();
  r.lambda = lambda;
  const int inner = basis.size() - static_cast<int>(std::floor(discard * basis.size()));
  r.tail_estimate = std::pow(scale, r.s) * tail_estimate(basis, r.s, inner);
  r.z0 = z_direct(eigenvalues, r.s, basis, scale, discard);
  r.z_total = r.z0;
  r.truncation = inner;
  r.route = Route::Oracle;
  return r;
}

}  // namespace

void report_error(std::ostream& err, std::string_view command, std::string_view kind, std::string_view message) {
  std::string flat(message);
  for (char& c : flat)
    if (c == '\n' || c == '\r') c = ' ';
  err << "{\"error\":" << json_string(kind) << ",\"command\":" << json_string(command)
      << ",\"message\":" << json_string(flat) << "}\n";
}

int cmd_sumrule(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("sumrule", err, [&] {
    validate_for(config, "sumrule");
    const ModeBasis basis = config.basis();
    const SigmaPowerTable table = load_table(config, basis, std::max(2, config.max_power));
    const bool all = config.route == RouteSelection::All;

    std::map<double, VectorXd> spectra;
    const auto spectrum_for = [&](double lambda) -> const VectorXd& {
      auto it = spectra.find(lambda);
      if (it == spectra.end())
        it = spectra.emplace(lambda, solve_spectrum(assemble(basis, table, lambda)).eigenvalues).first;
      return it->second;
    };

    std::vector<SumRuleResult> results;
    for (const auto& order : config.orders)
      for (double lambda : config.lambdas) {
        const bool one_plus = order.kind() == RationalOrder::Kind::OnePlusInv;
        if (all || config.route == RouteSelection::Closed)
          results.push_back(z_closed_form(order, table, basis, lambda, config.diagonal_mode));
        if ((all && one_plus) || config.route == RouteSelection::Trace1)
          results.push_back(z_via_trace_one_plus_inv(order.n(), table, basis, lambda));
        if ((all && !one_plus) || config.route == RouteSelection::Trace2)
          results.push_back(z_via_trace_inv_sum(order.n(), order.n_prime(), table, basis, lambda));
        if (all || config.route == RouteSelection::Oracle)
          results.push_back(oracle_result(order, lambda, spectrum_for(lambda), basis,
                                          weyl_scale(basis, config.density, lambda), config.top_discard_fraction));
      }

    std::ostringstream text;
    const auto diffs = all ? pairwise_differences(results) : std::vector<RouteDifference>{};
    if (config.format == OutputFormat::Json) {
      write_results_json(text, results, all ? std::vector<std::string>{differences_json(diffs)}
                                            : std::vector<std::string>{});
      emit(config, out, text.str());
      return kExitOk;
    }
    write_results_csv(text, results);
    if (all) {
      std::ostringstream summary;
      write_differences_csv(summary, diffs);
      if (config.output_path.empty()) {
        text << '\n' << summary.str();
      } else {
        std::filesystem::path p(config.output_path);
        write_file(p.parent_path() / (p.stem().string() + "_differences.csv"), summary.str());
      }
    }
    emit(config, out, text.str());
    return kExitOk;
  });
}

int cmd_coeffs(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("coeffs", err, [&] {
    validate_for(config, "coeffs");
    const ModeBasis basis = config.basis();
    const int max_order = config.max_order;
    const SigmaPowerTable table = load_table(config, basis, std::max({1, max_order, config.max_power}));
    const auto set = q_generic_recursion(RootOrder{config.root_order}, max_order, table, basis.eigenvalues());

    const std::filesystem::path dir = config.output_path.empty() ? "coeffs" : config.output_path;
    std::ostringstream residuals;
    residuals << "order,residual\n";
    for (int k = 0; k <= max_order; ++k) {
      std::ostringstream q, big_q;
      write_matrix_csv(q, set.q[k]);
      write_matrix_csv(big_q, set.Q[k]);
      write_file(dir / ("q_" + std::to_string(k) + ".csv"), q.str());
      write_file(dir / ("Q_" + std::to_string(k) + ".csv"), big_q.str());
      residuals << k << ',' << format_double(verify_convolution(set, k, config.inner_discard)) << '\n';
    }
    write_file(dir / "residuals.csv", residuals.str());
    out << residuals.str();
    return kExitOk;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("verify", err, [&] {
    validate_for(config, "verify");
    const ModeBasis basis = config.basis();
    const SigmaPowerTable table = load_table(config, basis, std::max(2, config.max_power));
    ConvergenceSettings settings;
    settings.modes = config.modes;
    settings.discard = config.top_discard_fraction;
    settings.first_order_only = config.first_order_only;
    settings.quadrature = config.quadrature();

    std::vector<ConvergenceReport> reports;
    for (const auto& order : config.orders)
      reports.push_back(convergence_order_fit(order.s(), basis, config.density, table, config.lambdas, settings));

    std::ostringstream text;
    if (config.format == OutputFormat::Json)
      write_convergence_json(text, reports, config.slope_threshold);
    else
      write_convergence_csv(text, reports, config.slope_threshold);
    emit(config, out, text.str());

    for (const auto& rep : reports)
      if (!(rep.slope >= config.slope_threshold)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "fitted slope %.4f at s = %.17g is below the threshold %.4f", rep.slope, rep.s,
                      config.slope_threshold);
        report_error(err, "verify", "slope", buf);
        return kExitSlopeBelowThreshold;
      }
    return kExitOk;
  });
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("spectrum", err, [&] {
    validate_for(config, "spectrum");
    const ModeBasis basis = config.basis();
    const SigmaPowerTable table = load_table(config, basis, std::max(1, config.max_power));
    const double lambda = config.lambdas.front();
    const auto spectrum = solve_spectrum(assemble(basis, table, lambda));
    std::ostringstream text;
    if (config.format == OutputFormat::Json)
      write_spectrum_json(text, lambda, spectrum.eigenvalues);
    else
      write_spectrum_csv(text, spectrum.eigenvalues);
    emit(config, out, text.str());
    return kExitOk;
  });
}

}  // namespace billzeta
