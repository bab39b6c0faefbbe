// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace billzeta {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string json_number(double value) { return std::isfinite(value) ? format_double(value) : "null"; }

std::string json_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

void write_results_csv(std::ostream& out, const std::vector<SumRuleResult>& results) {
  out << "label,s,lambda,route,diagonal_mode,z0,z1,z2,resummation_correction,z_total,tail_estimate,truncation\n";
  for (const auto& r : results)
    out << r.label << ',' << format_double(r.s) << ',' << format_double(r.lambda) << ',' << to_string(r.route) << ','
        << to_string(r.diagonal_mode) << ',' << format_double(r.z0) << ',' << format_double(r.z1) << ','
        << format_double(r.z2) << ',' << format_double(r.resummation_correction) << ',' << format_double(r.z_total)
        << ',' << format_double(r.tail_estimate) << ',' << r.truncation << '\n';
}

void write_results_json(std::ostream& out, const std::vector<SumRuleResult>& results,
                        const std::vector<std::string>& extra_members) {
  out << "{\"results\":[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << (i ? "," : "") << "\n  {\"label\":" << json_string(r.label) << ",\"s\":" << json_number(r.s)
        << ",\"lambda\":" << json_number(r.lambda) << ",\"route\":" << json_string(to_string(r.route))
        << ",\"diagonal_mode\":" << json_string(to_string(r.diagonal_mode)) << ",\"z0\":" << json_number(r.z0)
        << ",\"z1\":" << json_number(r.z1) << ",\"z2\":" << json_number(r.z2)
        << ",\"resummation_correction\":" << json_number(r.resummation_correction)
        << ",\"z_total\":" << json_number(r.z_total) << ",\"tail_estimate\":" << json_number(r.tail_estimate)
        << ",\"truncation\":" << r.truncation << "}";
  }
  out << "\n]";
  for (const auto& m : extra_members) out << "," << m;
  out << "}\n";
}

std::vector<RouteDifference> pairwise_differences(const std::vector<SumRuleResult>& results) {
  std::vector<RouteDifference> out;
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      const auto& a = results[i];
      const auto& b = results[j];
      if (a.label != b.label || a.lambda != b.lambda) continue;
      RouteDifference d{a.label, a.lambda, a.route, b.route, std::abs(a.z_total - b.z_total), 0.0};
      const double scale = std::max(std::abs(a.z_total), std::abs(b.z_total));
      d.relative = scale > 0.0 ? d.absolute / scale : 0.0;
      out.push_back(d);
    }
  return out;
}

void write_differences_csv(std::ostream& out, const std::vector<RouteDifference>& diffs) {
  out << "label,lambda,route_a,route_b,abs_diff,rel_diff\n";
  for (const auto& d : diffs)
    out << d.label << ',' << format_double(d.lambda) << ',' << to_string(d.a) << ',' << to_string(d.b) << ','
        << format_double(d.absolute) << ',' << format_double(d.relative) << '\n';
}

std::string differences_json(const std::vector<RouteDifference>& diffs) {
  std::string out = "\"differences\":[";
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    const auto& d = diffs[i];
    out += (i ? "," : "");
    out += "\n  {\"label\":" + json_string(d.label) + ",\"lambda\":" + json_number(d.lambda) +
           ",\"route_a\":" + json_string(to_string(d.a)) + ",\"route_b\":" + json_string(to_string(d.b)) +
           ",\"abs_diff\":" + json_number(d.absolute) + ",\"rel_diff\":" + json_number(d.relative) + "}";
  }
  return out + "\n]";
}

void write_spectrum_csv(std::ostream& out, const VectorXd& eigenvalues) {
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) out << i + 1 << ',' << format_double(eigenvalues(i)) << '\n';
}

void write_spectrum_json(std::ostream& out, double lambda, const VectorXd& eigenvalues) {
  out << "{\"lambda\":" << json_number(lambda) << ",\"eigenvalues\":[";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) out << (i ? "," : "") << json_number(eigenvalues(i));
  out << "]}\n";
}

void write_matrix_csv(std::ostream& out, const MatrixXd& matrix) {
  out << "row,col,value\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      out << r + 1 << ',' << c + 1 << ',' << format_double(matrix(r, c)) << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceReport>& reports, double threshold) {
  out << "s,lambda,z_pert,z_direct,abs_error,used,slope,threshold,floor\n";
  for (const auto& rep : reports)
    for (const auto& p : rep.points)
      out << format_double(rep.s) << ',' << format_double(p.lambda) << ',' << format_double(p.z_pert) << ','
          << format_double(p.z_direct) << ',' << format_double(p.error) << ',' << (p.used ? 1 : 0) << ','
          << format_double(rep.slope) << ',' << format_double(threshold) << ',' << format_double(rep.floor) << '\n';
}

void write_convergence_json(std::ostream& out, const std::vector<ConvergenceReport>& reports, double threshold) {
  out << "{\"threshold\":" << json_number(threshold) << ",\"reports\":[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    out << (i ? "," : "") << "\n  {\"s\":" << json_number(rep.s) << ",\"slope\":" << json_number(rep.slope)
        << ",\"floor\":" << json_number(rep.floor)
        << ",\"first_order_only\":" << (rep.first_order_only ? "true" : "false")
        << ",\"pass\":" << (rep.slope >= threshold ? "true" : "false") << ",\"points\":[";
    for (std::size_t j = 0; j < rep.points.size(); ++j) {
      const auto& p = rep.points[j];
      out << (j ? "," : "") << "{\"lambda\":" << json_number(p.lambda) << ",\"z_pert\":" << json_number(p.z_pert)
          << ",\"z_direct\":" << json_number(p.z_direct) << ",\"abs_error\":" << json_number(p.error)
          << ",\"used\":" << (p.used ? "true" : "false") << "}";
    }
    out << "],\"excluded\":[";
    for (std::size_t j = 0; j < rep.excluded.size(); ++j) out << (j ? "," : "") << json_string(rep.excluded[j]);
    out << "]}";
  }
  out << "\n]}\n";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace billzeta
