// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/basis.hpp"

#include "billzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <tuple>

namespace billzeta {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string hex_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + hex(v[i]);
  return out + "]";
}

const Profile1D& as_1d(const DensityProfile& profile) {
  if (const auto* p = std::get_if<Profile1D>(&profile)) return *p;
  throw ValidationError("string basis requires a one-dimensional density profile");
}

const SeparableProfile& as_2d(const DensityProfile& profile) {
  if (const auto* p = std::get_if<SeparableProfile>(&profile)) return *p;
  throw ValidationError("rectangle basis requires a separable density profile");
}

// Fourier bandwidth (or a stand-in for it) used by the automatic node count.
int bandwidth(const Profile1D& profile) {
  return std::visit(overloaded{
                        [](const FourierCosine& f) { return static_cast<int>(f.coefficients.size()); },
                        [](const Polynomial& p) { return static_cast<int>(p.coefficients.size()) + 8; },
                        [](const Tabulated& t) { return static_cast<int>(t.nodes.size()) + 8; },
                    },
                    profile);
}

std::vector<double> breakpoints(const Profile1D& profile) {
  if (const auto* t = std::get_if<Tabulated>(&profile)) return t->nodes;
  return {};
}

void validate(const Profile1D& profile, double length) {
  if (const auto* t = std::get_if<Tabulated>(&profile)) {
    if (t->nodes.size() < 2 || t->nodes.size() != t->values.size())
      throw ValidationError("tabulated profile needs at least two (node, value) pairs of equal count");
    for (std::size_t i = 1; i < t->nodes.size(); ++i)
      if (!(t->nodes[i] > t->nodes[i - 1])) throw ValidationError("tabulated profile nodes must be strictly increasing");
    const double tol = 1e-12 * length;
    if (t->nodes.front() > tol || t->nodes.back() < length - tol)
      throw ValidationError("tabulated profile must cover the whole domain [0, L]");
  }
}

// sigma^power cosine-series coefficients of a FourierCosine profile.
std::vector<double> fourier_power(const std::vector<double>& c, int power) {
  std::vector<double> acc{1.0};
  for (int p = 0; p < power; ++p) {
    std::vector<double> next(acc.size() + std::max<std::size_t>(c.size(), 1) - 1, 0.0);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      if (acc[a] == 0.0) continue;
      for (std::size_t b = 0; b < c.size(); ++b) {
        if (c[b] == 0.0) continue;
        const double half = 0.5 * acc[a] * c[b];
        next[a + b] += half;
        next[a > b ? a - b : b - a] += half;
      }
    }
    acc = std::move(next);
  }
  return acc;
}

std::vector<double> moments_on_rule(const std::function<double(double)>& f, double length, int kmax,
                                    const QuadratureRule& rule) {
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = rule.weights[i] * f(rule.nodes[i]);
  std::vector<double> out(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double omega = k * kPi / length;
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * std::cos(omega * rule.nodes[i]);
    out[k] = acc / length;
  }
  return out;
}

// Quadrature moments with a refinement check; returns the refined values.
std::vector<double> moments_by_quadrature(const std::function<double(double)>& f, double length, int kmax,
                                          int nodes, const std::vector<double>& breaks, double tolerance,
                                          QuadratureMeta* meta) {
  const auto coarse_rule = composite_gauss_legendre(0.0, length, nodes, breaks);
  const auto fine_rule = composite_gauss_legendre(0.0, length, 2 * nodes, breaks);
  const auto coarse = moments_on_rule(f, length, kmax, coarse_rule);
  auto fine = moments_on_rule(f, length, kmax, fine_rule);
  double scale = 1.0;
  double diff = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    scale = std::max(scale, std::abs(fine[k]));
    diff = std::max(diff, std::abs(fine[k] - coarse[k]));
  }
  if (diff > tolerance * scale) {
    std::ostringstream msg;
    msg << "quadrature not converged: " << coarse_rule.nodes.size() << " vs " << fine_rule.nodes.size()
        << " nodes differ by " << diff << " (tolerance " << tolerance * scale << ")";
    throw QuadratureError(msg.str());
  }
  if (meta) {
    meta->rule = "gauss-legendre-composite-16";
    meta->nodes = std::max(meta->nodes, static_cast<int>(coarse_rule.nodes.size()));
  }
  return fine;
}

// Matrix of <n|f|m> on a string of given length, n, m = 1..modes.
MatrixXd string_matrix(const std::vector<double>& moments, int modes) {
  MatrixXd out(modes, modes);
  for (int n = 1; n <= modes; ++n)
    for (int m = n; m <= modes; ++m) {
      const double v = moments[m - n] - moments[n + m];
      out(n - 1, m - 1) = v;
      out(m - 1, n - 1) = v;
    }
  return out;
}

std::vector<MatrixXd> string_tables(const Profile1D& profile, double length, int modes, int max_power,
                                    const QuadratureSettings& settings, QuadratureMeta* meta) {
  std::vector<MatrixXd> out;
  for (int j = 0; j <= max_power; ++j)
    out.push_back(string_matrix(cosine_moments(profile, j, length, 2 * modes, settings, meta), modes));
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

double evaluate(const Profile1D& profile, double x, double length) {
  return std::visit(overloaded{
                        [&](const FourierCosine& f) {
                          double acc = 0.0;
                          for (std::size_t k = 0; k < f.coefficients.size(); ++k)
                            acc += f.coefficients[k] * std::cos(k * kPi * x / length);
                          return acc;
                        },
                        [&](const Polynomial& p) {
                          double acc = 0.0;
                          for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
                            acc = acc * x + *it;
                          return acc;
                        },
                        [&](const Tabulated& t) {
                          if (x <= t.nodes.front()) return t.values.front();
                          if (x >= t.nodes.back()) return t.values.back();
                          const auto it = std::upper_bound(t.nodes.begin(), t.nodes.end(), x);
                          const std::size_t i = static_cast<std::size_t>(it - t.nodes.begin()) - 1;
                          const double w = (x - t.nodes[i]) / (t.nodes[i + 1] - t.nodes[i]);
                          return (1.0 - w) * t.values[i] + w * t.values[i + 1];
                        },
                    },
                    profile);
}

double evaluate(const DensityProfile& profile, double x, double y, double a, double b) {
  if (const auto* p = std::get_if<Profile1D>(&profile)) return evaluate(*p, x, a);
  const auto& s = std::get<SeparableProfile>(profile);
  const double sx = evaluate(s.x, x, a);
  const double sy = evaluate(s.y, y, b);
  return s.combine == Combine::Product ? sx * sy : sx + sy;
}

std::string describe(const Profile1D& profile) {
  return std::visit(overloaded{
                        [](const FourierCosine& f) { return "fourier_cosine" + hex_list(f.coefficients); },
                        [](const Polynomial& p) { return "polynomial" + hex_list(p.coefficients); },
                        [](const Tabulated& t) {
                          return "tabulated" + hex_list(t.nodes) + hex_list(t.values);
                        },
                    },
                    profile);
}

std::string describe(const DensityProfile& profile) {
  if (const auto* p = std::get_if<Profile1D>(&profile)) return describe(*p);
  const auto& s = std::get<SeparableProfile>(profile);
  return std::string(s.combine == Combine::Product ? "product(" : "sum(") + describe(s.x) + ";" +
         describe(s.y) + ")";
}

// ---------------------------------------------------------------------------

ModeBasis ModeBasis::string(double length, int modes) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("string length must be positive");
  if (modes < 1) throw ValidationError("mode count must be positive");
  ModeBasis basis(BasisKind::String1D, length, 0.0);
  basis.modes_.reserve(modes);
  basis.eigenvalues_.resize(modes);
  for (int n = 1; n <= modes; ++n) {
    basis.modes_.push_back({n, 0});
    basis.eigenvalues_(n - 1) = std::pow(n * kPi / length, 2);
  }
  return basis;
}

ModeBasis ModeBasis::rectangle(double a, double b, int modes) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("rectangle side lengths must be positive");
  if (modes < 1) throw ValidationError("mode count must be positive");
  ModeBasis basis(BasisKind::Rectangle2D, a, b);
  const auto energy = [&](int j, int k) { return kPi * kPi * (double(j) * j / (a * a) + double(k) * k / (b * b)); };

  // grow the energy window until it holds at least `modes` lattice points
  double window = energy(1, 1) * 2.0;
  std::vector<std::tuple<double, int, int>> found;
  for (;;) {
    found.clear();
    for (int j = 1; energy(j, 1) <= window; ++j)
      for (int k = 1; energy(j, k) <= window; ++k) found.emplace_back(energy(j, k), j, k);
    if (static_cast<int>(found.size()) >= modes) break;
    window *= 2.0;
  }
  std::sort(found.begin(), found.end());
  found.resize(modes);
  basis.modes_.reserve(modes);
  basis.eigenvalues_.resize(modes);
  for (int n = 0; n < modes; ++n) {
    const auto& [e, j, k] = found[n];
    basis.modes_.push_back({j, k});
    basis.eigenvalues_(n) = e;
  }
  return basis;
}

double ModeBasis::eigenvalue(int n) const {
  if (n < 1 || n > size())
    throw ValidationError("mode index " + std::to_string(n) + " out of range 1.." + std::to_string(size()));
  return eigenvalues_(n - 1);
}

const ModeIndex& ModeBasis::mode(int n) const {
  if (n < 1 || n > size())
    throw ValidationError("mode index " + std::to_string(n) + " out of range 1.." + std::to_string(size()));
  return modes_[n - 1];
}

int ModeBasis::max_mode_x() const {
  int out = 0;
  for (const auto& m : modes_) out = std::max(out, m.j);
  return out;
}

int ModeBasis::max_mode_y() const {
  int out = 0;
  for (const auto& m : modes_) out = std::max(out, m.k);
  return out;
}

ModeBasis ModeBasis::truncated(int modes) const {
  return kind_ == BasisKind::String1D ? string(a_, modes) : rectangle(a_, b_, modes);
}

std::string ModeBasis::describe() const {
  if (kind_ == BasisKind::String1D) return "string(" + hex(a_) + ")x" + std::to_string(size());
  return "rectangle(" + hex(a_) + "," + hex(b_) + ")x" + std::to_string(size());
}

// ---------------------------------------------------------------------------

std::vector<double> cosine_moments(const Profile1D& profile, int power, double length, int kmax,
                                   const QuadratureSettings& settings, QuadratureMeta* meta) {
  validate(profile, length);
  if (power < 0) throw ValidationError("sigma power must be nonnegative");
  std::vector<double> out(kmax + 1, 0.0);
  if (power == 0) {
    out[0] = 1.0;
    return out;
  }
  if (const auto* f = std::get_if<FourierCosine>(&profile); f && settings.analytic_fourier) {
    const auto series = fourier_power(f->coefficients, power);
    for (int k = 0; k <= kmax && k < static_cast<int>(series.size()); ++k)
      out[k] = k == 0 ? series[0] : 0.5 * series[k];
    if (meta && meta->rule.empty()) meta->rule = "analytic-fourier";
    return out;
  }
  const int nodes = settings.nodes > 0 ? settings.nodes : 8 * (kmax / 2 + bandwidth(profile) * power);
  const auto f = [&](double x) { return std::pow(evaluate(profile, x, length), power); };
  return moments_by_quadrature(f, length, kmax, nodes, breakpoints(profile), settings.tolerance, meta);
}

double sigma_power_element(const ModeBasis& basis, const DensityProfile& profile, int j, int n, int m,
                           const QuadratureSettings& settings) {
  const auto& mn = basis.mode(n);
  const auto& mm = basis.mode(m);
  const auto element = [&](const Profile1D& p, int power, double length, int a, int b) {
    const auto c = cosine_moments(p, power, length, a + b, settings);
    return c[std::abs(a - b)] - c[a + b];
  };
  if (basis.kind() == BasisKind::String1D) return element(as_1d(profile), j, basis.length_x(), mn.j, mm.j);

  const auto& s = as_2d(profile);
  if (s.combine == Combine::Product)
    return element(s.x, j, basis.length_x(), mn.j, mm.j) * element(s.y, j, basis.length_y(), mn.k, mm.k);
  double acc = 0.0;
  for (int i = 0; i <= j; ++i)
    acc += binomial(j, i) * element(s.x, i, basis.length_x(), mn.j, mm.j) *
           element(s.y, j - i, basis.length_y(), mn.k, mm.k);
  return acc;
}

SigmaPowerTable build_sigma_table(const ModeBasis& basis, const DensityProfile& profile, int max_power,
                                  const QuadratureSettings& settings) {
  if (max_power < 1) throw ValidationError("sigma table needs max power J >= 1");
  QuadratureMeta meta;
  const double sup = profile_sup(basis, profile);
  const int size = basis.size();

  if (basis.kind() == BasisKind::String1D) {
    auto powers = string_tables(as_1d(profile), basis.length_x(), size, max_power, settings, &meta);
    return SigmaPowerTable(std::move(powers), meta, sup);
  }

  const auto& s = as_2d(profile);
  const auto xs = string_tables(s.x, basis.length_x(), basis.max_mode_x(), max_power, settings, &meta);
  const auto ys = string_tables(s.y, basis.length_y(), basis.max_mode_y(), max_power, settings, &meta);
  const auto& modes = basis.modes();
  std::vector<MatrixXd> powers;
  for (int j = 0; j <= max_power; ++j) {
    MatrixXd table(size, size);
    for (int n = 0; n < size; ++n)
      for (int m = n; m < size; ++m) {
        const int xj = modes[n].j - 1, xm = modes[m].j - 1;
        const int yk = modes[n].k - 1, ym = modes[m].k - 1;
        double v = 0.0;
        if (s.combine == Combine::Product) {
          v = xs[j](xj, xm) * ys[j](yk, ym);
        } else {
          for (int i = 0; i <= j; ++i) v += binomial(j, i) * xs[i](xj, xm) * ys[j - i](yk, ym);
        }
        table(n, m) = v;
        table(m, n) = v;
      }
    powers.push_back(std::move(table));
  }
  return SigmaPowerTable(std::move(powers), meta, sup);
}

double profile_sup(const ModeBasis& basis, const DensityProfile& profile) {
  const auto extremes = [](const Profile1D& p, double length) {
    validate(p, length);
    constexpr int kSamples = 4096;
    double lo = evaluate(p, 0.0, length);
    double hi = lo;
    const auto visit = [&](double x) {
      const double v = evaluate(p, x, length);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    for (int i = 0; i <= kSamples; ++i) visit(length * i / kSamples);
    for (double x : breakpoints(p)) visit(x);
    return std::pair{lo, hi};
  };
  if (basis.kind() == BasisKind::String1D) {
    const auto [lo, hi] = extremes(as_1d(profile), basis.length_x());
    return std::max(std::abs(lo), std::abs(hi));
  }
  const auto& s = as_2d(profile);
  const auto [xlo, xhi] = extremes(s.x, basis.length_x());
  const auto [ylo, yhi] = extremes(s.y, basis.length_y());
  if (s.combine == Combine::Product)
    return std::max(std::abs(xlo), std::abs(xhi)) * std::max(std::abs(ylo), std::abs(yhi));
  return std::max(std::abs(xlo + ylo), std::abs(xhi + yhi));
}

void check_density_bound(double lambda, double sup) {
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  if (std::abs(lambda) * sup >= 1.0) {
    std::ostringstream msg;
    msg << "density bound violated: sup|lambda*sigma| = " << std::abs(lambda) * sup
        << " must be < 1 (lambda = " << lambda << ")";
    throw ValidationError(msg.str());
  }
}

MatrixXd sqrt_density_matrix(const ModeBasis& basis, const Profile1D& profile, double lambda,
                             const QuadratureSettings& settings) {
  if (basis.kind() != BasisKind::String1D)
    throw ValidationError("direct sqrt(Sigma) quadrature is available for the string basis only");
  check_density_bound(lambda, profile_sup(basis, DensityProfile{profile}));
  const double length = basis.length_x();
  const int modes = basis.size();
  const auto f = [&](double x) { return std::sqrt(1.0 + lambda * evaluate(profile, x, length)); };
  const int nodes = settings.nodes > 0 ? settings.nodes : 8 * (modes + 4 * bandwidth(profile));
  const auto moments =
      moments_by_quadrature(f, length, 2 * modes, nodes, breakpoints(profile), settings.tolerance, nullptr);
  return string_matrix(moments, modes);
}

double weyl_scale(const ModeBasis& basis, const DensityProfile& profile, double lambda) {
  check_density_bound(lambda, profile_sup(basis, profile));
  if (basis.kind() == BasisKind::String1D) {
    const auto& p = as_1d(profile);
    const double length = basis.length_x();
    const auto rule = composite_gauss_legendre(0.0, length, 64 * (bandwidth(p) + 16), breakpoints(p));
    const double optical = integrate([&](double x) { return std::sqrt(1.0 + lambda * evaluate(p, x, length)); }, rule);
    return std::pow(optical / length, 2);
  }
  const auto& s = as_2d(profile);
  const double mx = cosine_moments(s.x, 1, basis.length_x(), 0)[0];
  const double my = cosine_moments(s.y, 1, basis.length_y(), 0)[0];
  const double mean = s.combine == Combine::Product ? mx * my : mx + my;
  return 1.0 + lambda * mean;
}

}  // namespace billzeta
