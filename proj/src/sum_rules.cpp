// Copyright 2026 The billzeta Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "billzeta/sum_rules.hpp"

#include "billzeta/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

namespace billzeta {

namespace {

constexpr double kPi = std::numbers::pi;

std::optional<long long> to_integer(std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

// "1/N" -> N
std::optional<long long> unit_fraction(std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "1/") return std::nullopt;
  return to_integer(text.substr(2));
}

RationalOrder from_fraction(long long p, long long q) {
  if (p <= 0 || q <= 0) throw ValidationError("order s must be positive");
  const long long g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p > q) {
    // s = 1 + 1/N requires p - q == 1 after reduction... or (p - q) | q
    if (q % (p - q) != 0) throw ValidationError("s > 1 must have the form 1 + 1/N");
    return RationalOrder::one_plus_inv(static_cast<int>(q / (p - q)));
  }
  // s = 1/N + 1/N' with N <= N'
  for (long long n = 2; n <= 64; ++n) {
    // 1/N' = p/q - 1/n = (p n - q) / (q n)
    const long long num = p * n - q;
    if (num <= 0) continue;
    const long long den = q * n;
    if (den % num != 0) continue;
    const long long n_prime = den / num;
    if (n_prime >= n && n_prime <= 64) return RationalOrder::inv_sum(static_cast<int>(n), static_cast<int>(n_prime));
  }
  throw ValidationError("s <= 1 must have the form 1/N + 1/N' with 2 <= N, N' <= 64");
}

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

// 2D lattice helpers, in coordinates u = x / a, v = y / b (eps = pi^2 (u^2 + v^2)).
struct LatticeGeometry {
  double area;  // a * b
  double u0;    // 1 / (2a)
  double v0;    // 1 / (2b)

  // area of {u >= u0, v >= v0, u^2 + v^2 < rho^2}
  double region(double rho) const {
    if (rho * rho <= u0 * u0 + v0 * v0) return 0.0;
    const double u1 = std::sqrt(rho * rho - v0 * v0);
    const auto f = [&](double u) {
      const double w = std::sqrt(std::max(0.0, rho * rho - u * u));
      return 0.5 * (u * w + rho * rho * std::asin(std::min(1.0, u / rho)));
    };
    return f(u1) - f(u0) - v0 * (u1 - u0);
  }

  // angular extent of the region at radius r
  double angle(double r) const {
    const double t = std::acos(std::min(1.0, u0 / r)) - std::asin(std::min(1.0, v0 / r));
    return std::max(0.0, t);
  }
};

double rectangle_tail(const ModeBasis& basis, double s, int retained) {
  const LatticeGeometry g{basis.length_x() * basis.length_y(), 0.5 / basis.length_x(), 0.5 / basis.length_y()};
  // radius whose lattice region holds exactly `retained` points on average
  double lo = std::sqrt(g.u0 * g.u0 + g.v0 * g.v0);
  double hi = lo + 1.0;
  while (g.area * g.region(hi) < retained) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g.area * g.region(mid) < retained ? lo : hi) = mid;
  }
  const double rho = 0.5 * (lo + hi);

  // int_rho^inf r^{1-2s} angle(r) dr
  //   = (pi/2) rho^{2-2s} / (2s-2) - rho^{2-2s} int_0^1 t^{2s-3} (pi/2 - angle(rho/t)) dt,
  // with t = w^q to smooth the t^{2s-2} endpoint behaviour.
  const double q = 2.0 / (2.0 * s - 1.0);
  const auto rule = composite_gauss_legendre(0.0, 1.0, 1024);
  const double defect = integrate(
      [&](double w) {
        if (w <= 0.0) return 0.0;
        const double t = std::pow(w, q);
        const double jac = q * std::pow(w, q - 1.0);
        return std::pow(t, 2.0 * s - 3.0) * (0.5 * kPi - g.angle(rho / t)) * jac;
      },
      rule);
  const double scale = std::pow(rho, 2.0 - 2.0 * s);
  const double radial = 0.5 * kPi * scale / (2.0 * s - 2.0) - scale * defect;
  return g.area * std::pow(kPi, -2.0 * s) * radial;
}

SumRuleResult make_result(double s, std::string label, double lambda, const ZetaOrders<double>& orders,
                          double tail, int truncation, Route route, DiagonalMode mode) {
  SumRuleResult r;
  r.s = s;
  r.label = std::move(label);
  r.lambda = lambda;
  r.tail_estimate = tail;
  r.z0 = orders.z0 + tail;
  r.z1 = orders.z1;
  r.z2 = orders.z2;
  r.resummation_correction = orders.resummation;
  r.z_total = r.z0 + r.z1 + r.z2 + r.resummation_correction;
  r.truncation = truncation;
  r.route = route;
  r.diagonal_mode = mode;
  return r;
}

void require_table(const SigmaPowerTable& table, const ModeBasis& basis, double lambda, int min_power) {
  if (table.size() != basis.size())
    throw ValidationError("sigma table size " + std::to_string(table.size()) + " does not match basis size " +
                          std::to_string(basis.size()));
  if (table.max_power() < min_power)
    throw ValidationError("sum rule needs sigma powers up to " + std::to_string(min_power));
  if (const auto sup = table.profile_sup()) check_density_bound(lambda, *sup);
}

std::string decimal_label(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s);
  return buf;
}

}  // namespace

std::string_view to_string(DiagonalMode mode) {
  return mode == DiagonalMode::Truncated ? "truncated" : "resummed";
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::ClosedForm:
      return "closed";
    case Route::TraceOnePlusInv:
      return "trace1";
    case Route::TraceInvSum:
      return "trace2";
    case Route::Oracle:
      return "oracle";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

RationalOrder RationalOrder::one_plus_inv(int n) {
  if (n < 2 || n > 64) throw ValidationError("1+1/N needs 2 <= N <= 64, got N = " + std::to_string(n));
  return RationalOrder(Kind::OnePlusInv, n, 0);
}

RationalOrder RationalOrder::inv_sum(int n, int n_prime) {
  if (n < 2 || n > 64 || n_prime < 2 || n_prime > 64)
    throw ValidationError("1/N+1/N' needs 2 <= N, N' <= 64");
  return RationalOrder(Kind::InvSum, std::min(n, n_prime), std::max(n, n_prime));
}

RationalOrder RationalOrder::parse(std::string_view raw) {
  const std::string text = strip(raw);
  if (text.empty()) throw ValidationError("empty order specification");
  if (const auto plus = text.find('+'); plus != std::string::npos) {
    const std::string_view left(text.data(), plus);
    const std::string_view right(text.data() + plus + 1, text.size() - plus - 1);
    if (left == "1") {
      if (const auto n = unit_fraction(right)) return one_plus_inv(static_cast<int>(*n));
    } else if (const auto n = unit_fraction(left)) {
      if (const auto np = unit_fraction(right)) return inv_sum(static_cast<int>(*n), static_cast<int>(*np));
    }
    throw ValidationError("cannot parse order '" + text + "': expected 1+1/N or 1/N+1/N'");
  }
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto p = to_integer(std::string_view(text.data(), slash));
    const auto q = to_integer(std::string_view(text.data() + slash + 1, text.size() - slash - 1));
    if (!p || !q) throw ValidationError("cannot parse order '" + text + "'");
    return from_fraction(*p, *q);
  }
  if (const auto i = to_integer(text)) return from_fraction(*i, 1);
  // decimal: match against small denominators
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !(value > 0.0)) throw ValidationError("cannot parse order '" + text + "'");
  for (long long q = 1; q <= 64 * 64; ++q) {
    const double p = std::round(value * q);
    if (std::abs(p / q - value) < 1e-12 * value) return from_fraction(static_cast<long long>(p), q);
  }
  throw ValidationError("order '" + text + "' is not a recognizable rational number");
}

double RationalOrder::s() const {
  if (kind_ == Kind::OnePlusInv) return 1.0 + 1.0 / n_;
  return 1.0 / n_ + 1.0 / n_prime_;
}

std::string RationalOrder::label() const {
  if (kind_ == Kind::OnePlusInv) return "1+1/" + std::to_string(n_);
  return "1/" + std::to_string(n_) + "+1/" + std::to_string(n_prime_);
}

void require_convergent(double s, const ModeBasis& basis) {
  const double threshold = basis.dimension() == 1 ? 0.5 : 1.0;
  if (!(s > threshold) || !std::isfinite(s)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "sum rule diverges: s = %.17g must exceed %g for a %dD basis", s, threshold,
                  basis.dimension());
    throw ValidationError(buf);
  }
}

double tail_estimate(const ModeBasis& basis, double s, int retained) {
  require_convergent(s, basis);
  if (retained < 0) throw ValidationError("retained mode count must be nonnegative");
  double tail = 0.0;
  if (basis.kind() == BasisKind::String1D) {
    const double scale = std::pow(kPi / basis.length_x(), -2.0 * s);
    tail = scale * std::pow(retained + 0.5, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
  } else {
    tail = rectangle_tail(basis, s, std::max(retained, 1));
  }
  // below double resolution of any realistic Z
  if (!(tail > 1e-300)) return 0.0;
  return tail;
}

// ---------------------------------------------------------------------------

SumRuleResult z_closed_form(double s, const SigmaPowerTable& table, const ModeBasis& basis, double lambda,
                            DiagonalMode mode, SecondOrderForm form) {
  require_convergent(s, basis);
  require_table(table, basis, lambda, 2);
  const auto orders = zeta_closed_form_orders<double>(basis.eigenvalues(), table.power(1), &table.power(2), s,
                                                      lambda, mode, form);
  return make_result(s, decimal_label(s), lambda, orders, tail_estimate(basis, s, basis.size()), basis.size(),
                     Route::ClosedForm, mode);
}

SumRuleResult z_closed_form(const RationalOrder& order, const SigmaPowerTable& table, const ModeBasis& basis,
                            double lambda, DiagonalMode mode, SecondOrderForm form) {
  auto r = z_closed_form(order.s(), table, basis, lambda, mode, form);
  r.label = order.label();
  return r;
}

SumRuleResult z_via_trace_one_plus_inv(int n, const SigmaPowerTable& table, const ModeBasis& basis, double lambda) {
  const auto order = RationalOrder::one_plus_inv(n);
  require_convergent(order.s(), basis);
  require_table(table, basis, lambda, 2);
  const auto set = q_generic_recursion(RootOrder{n}, 2, table, basis.eigenvalues());
  const auto orders = trace_orders(set.Q, set.q, lambda);
  return make_result(order.s(), order.label(), lambda, orders, tail_estimate(basis, order.s(), basis.size()),
                     basis.size(), Route::TraceOnePlusInv, DiagonalMode::Truncated);
}

SumRuleResult z_via_trace_inv_sum(int n, int n_prime, const SigmaPowerTable& table, const ModeBasis& basis,
                                  double lambda) {
  const auto order = RationalOrder::inv_sum(n, n_prime);
  require_convergent(order.s(), basis);
  require_table(table, basis, lambda, 2);
  const auto first = q_generic_recursion(RootOrder{order.n()}, 2, table, basis.eigenvalues());
  const auto orders = order.n() == order.n_prime()
                          ? trace_orders(first.q, first.q, lambda)
                          : trace_orders(first.q,
                                         q_generic_recursion(RootOrder{order.n_prime()}, 2, table, basis.eigenvalues()).q,
                                         lambda);
  return make_result(order.s(), order.label(), lambda, orders, tail_estimate(basis, order.s(), basis.size()),
                     basis.size(), Route::TraceInvSum, DiagonalMode::Truncated);
}

SumRuleResult z_via_trace(const RationalOrder& order, const SigmaPowerTable& table, const ModeBasis& basis,
                          double lambda) {
  if (order.kind() == RationalOrder::Kind::OnePlusInv) return z_via_trace_one_plus_inv(order.n(), table, basis, lambda);
  return z_via_trace_inv_sum(order.n(), order.n_prime(), table, basis, lambda);
}

}  // namespace billzeta
