#include "maxchaos/drift.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "maxchaos/errors.hpp"

namespace maxchaos {

namespace {

std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

std::vector<double> parse_args(std::string_view body, std::string_view spec) {
  std::vector<double> out;
  std::stringstream ss{std::string(body)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw ParameterError("bad numeric argument '" + t + "' in drift '" + std::string(spec) + "'");
    }
    out.push_back(v);
  }
  return out;
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

DriftFunction polynomial_drift(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParameterError("polynomial drift needs at least one coefficient");
  std::ostringstream name;
  name.precision(17);
  name << "poly(";
  for (std::size_t k = 0; k < coeffs.size(); ++k) name << (k ? "," : "") << coeffs[k];
  name << ")";

  std::vector<double> deriv;
  for (std::size_t k = 1; k < coeffs.size(); ++k) deriv.push_back(static_cast<double>(k) * coeffs[k]);
  auto horner = [](const std::vector<double>& c, double r) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
    return acc;
  };
  return DriftFunction{name.str(), [c = std::move(coeffs), horner](double r) { return horner(c, r); },
                       [d = std::move(deriv), horner](double r) { return horner(d, r); }};
}

DriftFunction parse_drift(std::string_view spec) {
  const std::string s = trim(spec);
  if (s == "linear") {
    auto d = polynomial_drift({1.0, -2.0});
    d.name = "linear";
    return d;
  }
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ParameterError("unknown drift '" + s + "' (expected linear, affine(c0,c1) or poly(...))");
  }
  const std::string head = trim(std::string_view(s).substr(0, open));
  const auto args = parse_args(std::string_view(s).substr(open + 1, s.size() - open - 2), s);
  if (head == "affine") {
    if (args.size() != 2) throw ParameterError("affine drift takes exactly two coefficients");
    auto d = polynomial_drift(args);
    d.name = s;
    return d;
  }
  if (head == "poly") {
    auto d = polynomial_drift(args);
    d.name = s;
    return d;
  }
  throw ParameterError("unknown drift family '" + head + "'");
}

double sampled_lipschitz(const DriftFunction& drift, int samples) {
  double sup = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = static_cast<double>(k) / (samples - 1);
    sup = std::max(sup, std::abs(drift.derivative(r)));
  }
  return sup;
}

double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace maxchaos
