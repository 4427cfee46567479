#include "cascade_pricer/buyer_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cascade_pricer/errors.hpp"

namespace cascade_pricer {

namespace {

void check_breakpoints(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ValidationError("need at least two breakpoints");
  if (xs.front() != 0.0 || xs.back() != 1.0)
    throw ValidationError("breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1])) throw ValidationError("breakpoints must be strictly increasing");
}

void check_unit_range(const std::vector<double>& ys) {
  for (double y : ys)
    if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("function values must lie in [0,1]");
}

void check_non_increasing(const std::vector<double>& ys) {
  for (size_t i = 0; i + 1 < ys.size(); ++i)
    if (ys[i] < ys[i + 1]) throw ValidationError("cost function must be non-increasing");
}

// Evaluation grid for the scan-the-grid maximizations: uniform thousandths
// plus the representation's own breakpoints.
std::vector<double> scan_grid(const std::vector<double>& breakpoints) {
  std::vector<double> g = uniform_grid(1000);
  g.insert(g.end(), breakpoints.begin(), breakpoints.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

CostFunction CostFunction::step(std::vector<double> breakpoints, std::vector<double> values) {
  check_breakpoints(breakpoints);
  if (values.size() + 1 != breakpoints.size())
    throw ValidationError("step cost needs one value per interval");
  check_unit_range(values);
  check_non_increasing(values);
  CostFunction c;
  c.shape_ = Shape::step;
  c.xs_ = std::move(breakpoints);
  c.ys_ = std::move(values);
  return c;
}

CostFunction CostFunction::regular_steps(std::vector<double> values) {
  if (values.empty()) throw ValidationError("need at least one step");
  int n = static_cast<int>(values.size());
  std::vector<double> xs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = static_cast<double>(i) / n;
  return step(std::move(xs), std::move(values));
}

CostFunction CostFunction::linear(std::vector<double> xs, std::vector<double> ys) {
  check_breakpoints(xs);
  if (ys.size() != xs.size()) throw ValidationError("linear cost needs one value per breakpoint");
  check_unit_range(ys);
  check_non_increasing(ys);
  if (ys.front() != 1.0) throw ValidationError("cost function requires C(0)=1");
  if (ys.back() != 0.0) throw ValidationError("cost function requires C(1)=0");
  CostFunction c;
  c.shape_ = Shape::linear;
  c.xs_ = std::move(xs);
  c.ys_ = std::move(ys);
  return c;
}

CostFunction CostFunction::affine() { return linear({0.0, 1.0}, {1.0, 0.0}); }

double CostFunction::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("cost function argument outside [0,1]");
  if (shape_ == Shape::step) {
    if (x == 0.0) return 1.0;  // C(0)=1 held as a point value
    if (x == 1.0) return 0.0;  // C(1)=0 likewise
    size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
    return ys_[i];
  }
  size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
  if (i == xs_.size()) return ys_.back();
  if (i == 0) return ys_.front();
  double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

double icm_accept_probability(const CostFunction& c, double price) {
  if (!(price >= 0.0 && price <= 1.0)) throw ValidationError("price outside [0,1]");
  const auto& xs = c.breakpoints();
  const auto& ys = c.values();
  if (c.shape() == CostFunction::Shape::step) {
    for (int i = static_cast<int>(ys.size()) - 1; i >= 0; --i)
      if (ys[i] >= price) return xs[i + 1];
    return 0.0;  // only the point C(0)=1 clears the price
  }
  // Continuous non-increasing: find the largest breakpoint value still >= price,
  // then solve within the bracketing segment.
  int j = -1;
  for (int i = static_cast<int>(ys.size()) - 1; i >= 0; --i)
    if (ys[i] >= price) {
      j = i;
      break;
    }
  if (j < 0) return 0.0;
  if (j == static_cast<int>(ys.size()) - 1) return xs.back();
  double drop = ys[j] - ys[j + 1];
  if (drop <= 0.0) return xs[j + 1];
  return xs[j] + (ys[j] - price) / drop * (xs[j + 1] - xs[j]);
}

InfluenceFunction InfluenceFunction::step(std::vector<double> breakpoints,
                                          std::vector<double> values) {
  check_breakpoints(breakpoints);
  if (values.size() + 1 != breakpoints.size())
    throw ValidationError("step influence needs one value per interval");
  check_unit_range(values);
  InfluenceFunction b;
  b.shape_ = Shape::step;
  b.xs_ = std::move(breakpoints);
  b.ys_ = std::move(values);
  return b;
}

InfluenceFunction InfluenceFunction::linear(std::vector<double> xs, std::vector<double> ys) {
  check_breakpoints(xs);
  if (ys.size() != xs.size())
    throw ValidationError("linear influence needs one value per breakpoint");
  check_unit_range(ys);
  InfluenceFunction b;
  b.shape_ = Shape::linear;
  b.xs_ = std::move(xs);
  b.ys_ = std::move(ys);
  return b;
}

InfluenceFunction InfluenceFunction::affine() { return linear({0.0, 1.0}, {1.0, 0.0}); }

InfluenceFunction InfluenceFunction::constant(double value) {
  return step({0.0, 1.0}, {value});
}

double InfluenceFunction::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("influence argument outside [0,1]");
  if (shape_ == Shape::step) {
    if (x == 1.0) return ys_.back();
    size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    return ys_[i == 0 ? 0 : i - 1];
  }
  size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
  if (i == xs_.size()) return ys_.back();
  if (i == 0) return ys_.front();
  double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

bool ltm_accept(const InfluenceFunction& b, double price, double alpha, double theta) {
  if (!(price >= 0.0 && price <= 1.0)) throw ValidationError("price outside [0,1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha outside [0,1]");
  if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta outside (0,1]");
  if (price == 0.0) return true;
  return theta <= alpha * b(price);
}

std::vector<double> uniform_grid(int k) {
  if (k < 1) throw ValidationError("grid resolution must be >= 1");
  std::vector<double> g(k + 1);
  for (int i = 0; i <= k; ++i) g[i] = static_cast<double>(i) / k;
  return g;
}

double line_revenue(const CostFunction& c, int n, const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("price grid must be non-empty");
  bool has0 = false, has1 = false;
  for (double x : grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("grid point outside [0,1]");
    has0 |= x == 0.0;
    has1 |= x == 1.0;
  }
  if (!has0 || !has1) throw ValidationError("grid must contain 0 and 1");
  if (n < 0) throw ValidationError("line length must be >= 0");
  double L = 0.0;
  for (int j = 1; j <= n; ++j) {
    double best = 0.0;
    for (double x : grid) best = std::max(best, x * (c(x) + L));
    L = best;
  }
  return L;
}

ModelComplexity icm_complexity(const CostFunction& c) {
  ModelComplexity mc;
  mc.f = 0.0;
  if (c.shape() == CostFunction::Shape::step) {
    const auto& xs = c.breakpoints();
    const auto& ys = c.values();
    int j = -1;
    for (int i = static_cast<int>(ys.size()) - 1; i >= 0; --i)
      if (ys[i] >= 0.5) {
        j = i;
        break;
      }
    if (j < 0)
      throw ValidationError("degenerate cost function: no acceptance probability has cost >= 1/2");
    mc.c = ys[j];
    mc.q = xs[j + 1];
  } else {
    // Max slope m gives C(x) >= 1 - m x everywhere, so q = min(1, 1/(2m))
    // keeps c = C(q) >= 1/2.
    const auto& xs = c.breakpoints();
    const auto& ys = c.values();
    double m = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      m = std::max(m, (ys[i] - ys[i + 1]) / (xs[i + 1] - xs[i]));
    mc.q = std::min(1.0, 1.0 / (2.0 * m));
    mc.c = c(mc.q);
  }
  // Fixed point of the line recurrence: L_n <= max x C(x)/(1-x); doubled to
  // cover one path feeding revenue from both ends.
  double raw = 0.0;
  for (double x : scan_grid(c.breakpoints()))
    if (x < 1.0) raw = std::max(raw, 2.0 * x * c(x) / (1.0 - x));
  if (c.shape() == CostFunction::Shape::linear) {
    const auto& xs = c.breakpoints();
    const auto& ys = c.values();
    double m = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      m = std::max(m, (ys[i] - ys[i + 1]) / (xs[i + 1] - xs[i]));
    raw = std::min(raw, 2.0 * std::max(1.0, m));
  }
  mc.L = raw;
  mc.K = mc.L / ((1.0 - mc.f) * mc.c * mc.q);
  return mc;
}

ModelComplexity ltm_complexity(const InfluenceFunction& b) {
  double best = 0.0, argmax = 0.0;
  for (double x : scan_grid(b.breakpoints())) {
    double v = x * b(x);
    if (v > best) {
      best = v;
      argmax = x;
    }
  }
  if (best <= 0.0) throw ValidationError("influence function yields no revenue at any price");
  ModelComplexity mc;
  mc.f = 0.5;
  mc.c = argmax;
  mc.q = b(argmax) / 2.0;
  // On a line each node buys at a positive price with probability at most 1/2,
  // so per-node revenue forms a geometric series summing to at most 2.
  mc.L = 2.0;
  mc.K = mc.L / ((1.0 - mc.f) * mc.c * mc.q);
  return mc;
}

BuyerModel BuyerModel::icm(CostFunction c) {
  BuyerModel m;
  m.kind_ = Kind::icm;
  m.cost_ = std::move(c);
  return m;
}

BuyerModel BuyerModel::ltm(InfluenceFunction b) {
  BuyerModel m;
  m.kind_ = Kind::ltm;
  m.infl_ = std::move(b);
  return m;
}

const CostFunction& BuyerModel::cost() const {
  if (!cost_) throw ValidationError("not an ICM model");
  return *cost_;
}

const InfluenceFunction& BuyerModel::influence() const {
  if (!infl_) throw ValidationError("not an LTM model");
  return *infl_;
}

ModelComplexity BuyerModel::complexity() const {
  return kind_ == Kind::icm ? icm_complexity(cost()) : ltm_complexity(influence());
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

BuyerModel load_model_config(std::istream& in) {
  std::string kind, shape, points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("model config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key == "kind")
      kind = value;
    else if (key == "shape")
      shape = value;
    else if (key == "points")
      points = value;
    else
      throw ParseError("model config line " + std::to_string(lineno) + ": unknown key '" + key +
                       "'");
  }
  if (kind != "icm" && kind != "ltm") throw ParseError("model config: kind must be icm or ltm");
  if (shape != "step" && shape != "linear")
    throw ParseError("model config: shape must be step or linear");
  if (points.empty()) throw ParseError("model config: missing points");

  std::vector<double> xs, ys;
  std::istringstream ps(points);
  std::string pair;
  while (std::getline(ps, pair, ',')) {
    std::istringstream pp(pair);
    double x, y;
    if (!(pp >> x >> y)) throw ParseError("model config: malformed point '" + trim(pair) + "'");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (shape == "step") {
    // Points are (interval start, value); the final breakpoint at 1 is implicit.
    xs.push_back(1.0);
    if (kind == "icm") return BuyerModel::icm(CostFunction::step(xs, ys));
    return BuyerModel::ltm(InfluenceFunction::step(xs, ys));
  }
  if (kind == "icm") return BuyerModel::icm(CostFunction::linear(xs, ys));
  return BuyerModel::ltm(InfluenceFunction::linear(xs, ys));
}

void save_model_config(const BuyerModel& m, std::ostream& out) {
  bool icm = m.kind() == BuyerModel::Kind::icm;
  const auto& xs = icm ? m.cost().breakpoints() : m.influence().breakpoints();
  const auto& ys = icm ? m.cost().values() : m.influence().values();
  bool step = icm ? m.cost().shape() == CostFunction::Shape::step
                  : m.influence().shape() == InfluenceFunction::Shape::step;
  out << "kind = " << (icm ? "icm" : "ltm") << "\n";
  out << "shape = " << (step ? "step" : "linear") << "\n";
  out << "points = ";
  for (size_t i = 0; i < ys.size(); ++i) {
    if (i) out << ", ";
    out << xs[i] << " " << ys[i];
  }
  out << "\n";
}

}  // namespace cascade_pricer
