#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

namespace cascade_pricer {

/**
 * Cost function C: [0,1] -> [0,1] mapping acceptance probability to price.
 * Non-increasing with C(0)=1 and C(1)=0. Two representations:
 *  - step: constant value on [x_i, x_{i+1}) for breakpoints 0=x_0<...<x_k=1,
 *    C(1)=0 as a point value, C(0)=1 by convention even when the first step
 *    value is lower (so "no positive price ever accepted" is expressible);
 *  - linear: interpolation through (x_i, y_i) with y_0=1, y_k=0.
 */
class CostFunction {
 public:
  enum class Shape { step, linear };

  // values[i] holds on [breakpoints[i], breakpoints[i+1]).
  static CostFunction step(std::vector<double> breakpoints, std::vector<double> values);
  // Equal-width steps over [0,1).
  static CostFunction regular_steps(std::vector<double> values);
  static CostFunction linear(std::vector<double> xs, std::vector<double> ys);
  // C(x) = 1 - x.
  static CostFunction affine();

  double operator()(double x) const;
  Shape shape() const { return shape_; }
  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  CostFunction() = default;
  Shape shape_ = Shape::linear;
  std::vector<double> xs_;
  std::vector<double> ys_;  // step: size xs_.size()-1; linear: size xs_.size()
};

// Largest acceptance probability available at the given price:
// sup{x : C(x) >= price}. 1 at price 0; consistent with C(1)=0 at price 1.
double icm_accept_probability(const CostFunction& c, double price);

/**
 * Max influence function B: (0,1] -> [0,1] on a breakpoint grid; same two
 * representations as CostFunction, without the endpoint constraints. May not
 * be identically zero.
 */
class InfluenceFunction {
 public:
  enum class Shape { step, linear };

  static InfluenceFunction step(std::vector<double> breakpoints, std::vector<double> values);
  static InfluenceFunction linear(std::vector<double> xs, std::vector<double> ys);
  static InfluenceFunction affine();  // B(x) = 1 - x
  static InfluenceFunction constant(double value);

  double operator()(double x) const;
  Shape shape() const { return shape_; }
  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  InfluenceFunction() = default;
  Shape shape_ = Shape::linear;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Threshold decision at a positive price: buy iff theta <= alpha * B(price).
// Price 0 is always accepted. Requires theta in (0,1], alpha in [0,1].
bool ltm_accept(const InfluenceFunction& b, double price, double alpha, double theta);

/**
 * Per-model constants controlling how revenue concentrates:
 * K = L / ((1-f) * c * q).
 */
struct ModelComplexity {
  double L = 0;  // bound on expected revenue extractable from one primitive path
  double f = 0;  // neighbor fraction threshold in the leaf-charging argument
  double c = 0;  // price charged to tree leaves
  double q = 0;  // acceptance probability floor at price c
  double K = 0;
};

// f=0; (c,q) chosen so an offer at price c is accepted with probability >= q
// and c >= 1/2; L from the line-revenue fixed-point bound, capped by the
// slope-based bound when the representation has finite slopes.
ModelComplexity icm_complexity(const CostFunction& c);

// f=1/2, c = argmax x*B(x), q = B(c)/2, L = 2 (geometric series on a line).
ModelComplexity ltm_complexity(const InfluenceFunction& b);

// n-step expected-revenue recurrence on a line: L_0 = 0,
// L_j = max over grid x of x*(C(x) + L_{j-1}). Grid must contain 0 and 1.
double line_revenue(const CostFunction& c, int n, const std::vector<double>& grid);

// Uniform grid {0, 1/k, ..., 1}.
std::vector<double> uniform_grid(int k);

/** One buyer model: either ICM with a cost function or LTM with an influence function. */
class BuyerModel {
 public:
  enum class Kind { icm, ltm };

  static BuyerModel icm(CostFunction c);
  static BuyerModel ltm(InfluenceFunction b);

  Kind kind() const { return kind_; }
  const CostFunction& cost() const;
  const InfluenceFunction& influence() const;
  ModelComplexity complexity() const;

 private:
  BuyerModel() = default;
  Kind kind_ = Kind::icm;
  std::optional<CostFunction> cost_;
  std::optional<InfluenceFunction> infl_;
};

// Key-value text: kind = icm|ltm, shape = step|linear,
// points = comma-separated "x value" pairs.
BuyerModel load_model_config(std::istream& in);
void save_model_config(const BuyerModel& m, std::ostream& out);

}  // namespace cascade_pricer
