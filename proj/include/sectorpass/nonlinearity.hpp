#pragma once

#include <string>
#include <vector>

namespace sectorpass {

enum class NlModel { canonical, cubic, zero };

NlModel parse_model(const std::string& name);
std::string to_string(NlModel m);

// Odd nonlinearity with exponential critical growth at the Trudinger-Moser
// exponent alpha0 = 4*pi.  Built-in models:
//
//   canonical : f(s) = lambda * sign(s) * (1 - e^{-s^2}) * e^{4 pi s^2}
//   cubic     : f(s) = lambda * s^3 * e^{4 pi s^2}     (closed-form primitive)
//   zero      : f == 0                                  (degenerate control)
//
// The truncated variant sets f(s) = 0 for s <= 0 (positive-solution mode).
// Instances are immutable after construction and safe to share across
// threads.  Evaluation outside [-safe_bound(), safe_bound()] raises
// std::range_error instead of silently returning infinity.
class Nonlinearity {
 public:
  Nonlinearity(NlModel model, double lambda, bool truncated = false);

  double f(double s) const;
  double F(double s) const;   // primitive, F(0) = 0
  double df(double s) const;  // derivative f'; even for odd f

  NlModel model() const { return model_; }
  double lambda() const { return lambda_; }
  bool truncated() const { return truncated_; }
  double alpha0() const;      // 4*pi
  double safe_bound() const { return s_safe_; }

  Nonlinearity truncated_variant() const { return {model_, lambda_, true}; }
  Nonlinearity untruncated_variant() const { return {model_, lambda_, false}; }

 private:
  NlModel model_;
  double lambda_;
  bool truncated_;
  double s_safe_;

  // canonical model: cumulative primitive on a grid graded so the exponent
  // 4 pi s^2 advances by ~0.02 per interval; evaluated as piecewise cubic
  // Hermite (monotone: f >= 0 on s >= 0).
  std::vector<double> cs_, cF_, cf_;
  void build_cache();
  double cache_F(double s_abs) const;
  double f_raw(double s_abs) const;  // model value at s >= 0, lambda folded in

  void check_range(double s) const;
};

// --- hypothesis checker ------------------------------------------------

struct ScanGrid {
  double s_min = 1e-4;
  double s_max = 7.0;
  int points = 1400;  // geometric spacing
  std::vector<double> make() const;
};

struct HypoWitness {
  double s;
  double lhs;
  double rhs;
};

struct HypoCheck {
  std::string status;  // "pass-on-scan-range", "fail", "pass"
  int violations = 0;
  std::vector<HypoWitness> witnesses;  // at most a handful, first offenders
  std::string note;
  bool ok() const { return status != "fail"; }
};

struct H3Threshold {
  int m = 0;
  double threshold = 0.0;  // 1/(2 pi d_m^2)
  double proxy = 0.0;      // s f(s) e^{-4 pi s^2} at the scan maximum
  bool exceeded = false;
};

struct HypothesisReport {
  HypoCheck f1_strict;    // |f| <= C e^{4 pi s^2} with C fitted on the scan
  HypoCheck f1_critical;  // lim |f| e^{-alpha s^2} = 0 (alpha>4pi), inf (alpha<4pi)
  HypoCheck f2;           // f(s)/s -> 0 near 0
  HypoCheck h1;           // 0 < F <= M |f| on the tail, s0 and M fitted
  HypoCheck h2;           // 0 < F <= 1/2 f s on the whole grid
  HypoCheck h3;           // s f(s) e^{-4 pi s^2} increasing, beats 1/(2 pi d_m^2)
  double C_fit = 0.0;
  double s0_fit = 0.0;
  double M_fit = 0.0;
  std::vector<H3Threshold> h3_thresholds;
  double scan_min = 0.0, scan_max = 0.0;
  int scan_points = 0;
  double s_safe = 0.0;
  bool all_pass() const {
    return f1_strict.ok() && f1_critical.ok() && f2.ok() && h1.ok() && h2.ok() && h3.ok();
  }
};

// Evaluates the paper-style hypotheses on a finite grid.  Limits at
// infinity cannot be certified numerically, so passing results are
// reported as "pass-on-scan-range" with the range recorded.
HypothesisReport check_hypotheses(const Nonlinearity& nl, const ScanGrid& grid,
                                  const std::vector<int>& m_list = {1, 2, 3, 4});

}  // namespace sectorpass
