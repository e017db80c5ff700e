#include "xxzlr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "xxzlr/errors.hpp"

namespace xxzlr {

void EntropyScalingSeries::validate() const {
  if (static_cast<int>(points.size()) < kMinFitPoints)
    throw InsufficientPoints("entropy series needs at least " + std::to_string(kMinFitPoints) + " points, got " +
                             std::to_string(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].length < kMinSeriesLength) throw InvalidParams("entropy series: L must be >= 8");
    if (!std::isfinite(points[i].s_half)) throw InvalidParams("entropy series: non-finite entropy");
    if (i > 0 && points[i].length <= points[i - 1].length)
      throw InvalidParams("entropy series: L must be strictly increasing");
  }
}

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  l.intercept = my - l.slope * mx;
  return l;
}

}  // namespace

CentralChargeFit fit_central_charge(const EntropyScalingSeries& series, const FitOptions& opts) {
  series.validate();
  std::vector<double> x, y;
  for (const auto& p : series.points) {
    x.push_back(std::log(static_cast<double>(p.length)));
    y.push_back(p.s_half);
  }
  const Line l = least_squares(x, y);
  CentralChargeFit fit;
  fit.c = 6.0 * l.slope;
  fit.offset = l.intercept;
  fit.n_points = static_cast<int>(x.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.slope * x[i] + l.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(x.size()));

  // Bootstrap over points; resamples with a single distinct L carry no slope.
  fit.ci_halfwidth = std::numeric_limits<double>::quiet_NaN();
  if (x.size() >= 3 && opts.bootstrap_samples > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> cs;
    std::vector<double> bx(x.size()), by(x.size());
    for (int b = 0; b < opts.bootstrap_samples; ++b) {
      std::set<std::size_t> distinct;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const std::size_t idx = pick(rng);
        distinct.insert(idx);
        bx[k] = x[idx];
        by[k] = y[idx];
      }
      if (distinct.size() < 2) continue;
      cs.push_back(6.0 * least_squares(bx, by).slope);
    }
    if (cs.size() >= 2) {
      std::sort(cs.begin(), cs.end());
      auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(cs.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, cs.size() - 1);
        return cs[lo] + (pos - static_cast<double>(lo)) * (cs[hi] - cs[lo]);
      };
      fit.ci_halfwidth = 0.5 * (quantile(0.975) - quantile(0.025));
    }
  }
  return fit;
}

Phase classify_phase(double c, double sigma_z_mean, const ClassifyThresholds& t) {
  if (sigma_z_mean > t.sigma_fm && c <= t.c_fm) return Phase::fm;
  if (c > 1.0 + t.c_margin) return Phase::xy_ssb;
  if (std::abs(c - 1.0) <= t.c_margin && sigma_z_mean < t.sigma_small) return Phase::tll;
  return Phase::boundary;
}

std::pair<int, int> bulk_window(int n_sites) {
  if (n_sites < 2) throw InvalidParams("bulk_window needs at least two sites");
  const int q = n_sites / 4;
  return {q, n_sites - 1 - q};
}

OrderParameters order_parameters(std::span<const double> sigma_z, const std::function<double(int, int)>& cpm) {
  const auto [first, last] = bulk_window(static_cast<int>(sigma_z.size()));
  OrderParameters out;
  double sum = 0.0;
  for (int i = first; i <= last; ++i) sum += std::abs(sigma_z[static_cast<std::size_t>(i)]);
  out.sigma_z_mean = sum / static_cast<double>(last - first + 1);
  out.xy_plateau = cpm(first, last);
  return out;
}

PhasePoint make_phase_point(const EntropyScalingSeries& series, const OrderParameters& order,
                            const FitOptions& fit, const ClassifyThresholds& t) {
  PhasePoint p;
  p.alpha = series.alpha;
  p.j_lr = series.j_lr;
  p.c_fit = fit_central_charge(series, fit);
  p.order = order;
  p.label = classify_phase(p.c_fit.c, order.sigma_z_mean, t);
  return p;
}

}  // namespace xxzlr
