#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "xxzlr/phase.hpp"

namespace xxzlr {

struct EntropyPoint {
  int length = 0;       // total chain length L
  double s_half = 0.0;  // half-chain entropy
};

/// Half-chain entropies at fixed (alpha, J) for increasing chain length.
struct EntropyScalingSeries {
  double alpha = 0.0;
  double j_lr = 0.0;
  std::vector<EntropyPoint> points;

  /// Lengths strictly increasing and >= 8, entropies finite. Fewer than
  /// kMinFitPoints points raises InsufficientPoints, other faults InvalidParams.
  void validate() const;
};

inline constexpr int kMinFitPoints = 2;
inline constexpr int kMinSeriesLength = 8;

struct CentralChargeFit {
  double c = 0.0;
  double offset = 0.0;
  double residual = 0.0;      // RMS of S - fit
  double ci_halfwidth = 0.0;  // NaN when there are too few points to resample
  int n_points = 0;
};

struct FitOptions {
  int bootstrap_samples = 1000;
  std::uint64_t seed = 0x5eedULL;
};

/// Least squares S = (c / 6) ln L + offset.
CentralChargeFit fit_central_charge(const EntropyScalingSeries& series, const FitOptions& opts = {});

struct ClassifyThresholds {
  double c_fm = 0.2;
  double c_margin = 0.2;
  double sigma_fm = 0.5;     // |<sz>| above this counts as polarized
  double sigma_small = 0.1;  // |<sz>| below this counts as unpolarized
};

Phase classify_phase(double c, double sigma_z_mean, const ClassifyThresholds& t = {});

struct OrderParameters {
  double sigma_z_mean = 0.0;  // mean |<sz_i>| over the bulk window
  double xy_plateau = 0.0;    // C+-(first, last) across the bulk window
};

/// Middle half of the chain, [floor(N/4), N-1-floor(N/4)]. Symmetric under reflection.
std::pair<int, int> bulk_window(int n_sites);

/// `cpm(i, j)` returns <S+_i S-_j>.
OrderParameters order_parameters(std::span<const double> sigma_z, const std::function<double(int, int)>& cpm);

struct PhasePoint {
  double alpha = 0.0;
  double j_lr = 0.0;
  CentralChargeFit c_fit;
  OrderParameters order;
  Phase label = Phase::boundary;
};

PhasePoint make_phase_point(const EntropyScalingSeries& series, const OrderParameters& order,
                            const FitOptions& fit = {}, const ClassifyThresholds& t = {});

}  // namespace xxzlr
