#include "venn/response_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace venn {

void ValidateResponseModel(const ResponseModel& model) {
  if (!(model.base_task_seconds > 0.0)) {
    throw std::invalid_argument("base_task_seconds must be positive");
  }
  if (!(model.sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!(model.failure_probability >= 0.0 && model.failure_probability <= 1.0)) {
    throw std::invalid_argument("failure_probability must lie in [0, 1]");
  }
}

std::optional<double> SampleResponseTime(const DeviceProfile& device,
                                         const ResponseModel& model, Rng& rng) {
  // Always consume both draws so the stream position does not depend on
  // whether the device failed.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u = unit(rng);
  const double z = normal(rng);
  if (u < model.failure_probability) return std::nullopt;
  return model.base_task_seconds * device.speed_factor *
         std::exp(model.sigma * z);
}

double StandardNormalQuantile(double p) {
  static const boost::math::normal_distribution<double> kStd(0.0, 1.0);
  return boost::math::quantile(kStd, std::clamp(p, 1e-12, 1.0 - 1e-12));
}

double ResponseQuantile(const ResponseModel& model, double speed_factor,
                        double p) {
  return model.base_task_seconds * speed_factor *
         std::exp(model.sigma * StandardNormalQuantile(p));
}

double ExpectedCollectionSeconds(const ResponseModel& model,
                                 double report_threshold,
                                 double mean_speed_factor) {
  const double survive = 1.0 - model.failure_probability;
  const double p =
      survive > 0.0 ? std::min(report_threshold / survive, 0.999) : 0.999;
  return ResponseQuantile(model, mean_speed_factor, p);
}

}  // namespace venn
