#ifndef VENN_RESPONSE_MODEL_H_
#define VENN_RESPONSE_MODEL_H_

#include <optional>

#include "venn/random.h"
#include "venn/types.h"

namespace venn {

// Response time of an assigned device: base * speed_factor * LogNormal(0,
// sigma), or no response at all with probability failure_probability.
struct ResponseModel {
  double base_task_seconds = 60.0;
  double sigma = 0.5;
  double failure_probability = 0.05;
};

void ValidateResponseModel(const ResponseModel& model);

// nullopt means the device drops out and never reports back.
std::optional<double> SampleResponseTime(const DeviceProfile& device,
                                         const ResponseModel& model, Rng& rng);

double StandardNormalQuantile(double p);

// p-quantile of a single device's response time (ignoring failures).
double ResponseQuantile(const ResponseModel& model, double speed_factor,
                        double p);

// Rough time for `report_threshold` of a request's participants to respond,
// for participants of the given mean speed factor.
double ExpectedCollectionSeconds(const ResponseModel& model,
                                 double report_threshold,
                                 double mean_speed_factor = 1.0);

}  // namespace venn

#endif  // VENN_RESPONSE_MODEL_H_
